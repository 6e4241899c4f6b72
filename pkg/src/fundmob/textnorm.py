"""Text normalization helpers shared by acknowledgment mining, blocking,
and surname matching.

The pipeline is: Unicode NFKD -> strip diacritics -> case-fold -> collapse
whitespace. Punctuation is preserved at this stage; token-edge punctuation
(commas, periods, brackets) is stripped separately at comparison time so
that dotted-initial forms like "c.l." can still be kept as explicit
variants.
"""
from __future__ import annotations

import re
import unicodedata

_WS_RE = re.compile(r"\s+")
_EDGE_PUNCT = ".,;:!?()[]{}\"'"


def strip_accents(text: str) -> str:
    """Decompose and drop combining marks: "Zürich" -> "Zurich"."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_text(text: str) -> str:
    """Accent-strip, case-fold and collapse whitespace."""
    return _WS_RE.sub(" ", strip_accents(text).casefold()).strip()


def strip_token_punct(text: str) -> str:
    """Strip leading/trailing punctuation from every whitespace token.

    "(csc)." -> "csc"; interior punctuation survives: "c.l." -> "c.l".
    Tokens reduced to nothing are dropped.
    """
    tokens = [tok.strip(_EDGE_PUNCT) for tok in text.split()]
    return " ".join(tok for tok in tokens if tok)


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def contains_bounded(needle: str, haystack: str) -> bool:
    """True when needle occurs in haystack delimited by non-word characters."""
    if not needle:
        return False
    start = 0
    n = len(needle)
    while True:
        idx = haystack.find(needle, start)
        if idx < 0:
            return False
        before_ok = idx == 0 or not _is_word_char(haystack[idx - 1])
        after = idx + n
        after_ok = after >= len(haystack) or not _is_word_char(haystack[after])
        if before_ok and after_ok:
            return True
        start = idx + 1


def token_forms(text: str) -> set[str]:
    """All whitespace tokens of ``text``, both raw and edge-stripped."""
    forms: set[str] = set()
    for tok in text.split():
        forms.add(tok)
        stripped = tok.strip(_EDGE_PUNCT)
        if stripped:
            forms.add(stripped)
    return forms
