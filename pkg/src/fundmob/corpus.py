"""Bibliographic data model, corpus parsing/validation, and date resolution.

Input corpora are UTF-8 line-delimited JSON, one record per line. Parsing
validates structural invariants (author positions, field-weight sums,
plausible years) and collects per-line errors instead of dropping bad
lines silently. Affiliation countries are normalized through a
configurable alias table; anything outside the configured vocabulary is
marked Unknown.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .textnorm import normalize_text

UNKNOWN_COUNTRY = "Unknown"

#: Code used for mainland China throughout the mobility rules. Hong Kong,
#: Macau and Taiwan carry their own codes and count as non-mainland.
MAINLAND_CHINA = "CN"


class DocType(Enum):
    ARTICLE = "Article"
    REVIEW = "Review"
    OTHER = "Other"


class DateSource(Enum):
    DOI_CREATED = "DoiCreated"
    YEAR_FALLBACK = "YearFallback"


@dataclass(frozen=True)
class Affiliation:
    org_name: str
    country: str = UNKNOWN_COUNTRY


@dataclass(frozen=True)
class Authorship:
    position: int
    full_name: str
    last_name: str
    first_name: str | None = None
    initials: str | None = None
    email: str | None = None
    affiliations: tuple[Affiliation, ...] = ()


@dataclass(frozen=True)
class FieldWeight:
    field_id: str
    weight: float


@dataclass(frozen=True)
class PublicationRecord:
    pub_id: str
    title: str
    pub_year: int
    doc_type: DocType
    doi: str | None = None
    doi_created_date: date | None = None
    acknowledgment_text: str | None = None
    funding_orgs: tuple[str, ...] = ()
    authors: tuple[Authorship, ...] = ()
    field_weights: tuple[FieldWeight, ...] = ()


@dataclass(frozen=True)
class PubDate:
    """A resolved publication date and where it came from."""

    date: date
    source: DateSource


@dataclass(frozen=True)
class ParseIssue:
    line_no: int
    message: str

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return f"line {self.line_no}: {self.message}"


@dataclass
class ParseResult:
    records: list[PublicationRecord] = field(default_factory=list)
    errors: list[ParseIssue] = field(default_factory=list)


class CorpusParseError(Exception):
    """Raised when an input stream yields lines but not a single record."""

    def __init__(self, errors: list[ParseIssue]):
        self.errors = errors
        preview = "; ".join(str(e) for e in errors[:3])
        super().__init__(f"no records parsed ({len(errors)} bad lines: {preview})")


class RecordError(ValueError):
    """A single record object violated the schema or an invariant."""


class CountryAliases:
    """Maps raw affiliation country strings to normalized codes.

    The vocabulary is closed: a value is either an alias, already a code,
    or Unknown. Lookup is case-insensitive on the trimmed raw string.
    """

    def __init__(self, aliases: dict[str, str]):
        self._aliases = {normalize_text(raw): code for raw, code in aliases.items()}
        self._codes = set(aliases.values())

    @classmethod
    def load(cls, path: str | Path) -> "CountryAliases":
        """Read a two-column delimited file: raw_name<TAB>code per line."""
        aliases: dict[str, str] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            raw, _, code = line.partition("\t")
            if not code:
                raise ValueError(f"malformed alias line (need raw<TAB>code): {line!r}")
            aliases[raw.strip()] = code.strip()
        return cls(aliases)

    @property
    def codes(self) -> frozenset[str]:
        return frozenset(self._codes)

    def normalize(self, raw: str | None) -> str:
        if raw is None:
            return UNKNOWN_COUNTRY
        value = raw.strip()
        if not value:
            return UNKNOWN_COUNTRY
        mapped = self._aliases.get(normalize_text(value))
        if mapped is not None:
            return mapped
        if value in self._codes:
            return value
        return UNKNOWN_COUNTRY


def _parse_date(value: object, label: str) -> date:
    if not isinstance(value, str):
        raise RecordError(f"{label} must be an ISO-8601 string")
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise RecordError(f"{label} is not a valid ISO-8601 date: {value!r}") from exc


def _parse_doc_type(value: object) -> DocType:
    if not isinstance(value, str):
        raise RecordError("doc_type must be a string")
    for member in DocType:
        if value.strip().lower() == member.value.lower():
            return member
    raise RecordError(f"unknown doc_type string: {value!r}")


def _normalize_country(raw: object, aliases: CountryAliases | None) -> str:
    if raw is None:
        return UNKNOWN_COUNTRY
    text = str(raw).strip()
    if not text:
        return UNKNOWN_COUNTRY
    if aliases is None:
        return text
    return aliases.normalize(text)


def _parse_authorship(obj: object, index: int, aliases: CountryAliases | None) -> Authorship:
    if not isinstance(obj, dict):
        raise RecordError(f"author {index + 1} is not an object")
    try:
        position = int(obj["position"])
        last_name = str(obj["last_name"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"author {index + 1} missing position/last_name") from exc
    if not normalize_text(last_name):
        raise RecordError(f"author {index + 1} has an empty last_name")
    affiliations = tuple(
        Affiliation(
            org_name=str(aff.get("org_name", "")),
            country=_normalize_country(aff.get("country"), aliases),
        )
        for aff in obj.get("affiliations") or []
        if isinstance(aff, dict)
    )
    first_name = obj.get("first_name")
    initials = obj.get("initials")
    email = obj.get("email")
    return Authorship(
        position=position,
        full_name=str(obj.get("full_name", last_name)),
        last_name=last_name,
        first_name=str(first_name) if first_name else None,
        initials=str(initials) if initials else None,
        email=str(email) if email else None,
        affiliations=affiliations,
    )


def record_from_dict(obj: object, aliases: CountryAliases | None = None) -> PublicationRecord:
    """Build and validate one record from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise RecordError("record is not an object")
    if not obj.get("pub_id"):
        raise RecordError("missing pub_id")
    pub_id = str(obj["pub_id"])

    if "pub_year" not in obj:
        raise RecordError("missing pub_year")
    try:
        pub_year = int(obj["pub_year"])
    except (TypeError, ValueError) as exc:
        raise RecordError("pub_year is not an integer") from exc
    if not 1900 <= pub_year <= 2100:
        raise RecordError(f"pub_year {pub_year} outside plausible range 1900-2100")

    doc_type = _parse_doc_type(obj.get("doc_type"))

    authors_raw = obj.get("authors")
    if not authors_raw or not isinstance(authors_raw, list):
        raise RecordError("authors list is missing or empty")
    authors = tuple(
        _parse_authorship(a, i, aliases) for i, a in enumerate(authors_raw)
    )
    positions = [a.position for a in authors]
    if positions != list(range(1, len(authors) + 1)):
        raise RecordError(f"author position gap or disorder: {positions}")

    weights_raw = obj.get("field_weights") or []
    field_weights = []
    for fw in weights_raw:
        if not isinstance(fw, dict) or "field_id" not in fw or "weight" not in fw:
            raise RecordError("field_weights entries need field_id and weight")
        weight = float(fw["weight"])
        if not 0.0 < weight <= 1.0:
            raise RecordError(f"field weight {weight} outside (0, 1]")
        field_weights.append(FieldWeight(str(fw["field_id"]), weight))
    if field_weights:
        total = sum(fw.weight for fw in field_weights)
        if abs(total - 1.0) > 1e-9:
            raise RecordError(f"field_weights sum {total!r} != 1")

    doi_created = obj.get("doi_created_date")
    doi = obj.get("doi")
    return PublicationRecord(
        pub_id=pub_id,
        title=str(obj.get("title", "")),
        pub_year=pub_year,
        doc_type=doc_type,
        doi=str(doi) if doi else None,
        doi_created_date=_parse_date(doi_created, "doi_created_date") if doi_created else None,
        acknowledgment_text=(
            str(obj["acknowledgment_text"]) if obj.get("acknowledgment_text") else None
        ),
        funding_orgs=tuple(str(f) for f in obj.get("funding_orgs") or []),
        authors=authors,
        field_weights=tuple(field_weights),
    )


def record_to_dict(record: PublicationRecord) -> dict:
    """Inverse of :func:`record_from_dict`; round-trips structurally."""
    return {
        "pub_id": record.pub_id,
        "title": record.title,
        "pub_year": record.pub_year,
        "doc_type": record.doc_type.value,
        "doi": record.doi,
        "doi_created_date": (
            record.doi_created_date.isoformat() if record.doi_created_date else None
        ),
        "acknowledgment_text": record.acknowledgment_text,
        "funding_orgs": list(record.funding_orgs),
        "authors": [
            {
                "position": a.position,
                "full_name": a.full_name,
                "last_name": a.last_name,
                "first_name": a.first_name,
                "initials": a.initials,
                "email": a.email,
                "affiliations": [
                    {"org_name": aff.org_name, "country": aff.country}
                    for aff in a.affiliations
                ],
            }
            for a in record.authors
        ],
        "field_weights": [
            {"field_id": fw.field_id, "weight": fw.weight} for fw in record.field_weights
        ],
    }


def serialize_corpus(records: Iterable[PublicationRecord]) -> Iterator[str]:
    for record in records:
        yield json.dumps(record_to_dict(record), sort_keys=True, ensure_ascii=False)


def parse_corpus(
    lines: Iterable[str], aliases: CountryAliases | None = None
) -> ParseResult:
    """Parse a line-delimited record stream.

    Malformed lines become :class:`ParseIssue` entries with their 1-based
    line number. Raises :class:`CorpusParseError` only when the stream had
    content but not a single record parsed.
    """
    result = ParseResult()
    saw_content = False
    seen_ids: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        saw_content = True
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            result.errors.append(ParseIssue(line_no, f"invalid JSON: {exc.msg}"))
            continue
        try:
            record = record_from_dict(obj, aliases)
        except RecordError as exc:
            result.errors.append(ParseIssue(line_no, str(exc)))
            continue
        if record.pub_id in seen_ids:
            result.errors.append(
                ParseIssue(line_no, f"duplicate pub_id: {record.pub_id}")
            )
            continue
        seen_ids.add(record.pub_id)
        result.records.append(record)
    if saw_content and not result.records:
        raise CorpusParseError(result.errors)
    return result


def load_corpus(path: str | Path, aliases: CountryAliases | None = None) -> ParseResult:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle, aliases)


def filter_documents(records: Iterable[PublicationRecord]) -> list[PublicationRecord]:
    """Keep Article and Review records only, preserving order."""
    return [r for r in records if r.doc_type in (DocType.ARTICLE, DocType.REVIEW)]


def resolve_pub_date(record: PublicationRecord) -> PubDate:
    """DOI created date when present, else July 1 of the publication year.

    The mid-year fallback keeps date comparisons total for records that
    only carry a year.
    """
    if record.doi_created_date is not None:
        return PubDate(record.doi_created_date, DateSource.DOI_CREATED)
    return PubDate(date(record.pub_year, 7, 1), DateSource.YEAR_FALLBACK)
