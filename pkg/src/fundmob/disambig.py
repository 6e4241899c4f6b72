"""Authorship clustering: blocking by surname + first initial, pairwise
evidence scoring, and single-linkage clustering over a score threshold.

This is a transparent, configurable stand-in for a production-scale name
disambiguator. Scoring sums the weights of triggered boolean features
(shared email, shared affiliation, shared co-author, shared funder,
matching full first names); conflicting full first names veto the pair
outright. Clustering is connected components of the threshold graph, so
results are independent of input order. A manual-override file can force
pairs together or suppress their direct edge, standing in for the manual
cleaning pass that production pipelines apply.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Authorship, PublicationRecord
from .textnorm import normalize_text

AuthorshipKey = tuple[str, int]


@dataclass(frozen=True)
class ScoringWeights:
    email: float = 10.0
    affiliation: float = 2.0
    coauthor: float = 4.0
    funder: float = 1.0
    first_name: float = 2.0
    #: Reserved: records carry no reference lists, so this feature never
    #: triggers; kept so config files may declare it.
    self_citation: float = 0.0
    threshold: float = 5.0

    def __post_init__(self) -> None:
        for name in ("email", "affiliation", "coauthor", "funder",
                     "first_name", "self_citation"):
            if getattr(self, name) < 0:
                raise ValueError(f"weight {name} must be >= 0")
        if self.threshold <= 0:
            raise ValueError("threshold must be > 0")

    @classmethod
    def load(cls, path: str | Path) -> "ScoringWeights":
        """Key-value config: ``name = value`` per line, # comments."""
        values: dict[str, float] = {}
        known = set(cls.__dataclass_fields__)
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"unknown disambiguation weight: {key!r}")
            values[key] = float(raw.strip())
        return cls(**values)


@dataclass(frozen=True)
class ManualOverride:
    a: AuthorshipKey
    b: AuthorshipKey
    action: str  # MERGE | SPLIT


def load_overrides(path: str | Path) -> list[ManualOverride]:
    """Tab-delimited: pub_id, position, pub_id, position, MERGE|SPLIT."""
    overrides = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5 or parts[4].upper() not in ("MERGE", "SPLIT"):
            raise ValueError(f"bad override on line {line_no}: {line!r}")
        overrides.append(
            ManualOverride(
                a=(parts[0], int(parts[1])),
                b=(parts[2], int(parts[3])),
                action=parts[4].upper(),
            )
        )
    return overrides


@dataclass(frozen=True)
class ResearcherCluster:
    cluster_id: str
    members: frozenset[AuthorshipKey]
    display_name: str


class CorpusIndex:
    """Fast lookup from keys to records and authorships."""

    def __init__(self, records: Iterable[PublicationRecord]):
        self.records: dict[str, PublicationRecord] = {}
        self.authorships: dict[AuthorshipKey, Authorship] = {}
        for record in records:
            if record.pub_id in self.records:
                raise ValueError(f"duplicate pub_id: {record.pub_id}")
            self.records[record.pub_id] = record
            for author in record.authors:
                self.authorships[(record.pub_id, author.position)] = author

    def record(self, pub_id: str) -> PublicationRecord:
        return self.records[pub_id]

    def author(self, key: AuthorshipKey) -> Authorship:
        return self.authorships[key]


def _surname_key(author: Authorship) -> str:
    return normalize_text(author.last_name).replace(" ", "").replace("-", "")


def _first_initial(author: Authorship) -> str:
    for source in (author.first_name, author.initials):
        if source:
            for ch in normalize_text(source):
                if ch.isalpha():
                    return ch
    return ""


def block_key(author: Authorship) -> tuple[str, str]:
    return (_surname_key(author), _first_initial(author))


def block_authorships(
    corpus: Sequence[PublicationRecord],
) -> list[list[AuthorshipKey]]:
    """Partition all authorships by (surname, first initial), sorted."""
    blocks: dict[tuple[str, str], list[AuthorshipKey]] = {}
    for record in corpus:
        for author in record.authors:
            blocks.setdefault(block_key(author), []).append(
                (record.pub_id, author.position)
            )
    return [sorted(blocks[key]) for key in sorted(blocks)]


def _full_first_name(author: Authorship) -> str | None:
    """A flattened given name of two or more letters, else None."""
    if not author.first_name:
        return None
    flattened = "".join(
        ch for ch in normalize_text(author.first_name) if ch.isalpha()
    )
    return flattened if len(flattened) >= 2 else None


def _org_keys(author: Authorship) -> set[str]:
    return {normalize_text(a.org_name) for a in author.affiliations if a.org_name.strip()}


def _coauthor_keys(record: PublicationRecord, position: int) -> set[tuple[str, str]]:
    return {
        block_key(a) for a in record.authors if a.position != position
    }


def score_pair(
    index: CorpusIndex,
    a: AuthorshipKey,
    b: AuthorshipKey,
    weights: ScoringWeights,
) -> float:
    """Sum of triggered feature weights for a candidate pair.

    Symmetric in its arguments. Conflicting full first names force 0
    regardless of any other evidence.
    """
    author_a, author_b = index.author(a), index.author(b)
    record_a, record_b = index.record(a[0]), index.record(b[0])

    first_a, first_b = _full_first_name(author_a), _full_first_name(author_b)
    if first_a and first_b and first_a != first_b:
        return 0.0

    score = 0.0
    if author_a.email and author_b.email:
        if author_a.email.strip().lower() == author_b.email.strip().lower():
            score += weights.email
    if _org_keys(author_a) & _org_keys(author_b):
        score += weights.affiliation
    if _coauthor_keys(record_a, a[1]) & _coauthor_keys(record_b, b[1]):
        score += weights.coauthor
    funders_a = {normalize_text(f) for f in record_a.funding_orgs}
    funders_b = {normalize_text(f) for f in record_b.funding_orgs}
    if funders_a & funders_b:
        score += weights.funder
    if first_a and first_b and first_a == first_b:
        score += weights.first_name
    return score


class _UnionFind:
    def __init__(self, items: Iterable[AuthorshipKey]):
        self.parent = {item: item for item in items}

    def find(self, item: AuthorshipKey) -> AuthorshipKey:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: AuthorshipKey, b: AuthorshipKey) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # anchor on the smaller key for deterministic roots
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _make_clusters(
    groups: Iterable[Sequence[AuthorshipKey]], index: CorpusIndex
) -> list[ResearcherCluster]:
    clusters = []
    for members in groups:
        ordered = sorted(members)
        anchor = ordered[0]
        names = Counter(index.author(key).full_name for key in ordered)
        # most frequent full name; ties broken by lexicographically smallest
        best_count = max(names.values())
        display = min(name for name, count in names.items() if count == best_count)
        clusters.append(
            ResearcherCluster(
                cluster_id=f"{anchor[0]}#{anchor[1]}",
                members=frozenset(ordered),
                display_name=display,
            )
        )
    return sorted(clusters, key=lambda c: min(c.members))


def _cluster_keys(
    blocks: Iterable[Sequence[AuthorshipKey]],
    index: CorpusIndex,
    weights: ScoringWeights,
    overrides: Iterable[ManualOverride] | None,
) -> list[ResearcherCluster]:
    overrides = list(overrides or [])
    splits = {frozenset((o.a, o.b)) for o in overrides if o.action == "SPLIT"}
    blocks = [sorted(block) for block in blocks]
    uf = _UnionFind(key for block in blocks for key in block)
    for block in blocks:
        for i, a in enumerate(block):
            for b in block[i + 1:]:
                if frozenset((a, b)) in splits:
                    continue
                if score_pair(index, a, b, weights) >= weights.threshold:
                    uf.union(a, b)
    for o in overrides:
        if o.action == "MERGE" and o.a in uf.parent and o.b in uf.parent:
            uf.union(o.a, o.b)
    groups: dict[AuthorshipKey, list[AuthorshipKey]] = {}
    for block in blocks:
        for key in block:
            groups.setdefault(uf.find(key), []).append(key)
    return _make_clusters(groups.values(), index)


def cluster_block(
    block: Sequence[AuthorshipKey],
    index: CorpusIndex,
    weights: ScoringWeights,
    overrides: Iterable[ManualOverride] | None = None,
) -> list[ResearcherCluster]:
    """Single-linkage clusters of one block: connected components of the
    graph whose edges are pairs scoring at or above the threshold.

    A SPLIT override suppresses the direct edge of that pair only; the two
    authorships can still end up together through transitive links.
    """
    return _cluster_keys([block], index, weights, overrides)


def cluster_corpus(
    corpus: Sequence[PublicationRecord],
    weights: ScoringWeights,
    overrides: Iterable[ManualOverride] | None = None,
    index: CorpusIndex | None = None,
) -> list[ResearcherCluster]:
    """Cluster every authorship of the corpus.

    Scoring only happens within blocks, but MERGE overrides join across
    blocks, mirroring a manual-cleaning pass that may repair blocking
    mistakes.
    """
    index = index or CorpusIndex(corpus)
    return _cluster_keys(block_authorships(corpus), index, weights, overrides)
