"""Mobility-destination inference for funded scholars from mainland China.

Scholars are kept when their modal surname appears in a configurable list
of romanized mainland-Chinese surnames. Destination inference looks at
the distinct affiliation countries on the scholar's during-sponsorship
papers: their own, then their co-authors'. The rules fire in a fixed
order; own-affiliation evidence outranks co-author evidence, and mainland
China is never a destination.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import MAINLAND_CHINA, UNKNOWN_COUNTRY
from .disambig import CorpusIndex, ResearcherCluster
from .textnorm import normalize_text


class Role(Enum):
    OWN = "Own"
    COAUTHOR = "Coauthor"


class Outcome(Enum):
    DESTINATION = "Destination"
    UNIDENTIFIED_MULTI_FOREIGN = "UnidentifiedMultiForeign"
    UNIDENTIFIED_CHINA_ONLY = "UnidentifiedChinaOnly"


class Rule(Enum):
    OWN_SINGLE_FOREIGN = "OwnSingleForeign"
    OWN_CHINA_PLUS_ONE = "OwnChinaPlusOne"
    COAUTHOR_SINGLE_FOREIGN = "CoauthorSingleForeign"
    MULTI_FOREIGN_OWN = "MultiForeignOwn"
    NO_FOREIGN_SIGNAL = "NoForeignSignal"


_DESTINATION_RULES = frozenset({
    Rule.OWN_SINGLE_FOREIGN,
    Rule.OWN_CHINA_PLUS_ONE,
    Rule.COAUTHOR_SINGLE_FOREIGN,
})


@dataclass(frozen=True)
class MobilityAssignment:
    cluster_id: str
    outcome: Outcome
    rule_fired: Rule
    destination: str | None = None

    def __post_init__(self) -> None:
        if self.destination == MAINLAND_CHINA:
            raise ValueError("mainland China cannot be a mobility destination")
        if (self.outcome is Outcome.DESTINATION) != (self.rule_fired in _DESTINATION_RULES):
            raise ValueError("outcome inconsistent with fired rule")
        if (self.destination is not None) != (self.outcome is Outcome.DESTINATION):
            raise ValueError("destination set iff outcome is Destination")


@dataclass(frozen=True)
class SurnameList:
    surnames: frozenset[str]

    def __post_init__(self) -> None:
        if not self.surnames:
            raise ValueError("surname list is empty")

    @classmethod
    def load(cls, path: str | Path) -> "SurnameList":
        names = {
            normalize_text(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.lstrip().startswith("#")
        }
        return cls(frozenset(names))

    def __contains__(self, surname: str) -> bool:
        return normalize_text(surname) in self.surnames


def modal_surname(cluster: ResearcherCluster, index: CorpusIndex) -> str:
    """Most frequent normalized surname; ties break lexicographically."""
    counts = Counter(
        normalize_text(index.author(key).last_name) for key in cluster.members
    )
    best = max(counts.values())
    return min(name for name, count in counts.items() if count == best)


def is_mainland_chinese_scholar(
    cluster: ResearcherCluster, surnames: SurnameList, index: CorpusIndex
) -> bool:
    return modal_surname(cluster, index) in surnames


def collect_countries(
    cluster: ResearcherCluster,
    index: CorpusIndex,
    role: Role,
    during_pub_ids: set[str],
) -> Counter[str]:
    """Affiliation countries on the cluster's during-sponsorship papers.

    Own: the scholar's affiliations on those papers. Coauthor: the
    affiliations of every other author on the same papers. Unknown
    countries are dropped.
    """
    counts: Counter[str] = Counter()
    for pub_id, position in sorted(cluster.members):
        if pub_id not in during_pub_ids:
            continue
        record = index.record(pub_id)
        for author in record.authors:
            is_own = author.position == position
            if (role is Role.OWN) != is_own:
                continue
            for aff in author.affiliations:
                if aff.country != UNKNOWN_COUNTRY:
                    counts[aff.country] += 1
    return counts


def infer_destination(
    own: Iterable[str], coauthor: Iterable[str], cluster_id: str = ""
) -> MobilityAssignment:
    """Apply the destination rules to distinct own/co-author country sets.

    Rule order: own single foreign country; own China plus one other;
    China-only (or no) own affiliation with a single foreign co-author
    country; two or more foreign own countries; otherwise no usable
    foreign signal. Multiplicity is ignored.
    """
    own_set = set(own)
    foreign_own = own_set - {MAINLAND_CHINA}
    foreign_coauthor = set(coauthor) - {MAINLAND_CHINA}

    if len(own_set) == 1 and own_set != {MAINLAND_CHINA}:
        return MobilityAssignment(
            cluster_id, Outcome.DESTINATION, Rule.OWN_SINGLE_FOREIGN,
            destination=next(iter(own_set)),
        )
    if len(own_set) == 2 and MAINLAND_CHINA in own_set:
        return MobilityAssignment(
            cluster_id, Outcome.DESTINATION, Rule.OWN_CHINA_PLUS_ONE,
            destination=next(iter(foreign_own)),
        )
    if own_set <= {MAINLAND_CHINA} and len(foreign_coauthor) == 1:
        return MobilityAssignment(
            cluster_id, Outcome.DESTINATION, Rule.COAUTHOR_SINGLE_FOREIGN,
            destination=next(iter(foreign_coauthor)),
        )
    if len(foreign_own) >= 2:
        return MobilityAssignment(
            cluster_id, Outcome.UNIDENTIFIED_MULTI_FOREIGN, Rule.MULTI_FOREIGN_OWN
        )
    return MobilityAssignment(
        cluster_id, Outcome.UNIDENTIFIED_CHINA_ONLY, Rule.NO_FOREIGN_SIGNAL
    )


def assign_mobility(
    cluster: ResearcherCluster,
    index: CorpusIndex,
    during_pub_ids: set[str],
) -> MobilityAssignment:
    own = collect_countries(cluster, index, Role.OWN, during_pub_ids)
    coauthor = collect_countries(cluster, index, Role.COAUTHOR, during_pub_ids)
    return infer_destination(own, coauthor, cluster_id=cluster.cluster_id)


@dataclass(frozen=True)
class FlowTable:
    destinations: tuple[tuple[str, int], ...]
    unidentified: tuple[tuple[str, int], ...]

    @property
    def total(self) -> int:
        return sum(n for _, n in self.destinations) + sum(n for _, n in self.unidentified)


def aggregate_flows(assignments: Sequence[MobilityAssignment]) -> FlowTable:
    """Scholar counts per destination, plus unidentified-case rows."""
    destinations: Counter[str] = Counter()
    unidentified: Counter[str] = Counter()
    for assignment in assignments:
        if assignment.outcome is Outcome.DESTINATION:
            destinations[assignment.destination] += 1
        else:
            unidentified[assignment.outcome.value] += 1
    return FlowTable(
        destinations=tuple(
            sorted(destinations.items(), key=lambda kv: (-kv[1], kv[0]))
        ),
        unidentified=tuple(sorted(unidentified.items())),
    )


def load_field_map(path: str | Path) -> dict[str, str]:
    """Tab-delimited field map: field_id<TAB>top-level field name."""
    mapping: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        field_id, _, name = line.partition("\t")
        if not name:
            raise ValueError(f"malformed field map line: {line!r}")
        mapping[field_id.strip()] = name.strip()
    return mapping


@dataclass(frozen=True)
class FieldDestinations:
    #: field -> ranked (destination, fractional scholar count)
    per_field: dict[str, list[tuple[str, float]]]
    #: scholars with a destination but no mapped during-sponsorship weights
    excluded_scholars: int


def scholar_field_profile(
    cluster: ResearcherCluster,
    index: CorpusIndex,
    field_map: Mapping[str, str],
    during_pub_ids: set[str],
) -> dict[str, float]:
    """Unit-mass field profile from during-sponsorship publications.

    Field weights are mapped to top-level fields, summed over the
    scholar's during papers, then normalized so each scholar contributes
    exactly one scholar-unit split across fields.
    """
    raw: dict[str, float] = {}
    for pub_id in sorted({key[0] for key in cluster.members}):
        if pub_id not in during_pub_ids:
            continue
        for fw in index.record(pub_id).field_weights:
            top = field_map.get(fw.field_id)
            if top is None:
                continue
            raw[top] = raw.get(top, 0.0) + fw.weight
    total = sum(raw.values())
    if total <= 0:
        return {}
    return {field: weight / total for field, weight in raw.items()}


def field_destination_matrix(
    assignments: Sequence[MobilityAssignment],
    clusters: Mapping[str, ResearcherCluster],
    index: CorpusIndex,
    field_map: Mapping[str, str],
    during_by_cluster: Mapping[str, set[str]],
) -> tuple[dict[str, dict[str, float]], int]:
    """Fractional scholar counts per (field, destination), plus how many
    destination scholars lacked usable field weights."""
    matrix: dict[str, dict[str, float]] = {}
    excluded = 0
    for assignment in assignments:
        if assignment.outcome is not Outcome.DESTINATION:
            continue
        cluster = clusters[assignment.cluster_id]
        profile = scholar_field_profile(
            cluster, index, field_map, during_by_cluster.get(assignment.cluster_id, set())
        )
        if not profile:
            excluded += 1
            continue
        for field, share in profile.items():
            row = matrix.setdefault(field, {})
            row[assignment.destination] = row.get(assignment.destination, 0.0) + share
    return matrix, excluded


def top_destinations_by_field(
    assignments: Sequence[MobilityAssignment],
    clusters: Mapping[str, ResearcherCluster],
    index: CorpusIndex,
    field_map: Mapping[str, str],
    during_by_cluster: Mapping[str, set[str]],
    k: int = 10,
) -> FieldDestinations:
    """Top-k destinations per top-level field by fractional scholar count."""
    matrix, excluded = field_destination_matrix(
        assignments, clusters, index, field_map, during_by_cluster
    )
    per_field = {
        field: sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
        for field, row in sorted(matrix.items())
    }
    return FieldDestinations(per_field=per_field, excluded_scholars=excluded)
