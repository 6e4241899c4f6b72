"""Sponsorship-period classification of a funded scholar's publications.

A scholar's sponsorship window spans the resolved dates of their first
and last funder-acknowledging publications. Funder-acknowledging papers
are During regardless of date; other papers are Before when strictly
earlier than the window, After when strictly later, and excluded as
window-gap papers when they fall inside the window without acknowledging
the funder (publication delay makes those ambiguous). Papers shared by
several funded scholars take a single label: During when acknowledged,
the unanimous per-scholar label otherwise, and excluded as conflicting
when the scholars disagree.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .ackminer import FunderLexicon, detect_funder_mention
from .corpus import PubDate, PublicationRecord, resolve_pub_date
from .disambig import CorpusIndex, ResearcherCluster
from .textnorm import normalize_text


class Label(Enum):
    BEFORE = "Before"
    DURING = "During"
    AFTER = "After"
    EXCLUDED_CONFLICT = "ExcludedConflict"
    EXCLUDED_WINDOW_GAP = "ExcludedWindowGap"


@dataclass(frozen=True)
class PeriodLabel:
    pub_id: str
    cluster_id: str
    label: Label


@dataclass(frozen=True)
class SponsorshipWindow:
    cluster_id: str
    first_funded_date: PubDate
    last_funded_date: PubDate

    def __post_init__(self) -> None:
        if self.first_funded_date.date > self.last_funded_date.date:
            raise ValueError("window start after window end")


class NoFundedPapers(Exception):
    """The cluster has no funder-acknowledging publication, so no window
    can be computed; such clusters must not reach this stage."""


def record_acknowledges_funder(record: PublicationRecord, lexicon: FunderLexicon) -> bool:
    """True when the standardized funding organizations or the raw
    acknowledgment text mention the target funder."""
    lexicon_keys = {normalize_text(v) for v in lexicon.variants}
    for org in record.funding_orgs:
        if normalize_text(org) in lexicon_keys:
            return True
    if record.acknowledgment_text:
        if detect_funder_mention(record.acknowledgment_text, lexicon):
            return True
    return False


def funded_pub_ids(
    corpus: Iterable[PublicationRecord], lexicon: FunderLexicon
) -> set[str]:
    return {r.pub_id for r in corpus if record_acknowledges_funder(r, lexicon)}


def compute_window(
    cluster: ResearcherCluster,
    index: CorpusIndex,
    funded_ids: set[str],
) -> SponsorshipWindow:
    """Min and max resolved dates of the cluster's funded publications."""
    dates = [
        resolve_pub_date(index.record(pub_id))
        for pub_id in {key[0] for key in cluster.members}
        if pub_id in funded_ids
    ]
    if not dates:
        raise NoFundedPapers(cluster.cluster_id)
    return SponsorshipWindow(
        cluster_id=cluster.cluster_id,
        first_funded_date=min(dates, key=lambda d: d.date),
        last_funded_date=max(dates, key=lambda d: d.date),
    )


def classify_publication(
    record: PublicationRecord,
    window: SponsorshipWindow,
    funded: bool,
) -> Label:
    """Single-scholar view of one publication against one window.

    Boundary dates count as inside the closed window, so an unfunded
    paper dated exactly on a window edge is a window-gap exclusion.
    """
    if funded:
        return Label.DURING
    pub_date = resolve_pub_date(record).date
    if pub_date < window.first_funded_date.date:
        return Label.BEFORE
    if pub_date > window.last_funded_date.date:
        return Label.AFTER
    return Label.EXCLUDED_WINDOW_GAP


def reconcile_multi_scholar(
    funded: bool, per_scholar: Mapping[str, Label]
) -> dict[str, Label]:
    """Final labels for one record shared by several funded scholars.

    Funder-acknowledging records are During for everyone. Otherwise the
    label stands only when every scholar agrees on it; any disagreement
    (including window-gap vs. before/after mixtures) excludes the record
    as conflicting.
    """
    if not per_scholar:
        return {}
    if funded:
        return {cid: Label.DURING for cid in per_scholar}
    labels = set(per_scholar.values())
    if len(labels) == 1:
        return dict(per_scholar)
    return {cid: Label.EXCLUDED_CONFLICT for cid in per_scholar}


@dataclass
class LabelingResult:
    pairs: list[PeriodLabel]
    windows: dict[str, SponsorshipWindow]
    record_labels: dict[str, Label]


def label_corpus(
    corpus: Sequence[PublicationRecord],
    clusters: Sequence[ResearcherCluster],
    lexicon: FunderLexicon,
    index: CorpusIndex | None = None,
) -> LabelingResult:
    """Classify every publication of every funded scholar.

    Clusters without a funded publication are skipped: they are co-author
    identities, not sponsored scholars.
    """
    index = index or CorpusIndex(corpus)
    funded_ids = funded_pub_ids(corpus, lexicon)

    windows: dict[str, SponsorshipWindow] = {}
    scholar_pubs: dict[str, set[str]] = {}
    for cluster in clusters:
        try:
            windows[cluster.cluster_id] = compute_window(cluster, index, funded_ids)
        except NoFundedPapers:
            continue
        scholar_pubs[cluster.cluster_id] = {key[0] for key in cluster.members}

    per_record: dict[str, dict[str, Label]] = {}
    for cid, pubs in scholar_pubs.items():
        for pub_id in pubs:
            label = classify_publication(
                index.record(pub_id), windows[cid], pub_id in funded_ids
            )
            per_record.setdefault(pub_id, {})[cid] = label

    pairs: list[PeriodLabel] = []
    record_labels: dict[str, Label] = {}
    for pub_id in sorted(per_record):
        final = reconcile_multi_scholar(pub_id in funded_ids, per_record[pub_id])
        for cid in sorted(final):
            pairs.append(PeriodLabel(pub_id=pub_id, cluster_id=cid, label=final[cid]))
        record_labels[pub_id] = next(iter(final.values()))
    return LabelingResult(pairs=pairs, windows=windows, record_labels=record_labels)
