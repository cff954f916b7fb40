"""Semantic change of assertions across partitions: timelines, label counts, diffs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ontoforge.errors import TemporalError
from ontoforge.ontology import Assertion, KnowledgeBase, Status

Pair = tuple[str, str]  # (label, concept2)


@dataclass(frozen=True)
class Timeline:
    """Top-n labeled assertions per partition for one subject concept."""

    concept: str
    n: int
    rows: dict[int, list[Assertion]]


@dataclass(frozen=True)
class LabelDistribution:
    concept: str
    per_partition: dict[int, dict[str, int]]


@dataclass(frozen=True)
class Transition:
    earlier: int
    later: int
    persistent: frozenset[Pair]
    appeared: frozenset[Pair]
    disappeared: frozenset[Pair]


@dataclass(frozen=True)
class AssociationDiff:
    concept: str
    transitions: list[Transition]


def _subject_assertions(kb: KnowledgeBase, concept: str, partition: int) -> list[Assertion]:
    return [
        a
        for a in kb.assertions(status=Status.LABELED, partition=partition)
        if a.concept1 == concept
    ]


def entity_timeline(kb: KnowledgeBase, concept: str, n: int = 3) -> Timeline:
    """For every KB partition, the concept's top-n assertions by similarity.

    Partitions without assertions for the concept yield empty rows, so the
    timeline always spans the whole KB.
    """
    if n < 1:
        raise TemporalError("n must be >= 1")
    rows: dict[int, list[Assertion]] = {}
    for partition in kb.partitions():
        matches = _subject_assertions(kb, concept, partition)
        matches.sort(key=lambda a: (-a.similarity, a.concept2))
        rows[partition] = matches[:n]
    return Timeline(concept=concept, n=n, rows=rows)


def label_distribution(kb: KnowledgeBase, concept: str) -> LabelDistribution:
    """Exact per-partition label counts for assertions with the concept as subject."""
    per_partition: dict[int, dict[str, int]] = {}
    for partition in kb.partitions():
        counts: dict[str, int] = {}
        for assertion in _subject_assertions(kb, concept, partition):
            counts[assertion.label.value] = counts.get(assertion.label.value, 0) + 1
        per_partition[partition] = counts
    return LabelDistribution(concept=concept, per_partition=per_partition)


def _pairs(assertions: Iterable[Assertion]) -> frozenset[Pair]:
    return frozenset((a.label.value, a.concept2) for a in assertions)


def association_diff(kb: KnowledgeBase, concept: str) -> AssociationDiff:
    """Persistent / appeared / disappeared (label, concept2) pairs between
    consecutive partitions."""
    partitions = kb.partitions()
    if len(partitions) < 2:
        raise TemporalError(
            f"association diff needs at least 2 partitions, knowledge base has {len(partitions)}"
        )
    by_partition = {p: _pairs(_subject_assertions(kb, concept, p)) for p in partitions}
    transitions = []
    for earlier, later in zip(partitions, partitions[1:]):
        before, after = by_partition[earlier], by_partition[later]
        transitions.append(
            Transition(
                earlier=earlier,
                later=later,
                persistent=before & after,
                appeared=after - before,
                disappeared=before - after,
            )
        )
    return AssociationDiff(concept=concept, transitions=transitions)
