"""Knowledge base of binary assertions: expansion, labeling, queries, chains.

An assertion links two concepts as ``[concept1 label concept2]``. Candidates
come out of embedding expansion with the label pending; a human annotator
later labels or rejects each one. Labels are never assigned automatically.
"""

from __future__ import annotations

import datetime as dt
import enum
import hashlib
import json
import logging
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from ontoforge.embedding import EmbeddingModel, nearest_neighbors
from ontoforge.errors import OntologyError
from ontoforge.lexstats import SeedWord

logger = logging.getLogger(__name__)

_NUMERIC_TOKEN = re.compile(r"[0-9][0-9.,]*|[0-9.,]*[0-9]")


class SemanticLabel(enum.Enum):
    """The nine relation labels, in annotation-rule order."""

    SYN = "SYN"
    ANT = "ANT"
    HYP = "HYP"
    DO = "DO"
    PART_OF = "PartOf"
    IS = "IS"
    CAUSE = "CAUSE"
    DUE_TO = "dueTo"
    RAND = "RAND"

    @classmethod
    def parse(cls, raw: str) -> "SemanticLabel":
        """Case-insensitive parse ("partOf" and "PartOf" are the same label)."""
        lowered = raw.strip().lower()
        for label in cls:
            if label.value.lower() == lowered:
                return label
        valid = ", ".join(label.value for label in cls)
        raise OntologyError(f"unknown semantic label {raw!r} (expected one of: {valid})")


LABEL_RULES: dict[SemanticLabel, str] = {
    SemanticLabel.SYN: "concept1 has the same meaning as concept2",
    SemanticLabel.ANT: "concept1 has the opposite meaning of concept2",
    SemanticLabel.HYP: "concept1 has a broader meaning than concept2",
    SemanticLabel.DO: "concept1 is the actor that performs concept2",
    SemanticLabel.PART_OF: "concept1 is a member of concept2",
    SemanticLabel.IS: "concept1 describes concept2",
    SemanticLabel.CAUSE: "concept1 is the cause of event concept2",
    SemanticLabel.DUE_TO: "concept1 is the resulting effect of event concept2",
    SemanticLabel.RAND: "concept1 has no direct relationship with concept2",
}


class Status(enum.Enum):
    CANDIDATE = "candidate"
    LABELED = "labeled"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Provenance:
    seed: str
    rank: int


@dataclass
class Assertion:
    id: str
    concept1: str
    concept2: str
    partition: int
    similarity: float
    status: Status = Status.CANDIDATE
    label: SemanticLabel | None = None
    provenance: Provenance | None = None
    annotator: str | None = None
    labeled_at: str | None = None

    def __post_init__(self):
        if self.concept1 == self.concept2:
            raise OntologyError(f"assertion {self.id}: concept1 equals concept2 ({self.concept1!r})")
        if not (-1.0 - 1e-9 <= self.similarity <= 1.0 + 1e-9):
            raise OntologyError(f"assertion {self.id}: similarity {self.similarity} outside [-1, 1]")
        if self.status is Status.LABELED and self.label is None:
            raise OntologyError(f"assertion {self.id}: labeled status requires a label")
        if self.status is Status.CANDIDATE and self.label is not None:
            raise OntologyError(f"assertion {self.id}: candidate status requires a pending label")

    def key(self) -> tuple[str, str, str, int]:
        """Uniqueness key for labeled assertions."""
        label = self.label.value if self.label else ""
        return (self.concept1, label, self.concept2, self.partition)


def assertion_id(partition: int, concept1: str, concept2: str) -> str:
    digest = hashlib.sha1(f"{partition}\x1f{concept1}\x1f{concept2}".encode("utf-8"))
    return digest.hexdigest()[:12]


def _utcnow() -> str:
    return dt.datetime.now(dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class KnowledgeBase:
    """Assertion store with indices by concept, partition, and label.

    Mutations (insert, label, reject) are serialized by an internal lock;
    queries return fresh lists and may run concurrently.
    """

    def __init__(self, assertions: Iterable[Assertion] = ()):
        self._lock = threading.RLock()
        self._by_id: dict[str, Assertion] = {}
        self._labeled_keys: set[tuple[str, str, str, int]] = set()
        self._by_concept1: dict[str, list[str]] = {}
        self._by_concept2: dict[str, list[str]] = {}
        self._by_partition: dict[int, list[str]] = {}
        self._by_label: dict[SemanticLabel, list[str]] = {}
        for assertion in assertions:
            self.insert(assertion)

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Assertion]:
        return iter(list(self._by_id.values()))

    def insert(self, assertion: Assertion) -> Assertion:
        with self._lock:
            if assertion.id in self._by_id:
                raise OntologyError(f"duplicate assertion id: {assertion.id}")
            if assertion.status is Status.LABELED:
                if assertion.key() in self._labeled_keys:
                    c1, label, c2, partition = assertion.key()
                    raise OntologyError(
                        f"duplicate labeled assertion [{c1} {label} {c2}] in partition {partition}"
                    )
                self._labeled_keys.add(assertion.key())
                self._by_label.setdefault(assertion.label, []).append(assertion.id)
            self._by_id[assertion.id] = assertion
            self._by_concept1.setdefault(assertion.concept1, []).append(assertion.id)
            self._by_concept2.setdefault(assertion.concept2, []).append(assertion.id)
            self._by_partition.setdefault(assertion.partition, []).append(assertion.id)
            return assertion

    def get(self, assertion_id_: str) -> Assertion:
        try:
            return self._by_id[assertion_id_]
        except KeyError:
            raise OntologyError(f"unknown assertion id: {assertion_id_}") from None

    def label(
        self,
        assertion_id_: str,
        label: SemanticLabel,
        annotator: str,
        force: bool = False,
        timestamp: str | None = None,
    ) -> Assertion:
        """Move a candidate to labeled; relabeling a labeled one needs force."""
        with self._lock:
            assertion = self.get(assertion_id_)
            if assertion.status is Status.LABELED and not force:
                raise OntologyError(
                    f"assertion {assertion_id_} is already labeled "
                    f"{assertion.label.value}; use force to relabel"
                )
            new_key = (assertion.concept1, label.value, assertion.concept2, assertion.partition)
            if new_key in self._labeled_keys and assertion.key() != new_key:
                raise OntologyError(
                    f"labeling would duplicate [{new_key[0]} {new_key[1]} {new_key[2]}] "
                    f"in partition {new_key[3]}"
                )
            if assertion.status is Status.LABELED:
                self._labeled_keys.discard(assertion.key())
                self._by_label[assertion.label].remove(assertion.id)
            assertion.label = label
            assertion.status = Status.LABELED
            assertion.annotator = annotator
            assertion.labeled_at = timestamp or _utcnow()
            self._labeled_keys.add(assertion.key())
            self._by_label.setdefault(label, []).append(assertion.id)
            return assertion

    def reject(self, assertion_id_: str, annotator: str, timestamp: str | None = None) -> Assertion:
        with self._lock:
            assertion = self.get(assertion_id_)
            if assertion.status is Status.LABELED:
                self._labeled_keys.discard(assertion.key())
                self._by_label[assertion.label].remove(assertion.id)
            assertion.label = None
            assertion.status = Status.REJECTED
            assertion.annotator = annotator
            assertion.labeled_at = timestamp or _utcnow()
            return assertion

    def partitions(self) -> list[int]:
        return sorted(self._by_partition)

    def assertions(
        self,
        status: Status | None = None,
        partition: int | None = None,
        concept: str | None = None,
    ) -> list[Assertion]:
        with self._lock:
            if concept is not None:
                ids = list(self._by_concept1.get(concept, []))
            elif partition is not None:
                ids = list(self._by_partition.get(partition, []))
            else:
                ids = list(self._by_id)
            rows = [self._by_id[i] for i in ids]
        if partition is not None:
            rows = [a for a in rows if a.partition == partition]
        if status is not None:
            rows = [a for a in rows if a.status is status]
        return rows


def expand_seeds(
    seeds: Sequence[SeedWord],
    model: EmbeddingModel,
    per_seed: int,
    stoplist: frozenset[str] = frozenset(),
) -> list[Assertion]:
    """Turn each in-vocabulary seed into up to per_seed candidate assertions.

    For every seed the nearest neighbors by cosine become candidates, skipping
    the seed itself, stoplist entries, and pure-number tokens. Seeds missing
    from the model vocabulary are skipped with a warning.
    """
    if per_seed < 1:
        raise OntologyError("per_seed must be >= 1")
    candidates: list[Assertion] = []
    seen: set[tuple[str, int]] = set()
    for seed in seeds:
        if model.partition is not None and seed.partition != model.partition:
            raise OntologyError(
                f"seed {seed.token!r} belongs to partition {seed.partition}, "
                f"model holds {model.partition}"
            )
        if (seed.token, seed.partition) in seen:
            logger.warning("duplicate seed %r for partition %s skipped", seed.token, seed.partition)
            continue
        seen.add((seed.token, seed.partition))
        if seed.token not in model.vocab:
            logger.warning(
                "seed %r not in partition %s vocabulary; skipped", seed.token, seed.partition
            )
            continue
        taken = 0
        for rank, (neighbor, similarity) in enumerate(
            nearest_neighbors(model, seed.token, k=len(model.vocab) - 1), start=1
        ):
            if taken >= per_seed:
                break
            if neighbor in stoplist or _NUMERIC_TOKEN.fullmatch(neighbor):
                continue
            candidates.append(
                Assertion(
                    id=assertion_id(seed.partition, seed.token, neighbor),
                    concept1=seed.token,
                    concept2=neighbor,
                    partition=seed.partition,
                    similarity=similarity,
                    status=Status.CANDIDATE,
                    provenance=Provenance(seed=seed.token, rank=rank),
                )
            )
            taken += 1
    return candidates


class Direction(enum.Enum):
    AS_SUBJECT = "as_subject"
    AS_OBJECT = "as_object"
    EITHER = "either"


def query(
    kb: KnowledgeBase,
    concept: str,
    direction: Direction = Direction.AS_SUBJECT,
    label: SemanticLabel | None = None,
) -> list[Assertion]:
    """Labeled assertions touching a concept, sorted by (partition, similarity desc)."""
    rows: list[Assertion] = []
    if direction in (Direction.AS_SUBJECT, Direction.EITHER):
        rows.extend(a for a in kb.assertions(status=Status.LABELED) if a.concept1 == concept)
    if direction in (Direction.AS_OBJECT, Direction.EITHER):
        rows.extend(a for a in kb.assertions(status=Status.LABELED) if a.concept2 == concept)
    if label is not None:
        rows = [a for a in rows if a.label is label]
    unique = {a.id: a for a in rows}
    return sorted(unique.values(), key=lambda a: (a.partition, -a.similarity, a.id))


@dataclass
class ChainNode:
    concept: str
    children: list["ChainNode"] = field(default_factory=list)


@dataclass
class HypernymChain:
    """Ancestors and descendants of a concept over HYP/PartOf edges.

    ``[X HYP Y]`` puts X above Y (X is broader); ``[X PartOf Y]`` puts Y
    above X. ``up`` and ``down`` are trees rooted at the concept; ``up``
    children are parents, ``down`` children are narrower concepts.
    """

    concept: str
    up: ChainNode
    down: ChainNode
    cycles: list[str]


def _labeled_edges(kb: KnowledgeBase) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    parents: dict[str, set[str]] = {}
    children: dict[str, set[str]] = {}
    for assertion in kb.assertions(status=Status.LABELED):
        if assertion.label is SemanticLabel.PART_OF:
            parents.setdefault(assertion.concept1, set()).add(assertion.concept2)
            children.setdefault(assertion.concept2, set()).add(assertion.concept1)
        elif assertion.label is SemanticLabel.HYP:
            parents.setdefault(assertion.concept2, set()).add(assertion.concept1)
            children.setdefault(assertion.concept1, set()).add(assertion.concept2)
    return parents, children


def hypernym_chain(kb: KnowledgeBase, concept: str) -> HypernymChain:
    """Cycle-safe traversal of the hierarchy around a concept.

    Each concept is visited at most once per direction; an edge back into a
    visited concept is recorded in ``cycles`` instead of being followed.
    """
    parents, children = _labeled_edges(kb)
    cycles: list[str] = []

    def walk(start: str, step: dict[str, set[str]]) -> ChainNode:
        visited = {start}

        def expand(node: ChainNode) -> None:
            for nxt in sorted(step.get(node.concept, ())):
                if nxt in visited:
                    cycles.append(f"{node.concept} -> {nxt}")
                    continue
                visited.add(nxt)
                child = ChainNode(concept=nxt)
                node.children.append(child)
                expand(child)

        root = ChainNode(concept=start)
        expand(root)
        return root

    return HypernymChain(
        concept=concept,
        up=walk(concept, parents),
        down=walk(concept, children),
        cycles=cycles,
    )


def _assertion_record(assertion: Assertion) -> dict:
    return {
        "id": assertion.id,
        "concept1": assertion.concept1,
        "label": assertion.label.value if assertion.label else None,
        "concept2": assertion.concept2,
        "partition": assertion.partition,
        "similarity": assertion.similarity,
        "status": assertion.status.value,
        "provenance": (
            {"seed": assertion.provenance.seed, "rank": assertion.provenance.rank}
            if assertion.provenance
            else None
        ),
        "annotator": assertion.annotator,
        "labeled_at": assertion.labeled_at,
    }


def assertion_from_record(record: dict) -> Assertion:
    label = record.get("label")
    provenance = record.get("provenance")
    return Assertion(
        id=str(record["id"]),
        concept1=str(record["concept1"]),
        concept2=str(record["concept2"]),
        partition=int(record["partition"]),
        similarity=float(record["similarity"]),
        status=Status(record.get("status", "candidate")),
        label=SemanticLabel.parse(label) if label is not None else None,
        provenance=(
            Provenance(seed=str(provenance["seed"]), rank=int(provenance["rank"]))
            if provenance
            else None
        ),
        annotator=record.get("annotator"),
        labeled_at=record.get("labeled_at"),
    )


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    """Write the KB as UTF-8 JSON lines, atomically (write then rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as handle:
        for assertion in kb:
            handle.write(json.dumps(_assertion_record(assertion), ensure_ascii=False) + "\n")
    tmp.replace(path)


def load_kb(path: str | Path) -> KnowledgeBase:
    path = Path(path)
    kb = KnowledgeBase()
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise OntologyError(f"{path}: line {lineno}: malformed JSON: {exc.msg}") from None
            try:
                kb.insert(assertion_from_record(record))
            except (KeyError, TypeError, ValueError) as exc:
                raise OntologyError(f"{path}: line {lineno}: bad record: {exc}") from None
            except OntologyError as exc:
                raise OntologyError(f"{path}: line {lineno}: {exc}") from None
    return kb
