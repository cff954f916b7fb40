"""Expert agree/disagree judgments over labeled assertions and agreeability rates."""

from __future__ import annotations

import csv
import datetime as dt
import enum
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ontoforge.errors import ValidationError
from ontoforge.ontology import KnowledgeBase, Status

logger = logging.getLogger(__name__)

CSV_HEADER = ["assertion_id", "expert", "verdict", "timestamp"]


class Verdict(enum.Enum):
    AGREE = "agree"
    DISAGREE = "disagree"

    @classmethod
    def parse(cls, raw: str) -> "Verdict":
        try:
            return cls(raw.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown verdict {raw!r} (expected agree or disagree)") from None


@dataclass(frozen=True)
class Judgment:
    assertion_id: str
    expert: str
    verdict: Verdict
    timestamp: str


@dataclass(frozen=True)
class ValidationReport:
    """Per-partition agreeability: macro (mean of per-assertion agree fractions)
    and micro (agree verdicts over all verdicts), with per-expert and
    per-label breakdowns."""

    partition: int
    n_assertions: int
    n_judgments: int
    agreeability: float
    micro_agreeability: float
    per_expert: dict[str, float]
    per_label: dict[str, float]


def _utcnow() -> str:
    return dt.datetime.now(dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class JudgmentStore:
    """One verdict per (assertion, expert); re-judging overwrites with a warning."""

    def __init__(self, kb: KnowledgeBase):
        self._kb = kb
        self._lock = threading.RLock()
        self._by_key: dict[tuple[str, str], Judgment] = {}

    def __len__(self) -> int:
        return len(self._by_key)

    def judgments(self) -> list[Judgment]:
        with self._lock:
            return list(self._by_key.values())

    def record(
        self,
        assertion_id: str,
        expert: str,
        verdict: Verdict,
        timestamp: str | None = None,
    ) -> Judgment:
        with self._lock:
            assertion = self._kb.get(assertion_id)
            if assertion.status is not Status.LABELED:
                raise ValidationError(
                    f"assertion {assertion_id} is {assertion.status.value}, not labeled; "
                    "only labeled assertions can be judged"
                )
            key = (assertion_id, expert)
            if key in self._by_key:
                logger.warning(
                    "expert %r re-judged assertion %s: %s replaces %s",
                    expert,
                    assertion_id,
                    verdict.value,
                    self._by_key[key].verdict.value,
                )
            judgment = Judgment(
                assertion_id=assertion_id,
                expert=expert,
                verdict=verdict,
                timestamp=timestamp or _utcnow(),
            )
            self._by_key[key] = judgment
            return judgment

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        with tmp.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_HEADER)
            for judgment in self._by_key.values():
                writer.writerow(
                    [judgment.assertion_id, judgment.expert, judgment.verdict.value, judgment.timestamp]
                )
        tmp.replace(path)

    @classmethod
    def load(cls, kb: KnowledgeBase, path: str | Path) -> "JudgmentStore":
        path = Path(path)
        store = cls(kb)
        with path.open(encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != CSV_HEADER:
                raise ValidationError(f"{path}: line 1: expected header {','.join(CSV_HEADER)}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 4:
                    raise ValidationError(f"{path}: line {lineno}: expected 4 fields")
                try:
                    store.record(row[0], row[1], Verdict.parse(row[2]), timestamp=row[3])
                except ValidationError as exc:
                    raise ValidationError(f"{path}: line {lineno}: {exc}") from None
        return store


def record_judgment(
    store: JudgmentStore, assertion_id: str, expert: str, verdict: Verdict
) -> Judgment:
    return store.record(assertion_id, expert, verdict)


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return sum(values) / len(values)


def agreeability_rate(store: JudgmentStore, partition: int) -> ValidationReport:
    """Aggregate one partition's judgments into a ValidationReport.

    The headline rate is the macro average: each judged assertion contributes
    its own agree fraction, and assertions are weighted equally regardless of
    how many experts judged them.
    """
    by_assertion: dict[str, list[Judgment]] = {}
    for judgment in store.judgments():
        assertion = store._kb.get(judgment.assertion_id)
        if assertion.partition == partition:
            by_assertion.setdefault(judgment.assertion_id, []).append(judgment)
    if not by_assertion:
        raise ValidationError(f"no judgments recorded for partition {partition}")

    fractions = {
        aid: _mean(1.0 if j.verdict is Verdict.AGREE else 0.0 for j in rows)
        for aid, rows in by_assertion.items()
    }
    all_rows = [j for rows in by_assertion.values() for j in rows]
    agrees = sum(1 for j in all_rows if j.verdict is Verdict.AGREE)

    per_expert: dict[str, list[float]] = {}
    for judgment in all_rows:
        per_expert.setdefault(judgment.expert, []).append(
            1.0 if judgment.verdict is Verdict.AGREE else 0.0
        )
    per_label: dict[str, list[float]] = {}
    for aid, fraction in fractions.items():
        label = store._kb.get(aid).label
        per_label.setdefault(label.value, []).append(fraction)

    return ValidationReport(
        partition=partition,
        n_assertions=len(by_assertion),
        n_judgments=len(all_rows),
        agreeability=_mean(fractions.values()),
        micro_agreeability=agrees / len(all_rows),
        per_expert={expert: _mean(rows) for expert, rows in sorted(per_expert.items())},
        per_label={label: _mean(rows) for label, rows in sorted(per_label.items())},
    )
