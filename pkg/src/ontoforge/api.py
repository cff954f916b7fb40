"""HTTP service for labeling candidates and recording expert judgments.

Every mutation is persisted to the backing KB / judgment files before the
response is sent, so a restart after any acknowledged write sees that write.
Actor names are self-declared request fields; there is no authentication.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ontoforge import ontology, temporal, validation
from ontoforge.errors import OntologyError, TemporalError, ValidationError

VALID_LABELS = [label.value for label in ontology.SemanticLabel]


class LabelRequest(BaseModel):
    label: str
    annotator: str
    force: bool = False


class RejectRequest(BaseModel):
    annotator: str


class JudgmentRequest(BaseModel):
    expert: str
    verdict: str


def _assertion_json(assertion: ontology.Assertion) -> dict:
    return ontology._assertion_record(assertion)


def _report_json(report: validation.ValidationReport) -> dict:
    return {
        "partition": report.partition,
        "n_assertions": report.n_assertions,
        "n_judgments": report.n_judgments,
        "agreeability": report.agreeability,
        "micro_agreeability": report.micro_agreeability,
        "per_expert": report.per_expert,
        "per_label": report.per_label,
    }


def create_app(
    kb_path: str | Path,
    judgments_path: str | Path,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    kb_path = Path(kb_path)
    judgments_path = Path(judgments_path)
    if not kb_path.exists():
        raise OntologyError(f"knowledge-base file not found: {kb_path}")

    kb = ontology.load_kb(kb_path)
    if judgments_path.exists():
        store = validation.JudgmentStore.load(kb, judgments_path)
    else:
        store = validation.JudgmentStore(kb)
    write_lock = threading.Lock()

    app = FastAPI(title="ontoforge annotation service")

    @app.get("/labels")
    def labels() -> dict:
        return {
            "labels": [
                {"label": label.value, "rule": ontology.LABEL_RULES[label]}
                for label in ontology.SemanticLabel
            ]
        }

    @app.get("/candidates")
    def candidates(
        partition: int | None = None, limit: int = Query(default=50, ge=1, le=1000)
    ) -> dict:
        pending = kb.assertions(status=ontology.Status.CANDIDATE, partition=partition)
        pending.sort(key=lambda a: (a.partition, -a.similarity, a.id))
        return {
            "candidates": [_assertion_json(a) for a in pending[:limit]],
            "total": len(pending),
        }

    @app.get("/assertions")
    def assertions(
        partition: int | None = None,
        status: str | None = None,
        concept: str | None = None,
    ) -> dict:
        status_filter = None
        if status is not None:
            try:
                status_filter = ontology.Status(status)
            except ValueError:
                raise HTTPException(
                    status_code=422,
                    detail=f"unknown status {status!r}; expected one of "
                    f"{[s.value for s in ontology.Status]}",
                ) from None
        rows = kb.assertions(status=status_filter, partition=partition, concept=concept)
        rows.sort(key=lambda a: (a.partition, -a.similarity, a.id))
        return {"assertions": [_assertion_json(a) for a in rows]}

    def _get_or_404(assertion_id: str) -> ontology.Assertion:
        try:
            return kb.get(assertion_id)
        except OntologyError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/assertions/{assertion_id}/label")
    def label_assertion(assertion_id: str, request: LabelRequest) -> dict:
        try:
            label = ontology.SemanticLabel.parse(request.label)
        except OntologyError:
            raise HTTPException(
                status_code=422,
                detail={"error": f"invalid label {request.label!r}", "valid_labels": VALID_LABELS},
            ) from None
        with write_lock:
            assertion = _get_or_404(assertion_id)
            if assertion.status is ontology.Status.LABELED and not request.force:
                raise HTTPException(
                    status_code=409,
                    detail=f"assertion {assertion_id} already labeled {assertion.label.value}",
                )
            try:
                updated = kb.label(assertion_id, label, request.annotator, force=request.force)
            except OntologyError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from None
            ontology.save_kb(kb, kb_path)
        return _assertion_json(updated)

    @app.post("/assertions/{assertion_id}/reject")
    def reject_assertion(assertion_id: str, request: RejectRequest) -> dict:
        with write_lock:
            _get_or_404(assertion_id)
            updated = kb.reject(assertion_id, request.annotator)
            ontology.save_kb(kb, kb_path)
        return _assertion_json(updated)

    @app.post("/assertions/{assertion_id}/judgment")
    def judge_assertion(assertion_id: str, request: JudgmentRequest) -> dict:
        try:
            verdict = validation.Verdict.parse(request.verdict)
        except ValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        with write_lock:
            _get_or_404(assertion_id)
            try:
                judgment = store.record(assertion_id, request.expert, verdict)
            except ValidationError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from None
            store.save(judgments_path)
        return {
            "assertion_id": judgment.assertion_id,
            "expert": judgment.expert,
            "verdict": judgment.verdict.value,
            "timestamp": judgment.timestamp,
        }

    @app.get("/report/{partition}")
    def report(partition: int) -> dict:
        try:
            return _report_json(validation.agreeability_rate(store, partition))
        except ValidationError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.get("/timeline/{concept}")
    def timeline(concept: str, n: int = Query(default=3, ge=1)) -> dict:
        try:
            result = temporal.entity_timeline(kb, concept, n)
        except TemporalError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {
            "concept": result.concept,
            "n": result.n,
            "rows": {
                str(year): [_assertion_json(a) for a in rows]
                for year, rows in result.rows.items()
            },
        }

    @app.get("/partitions")
    def partitions() -> dict:
        return {"partitions": kb.partitions()}

    if ui_dir is not None:
        ui_path = Path(ui_dir)
        if not ui_path.is_dir():
            raise OntologyError(f"UI directory not found: {ui_path}")
        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
