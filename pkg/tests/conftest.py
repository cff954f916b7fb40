import json
from pathlib import Path

import pytest

from ontoforge.corpus import Corpus, Document, Partition, load_corpus

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def make_doc(doc_id: str, year: int, body: str, title: str = "", month: int = 6, day: int = 15):
    import datetime as dt

    return Document(id=doc_id, date=dt.date(year, month, day), title=title, body=body)


def write_jsonl(path: Path, records: list[dict]) -> Path:
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path


@pytest.fixture
def corpus_file(tmp_path: Path) -> Path:
    records = [
        {"id": "d1", "date": "2017-03-01", "title": "Baha", "body": "Binaha ang Maynila kahapon."},
        {"id": "d2", "date": "2018-07-12", "title": "Lindol", "body": "Magnitude 6.1 quake struck."},
        {"id": "d3", "date": "2019-11-30", "title": "Bagyo", "body": "Typhoon signal warning raised."},
    ]
    return write_jsonl(tmp_path / "corpus.jsonl", records)
