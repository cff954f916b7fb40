#!/usr/bin/env python3
"""Regenerate the bundled fixtures under fixtures/.

Outputs are deterministic; run from the repository root:

    python3 tools/gen_fixtures.py
"""

from __future__ import annotations

import csv
import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from ontoforge.ontology import (  # noqa: E402
    Assertion,
    KnowledgeBase,
    Provenance,
    SemanticLabel,
    Status,
    save_kb,
)

FIXTURES = REPO / "fixtures"

LABELED_AT = "2020-02-01T09:00:00Z"
ANNOTATOR = "annotator1"
EXPERTS = ["linguist", "disaster_expert", "meteorologist"]
JUDGED_AT = "2020-03-05T10:00:00Z"

# ---------------------------------------------------------------------------
# Toy corpus: three years, five clear top-frequency content seeds per year.

FUNCTION_WORDS = {"ang": 90, "ng": 80, "sa": 70, "mga": 60, "ay": 50, "na": 40}

CONTENT_2017 = {
    "family": 30, "fire": 28, "flood": 26, "update": 24, "tricycle": 22,
    "rain": 20, "river": 18, "evacuation": 18, "city": 16, "residents": 16,
    "houses": 14, "warning": 14, "water": 12, "storm": 12, "damage": 10,
    "victims": 10, "village": 8, "relief": 8, "roads": 6,
}
CONTENT_2018 = {
    "act": 30, "announced": 28, "ashfall": 26, "police": 24, "lava": 22,
    "volcano": 20, "eruption": 18, "evacuees": 18, "alert": 16, "crater": 16,
    "sulfur": 14, "smoke": 14, "masks": 12, "danger": 12, "zone": 10,
    "officials": 10, "province": 8, "farms": 8, "animals": 6,
}
CONTENT_2019 = {
    "bulletin": 30, "quake": 28, "typhoon": 26, "weakened": 24, "affected": 22,
    "magnitude": 20, "epicenter": 18, "tremor": 18, "signal": 16, "winds": 16,
    "rains": 14, "coast": 14, "families": 12, "shelters": 12, "power": 10,
    "outage": 10, "schools": 8, "classes": 8, "6.1": 8,
}
YEAR_CONTENT = {2017: CONTENT_2017, 2018: CONTENT_2018, 2019: CONTENT_2019}

VERBS = {"update", "act", "announced", "affected"}
ADJECTIVES = {"weakened"}
NON_LEXICON = {"6.1"}  # numbers stay untagged so they rank as "other"


def write_toy_corpus() -> None:
    rng = random.Random(20170101)
    records = []
    for year, content in YEAR_CONTENT.items():
        pool: list[str] = []
        for token, count in {**FUNCTION_WORDS, **content}.items():
            pool.extend([token] * count)
        rng.shuffle(pool)
        doc_len = 22
        for i in range(0, len(pool), doc_len):
            chunk = pool[i : i + doc_len]
            if len(chunk) < 4:
                records[-1]["body"] += " " + " ".join(chunk)
                continue
            n = len(records)
            records.append(
                {
                    "id": f"toy-{year}-{n:03d}",
                    "date": f"{year}-{(n % 12) + 1:02d}-{(n % 27) + 1:02d}",
                    "title": " ".join(chunk[:3]),
                    "body": " ".join(chunk[3:]),
                    "source": "toy",
                }
            )
    with (FIXTURES / "toy_corpus.jsonl").open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_lexicon_and_stoplist() -> None:
    rows = []
    for content in YEAR_CONTENT.values():
        for token in content:
            if token in NON_LEXICON:
                continue
            if token in VERBS:
                pos = "verb"
            elif token in ADJECTIVES:
                pos = "adjective"
            else:
                pos = "noun"
            rows.append((token, pos))
    for token in FUNCTION_WORDS:
        rows.append((token, "other"))
    with (FIXTURES / "lexicon.tsv").open("w", encoding="utf-8") as handle:
        for token, pos in sorted(set(rows)):
            handle.write(f"{token}\t{pos}\n")
    with (FIXTURES / "stoplist.txt").open("w", encoding="utf-8") as handle:
        for token in sorted(FUNCTION_WORDS):
            handle.write(token + "\n")


# ---------------------------------------------------------------------------
# Labeled KB fixture: the published example rows plus filler assertions so
# each partition carries exactly 50 labeled assertions.

TABLE_ROWS: dict[int, list[tuple[str, str, str]]] = {
    2017: [
        ("governor", "DO", "assure"), ("governor", "DO", "giving"), ("governor", "DO", "explain"),
        ("experts", "SYN", "representative"), ("experts", "DO", "checking"), ("experts", "DO", "verify"),
        ("police", "DO", "risk"), ("police", "DO", "control"), ("police", "DO", "damage"),
        ("mayor", "PartOf", "hall"), ("mayor", "PartOf", "dwup"), ("mayor", "PartOf", "sitio"),
        ("student", "PartOf", "pup"), ("student", "IS", "victim"), ("student", "IS", "resident"),
        ("teacher", "DO", "education"), ("teacher", "PartOf", "deped"), ("teacher", "PartOf", "school"),
        ("earthquake", "IS", "magnitude"), ("earthquake", "SYN", "quake"), ("earthquake", "RAND", "drill"),
        ("eruption", "IS", "amplifying"), ("eruption", "IS", "fast"), ("eruption", "IS", "confirmed"),
        ("landslide", "dueTo", "flood"), ("landslide", "HYP", "mudslide"), ("landslide", "RAND", "area"),
        ("typhoon", "IS", "expected"), ("typhoon", "PartOf", "calamity"), ("typhoon", "SYN", "onslaught"),
    ],
    2018: [
        ("governor", "IS", "political"), ("governor", "DO", "oversees"), ("governor", "IS", "mandatory"),
        ("experts", "DO", "work"), ("experts", "IS", "frantic"), ("experts", "DO", "announce"),
        ("police", "DO", "risk"), ("police", "IS", "armed"), ("police", "DO", "commitment"),
        ("mayor", "PartOf", "administration"), ("mayor", "DO", "communication"), ("mayor", "PartOf", "denr"),
        ("student", "PartOf", "elementary"), ("student", "PartOf", "school"), ("student", "IS", "minor"),
        ("teacher", "DO", "research"), ("teacher", "DO", "education"), ("teacher", "PartOf", "school"),
        ("earthquake", "IS", "magnitude"), ("earthquake", "SYN", "quake"), ("earthquake", "IS", "intensity"),
        ("eruption", "IS", "happening"), ("eruption", "IS", "explosive"), ("eruption", "CAUSE", "destruction"),
        ("landslide", "dueTo", "rain"), ("landslide", "IS", "torrential"), ("landslide", "HYP", "mudslide"),
        ("typhoon", "SYN", "storm"), ("typhoon", "IS", "super"), ("typhoon", "IS", "powerful"),
    ],
    2019: [
        ("governor", "DO", "declare"), ("governor", "DO", "resolution"), ("governor", "DO", "develop"),
        ("experts", "IS", "supporting"), ("experts", "DO", "recommend"), ("experts", "DO", "impose"),
        ("police", "DO", "risk"), ("police", "DO", "study"), ("police", "DO", "alerts"),
        ("mayor", "RAND", "workers"), ("mayor", "PartOf", "government"), ("mayor", "RAND", "employers"),
        ("student", "PartOf", "organization"), ("student", "PartOf", "university"), ("student", "PartOf", "up"),
        ("teacher", "PartOf", "house"), ("teacher", "SYN", "employee"), ("teacher", "PartOf", "school"),
        ("earthquake", "IS", "magnitude"), ("earthquake", "SYN", "quake"), ("earthquake", "RAND", "signal"),
        ("eruption", "IS", "hazardous"), ("eruption", "IS", "magmatic"), ("eruption", "IS", "happening"),
        ("landslide", "RAND", "mountain"), ("landslide", "dueTo", "rains"), ("landslide", "IS", "widespread"),
        ("typhoon", "dueTo", "amihan"), ("typhoon", "SYN", "hurricane"), ("typhoon", "SYN", "cyclone"),
        ("tremor", "SYN", "aftershock"), ("tremor", "dueTo", "quake"), ("tremor", "dueTo", "earthquake"),
        ("rescue", "PartOf", "operations"), ("rescue", "HYP", "retrieval"), ("rescue", "HYP", "aid"),
    ],
}

FILLER_ROWS: dict[int, list[tuple[str, str, str]]] = {
    2017: [
        ("evacuees", "IS", "stranded"), ("evacuees", "DO", "wait"),
        ("barangay", "IS", "flooded"), ("barangay", "DO", "respond"),
        ("relief", "IS", "delayed"), ("relief", "dueTo", "congestion"),
        ("bridge", "IS", "collapsed"), ("bridge", "dueTo", "erosion"),
        ("rainfall", "IS", "heavy"), ("rainfall", "CAUSE", "flooding"),
        ("farmers", "DO", "harvest"), ("farmers", "IS", "displaced"),
        ("road", "IS", "impassable"), ("road", "RAND", "market"),
        ("siren", "DO", "warn"), ("siren", "RAND", "radio"),
        ("dam", "IS", "overflowing"), ("dam", "CAUSE", "spillage"),
        ("crops", "IS", "destroyed"), ("crops", "dueTo", "monsoon"),
    ],
    2018: [
        ("shelter", "IS", "crowded"), ("shelter", "DO", "house"),
        ("volunteers", "DO", "assist"), ("volunteers", "IS", "exhausted"),
        ("donations", "IS", "pouring"), ("donations", "RAND", "politics"),
        ("ash", "IS", "thick"), ("ash", "dueTo", "explosion"),
        ("masks", "IS", "required"), ("masks", "RAND", "fashion"),
        ("airport", "IS", "closed"), ("airport", "dueTo", "ashfall"),
        ("livestock", "IS", "endangered"), ("livestock", "DO", "graze"),
        ("checkpoint", "DO", "screen"), ("checkpoint", "RAND", "holiday"),
        ("hospital", "IS", "overwhelmed"), ("hospital", "DO", "treat"),
        ("sinkhole", "CAUSE", "damage"), ("sinkhole", "ANT", "stability"),
    ],
    2019: [
        ("bulletin", "IS", "urgent"), ("bulletin", "DO", "inform"),
        ("aftershocks", "IS", "frequent"), ("aftershocks", "dueTo", "mainshock"),
        ("drill", "IS", "scheduled"), ("drill", "DO", "prepare"),
        ("engineers", "DO", "inspect"), ("engineers", "IS", "licensed"),
        ("cracks", "IS", "visible"), ("cracks", "RAND", "paint"),
        ("supplies", "IS", "limited"), ("supplies", "dueTo", "demand"),
        ("tents", "IS", "temporary"), ("tents", "ANT", "permanence"),
    ],
}

RANK_SIMS = [0.86, 0.81, 0.77]

# Agree counts per assertion, in KB order per partition; each assertion gets
# three expert verdicts. Sums give macro rates 74/150, 78/150, 96/150.
AGREE_DISTRIBUTION = {
    2017: [3] * 12 + [2] * 12 + [1] * 14 + [0] * 12,  # 0.4933
    2018: [3] * 12 + [2] * 14 + [1] * 14 + [0] * 10,  # 0.52
    2019: [3] * 20 + [2] * 14 + [1] * 8 + [0] * 8,    # 0.64
}


def build_kb() -> KnowledgeBase:
    kb = KnowledgeBase()
    for year in sorted(TABLE_ROWS):
        seq = 0
        per_concept_rank: dict[str, int] = {}
        for concept1, label, concept2 in TABLE_ROWS[year]:
            rank = per_concept_rank.get(concept1, 0) + 1
            per_concept_rank[concept1] = rank
            seq += 1
            kb.insert(
                Assertion(
                    id=f"kb-{year}-{seq:03d}",
                    concept1=concept1,
                    concept2=concept2,
                    partition=year,
                    similarity=RANK_SIMS[rank - 1],
                    status=Status.LABELED,
                    label=SemanticLabel.parse(label),
                    provenance=Provenance(seed=concept1, rank=rank),
                    annotator=ANNOTATOR,
                    labeled_at=LABELED_AT,
                )
            )
        for i, (concept1, label, concept2) in enumerate(FILLER_ROWS[year]):
            seq += 1
            kb.insert(
                Assertion(
                    id=f"kb-{year}-{seq:03d}",
                    concept1=concept1,
                    concept2=concept2,
                    partition=year,
                    similarity=round(0.70 - 0.002 * i, 3),
                    status=Status.LABELED,
                    label=SemanticLabel.parse(label),
                    provenance=Provenance(seed=concept1, rank=i % 2 + 1),
                    annotator=ANNOTATOR,
                    labeled_at=LABELED_AT,
                )
            )
    return kb


def write_judgments(kb: KnowledgeBase) -> None:
    rows = []
    for year, agree_counts in AGREE_DISTRIBUTION.items():
        ids = sorted(a.id for a in kb.assertions(partition=year))
        assert len(ids) == len(agree_counts), (year, len(ids), len(agree_counts))
        for assertion_id, agrees in zip(ids, agree_counts):
            for i, expert in enumerate(EXPERTS):
                verdict = "agree" if i < agrees else "disagree"
                rows.append([assertion_id, expert, verdict, JUDGED_AT])
    with (FIXTURES / "judgments.csv").open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["assertion_id", "expert", "verdict", "timestamp"])
        writer.writerows(rows)


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    write_toy_corpus()
    write_lexicon_and_stoplist()
    kb = build_kb()
    for year in (2017, 2018, 2019):
        count = len(kb.assertions(partition=year))
        assert count == 50, (year, count)
    save_kb(kb, FIXTURES / "kb.jsonl")
    write_judgments(kb)
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
