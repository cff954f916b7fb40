"""Per-partition term frequencies and seed-word extraction."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from ontoforge.corpus import Partition, document_tokens
from ontoforge.errors import LexiconError, OntoforgeError


class PosCategory(enum.Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    OTHER = "other"

    @classmethod
    def parse(cls, raw: str) -> "PosCategory":
        try:
            return cls(raw.strip().lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise LexiconError(f"unknown POS category {raw!r} (expected one of: {valid})") from None


CONTENT_POS = frozenset({PosCategory.NOUN, PosCategory.VERB, PosCategory.ADJECTIVE})


class PosLexicon:
    """Token-to-category lookup; unknown tokens map to OTHER."""

    def __init__(self, entries: Mapping[str, PosCategory] | None = None):
        self._entries = dict(entries or {})

    def lookup(self, token: str) -> PosCategory:
        return self._entries.get(token, PosCategory.OTHER)

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "PosLexicon":
        """Read lines of "token<TAB>pos"; blank lines and #-comments are skipped."""
        entries: dict[str, PosCategory] = {}
        path = Path(path)
        with path.open(encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise LexiconError(f"{path}: line {lineno}: expected 'token<TAB>pos'")
                try:
                    entries[parts[0]] = PosCategory.parse(parts[1])
                except LexiconError as exc:
                    raise LexiconError(f"{path}: line {lineno}: {exc}") from None
        return cls(entries)


def load_stoplist(path: str | Path) -> frozenset[str]:
    """One token per line; blank lines and #-comments are skipped."""
    tokens = set()
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                tokens.add(line)
    return frozenset(tokens)


@dataclass(frozen=True)
class FrequencyTable:
    """Raw token occurrence counts over one partition's token streams."""

    partition: int
    counts: Mapping[str, int]


@dataclass(frozen=True)
class SeedWord:
    token: str
    pos: PosCategory
    partition: int
    rank: int
    frequency: int

    def __post_init__(self):
        if self.pos not in CONTENT_POS:
            raise OntoforgeError(f"seed {self.token!r} has non-content POS {self.pos.value}")
        if self.rank < 1 or self.frequency < 1:
            raise OntoforgeError(f"seed {self.token!r}: rank and frequency must be positive")


def term_frequencies(partition: Partition, include_titles: bool = True) -> FrequencyTable:
    """Count token occurrences over every document in the partition."""
    if len(partition) == 0:
        raise OntoforgeError(f"partition {partition.key} is empty")
    counts: Counter[str] = Counter()
    for doc in partition:
        counts.update(document_tokens(doc, include_titles=include_titles))
    return FrequencyTable(partition=partition.key, counts=dict(counts))


def _ranked(counts: Mapping[str, int]) -> list[tuple[str, int]]:
    # Frequency descending, token ascending on ties: deterministic seeds.
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def extract_seeds(
    table: FrequencyTable,
    lexicon: PosLexicon,
    k: int,
    stoplist: frozenset[str] = frozenset(),
    filter_after_rank: bool = False,
) -> list[SeedWord]:
    """Top-k content-word seeds (noun/verb/adjective) from a frequency table.

    By default the POS filter is applied before ranking, so the result holds
    the k most frequent content words outside the stoplist. With
    ``filter_after_rank`` the k most frequent tokens are ranked first and the
    POS filter then prunes that list, which may return fewer than k seeds.
    """
    if k < 1:
        raise OntoforgeError("k must be >= 1")
    candidates = {t: c for t, c in table.counts.items() if t not in stoplist}
    if filter_after_rank:
        top = _ranked(candidates)[:k]
        kept = [(t, c) for t, c in top if lexicon.lookup(t) in CONTENT_POS]
    else:
        content = {t: c for t, c in candidates.items() if lexicon.lookup(t) in CONTENT_POS}
        kept = _ranked(content)[:k]
    return [
        SeedWord(token=t, pos=lexicon.lookup(t), partition=table.partition, rank=i, frequency=c)
        for i, (t, c) in enumerate(kept, start=1)
    ]


def save_seeds(seeds: Iterable[SeedWord], path: str | Path) -> None:
    """Write seeds as TSV with a header row."""
    with Path(path).open("w", encoding="utf-8") as handle:
        handle.write("partition\trank\ttoken\tpos\tfrequency\n")
        for seed in seeds:
            handle.write(
                f"{seed.partition}\t{seed.rank}\t{seed.token}\t{seed.pos.value}\t{seed.frequency}\n"
            )


def load_seeds(path: str | Path) -> list[SeedWord]:
    path = Path(path)
    seeds = []
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if lineno == 1 or not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise LexiconError(f"{path}: line {lineno}: expected 5 tab-separated fields")
            partition, rank, token, pos, freq = parts
            try:
                seeds.append(
                    SeedWord(
                        token=token,
                        pos=PosCategory.parse(pos),
                        partition=int(partition),
                        rank=int(rank),
                        frequency=int(freq),
                    )
                )
            except (ValueError, OntoforgeError) as exc:
                raise LexiconError(f"{path}: line {lineno}: {exc}") from None
    return seeds
