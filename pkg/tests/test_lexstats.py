import random
from collections import Counter

import pytest

from ontoforge.corpus import Corpus, Partition, partition_by_year
from ontoforge.errors import LexiconError, OntoforgeError
from ontoforge.lexstats import (
    CONTENT_POS,
    FrequencyTable,
    PosCategory,
    PosLexicon,
    extract_seeds,
    load_seeds,
    load_stoplist,
    save_seeds,
    term_frequencies,
)

from conftest import make_doc


def brute_force_counts(partition: Partition) -> dict[str, int]:
    """Independent single-pass counter used as the oracle."""
    from ontoforge.corpus import document_tokens

    counts: dict[str, int] = {}
    for doc in partition:
        for token in document_tokens(doc):
            counts[token] = counts.get(token, 0) + 1
    return counts


def all_nouns(tokens) -> PosLexicon:
    return PosLexicon({t: PosCategory.NOUN for t in tokens})


class TestTermFrequencies:
    def test_direct_count(self):
        partition = Partition(key=2019, documents=(make_doc("d1", 2019, "baha baha ulan"),))
        table = term_frequencies(partition)
        assert table.counts == {"baha": 2, "ulan": 1}

    def test_matches_brute_force_on_toy_partition(self):
        rng = random.Random(3)
        vocab = ["baha", "ulan", "bagyo", "lindol", "sunog"]
        docs = tuple(
            make_doc(f"d{i}", 2018, " ".join(rng.choices(vocab, k=rng.randint(1, 12))))
            for i in range(10)
        )
        partition = Partition(key=2018, documents=docs)
        assert term_frequencies(partition).counts == brute_force_counts(partition)

    def test_matches_brute_force_on_100_random_partitions(self):
        rng = random.Random(11)
        vocab = [f"w{i}" for i in range(30)]
        for trial in range(100):
            docs = tuple(
                make_doc(f"d{i}", 2017, " ".join(rng.choices(vocab, k=rng.randint(1, 20))))
                for i in range(rng.randint(1, 8))
            )
            partition = Partition(key=2017, documents=docs)
            assert term_frequencies(partition).counts == brute_force_counts(partition)

    def test_additive_over_partition_union(self):
        rng = random.Random(5)
        vocab = ["a", "b", "c", "d"]
        docs1 = tuple(
            make_doc(f"x{i}", 2019, " ".join(rng.choices(vocab, k=6))) for i in range(4)
        )
        docs2 = tuple(
            make_doc(f"y{i}", 2019, " ".join(rng.choices(vocab, k=6))) for i in range(3)
        )
        merged = Partition(key=2019, documents=docs1 + docs2)
        separate = Counter(term_frequencies(Partition(key=2019, documents=docs1)).counts)
        separate.update(term_frequencies(Partition(key=2019, documents=docs2)).counts)
        assert dict(separate) == term_frequencies(merged).counts

    def test_empty_partition_rejected(self):
        with pytest.raises(OntoforgeError, match="empty"):
            term_frequencies(Partition(key=2019, documents=()))


class TestExtractSeeds:
    def test_brute_force_sort_oracle(self):
        table = FrequencyTable(partition=2019, counts={"flood": 10, "rain": 5, "ang": 50, "x": 1})
        lexicon = all_nouns(["flood", "rain", "ang", "x"])
        seeds = extract_seeds(table, lexicon, k=2, stoplist=frozenset({"ang"}))
        assert [(s.token, s.rank) for s in seeds] == [("flood", 1), ("rain", 2)]

    def test_150_seeds_from_3_partitions(self):
        rng = random.Random(2)
        lexicon = all_nouns([f"w{i}" for i in range(80)])
        total = 0
        for year in (2017, 2018, 2019):
            counts = {f"w{i}": rng.randint(1, 500) for i in range(80)}
            total += len(extract_seeds(FrequencyTable(year, counts), lexicon, k=50))
        assert total == 150

    def test_pos_categories_carried(self):
        lexicon = PosLexicon(
            {
                "family": PosCategory.NOUN,
                "update": PosCategory.VERB,
                "weakened": PosCategory.ADJECTIVE,
                "ng": PosCategory.OTHER,
            }
        )
        table = FrequencyTable(2017, {"family": 9, "update": 8, "weakened": 7, "ng": 100})
        seeds = extract_seeds(table, lexicon, k=5)
        assert [(s.token, s.pos) for s in seeds] == [
            ("family", PosCategory.NOUN),
            ("update", PosCategory.VERB),
            ("weakened", PosCategory.ADJECTIVE),
        ]

    def test_filter_after_rank_prunes_top_k(self):
        lexicon = PosLexicon({"flood": PosCategory.NOUN, "rain": PosCategory.NOUN})
        table = FrequencyTable(2019, {"flood": 10, "ng": 9, "rain": 8, "sa": 7})
        before = extract_seeds(table, lexicon, k=2)
        after = extract_seeds(table, lexicon, k=2, filter_after_rank=True)
        assert [s.token for s in before] == ["flood", "rain"]
        assert [s.token for s in after] == ["flood"]

    def test_sorted_and_filtered_properties(self):
        rng = random.Random(9)
        pos_values = list(PosCategory)
        for trial in range(100):
            vocab = {f"w{i}": rng.choice(pos_values) for i in range(40)}
            lexicon = PosLexicon(vocab)
            counts = {t: rng.randint(1, 99) for t in vocab}
            stoplist = frozenset(rng.sample(sorted(vocab), 5))
            k = rng.randint(1, 30)
            seeds = extract_seeds(FrequencyTable(2018, counts), lexicon, k, stoplist)
            keys = [(-s.frequency, s.token) for s in seeds]
            assert keys == sorted(keys)
            assert len(seeds) <= k
            for seed in seeds:
                assert seed.token not in stoplist
                assert seed.pos in CONTENT_POS
            # prefix property: growing k never drops earlier seeds
            larger = extract_seeds(FrequencyTable(2018, counts), lexicon, k + 5, stoplist)
            assert [s.token for s in larger[: len(seeds)]] == [s.token for s in seeds]

    def test_ranks_are_one_based_consecutive(self):
        table = FrequencyTable(2019, {"a": 5, "b": 5, "c": 1})
        seeds = extract_seeds(table, all_nouns(["a", "b", "c"]), k=3)
        assert [s.rank for s in seeds] == [1, 2, 3]
        assert [s.token for s in seeds] == ["a", "b", "c"]  # tie broken lexicographically


class TestFiles:
    def test_lexicon_round_trip(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("flood\tnoun\nupdate\tverb\nsa\tother\n", encoding="utf-8")
        lexicon = PosLexicon.from_file(path)
        assert lexicon.lookup("flood") is PosCategory.NOUN
        assert lexicon.lookup("update") is PosCategory.VERB
        assert lexicon.lookup("unknown-token") is PosCategory.OTHER

    def test_lexicon_bad_pos(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("flood\tnope\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="line 1"):
            PosLexicon.from_file(path)

    def test_stoplist(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("ang\nng\n\n# comment\nsa\n", encoding="utf-8")
        assert load_stoplist(path) == {"ang", "ng", "sa"}

    def test_seeds_round_trip(self, tmp_path):
        table = FrequencyTable(2019, {"flood": 10, "rain": 5})
        seeds = extract_seeds(table, all_nouns(["flood", "rain"]), k=2)
        path = tmp_path / "seeds.tsv"
        save_seeds(seeds, path)
        assert load_seeds(path) == seeds
