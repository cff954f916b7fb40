"""Command-line interface orchestrating the pipeline end to end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from ontoforge import embedding, lexstats, ontology, temporal, validation
from ontoforge.corpus import Corpus, Partition, load_corpus, partition_by_year, token_stream
from ontoforge.errors import OntoforgeError

logger = logging.getLogger(__name__)

DEFAULT_OUT = "out"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors instead of argparse's 2
        raise _UsageError(f"{self.prog}: {message}")


def _out_dir(args) -> Path:
    out = os.environ.get("ONTOFORGE_OUT") or args.out
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _kb_path(args) -> Path:
    if args.kb:
        return Path(args.kb)
    return Path(os.environ.get("ONTOFORGE_OUT") or DEFAULT_OUT) / "kb.jsonl"


def _judgments_path(args) -> Path:
    if args.judgments:
        return Path(args.judgments)
    return Path(os.environ.get("ONTOFORGE_OUT") or DEFAULT_OUT) / "judgments.csv"


def _train_config(args) -> embedding.TrainConfig:
    return embedding.TrainConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        initial_lr=args.lr,
        min_count=args.min_count,
        subsample_t=args.subsample_t,
        rng_seed=args.seed,
        deterministic=args.deterministic,
        workers=args.workers,
    )


def _load_partitions(args) -> tuple[Corpus, list[Partition]]:
    corpus = load_corpus(args.corpus)
    return corpus, partition_by_year(corpus)


def _load_lexicon(args) -> lexstats.PosLexicon:
    if args.lexicon:
        return lexstats.PosLexicon.from_file(args.lexicon)
    return lexstats.PosLexicon()


def _load_stoplist(args) -> frozenset[str]:
    if args.stoplist:
        return lexstats.load_stoplist(args.stoplist)
    return frozenset()


def _format_assertion(a: ontology.Assertion) -> str:
    label = a.label.value if a.label else "?"
    return f"[{a.concept1} {label} {a.concept2}]"


def _extract_all_seeds(args, partitions, lexicon, stoplist) -> list[lexstats.SeedWord]:
    seeds: list[lexstats.SeedWord] = []
    for partition in partitions:
        table = lexstats.term_frequencies(partition, include_titles=args.include_titles)
        seeds.extend(
            lexstats.extract_seeds(
                table, lexicon, args.k, stoplist, filter_after_rank=args.filter_after_rank
            )
        )
    return seeds


def _cmd_ingest(args) -> int:
    corpus, partitions = _load_partitions(args)
    for partition in partitions:
        print(f"{partition.key}\t{len(partition)} documents")
    print(f"total\t{len(corpus)} documents in {len(partitions)} partitions")
    return 0


def _cmd_seeds(args) -> int:
    _, partitions = _load_partitions(args)
    seeds = _extract_all_seeds(args, partitions, _load_lexicon(args), _load_stoplist(args))
    out = _out_dir(args) / "seeds.tsv"
    lexstats.save_seeds(seeds, out)
    print(f"wrote {len(seeds)} seeds to {out}")
    return 0


def _cmd_train(args) -> int:
    _, partitions = _load_partitions(args)
    by_year = {p.key: p for p in partitions}
    if args.partition not in by_year:
        raise OntoforgeError(f"no documents for partition {args.partition}")
    config = _train_config(args)
    tokens = token_stream(by_year[args.partition], include_titles=args.include_titles)
    model = embedding.train(tokens, config, partition=args.partition)
    out = _out_dir(args) / f"model_{args.partition}.vec"
    embedding.save_model(model, out)
    print(f"trained partition {args.partition}: vocab={len(model.vocab)} dim={config.dim} -> {out}")
    return 0


def _cmd_expand(args) -> int:
    seeds = lexstats.load_seeds(args.seeds)
    partition = args.partition
    if partition is None:
        match = re.search(r"model_(\d{4})\.vec$", str(args.model))
        if match:
            partition = int(match.group(1))
    model = embedding.load_model(args.model, partition=partition)
    if model.partition is not None:
        seeds = [s for s in seeds if s.partition == model.partition]
    stoplist = _load_stoplist(args)
    candidates = ontology.expand_seeds(seeds, model, args.per_seed, stoplist)
    kb_path = _kb_path(args)
    kb = ontology.load_kb(kb_path) if kb_path.exists() else ontology.KnowledgeBase()
    for candidate in candidates:
        kb.insert(candidate)
    kb_path.parent.mkdir(parents=True, exist_ok=True)
    ontology.save_kb(kb, kb_path)
    print(f"added {len(candidates)} candidates -> {kb_path}")
    return 0


def _cmd_pipeline(args) -> int:
    corpus, partitions = _load_partitions(args)
    if not partitions:
        raise OntoforgeError("corpus is empty")
    lexicon = _load_lexicon(args)
    stoplist = _load_stoplist(args)
    out = _out_dir(args)

    seeds = _extract_all_seeds(args, partitions, lexicon, stoplist)
    lexstats.save_seeds(seeds, out / "seeds.tsv")
    print(f"seeds: {len(seeds)} across {len(partitions)} partitions")

    config = _train_config(args)
    kb = ontology.KnowledgeBase()
    total = 0
    for partition in partitions:
        tokens = token_stream(partition, include_titles=args.include_titles)
        model = embedding.train(tokens, config, partition=partition.key)
        embedding.save_model(model, out / f"model_{partition.key}.vec")
        partition_seeds = [s for s in seeds if s.partition == partition.key]
        candidates = ontology.expand_seeds(partition_seeds, model, args.per_seed, stoplist)
        for candidate in candidates:
            kb.insert(candidate)
        total += len(candidates)
        print(f"partition {partition.key}: vocab={len(model.vocab)} candidates={len(candidates)}")
    ontology.save_kb(kb, out / "kb.jsonl")
    print(f"pipeline complete: {total} candidate assertions -> {out / 'kb.jsonl'}")
    return 0


def _render_chain(chain: ontology.HypernymChain) -> list[str]:
    # Ancestors print above the concept, narrower concepts below, Figure-style.
    levels: dict[int, list[str]] = {}

    def collect(node: ontology.ChainNode, depth: int) -> None:
        for child in node.children:
            levels.setdefault(depth + 1, []).append(child.concept)
            collect(child, depth + 1)

    collect(chain.up, 0)
    height = max(levels, default=0)
    lines = []
    for depth in range(height, 0, -1):
        indent = "  " * (height - depth)
        for concept in sorted(levels[depth]):
            lines.append(f"{indent}{concept}")
    base = "  " * height
    lines.append(f"{base}{chain.concept}")

    def render_down(node: ontology.ChainNode, indent: str) -> None:
        for child in node.children:
            lines.append(f"{indent}{child.concept}")
            render_down(child, indent + "  ")

    render_down(chain.down, base + "  ")
    for cycle in chain.cycles:
        lines.append(f"cycle: {cycle}")
    return lines


def _chain_to_dict(node: ontology.ChainNode) -> dict:
    return {"concept": node.concept, "children": [_chain_to_dict(c) for c in node.children]}


def _cmd_kb_query(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    label = ontology.SemanticLabel.parse(args.label) if args.label else None
    rows = ontology.query(kb, args.concept, ontology.Direction(args.direction), label)
    if args.format == "json":
        print(json.dumps([ontology._assertion_record(a) for a in rows], ensure_ascii=False))
    else:
        for a in rows:
            print(
                f"{_format_assertion(a)}\tpartition={a.partition}"
                f"\tsim={a.similarity:.4f}\tid={a.id}"
            )
        print(f"{len(rows)} assertions for {args.concept!r}")
    return 0


def _cmd_kb_chain(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    chain = ontology.hypernym_chain(kb, args.concept)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "concept": chain.concept,
                    "up": _chain_to_dict(chain.up),
                    "down": _chain_to_dict(chain.down),
                    "cycles": chain.cycles,
                },
                ensure_ascii=False,
            )
        )
    else:
        for line in _render_chain(chain):
            print(line)
    return 0


def _cmd_kb_label(args) -> int:
    kb_path = _kb_path(args)
    kb = ontology.load_kb(kb_path)
    assertion = kb.label(
        args.id, ontology.SemanticLabel.parse(args.label), args.annotator, force=args.force
    )
    ontology.save_kb(kb, kb_path)
    print(f"labeled {_format_assertion(assertion)}")
    return 0


def _cmd_kb_reject(args) -> int:
    kb_path = _kb_path(args)
    kb = ontology.load_kb(kb_path)
    assertion = kb.reject(args.id, args.annotator)
    ontology.save_kb(kb, kb_path)
    print(f"rejected ({assertion.concept1}, {assertion.concept2})")
    return 0


def _cmd_validate_report(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    store = validation.JudgmentStore.load(kb, _judgments_path(args))
    report = validation.agreeability_rate(store, args.partition)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "partition": report.partition,
                    "n_assertions": report.n_assertions,
                    "n_judgments": report.n_judgments,
                    "agreeability": report.agreeability,
                    "micro_agreeability": report.micro_agreeability,
                    "per_expert": report.per_expert,
                    "per_label": report.per_label,
                }
            )
        )
    else:
        print(f"partition: {report.partition}")
        print(f"assertions judged: {report.n_assertions}")
        print(f"judgments: {report.n_judgments}")
        print(f"agreeability (macro): {report.agreeability:.4f}")
        print(f"agreeability (micro): {report.micro_agreeability:.4f}")
        for expert, rate in report.per_expert.items():
            print(f"expert {expert}: {rate:.4f}")
        for label, rate in report.per_label.items():
            print(f"label {label}: {rate:.4f}")
    return 0


def _cmd_validate_judge(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    path = _judgments_path(args)
    store = (
        validation.JudgmentStore.load(kb, path) if path.exists() else validation.JudgmentStore(kb)
    )
    judgment = store.record(args.id, args.expert, validation.Verdict.parse(args.verdict))
    path.parent.mkdir(parents=True, exist_ok=True)
    store.save(path)
    print(f"recorded {judgment.verdict.value} by {judgment.expert} on {judgment.assertion_id}")
    return 0


def _cmd_timeline(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    timeline = temporal.entity_timeline(kb, args.concept, args.n)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "concept": timeline.concept,
                    "n": timeline.n,
                    "rows": {
                        str(year): [ontology._assertion_record(a) for a in rows]
                        for year, rows in timeline.rows.items()
                    },
                },
                ensure_ascii=False,
            )
        )
    else:
        print(f"timeline for {timeline.concept!r} (top {timeline.n} per partition)")
        for year, rows in timeline.rows.items():
            print(f"{year}:")
            for a in rows:
                print(f"  {_format_assertion(a)}\tsim={a.similarity:.4f}")
    return 0


def _cmd_diff(args) -> int:
    kb = ontology.load_kb(_kb_path(args))
    diff = temporal.association_diff(kb, args.concept)

    def fmt(pairs) -> str:
        return ", ".join(f"({label}, {concept})" for label, concept in sorted(pairs)) or "-"

    if args.format == "json":
        print(
            json.dumps(
                {
                    "concept": diff.concept,
                    "transitions": [
                        {
                            "earlier": t.earlier,
                            "later": t.later,
                            "persistent": sorted(t.persistent),
                            "appeared": sorted(t.appeared),
                            "disappeared": sorted(t.disappeared),
                        }
                        for t in diff.transitions
                    ],
                },
                ensure_ascii=False,
            )
        )
    else:
        print(f"association diff for {diff.concept!r}")
        for t in diff.transitions:
            print(f"{t.earlier} -> {t.later}:")
            print(f"  persistent: {fmt(t.persistent)}")
            print(f"  appeared: {fmt(t.appeared)}")
            print(f"  disappeared: {fmt(t.disappeared)}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from ontoforge.api import create_app

    app = create_app(_kb_path(args), _judgments_path(args), ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_corpus_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="corpus file (JSON lines)")
    parser.add_argument(
        "--include-titles",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="prepend article titles to token streams",
    )


def _add_seed_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=50, help="seeds per partition")
    parser.add_argument("--lexicon", help="POS lexicon file (token<TAB>pos)")
    parser.add_argument("--stoplist", help="stoplist file, one token per line")
    parser.add_argument(
        "--filter-after-rank",
        action="store_true",
        help="rank by frequency first, then POS-filter the top k",
    )


def _add_train_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, default=100)
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--negatives", type=int, default=5)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--lr", type=float, default=0.025, help="initial learning rate")
    parser.add_argument("--min-count", type=int, default=5)
    parser.add_argument("--subsample-t", type=float, default=1e-3)
    parser.add_argument("--seed", type=int, default=1, help="rng seed")
    parser.add_argument(
        "--deterministic",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="single-worker bit-reproducible training",
    )
    parser.add_argument("--workers", type=int, default=1)


def _add_out_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", default=DEFAULT_OUT, help="output directory (ONTOFORGE_OUT overrides)"
    )


def _add_kb_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kb", help="knowledge-base file (default <out>/kb.jsonl)")


def _add_format_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> _Parser:
    parser = _Parser(prog="ontoforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("ingest", help="load a corpus and report per-year partitions")
    _add_corpus_args(p)
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("seeds", help="extract top-k seed words per partition")
    _add_corpus_args(p)
    _add_seed_args(p)
    _add_out_arg(p)
    p.set_defaults(handler=_cmd_seeds)

    p = sub.add_parser("train", help="train one partition's embedding model")
    _add_corpus_args(p)
    p.add_argument("--partition", type=int, required=True, help="year to train")
    _add_train_args(p)
    _add_out_arg(p)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("expand", help="expand seeds into candidate assertions")
    p.add_argument("--seeds", required=True, help="seeds TSV from the seeds command")
    p.add_argument("--model", required=True, help="vector file from the train command")
    p.add_argument("--partition", type=int, help="partition of the model (default: from seeds)")
    p.add_argument("--per-seed", type=int, default=3)
    p.add_argument("--stoplist")
    _add_kb_arg(p)
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("pipeline", help="ingest, seed, train, and expand in one run")
    _add_corpus_args(p)
    _add_seed_args(p)
    _add_train_args(p)
    p.add_argument("--per-seed", type=int, default=3)
    _add_out_arg(p)
    p.set_defaults(handler=_cmd_pipeline)

    kb = sub.add_parser("kb", help="query and annotate the knowledge base")
    kb_sub = kb.add_subparsers(dest="kb_command", metavar="subcommand")

    p = kb_sub.add_parser("query", help="labeled assertions for a concept")
    p.add_argument("concept")
    p.add_argument(
        "--direction",
        choices=[d.value for d in ontology.Direction],
        default=ontology.Direction.AS_SUBJECT.value,
    )
    p.add_argument("--label", help="filter by semantic label")
    _add_kb_arg(p)
    _add_format_arg(p)
    p.set_defaults(handler=_cmd_kb_query)

    p = kb_sub.add_parser("chain", help="hypernym hierarchy around a concept")
    p.add_argument("concept")
    _add_kb_arg(p)
    _add_format_arg(p)
    p.set_defaults(handler=_cmd_kb_chain)

    p = kb_sub.add_parser("label", help="assign a semantic label to a candidate")
    p.add_argument("id")
    p.add_argument("label")
    p.add_argument("--annotator", required=True)
    p.add_argument("--force", action="store_true", help="allow relabeling")
    _add_kb_arg(p)
    p.set_defaults(handler=_cmd_kb_label)

    p = kb_sub.add_parser("reject", help="reject a candidate assertion")
    p.add_argument("id")
    p.add_argument("--annotator", required=True)
    _add_kb_arg(p)
    p.set_defaults(handler=_cmd_kb_reject)

    val = sub.add_parser("validate", help="expert judgments and agreeability reports")
    val_sub = val.add_subparsers(dest="validate_command", metavar="subcommand")

    p = val_sub.add_parser("report", help="agreeability report for a partition")
    p.add_argument("--partition", type=int, required=True)
    p.add_argument("--judgments", help="judgment CSV (default <out>/judgments.csv)")
    _add_kb_arg(p)
    _add_format_arg(p)
    p.set_defaults(handler=_cmd_validate_report)

    p = val_sub.add_parser("judge", help="record one expert verdict")
    p.add_argument("id")
    p.add_argument("expert")
    p.add_argument("verdict", choices=[v.value for v in validation.Verdict])
    p.add_argument("--judgments")
    _add_kb_arg(p)
    p.set_defaults(handler=_cmd_validate_judge)

    p = sub.add_parser("timeline", help="per-partition top assertions for a concept")
    p.add_argument("concept")
    p.add_argument("--n", type=int, default=3)
    _add_kb_arg(p)
    _add_format_arg(p)
    p.set_defaults(handler=_cmd_timeline)

    p = sub.add_parser("diff", help="association changes across consecutive partitions")
    p.add_argument("concept")
    _add_kb_arg(p)
    _add_format_arg(p)
    p.set_defaults(handler=_cmd_diff)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--judgments", help="judgment CSV (default <out>/judgments.csv)")
    p.add_argument("--ui", help="directory of static UI files to serve at /")
    _add_kb_arg(p)
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.handler(args)
    except OntoforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
