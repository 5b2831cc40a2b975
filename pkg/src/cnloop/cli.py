"""Command-line interface: corpus import/export, loop control, metric
reports with optional figures, the API server and the simulation runner."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .author import AuthorConfig, HttpAuthor
from .metrics.tokenizer import UnitSelector
from .orchestrator import Orchestrator, Strategy
from .records import TargetLabel
from .render import reports_to_csv, reports_to_json, reports_to_table
from .store import CorpusStore
from .tokens import ExportFormat


def _store(args) -> CorpusStore:
    return CorpusStore(args.store)


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


def cmd_corpus_import(args) -> int:
    store = _store(args)
    version = store.import_pairs(args.file, args.version, quota=args.quota)
    print(f"imported {len(version.pair_ids)} records into {version.name}")
    if args.freeze:
        store.freeze(version.name)
        print(f"froze {version.name}")
    return 0


def cmd_corpus_export(args) -> int:
    store = _store(args)
    text = store.export_training(args.upto, ExportFormat(args.format.upper()))
    _write_or_print(text, args.out)
    return 0


def cmd_loop_start(args) -> int:
    store = _store(args)
    orchestrator = Orchestrator(store)
    strategy = Strategy.build(
        args.strategy,
        pool_path=args.condition_pool,
        label_mapping=args.label_mapping,
    )
    state = orchestrator.start_loop(
        args.name,
        strategy,
        quota=args.quota,
        chunk_admit_limit=args.admit_limit,
        base=args.base,
    )
    print(f"started loop {state.name} on base {state.base} (quota {state.quota})")
    return 0


def cmd_loop_generate(args) -> int:
    store = _store(args)
    if args.author_config:
        config = AuthorConfig.from_file(args.author_config)
    elif args.author_url:
        config = AuthorConfig(base_url=args.author_url)
    else:
        print("error: --author-url or --author-config required", file=sys.stderr)
        return 2
    author = HttpAuthor(config)
    orchestrator = Orchestrator(store, author=author)
    try:
        chunks = orchestrator.request_generation(
            args.name, n_chunks=args.chunks, max_tokens=args.max_tokens
        )
    finally:
        author.close()
    parsed = sum(c.parsed_count for c in chunks)
    admitted = sum(c.admitted_count for c in chunks)
    failed = sum(1 for c in chunks if c.failed)
    print(
        f"{len(chunks)} chunks: {parsed} pairs parsed, {admitted} admitted, {failed} failed"
    )
    for c in chunks:
        for d in c.diagnostics:
            print(f"  [{c.id}] {d}")
    return 0


def cmd_loop_close(args) -> int:
    store = _store(args)
    orchestrator = Orchestrator(store)
    name, _report = orchestrator.close_loop(args.name)
    print(f"closed loop {name}; report persisted" if store.root else f"closed loop {name}")
    return 0


def cmd_metrics_report(args) -> int:
    store = _store(args)
    orchestrator = Orchestrator(store)
    drop = TargetLabel.parse(args.six_cat_drop) if args.six_cat_drop else None
    reports = [orchestrator.build_report(v, six_cat_drop=drop) for v in args.version]
    unit = UnitSelector(args.unit.upper())
    if args.format == "json":
        text = reports_to_json(reports)
    elif args.format == "csv":
        text = reports_to_csv(reports, unit)
    else:
        text = reports_to_table(reports, unit)
    _write_or_print(text, args.out)
    if args.figures:
        from .figures import render_figures

        paths = render_figures(reports, args.figures)
        for name, path in paths.items():
            print(f"figure {name}: {path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    store = _store(args)
    author = HttpAuthor(AuthorConfig(base_url=args.author_url)) if args.author_url else None
    orchestrator = Orchestrator(store, author=author)
    from .service import create_app

    app = create_app(orchestrator, ui_dir=args.ui)
    host, _, port = args.addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
    return 0


def cmd_mock_author(args) -> int:
    import uvicorn

    from .service import create_author_app
    from .sim import MockAuthor, MockAuthorConfig

    config = (
        MockAuthorConfig.from_file(args.config)
        if args.config
        else MockAuthorConfig(seed=args.seed, malformed_rate=args.malformed_rate)
    )
    app = create_author_app(MockAuthor(config))
    host, _, port = args.addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8001), log_level="info")
    return 0


def cmd_simulate(args) -> int:
    from .sim import MockAuthorConfig, ScriptedReviewerConfig, run_simulation

    author_config = (
        MockAuthorConfig.from_file(args.author_config)
        if args.author_config
        else MockAuthorConfig(seed=args.seed)
    )
    reviewer_config = (
        ScriptedReviewerConfig.from_file(args.reviewer_config)
        if args.reviewer_config
        else ScriptedReviewerConfig(seed=args.reviewer_seed)
    )
    reports = run_simulation(
        loops=args.loops,
        author_config=author_config,
        reviewer_config=reviewer_config,
        quota=args.quota,
        chunk_admit_limit=args.admit_limit,
        store_root=args.store,
    )
    sys.stdout.write(reports_to_table(reports))
    if args.figures:
        from .figures import render_figures

        for name, path in render_figures(reports, args.figures).items():
            print(f"figure {name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnloop")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="import/export pair datasets")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)
    imp = corpus_sub.add_parser("import", help="import a pair JSONL file as a new version")
    imp.add_argument("--store", required=True)
    imp.add_argument("--file", required=True)
    imp.add_argument("--version", required=True)
    imp.add_argument("--quota", type=int, default=None)
    imp.add_argument("--freeze", action="store_true")
    imp.set_defaults(func=cmd_corpus_import)
    exp = corpus_sub.add_parser("export", help="write the training text for a version chain")
    exp.add_argument("--store", required=True)
    exp.add_argument("--upto", required=True)
    exp.add_argument("--format", choices=["plain", "labeled"], default="plain")
    exp.add_argument("-o", "--out")
    exp.set_defaults(func=cmd_corpus_export)

    loop = sub.add_parser("loop", help="start/generate/close collection loops")
    loop_sub = loop.add_subparsers(dest="subcommand", required=True)
    start = loop_sub.add_parser("start")
    start.add_argument("--store", required=True)
    start.add_argument("--name", required=True)
    start.add_argument("--strategy", default="plain",
                       choices=["plain", "sbf", "lab", "arg", "mix"])
    start.add_argument("--base")
    start.add_argument("--quota", type=int, default=500)
    start.add_argument("--admit-limit", type=int, default=None)
    start.add_argument("--condition-pool")
    start.add_argument("--label-mapping")
    start.set_defaults(func=cmd_loop_start)
    gen = loop_sub.add_parser("generate")
    gen.add_argument("--store", required=True)
    gen.add_argument("--name", required=True)
    gen.add_argument("--chunks", type=int, default=1)
    gen.add_argument("--max-tokens", type=int, default=None)
    gen.add_argument("--author-url")
    gen.add_argument("--author-config")
    gen.set_defaults(func=cmd_loop_generate)
    close = loop_sub.add_parser("close")
    close.add_argument("--store", required=True)
    close.add_argument("--name", required=True)
    close.set_defaults(func=cmd_loop_close)

    metrics = sub.add_parser("metrics", help="compute and render loop reports")
    metrics_sub = metrics.add_subparsers(dest="subcommand", required=True)
    report = metrics_sub.add_parser("report")
    report.add_argument("--store", required=True)
    report.add_argument("--version", action="append", required=True,
                        help="repeatable; one column per version")
    report.add_argument("--unit", choices=["pair", "hs", "cn"], default="pair")
    report.add_argument("--format", choices=["json", "table", "csv"], default="table")
    report.add_argument("--six-cat-drop", default=None,
                        help="main target left out of the 6-category balance columns")
    report.add_argument("-o", "--out")
    report.add_argument("--figures", help="directory for rendered PNG figures")
    report.set_defaults(func=cmd_metrics_report)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--store", required=True)
    serve.add_argument("--addr", default="127.0.0.1:8000")
    serve.add_argument("--author-url")
    serve.add_argument("--ui", help="directory of built reviewer UI assets")
    serve.set_defaults(func=cmd_serve)

    mock = sub.add_parser("mock-author", help="serve the deterministic mock author")
    mock.add_argument("--addr", default="127.0.0.1:8001")
    mock.add_argument("--seed", type=int, default=0)
    mock.add_argument("--malformed-rate", type=float, default=0.0)
    mock.add_argument("--config")
    mock.set_defaults(func=cmd_mock_author)

    sim = sub.add_parser("simulate", help="run a deterministic end-to-end simulation")
    sim.add_argument("--loops", type=int, default=3)
    sim.add_argument("--quota", type=int, default=50)
    sim.add_argument("--admit-limit", type=int, default=5)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--reviewer-seed", type=int, default=0)
    sim.add_argument("--author-config")
    sim.add_argument("--reviewer-config")
    sim.add_argument("--store", default=None, help="persist the event log here")
    sim.add_argument("--figures", help="directory for rendered PNG figures")
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single CLI error surface
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
