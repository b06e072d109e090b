"""Command-line entry point tying the pipeline together.

Every subcommand is a thin composition of module operations; outputs are
deterministic given seeds.  Machine output is JSON; `--format text` renders
a human-readable report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import evalmetrics, jparse, topics, weights
from .summarizer import ProjectIndex, select_crowd_summary, summarize_method
from .textpipe import Lexicon


def demo_project_dir() -> Path:
    return Path(str(resources.files("codesum").joinpath("data", "demo")))


def _load_weights(path: str | None) -> weights.WeightsDB:
    if path:
        return weights.WeightsDB.load(path)
    return weights.WeightsDB.defaults()


def _write_out(doc: dict, out: str | None, text: str | None, fmt: str) -> None:
    rendered = text if fmt == "text" and text is not None else json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(rendered + "\n", "utf-8")
    else:
        print(rendered)


def cmd_analyze(args) -> int:
    lex = Lexicon.load()
    project = jparse.parse_project(args.source)
    index = ProjectIndex.build(project, lex)
    db = _load_weights(args.weights)

    docs = [(m.fqname, index.bags[m.fqname].counts) for m in sorted(project.methods, key=lambda m: m.fqname)]
    vocab_size = len({w for _id, counts in docs for w in counts})
    t = args.topics or max(2, min(topics.choose_topic_count(len(project.methods)), vocab_size))
    topic_section = []
    model = None
    if args.model_in:
        model = topics.TopicModel.from_json(json.loads(Path(args.model_in).read_text("utf-8")))
    elif vocab_size >= 2:
        model = topics.fit_lda(docs, T=t, iterations=args.iterations, seed=args.seed)
    if model is not None:
        if args.model_out:
            Path(args.model_out).write_text(json.dumps(model.to_json(), sort_keys=True) + "\n", "utf-8")
        tagged = topics.tag_methods(model, n_per_topic=10)
        for topic_id, words in topics.top_topics(model, k=min(10, model.T)):
            topic_section.append({
                "topic": topic_id,
                "words": words,
                "methods": tagged[topic_id],
            })

    summaries = []
    for m in sorted(project.methods, key=lambda m: m.fqname):
        if index.bags[m.fqname].total() == 0:
            continue
        selected, text = summarize_method(m, index, db)
        summaries.append({
            "fqname": m.fqname,
            "mode": "auto",
            "keywords": [
                {
                    "term": s.term,
                    "area": s.area.name,
                    "tf": s.tf,
                    "df": s.df,
                    "tfidf": round(s.tfidf, 6),
                    "weight": round(s.weight, 6),
                    "importance": round(s.importance, 6),
                }
                for s in selected
            ],
            "summary": text.text,
        })

    doc = {
        "project": {
            "source": str(args.source),
            "methods": len(project.methods),
            "edges": project.edges,
            "errors": [list(e) for e in project.errors],
        },
        "topics": topic_section,
        "summaries": summaries,
    }
    lines = [f"Project {args.source}: {len(project.methods)} methods"]
    for entry in topic_section:
        lines.append(f"topic {entry['topic']}: {' '.join(entry['words'][:10])}")
        for fq in entry["methods"][:10]:
            lines.append(f"  - {fq}")
    for s in summaries:
        lines.append(f"\n{s['fqname']}")
        lines.append(f"  {s['summary']}")
    _write_out(doc, args.out, "\n".join(lines), args.format)
    return 0


def cmd_summarize(args) -> int:
    lex = Lexicon.load()
    project = jparse.parse_project(args.source)
    index = ProjectIndex.build(project, lex)
    db = _load_weights(args.weights)
    try:
        method = project.find(args.method)
    except KeyError:
        print(f"error: no method named {args.method!r}", file=sys.stderr)
        return 2
    selected, text = summarize_method(method, index, db)
    doc = {
        "fqname": method.fqname,
        "complexity": method.metrics.complexity,
        "categories": sorted(c.value for c in method.categories),
        "keywords": [
            {
                "term": s.term,
                "area": s.area.name,
                "tf": s.tf,
                "df": s.df,
                "tfidf": s.tfidf,
                "weight": s.weight,
                "importance": s.importance,
                "snippet": s.source_snippet,
            }
            for s in selected
        ],
        "summary": text.text,
        "mode": "auto",
    }
    lines = [
        f"{method.fqname}  complexity={method.metrics.complexity}",
        f"categories: {', '.join(sorted(c.value for c in method.categories))}",
        "",
        f"{'term':<16}{'area':<20}{'tf':>4}{'df':>4}{'tfidf':>10}{'weight':>9}{'importance':>12}",
    ]
    for s in selected:
        lines.append(
            f"{s.term:<16}{s.area.name:<20}{s.tf:>4}{s.df:>4}{s.tfidf:>10.4f}{s.weight:>9.4f}{s.importance:>12.4f}"
        )
    lines += ["", text.text]
    _write_out(doc, args.out, "\n".join(lines), args.format)
    return 0


def _read_corpus(path: str) -> list[weights.CrowdCorpusEntry]:
    doc = json.loads(Path(path).read_text("utf-8"))
    entries = doc["entries"] if isinstance(doc, dict) else doc
    corpus = []
    for rec in entries:
        method = jparse.method_from_json(rec["method"])
        summaries = [
            weights.SummaryRecord(
                text=s["text"],
                upvotes=s.get("upvotes", 0),
                downvotes=s.get("downvotes", 0),
                author_tier=s.get("author_tier", ""),
            )
            for s in rec["summaries"]
        ]
        corpus.append(weights.CrowdCorpusEntry(method=method, summaries=summaries))
    return corpus


def cmd_learn_weights(args) -> int:
    lex = Lexicon.load()
    corpus = _read_corpus(args.corpus)
    base = weights.WeightsDB.defaults() if args.with_defaults else None
    db = weights.learn_weights(corpus, lex, base=base)
    out = args.out or "weights.json"
    db.save(out)
    for warning in getattr(db, "warnings", []):
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {out} ({len(db.table)} learned cells)")
    return 0


def _read_keywords(path: str) -> list[str]:
    return [
        line.strip().lower()
        for line in Path(path).read_text("utf-8").splitlines()
        if line.strip()
    ]


def cmd_eval(args) -> int:
    retrieved = _read_keywords(args.retrieved)
    gold = _read_keywords(args.gold)
    universe = _read_keywords(args.universe) if args.universe else []
    comparison = evalmetrics.KeywordComparison.of(retrieved, gold, universe)
    doc = {
        "retrieved": sorted(set(retrieved)),
        "gold": sorted(set(gold)),
        "precision": evalmetrics.precision(comparison),
        "recall": evalmetrics.recall(comparison),
        "fscore": evalmetrics.fscore(comparison),
    }
    if universe:
        doc["overall_accuracy"] = evalmetrics.overall_accuracy(comparison)
    if args.smo:
        lex = Lexicon.load()
        doc["smo"] = evalmetrics.smo(set(retrieved), set(gold), lex)
    lines = [f"{k}: {v}" for k, v in doc.items() if k not in ("retrieved", "gold")]
    _write_out(doc, args.out, "\n".join(lines), args.format)
    return 0


def load_platform_config(path: str):
    from .service import PlatformConfig

    raw = json.loads(Path(path).read_text("utf-8"))
    fields = {
        k: tuple(tuple(x) if isinstance(x, list) else x for x in v) if isinstance(v, list) else v
        for k, v in raw.items()
    }
    return PlatformConfig(**fields)


def cmd_serve(args) -> int:
    import uvicorn

    from .httpapi import create_app
    from .service import CrowdService

    config = load_platform_config(args.config) if args.config else None
    data_dir = args.data or os.environ.get("CODESUM_DATA")
    service = CrowdService(data_dir=data_dir, seed=args.seed, config=config)
    if args.demo and not service.state.tasks:
        owner = service.register("demo_owner", "84+", hidden=True)
        files = [(p.name, p.read_text("utf-8")) for p in sorted(demo_project_dir().glob("*.java"))]
        service.submit_project(owner.id, "demo", files)
        print(f"seeded demo project with {len(service.state.tasks)} tasks")
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_export_tasks(args) -> int:
    root = Path(args.source)
    files = sorted(root.rglob("*.java"))
    if not files:
        print(f"error: no .java files under {root}", file=sys.stderr)
        return 2
    jparse.parse_project(root)  # fail fast on unparseable projects
    doc = {
        "name": args.name or root.name,
        "files": [
            {"path": str(f.relative_to(root)), "content": f.read_text("utf-8")}
            for f in files
        ],
    }
    out = args.out or "tasks.json"
    Path(out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {out} ({len(files)} files)")
    return 0


def cmd_import_results(args) -> int:
    doc = json.loads(Path(args.results).read_text("utf-8"))
    entries = doc["entries"] if isinstance(doc, dict) else doc
    out = args.out or "corpus.json"
    Path(out).write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {out} ({len(entries)} methods)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codesum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="topics report and auto summaries for a project")
    p.add_argument("source")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--topics", type=int, default=None)
    p.add_argument("--model-out", help="write the fitted topic model as JSON")
    p.add_argument("--model-in", help="reuse a saved topic model instead of fitting")
    p.add_argument("--weights")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("summarize", help="one-method summary with the scored-term table")
    p.add_argument("source")
    p.add_argument("--method", required=True)
    p.add_argument("--weights")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("learn-weights", help="learn the weights table from a crowd corpus")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument("--with-defaults", action="store_true",
                   help="overlay learned cells on the shipped defaults")
    p.set_defaults(func=cmd_learn_weights)

    p = sub.add_parser("eval", help="keyword metrics for retrieved vs gold files")
    p.add_argument("--retrieved", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--universe")
    p.add_argument("--smo", action="store_true")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the crowd service")
    p.add_argument("--data", help="data directory (default: $CODESUM_DATA or in-memory)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--demo", action="store_true", help="seed the bundled demo project")
    p.add_argument("--config", help="platform config JSON (PlatformConfig fields)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export-tasks", help="package a source tree as a task upload")
    p.add_argument("source")
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_tasks)

    p = sub.add_parser("import-results", help="convert a service corpus export for learn-weights")
    p.add_argument("results")
    p.add_argument("--out")
    p.set_defaults(func=cmd_import_results)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (jparse.ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
