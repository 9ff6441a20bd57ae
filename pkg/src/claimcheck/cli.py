"""Command-line front door for batch and CI use.

Exit codes, worst wins: 0 all claims accurate, 1 inaccuracies found,
2 unverifiable claims present, 3 operational error. Data goes to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import eval_parser, generate_corpus, read_corpus, write_corpus
from .dataset import ingest_csv
from .errors import ClaimCheckError
from .evidence import build_bundle, bundle_json
from .factspec import parse_spec_json
from .parsing import LLMBackend, TemplateBackend
from .pipeline import check_document
from .veracity import INACCURATE, UNVERIFIABLE, verify

EXIT_OK = 0
EXIT_INACCURATE = 1
EXIT_UNVERIFIABLE = 2
EXIT_ERROR = 3


def _load_dataset(path: str):
    p = Path(path)
    return ingest_csv(p.read_bytes(), p.stem)


def _backend(kind: str):
    if kind == "template":
        return TemplateBackend()
    backend = LLMBackend.from_env()
    if backend is None:
        raise ClaimCheckError(
            "llm backend is not configured; set CLAIMCHECK_LLM_ENDPOINT"
        )
    return backend


def _worst(verdicts) -> int:
    if any(v == UNVERIFIABLE for v in verdicts):
        return EXIT_UNVERIFIABLE
    if any(v == INACCURATE for v in verdicts):
        return EXIT_INACCURATE
    return EXIT_OK


def cmd_verify(args) -> int:
    dataset = _load_dataset(args.dataset)
    document = Path(args.text).read_text("utf-8")
    claims = check_document(document, dataset, _backend(args.backend))
    for claim in claims:
        print(f"[{claim.result.verdict}] {claim.text.strip()}")
        if claim.result.explanation:
            print(f"    {claim.result.explanation}")
        if claim.result.rectification is not None:
            print(f"    suggested value: {claim.result.rectification}")
    if not claims:
        print("no data claims detected", file=sys.stderr)
    if args.json:
        report = [
            {
                "id": c.id,
                "text": c.text,
                "char_span": list(c.char_span),
                "fact_type": c.fact_type,
                "subtype": c.subtype,
                "spec": c.spec_text,
                "verdict": c.result.verdict,
                "claimed": None if c.result.claimed is None else {
                    "text": c.result.claimed.text, "value": c.result.claimed.value,
                },
                "actual": c.result.actual,
                "statistics": c.result.statistics,
                "explanation": c.result.explanation,
                "rectification": c.result.rectification,
                "diagnostics": c.diagnostics,
            }
            for c in claims
        ]
        Path(args.json).write_text(json.dumps(report, indent=1) + "\n", "utf-8")
    return _worst([c.result.verdict for c in claims])


def cmd_gen_corpus(args) -> int:
    dataset = _load_dataset(args.dataset)
    entries = generate_corpus(dataset, per_type=args.per_type, seed=args.seed)
    write_corpus(entries, args.out, dataset.name, args.per_type, args.seed)
    print(f"wrote {len(entries)} entries to {args.out}")
    return EXIT_OK


def cmd_eval_parser(args) -> int:
    dataset = _load_dataset(args.dataset)
    _, entries = read_corpus(args.corpus)
    report = eval_parser(_backend(args.backend), entries, dataset)
    print(f"{'type':<15} {'n':>4} {'class%':>8} {'complete%':>10} {'partial%':>9}")
    for fact_type, row in report["per_type"].items():
        print(f"{fact_type:<15} {row['n']:>4} "
              f"{row['classification_accuracy'] * 100:>7.1f}% "
              f"{row['complete_rate'] * 100:>9.1f}% "
              f"{row['partial_mean'] * 100:>8.1f}%")
    overall = report["overall"]
    print(f"{'overall':<15} {overall['n']:>4} "
          f"{overall['classification_accuracy'] * 100:>7.1f}% "
          f"{overall['complete_rate'] * 100:>9.1f}% "
          f"{overall['partial_mean'] * 100:>8.1f}%")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=1) + "\n", "utf-8")
    return EXIT_OK


def cmd_evidence(args) -> int:
    dataset = _load_dataset(args.dataset)
    spec = parse_spec_json(Path(args.claim_spec).read_text("utf-8").strip())
    result = verify(dataset, spec)
    if result.verdict == UNVERIFIABLE:
        print(f"unverifiable: {result.explanation}", file=sys.stderr)
        return EXIT_UNVERIFIABLE
    bundle = build_bundle(dataset, spec, result)
    if args.form == "table":
        bundle = {k: v for k, v in bundle.items() if k != "chart" and k != "context"}
    elif args.form == "chart":
        bundle = {k: v for k, v in bundle.items() if k != "table"}
    print(bundle_json(bundle))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, load_config

    config = load_config(args.config)
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="claimcheck", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="fact-check a document against a CSV dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--json", help="write a machine-readable report here")
    p.add_argument("--backend", choices=["template", "llm"], default="template")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("gen-corpus", help="generate a template-based test corpus")
    p.add_argument("--dataset", required=True)
    p.add_argument("--per-type", type=int, default=40, dest="per_type")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen_corpus)

    p = sub.add_parser("eval-parser", help="score a parser backend against a corpus")
    p.add_argument("--backend", choices=["template", "llm"], default="template")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--json", help="write the rate tables here")
    p.set_defaults(fn=cmd_eval_parser)

    p = sub.add_parser("evidence", help="emit the evidence bundle for one spec")
    p.add_argument("--claim-spec", required=True, dest="claim_spec")
    p.add_argument("--dataset", required=True)
    p.add_argument("--form", choices=["table", "chart", "both"], default="both")
    p.set_defaults(fn=cmd_evidence)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ClaimCheckError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
