"""Command-line entry point.

    crisis-topics <stage> --config conf.json --out artifacts/
    crisis-topics all --config conf.json --out artifacts/
    crisis-topics sweep --grid grid.json --config conf.json --out artifacts/
    crisis-topics serve --artifacts artifacts/ --port 8787

Exit codes: 0 success, 2 configuration error, 3 stale upstream input,
4 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError, CrisisTopicsError, SchemaError, StaleInputError
from .config import PipelineConfig
from .manifest import STAGES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STALE = 3
EXIT_RUNTIME = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crisis-topics",
        description="Crisis-discourse topic modeling and analytics pipeline")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--tz", default=None,
                        help="override the config timezone")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for stage in STAGES + ("all",):
        stage_parser = sub.add_parser(stage, help=f"run the {stage} stage")
        stage_parser.add_argument("--config", required=True)
        stage_parser.add_argument("--out", required=True)

    sweep = sub.add_parser("sweep", help="grid sweep over reduce+cluster")
    sweep.add_argument("--grid", required=True,
                       help="JSON grid file or the literal `reference`")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)

    serve = sub.add_parser("serve", help="start the review service")
    serve.add_argument("--artifacts", required=True)
    serve.add_argument("--port", type=int, default=8787)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--console-dir", default=None,
                       help="static console assets to serve at /")
    return parser


def _load_config(args) -> PipelineConfig:
    config = PipelineConfig.load(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.tz is not None:
        config.timezone = args.tz
    return config


def _run_sweep(args) -> None:
    from ..coherence import CoherenceConfig, cv_coherence
    from ..embed import SweepGrid, load_embeddings, sweep_grid
    from ..embed.reducer import ReducerConfig
    from ..ingest import TokenizerConfig, read_clean_docs, tokenize
    from ..represent import VectorizerConfig, fit_ctfidf

    config = _load_config(args)
    out_dir = Path(args.out)
    if args.grid == "reference":
        grid = SweepGrid.reference()
    else:
        obj = json.loads(Path(args.grid).read_text(encoding="utf-8"))
        grid = SweepGrid(
            n_neighbors=tuple(obj["n_neighbors"]),
            min_dist=tuple(obj["min_dist"]),
            min_cluster_size=tuple(obj["min_cluster_size"]),
        )

    matrix = load_embeddings(out_dir / "embeddings.emb").normalized()
    docs = [d for d in read_clean_docs(out_dir / "clean_docs.jsonl")
            if d.kind == "comment"]
    tokenizer = TokenizerConfig()
    tokens = [tokenize(d.text, tokenizer) for d in docs]

    section = config.section("represent")
    vectorizer = VectorizerConfig(
        ngram_range=(int(section.get("ngram_min", 1)),
                     int(section.get("ngram_max", 2))),
        min_df=int(section.get("min_df", 2)))
    coherence_section = config.section("coherence")
    coherence_config = CoherenceConfig(
        window_size=int(coherence_section.get("window_size", 110)),
        top_n=int(coherence_section.get("top_n", 10)))

    def evaluator(assignment):
        model = fit_ctfidf(tokens, assignment.labels.tolist(), vectorizer)
        word_lists = [
            [term for term, _ in model.top_terms(c, coherence_config.top_n)]
            for c in model.class_ids
        ]
        report = cv_coherence(word_lists, tokens, coherence_config)
        if report.mean is None:
            raise ValueError("no scoreable topics")
        return report.mean

    base_reducer = ReducerConfig(
        n_components=int(config.section("cluster").get("n_components", 5)),
        epochs=int(config.section("cluster").get("epochs", 300)),
        seed=config.seed)
    result = sweep_grid(matrix.values.astype(np.float64), grid, evaluator,
                        base_reducer)
    sweep_path = out_dir / "sweep_grid.csv"
    sweep_path.write_text(result.to_csv(), encoding="utf-8")
    if result.best is None:
        print("sweep complete: every configuration failed", file=sys.stderr)
    else:
        best = result.best
        print(f"best configuration: n_neighbors={best.n_neighbors} "
              f"min_dist={best.min_dist} min_cluster_size={best.min_cluster_size} "
              f"coherence={best.coherence:.4f} topics={best.num_topics}")
    print(f"score table written to {sweep_path}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "serve":
            from .server import serve

            serve(args.artifacts, port=args.port, host=args.host,
                  console_dir=args.console_dir)
            return EXIT_OK
        if args.command == "sweep":
            _run_sweep(args)
            return EXIT_OK

        from .stages import run_all, run_stage

        config = _load_config(args)
        if args.command == "all":
            run_all(config, args.out)
        else:
            run_stage(args.command, config, args.out)
        return EXIT_OK
    except StaleInputError as exc:
        print(f"stale input: {exc}", file=sys.stderr)
        return EXIT_STALE
    except (ConfigError, SchemaError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CrisisTopicsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        logger.exception("unhandled failure")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
