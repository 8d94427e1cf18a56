"""Command-line front end: ``reprosignals {extract,analyze,synth}``.

Exit codes: 0 success, 1 user/input error, 2 internal error. Diagnostics go to
stderr; data only to files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analyze
from .corpus import CorpusError, load_manifest
from .synth import NULL_RATES, PLANTED_RATES, SynthConfig, generate_corpus, write_corpus

log = logging.getLogger("reprosignals")

EXIT_OK, EXIT_USER, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    manifest_path: Path | None
    output_dir: Path
    alpha: float = 0.05
    yates: bool = True
    formats: tuple[str, ...] = analyze.FORMATS
    parallelism: int | str = 1
    seed: int | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise UsageError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.parallelism != "auto" and int(self.parallelism) < 1:
            raise UsageError("--parallelism must be a positive integer or 'auto'")
        bad = set(self.formats) - set(analyze.FORMATS)
        if bad:
            raise UsageError(f"unknown --format entries: {', '.join(sorted(bad))}")


def _parallelism(value: str):
    if value == "auto":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'") from None
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'")
    return n


def _formats(value: str) -> tuple[str, ...]:
    aliases = {"md": "markdown"}
    items = [aliases.get(v.strip(), v.strip()) for v in value.split(",") if v.strip()]
    return tuple(items)


def _extract(config: RunConfig) -> analyze.FeatureMatrix:
    if config.manifest_path is None:
        raise UsageError("--manifest is required")
    if not config.manifest_path.is_file():
        raise UsageError(f"manifest not found: {config.manifest_path}")
    corpus = load_manifest(config.manifest_path)
    matrix = analyze.build_feature_matrix(corpus, parallelism=config.parallelism)
    for aid, diags in matrix.diagnostics.items():
        for d in diags:
            log.warning("%s", d)
    return matrix


def cmd_extract(config: RunConfig) -> int:
    matrix = _extract(config)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    analyze.write_features_csv(matrix, config.output_dir / "features.csv")
    log.info("wrote %s (%d articles)", config.output_dir / "features.csv", len(matrix))
    return EXIT_OK


def cmd_analyze(config: RunConfig) -> int:
    if config.manifest_path is not None:
        matrix = _extract(config)
        config.output_dir.mkdir(parents=True, exist_ok=True)
        analyze.write_features_csv(matrix, config.output_dir / "features.csv")
    else:
        path = config.output_dir / "features.csv"
        if not path.is_file():
            raise UsageError(f"no --manifest given and {path} does not exist")
        matrix = analyze.read_features_csv(path)

    report = analyze.run_significance_suite(matrix, alpha=config.alpha, yates=config.yates)
    report_dir = config.output_dir / "report"
    analyze.render_report(report, report_dir, formats=config.formats)
    analyze.write_features_csv(matrix, report_dir / "features.csv")
    log.info("significant at alpha=%g: %s", config.alpha, ", ".join(report.significant_set) or "none")
    return EXIT_OK


def cmd_synth(config: RunConfig, n_docs: int = 300, words: int = 1500, null: bool = False) -> int:
    if config.seed is None:
        raise UsageError("--seed is required for synth")
    cfg = SynthConfig(
        seed=config.seed, n_docs=n_docs, words_per_doc=words,
        rates=dict(NULL_RATES if null else PLANTED_RATES),
    )
    docs = generate_corpus(cfg)
    write_corpus(docs, config.output_dir)
    log.info("wrote %d synthetic articles to %s", len(docs), config.output_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reprosignals",
        description="Extract reproducibility signals from article text and test them against labels.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest_required):
        p.add_argument("--manifest", type=Path, required=manifest_required, help="corpus manifest CSV")
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.add_argument("--parallelism", type=_parallelism, default=1, help="worker processes or 'auto'")

    p = sub.add_parser("extract", help="write features.csv for a corpus")
    common(p, manifest_required=True)

    p = sub.add_parser("analyze", help="run the significance battery and write the report")
    common(p, manifest_required=False)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--no-yates", dest="yates", action="store_false", help="disable Yates correction on 2x2 tables")
    p.add_argument("--format", dest="formats", type=_formats, default=analyze.FORMATS,
                   help="comma list of markdown,csv,json")

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-docs", type=int, default=300)
    p.add_argument("--words", type=int, default=1500, help="approximate words per document")
    p.add_argument("--null", action="store_true", help="no label effect on any feature")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = RunConfig(
            manifest_path=getattr(args, "manifest", None),
            output_dir=args.out,
            alpha=getattr(args, "alpha", 0.05),
            yates=getattr(args, "yates", True),
            formats=getattr(args, "formats", analyze.FORMATS),
            parallelism=getattr(args, "parallelism", 1),
            seed=getattr(args, "seed", None),
        )
        if args.command == "extract":
            return cmd_extract(config)
        if args.command == "analyze":
            return cmd_analyze(config)
        return cmd_synth(config, n_docs=args.n_docs, words=args.words, null=args.null)
    except (UsageError, CorpusError, analyze.AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
