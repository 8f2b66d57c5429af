"""Command-line front end: synth, ingest, top-words, and grid.

Exit codes: 0 success, 1 usage error, 2 missing or unusable input or
output file, 3 empty selection, 4 compute failure. All randomness flows
from --seed, and every artifact embeds the run configuration plus the
asset hashes, so rerunning a command with the same flags reproduces its
outputs byte for byte.
"""

import argparse
import dataclasses
import json
import logging
import sys

from . import __version__, evaluation, postag, synth, text
from .corpus import build_corpus, corpus_hash, load_corpus, save_corpus
from .errors import EmptySelection, IoFailure, StarforgeError
from .features import (DEFAULT_CHUNK_THRESHOLD, FeatureMethod,
                       build_vocabulary, count_terms, vocabulary_report)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISSING_INPUT = 2
EXIT_EMPTY_SELECTION = 3
EXIT_COMPUTE = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclasses.dataclass
class RunConfig:
    """Everything an invocation depends on, serialized into its outputs."""

    subcommand: str
    business_path: str | None = None
    review_path: str | None = None
    corpus_path: str | None = None
    category: str | None = None
    sample_n: int | None = None
    ks: list[int] | None = None
    methods: list[str] | None = None
    models: list[str] | None = None
    seed: int = 0
    out: str | None = None
    top_n: int | None = None
    stopwords_enabled: bool = True
    clamp: bool = True
    chunk_threshold: int = DEFAULT_CHUNK_THRESHOLD
    n_businesses: int | None = None
    noise_sigma: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


def _csv_list(raw: str, kind: str, valid: list[str] | None = None) -> list[str]:
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if not values:
        raise argparse.ArgumentTypeError(f"empty {kind} list")
    if valid is not None:
        for v in values:
            if v not in valid:
                raise argparse.ArgumentTypeError(
                    f"unknown {kind} {v!r}, expected one of {', '.join(valid)}")
    return values


def _stopword_policy(config: RunConfig) -> text.StopwordPolicy:
    return (text.StopwordPolicy.ENABLED if config.stopwords_enabled
            else text.StopwordPolicy.DISABLED)


def _asset_hashes() -> dict:
    return {"stopword_list_hash": text.stopword_list_hash(),
            "lexicon_hash": postag.lexicon_hash()}


def cmd_synth(config: RunConfig) -> int:
    spec = synth.SynthSpec(n_businesses=config.n_businesses,
                           noise_sigma=config.noise_sigma, seed=config.seed)
    business_path, review_path = synth.generate(spec, config.out)
    print(f"wrote {business_path}")
    print(f"wrote {review_path}")
    print(f"businesses: {spec.n_businesses}  sigma: {spec.noise_sigma}  "
          f"seed: {spec.seed}")
    return EXIT_OK


def cmd_ingest(config: RunConfig) -> int:
    corpus = build_corpus(config.business_path, config.review_path,
                          category_filter=config.category,
                          sample_n=config.sample_n, seed=config.seed)
    corpus.provenance["run_config"] = config.as_dict()
    corpus.provenance["asset_hashes"] = _asset_hashes()
    save_corpus(corpus, config.out)
    p = corpus.provenance
    print(f"wrote {config.out}")
    print(f"businesses matched: {p['businesses_matched']}")
    print(f"businesses sampled: {p['businesses_sampled']}")
    print(f"reviews kept: {p['reviews_kept']}")
    print(f"malformed lines skipped: "
          f"{p['malformed_business_lines'] + p['malformed_review_lines']}")
    print(f"incomplete records skipped: "
          f"{p['skipped_business_records'] + p['skipped_review_records']}")
    return EXIT_OK


def cmd_top_words(config: RunConfig) -> int:
    corpus = load_corpus(config.corpus_path)
    method = FeatureMethod(config.methods[0])
    global_counts, _ = count_terms(corpus, method,
                                   stopword_policy=_stopword_policy(config),
                                   chunk_threshold=config.chunk_threshold)
    vocabulary = build_vocabulary(global_counts, method,
                                  max(config.top_n, 1))
    shown = min(config.top_n, len(vocabulary))
    rows = vocabulary_report(vocabulary, shown) if shown else []
    print(f"top {shown} terms ({method.value}):")
    for term, share in rows:
        print(f"  {term:<20s} {share:7.2%}")
    if shown < config.top_n:
        print(f"  (only {shown} distinct terms exist, "
              f"{config.top_n - shown} short of requested)")
    if config.out:
        doc = {
            "run_config": config.as_dict(),
            "asset_hashes": _asset_hashes(),
            "corpus_hash": corpus_hash(corpus),
            "method": method.value,
            "top_words": [[t, s] for t, s in rows],
        }
        with open(config.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {config.out}")
    return EXIT_OK


def cmd_grid(config: RunConfig) -> int:
    corpus = load_corpus(config.corpus_path)
    results = evaluation.run_grid(
        corpus,
        methods=[FeatureMethod(m) for m in config.methods],
        model_kinds=[evaluation.ModelKind(m) for m in config.models],
        ks=config.ks,
        seed=config.seed,
        stopword_policy=_stopword_policy(config),
        clamp=config.clamp,
        chunk_threshold=config.chunk_threshold,
    )
    metadata = dict(results[0].metadata)
    metadata["run_config"] = config.as_dict()
    evaluation.write_report(results, config.out, metadata)
    best = min(results, key=lambda r: (r.mean_rmse, r.method.value,
                                       r.model.value, r.k))
    print(f"grid cells: {len(results)}")
    print(f"best: method={best.method.value} model={best.model.value} "
          f"k={best.k} rmse={best.mean_rmse:.4f}")
    print(f"wrote {config.out}/results.csv and summary.json")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="starforge",
                     description="Predict business stars from review text.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    methods = [m.value for m in FeatureMethod]
    model_kinds = [m.value for m in evaluation.ModelKind]

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--n", type=int, default=500, help="number of businesses")
    p.add_argument("--sigma", type=float, default=0.1, help="star noise sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("ingest", help="build and cache a corpus")
    p.add_argument("--business", required=True, help="business JSON-lines file")
    p.add_argument("--review", required=True, help="review JSON-lines file")
    p.add_argument("--category", default=None,
                   help="keep businesses whose categories contain this")
    p.add_argument("--sample", type=int, default=0,
                   help="reservoir-sample this many businesses (0 = all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="corpus.json", help="corpus cache path")

    p = sub.add_parser("top-words", help="most frequent terms with shares")
    p.add_argument("--corpus", required=True, help="corpus cache path")
    p.add_argument("--method", default=FeatureMethod.BASELINE.value,
                   choices=methods)
    p.add_argument("--top", type=int, default=12)
    p.add_argument("--no-stopwords", action="store_true")
    p.add_argument("--chunk-threshold", type=int,
                   default=DEFAULT_CHUNK_THRESHOLD)
    p.add_argument("--out", default=None, help="optional JSON output path")

    p = sub.add_parser("grid", help="cross-validated method x model x K sweep")
    p.add_argument("--corpus", required=True, help="corpus cache path")
    p.add_argument("--ks", default=",".join(str(k) for k in evaluation.DEFAULT_KS),
                   help="comma-separated vocabulary sizes")
    p.add_argument("--methods", default=",".join(methods),
                   help="comma-separated feature methods")
    p.add_argument("--models", default=",".join(model_kinds),
                   help="comma-separated model kinds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-stopwords", action="store_true")
    p.add_argument("--no-clamp", action="store_true")
    p.add_argument("--chunk-threshold", type=int,
                   default=DEFAULT_CHUNK_THRESHOLD)
    return parser


def _config_from_args(parser: _Parser, args) -> RunConfig:
    if args.subcommand == "synth":
        if args.n < 1:
            parser.error("--n must be >= 1")
        if args.sigma < 0:
            parser.error("--sigma must be >= 0")
        return RunConfig(subcommand="synth", n_businesses=args.n,
                         noise_sigma=args.sigma, seed=args.seed, out=args.out)
    if args.subcommand == "ingest":
        if args.sample < 0:
            parser.error("--sample must be >= 0")
        return RunConfig(subcommand="ingest", business_path=args.business,
                         review_path=args.review, category=args.category,
                         sample_n=args.sample or None, seed=args.seed,
                         out=args.out)
    if args.subcommand == "top-words":
        if args.top < 1:
            parser.error("--top must be >= 1")
        if args.chunk_threshold < 1:
            parser.error("--chunk-threshold must be >= 1")
        return RunConfig(subcommand="top-words", corpus_path=args.corpus,
                         methods=[args.method], top_n=args.top,
                         stopwords_enabled=not args.no_stopwords,
                         chunk_threshold=args.chunk_threshold, out=args.out)
    if args.subcommand == "grid":
        if args.chunk_threshold < 1:
            parser.error("--chunk-threshold must be >= 1")
        try:
            ks = [int(k) for k in _csv_list(args.ks, "k")]
            methods = _csv_list(args.methods, "method",
                                [m.value for m in FeatureMethod])
            model_kinds = _csv_list(args.models, "model",
                                    [m.value for m in evaluation.ModelKind])
        except (argparse.ArgumentTypeError, ValueError) as exc:
            parser.error(str(exc))
        if any(k < 1 for k in ks):
            parser.error("every k must be >= 1")
        return RunConfig(subcommand="grid", corpus_path=args.corpus, ks=ks,
                         methods=methods, models=model_kinds, seed=args.seed,
                         out=args.out, stopwords_enabled=not args.no_stopwords,
                         clamp=not args.no_clamp,
                         chunk_threshold=args.chunk_threshold)
    parser.error(f"unknown subcommand {args.subcommand!r}")


_COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "top-words": cmd_top_words,
    "grid": cmd_grid,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(parser, args)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE

    try:
        return _COMMANDS[config.subcommand](config)
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except EmptySelection as exc:
        print(f"empty selection: {exc}", file=sys.stderr)
        return EXIT_EMPTY_SELECTION
    except IoFailure as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (StarforgeError, ValueError) as exc:
        print(f"compute failure: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
