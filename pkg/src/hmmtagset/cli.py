"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 internal
invariant violation.  Outputs are written to a temporary file and renamed,
so a failed run leaves no partial files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from hmmtagset import hmm
from hmmtagset.corpus import build_lexicon, read_corpus, serialize_corpus, split_corpus
from hmmtagset.errors import DataError, InvariantError
from hmmtagset.experiment import MODES, ExperimentConfig, emit_report, sweep
from hmmtagset.synth import (SyntheticSpec, generate_synthetic_corpus, guesser_rules,
                             realized_ambiguity, scheme_rules)
from hmmtagset.tagset import read_closed_file, read_scheme_file, scheme_code_enumerate
from hmmtagset.unknown import Guesser, analyze_unknown_words, format_analysis, read_guesser_file

log = logging.getLogger("hmmtagset")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _require(path, flag):
    if path is None:
        raise UsageError(f"{flag} is required")
    if not Path(path).is_file():
        raise UsageError(f"{flag}: no such file: {path}")
    return path


def _check_out_dir(path, flag):
    if path not in (None, "-") and not Path(path).resolve().parent.is_dir():
        raise UsageError(f"{flag}: directory does not exist: {Path(path).parent}")


def _closed(args):
    return read_closed_file(args.closed) if args.closed else frozenset()


def _guesser(args):
    return Guesser(tuple(read_guesser_file(args.guesser))) if args.guesser else None


def cmd_train(args) -> int:
    _require(args.corpus, "--corpus")
    out = args.model or args.out
    if out is None:
        raise UsageError("--model (output path) is required")
    _check_out_dir(out, "--model")
    corpus = read_corpus(args.corpus, strict=args.strict)
    if corpus.skipped:
        log.warning("skipped %d malformed line(s)", corpus.skipped)
    model = hmm.train(corpus, smoothing=not args.no_smoothing, closed=_closed(args))
    atomic_write(out, hmm.save_model(model))
    print(f"tagset_size\t{model.tagset.size}")
    print(f"tokens\t{corpus.token_count}")
    print(f"sentences\t{len(corpus.sentences)}")
    return 0


def cmd_tag(args) -> int:
    _require(args.model, "--model")
    _require(args.corpus, "--corpus")
    _check_out_dir(args.out, "--out")
    with open(args.model, encoding="utf-8") as f:
        model = hmm.load_model(f)
    corpus = read_corpus(args.corpus, strict=args.strict)
    guesser = _guesser(args)
    lines = []
    for sent in corpus.sentences:
        for tok, tag in zip(sent, hmm.viterbi(model, sent, guesser)):
            lines.append(f"{tok.surface}\t{tag}\n")
        lines.append("\n")
    _emit("".join(lines), args.out)
    return 0


def _parse_codes(spec: str, letters) -> list[str]:
    if spec == "all":
        return scheme_code_enumerate(letters)
    codes = [c.strip() for c in spec.split(",") if c.strip()]
    if not codes:
        raise UsageError("--codes is empty")
    return codes


def cmd_sweep(args) -> int:
    _require(args.corpus, "--corpus")
    _require(args.rules, "--rules")
    for p, flag in ((args.closed, "--closed"), (args.guesser, "--guesser")):
        if p:
            _require(p, flag)
    _check_out_dir(args.out, "--out")
    _check_out_dir(args.plot_out, "--plot-out")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    if not 0 < args.split <= 1:
        raise UsageError("--split must be in (0, 1]")
    features = read_scheme_file(args.rules)
    if not features:
        raise DataError(f"{args.rules}: no features declared")
    codes = _parse_codes(args.codes, list(features))
    corpus = read_corpus(args.corpus, strict=args.strict)
    config = ExperimentConfig(split=args.split, smoothing=not args.no_smoothing,
                              guesser=_guesser(args), closed=_closed(args),
                              sample_size=args.sample_size)
    reports = sweep(corpus, features, codes, args.mode, config, args.workers)
    report = emit_report(reports, "tsv")
    plot = emit_report(reports, "plot_points") if args.plot_out else None
    _emit(report, args.out)
    if plot is not None:
        atomic_write(args.plot_out, plot)
    if args.out not in (None, "-"):
        sys.stderr.write(emit_report(reports, "pretty"))
    return 0


def cmd_analyze_unknowns(args) -> int:
    _require(args.corpus, "--corpus")
    _check_out_dir(args.out, "--out")
    corpus = read_corpus(args.corpus, strict=args.strict)
    train_part, test_part = split_corpus(corpus, args.split, "held_out")
    analysis = analyze_unknown_words(build_lexicon(corpus), build_lexicon(train_part), test_part)
    _emit(format_analysis(analysis), args.out)
    return 0


def _parse_axes(text: str):
    axes = []
    for part in text.split(","):
        name, _, n = part.partition(":")
        try:
            axes.append((name.strip().upper(), int(n)))
        except ValueError:
            raise UsageError(f"--axes: expected LETTER:COUNT, got {part!r}") from None
    return tuple(axes)


def cmd_synth(args) -> int:
    if args.out in (None, "-"):
        raise UsageError("--out is required for synth")
    _check_out_dir(args.out, "--out")
    spec = SyntheticSpec(base_tags=args.base_tags, axes=_parse_axes(args.axes),
                         vocab_size=args.vocab, ambiguity=args.ambiguity, n_tokens=args.tokens,
                         min_len=args.min_len, max_len=args.max_len,
                         suffix_marking=args.suffix_marking, seed=args.seed)
    corpus, true = generate_synthetic_corpus(spec)
    out = Path(args.out)
    files = {
        out: serialize_corpus(corpus),
        out.with_name(out.name + ".true.json"): true.to_json() + "\n",
        out.with_name(out.name + ".rules"): scheme_rules(spec),
    }
    if spec.suffix_marking:
        files[out.with_name(out.name + ".guess")] = guesser_rules(true)
    for path, text in files.items():
        atomic_write(path, text)
    print(json.dumps({"tokens": corpus.token_count, "sentences": len(corpus.sentences),
                      "tagset_size": len(corpus.tags),
                      "realized_ambiguity": round(realized_ambiguity(corpus), 4)}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strict", action="store_true", help="fail on malformed corpus lines")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="hmmtagset", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("train", parents=[common], help="train a model from a tagged corpus")
    t.add_argument("--corpus")
    t.add_argument("--model", help="model file to write")
    t.add_argument("--closed", help="closed-class tag list")
    t.add_argument("--no-smoothing", action="store_true",
                   help="disable the add-one ('Good-Turing') transition correction")
    t.set_defaults(func=cmd_train)

    g = sub.add_parser("tag", parents=[common], help="tag a corpus with a trained model")
    g.add_argument("--model")
    g.add_argument("--corpus")
    g.add_argument("--guesser", help="unknown-word guesser rules")
    g.set_defaults(func=cmd_tag)

    s = sub.add_parser("sweep", parents=[common], help="evaluate a list of reduction schemes")
    s.add_argument("--corpus")
    s.add_argument("--rules", help="reduction rule file")
    s.add_argument("--closed")
    s.add_argument("--guesser")
    s.add_argument("--codes", default="all", help="'all' or a comma-separated list of codes")
    s.add_argument("--mode", choices=MODES, default="held_out")
    s.add_argument("--split", type=float, default=0.95)
    s.add_argument("--sample-size", type=int, default=None,
                   help="in_sample test size in tokens (default: 5%% of the corpus)")
    s.add_argument("--no-smoothing", action="store_true",
                   help="disable the add-one ('Good-Turing') transition correction")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--plot-out", help="write plot points CSV here")
    s.set_defaults(func=cmd_sweep)

    a = sub.add_parser("analyze-unknowns", parents=[common],
                       help="look up held-out unknown words in the full-corpus lexicon")
    a.add_argument("--corpus")
    a.add_argument("--split", type=float, default=0.95)
    a.set_defaults(func=cmd_analyze_unknowns)

    y = sub.add_parser("synth", parents=[common], help="generate a synthetic tagged corpus")
    y.add_argument("--tokens", type=int, default=50_000)
    y.add_argument("--base-tags", type=int, default=8)
    y.add_argument("--axes", default="G:2,N:2", help="feature axes, e.g. G:2,N:2")
    y.add_argument("--vocab", type=int, default=3000)
    y.add_argument("--ambiguity", type=float, default=0.4)
    y.add_argument("--min-len", type=int, default=4)
    y.add_argument("--max-len", type=int, default=20)
    y.add_argument("--suffix-marking", action="store_true",
                   help="give every tag a distinct two-letter word ending")
    y.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"hmmtagset: error: {e}", file=sys.stderr)
        return 1
    except (DataError, OSError, UnicodeDecodeError) as e:
        if isinstance(e.__cause__, InvariantError):
            print(f"hmmtagset: internal error: {e}", file=sys.stderr)
            return 3
        print(f"hmmtagset: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"hmmtagset: internal error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
