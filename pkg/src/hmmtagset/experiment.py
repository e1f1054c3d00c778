"""Evaluation metrics, scheme sweeps and report rendering.

Test tokens fall into three disjoint groups: known words with a single
hypothesised tag, known words with several, and unknown words.  Ambiguous-word
accuracy is measured on the second group and unknown-word accuracy on the
third; the first only enters the overall figure.  Degree of ambiguity counts
every token, known or unknown, with more than one hypothesised tag.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from hmmtagset._fmt import pct
from hmmtagset.corpus import TaggedCorpus, split_corpus
from hmmtagset.errors import DataError, InvariantError
from hmmtagset.hmm import HmmModel, hypothesize, train, viterbi
from hmmtagset.tagset import ReductionScheme, apply_scheme, reduce_closed, tagset_of
from hmmtagset.unknown import Guesser

log = logging.getLogger(__name__)

MODES = ("held_out", "in_sample")
TSV_COLUMNS = ("index", "scheme", "tagset_size", "ambiguity_pct", "ambiguous_acc_pct",
               "unknown_acc_pct", "overall_acc_pct", "n_ambiguous", "n_unknown", "n_tokens")


class SweepError(DataError):
    def __init__(self, code: str, cause: BaseException):
        super().__init__(f"scheme {code}: {cause}")
        self.code = code


def _ratio(num: int, den: int) -> Fraction | None:
    return Fraction(100 * num, den) if den else None


@dataclass(frozen=True)
class EvalReport:
    """One results row.  Percentages are exact fractions; counts may be None
    for rows transcribed from published tables."""

    scheme: str
    tagset_size: int
    ambiguity_pct: Fraction
    ambiguous_acc_pct: Fraction | None
    unknown_acc_pct: Fraction | None
    overall_acc_pct: Fraction | None = None
    n_ambiguous: int | None = None
    n_unknown: int | None = None
    n_tokens: int | None = None
    n_unambiguous: int | None = None
    n_hypothesis_ambiguous: int | None = None
    correct_unambiguous: int | None = None
    correct_ambiguous: int | None = None
    correct_unknown: int | None = None
    mode: str = "held_out"

    def __post_init__(self):
        for name in ("ambiguity_pct", "ambiguous_acc_pct", "unknown_acc_pct", "overall_acc_pct"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 100:
                raise InvariantError(f"{name}={float(v)} outside [0, 100]")
        if self.n_tokens is not None and None not in (self.n_unambiguous, self.n_ambiguous, self.n_unknown):
            if self.n_unambiguous + self.n_ambiguous + self.n_unknown != self.n_tokens:
                raise InvariantError("token categories do not partition the test set")
            if self.overall_acc_pct is not None and self.n_tokens and self.correct_unknown is not None:
                weighted = sum(getattr(self, f"n_{c}") * (self.category_accuracy(c) or 0)
                               for c in ("unambiguous", "ambiguous", "unknown"))
                if abs(float(weighted / self.n_tokens * 100 - self.overall_acc_pct)) > 1e-9:
                    raise InvariantError("overall accuracy is not the category-weighted mean")

    @classmethod
    def from_counts(cls, scheme: str, tagset_size: int, mode: str, *, n_tokens: int,
                    n_unambiguous: int, n_ambiguous: int, n_unknown: int,
                    n_hypothesis_ambiguous: int, correct_unambiguous: int,
                    correct_ambiguous: int, correct_unknown: int) -> "EvalReport":
        correct = correct_unambiguous + correct_ambiguous + correct_unknown
        return cls(
            scheme=scheme,
            tagset_size=tagset_size,
            ambiguity_pct=_ratio(n_hypothesis_ambiguous, n_tokens),
            ambiguous_acc_pct=_ratio(correct_ambiguous, n_ambiguous),
            unknown_acc_pct=_ratio(correct_unknown, n_unknown) if mode == "held_out" else None,
            overall_acc_pct=_ratio(correct, n_tokens),
            n_ambiguous=n_ambiguous,
            n_unknown=n_unknown,
            n_tokens=n_tokens,
            n_unambiguous=n_unambiguous,
            n_hypothesis_ambiguous=n_hypothesis_ambiguous,
            correct_unambiguous=correct_unambiguous,
            correct_ambiguous=correct_ambiguous,
            correct_unknown=correct_unknown,
            mode=mode,
        )

    def category_accuracy(self, name: str) -> Fraction | None:
        """Exact accuracy ratio (0..1) for 'unambiguous', 'ambiguous' or 'unknown'."""
        n = getattr(self, f"n_{name}")
        c = getattr(self, f"correct_{name}")
        return Fraction(c, n) if n else None


def degree_of_ambiguity(test: TaggedCorpus, model: HmmModel, guesser=None) -> Fraction:
    """Percentage of test tokens with more than one hypothesised tag."""
    n = test.token_count
    if n == 0:
        raise DataError("empty test corpus")
    amb = sum(1 for tok in test.tokens() if len(hypothesize(model, tok.surface, guesser).candidates) > 1)
    return Fraction(100 * amb, n)


def evaluate(test: TaggedCorpus, predicted: Sequence[Sequence[str]], model: HmmModel,
             guesser=None, mode: str = "held_out", scheme: str = "",
             tagset_size: int | None = None) -> EvalReport:
    if len(predicted) != len(test.sentences):
        raise DataError(f"{len(predicted)} predicted sentences for {len(test.sentences)} test sentences")
    n = {"unambiguous": 0, "ambiguous": 0, "unknown": 0}
    ok = dict.fromkeys(n, 0)
    hyp_amb = 0
    for sent, tags in zip(test.sentences, predicted):
        if len(sent) != len(tags):
            raise DataError("predicted tag sequence length differs from sentence length")
        for tok, guess in zip(sent, tags):
            h = hypothesize(model, tok.surface, guesser)
            if len(h.candidates) > 1:
                hyp_amb += 1
            cat = "unknown" if h.is_unknown else "ambiguous" if len(h.candidates) > 1 else "unambiguous"
            n[cat] += 1
            ok[cat] += guess == tok.tag
    return EvalReport.from_counts(
        scheme, model.tagset.size if tagset_size is None else tagset_size, mode,
        n_tokens=sum(n.values()), n_unambiguous=n["unambiguous"], n_ambiguous=n["ambiguous"],
        n_unknown=n["unknown"], n_hypothesis_ambiguous=hyp_amb,
        correct_unambiguous=ok["unambiguous"], correct_ambiguous=ok["ambiguous"],
        correct_unknown=ok["unknown"],
    )


@dataclass(frozen=True)
class ExperimentConfig:
    split: float = 0.95
    smoothing: bool = True
    guesser: Guesser | None = None
    closed: frozenset = field(default_factory=frozenset)
    sample_size: int | None = None


def run_experiment(corpus: TaggedCorpus, scheme: ReductionScheme, mode: str = "held_out",
                   config: ExperimentConfig = ExperimentConfig()) -> EvalReport:
    """Reduce, split, train, tag the test part and score it."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    reduced = apply_scheme(corpus, scheme)
    closed = reduce_closed(config.closed, scheme)
    size = tagset_of(reduced, closed & reduced.tags).size
    fraction = config.split if mode == "held_out" else 1.0
    train_part, test_part = split_corpus(reduced, fraction, mode, config.sample_size)
    model = train(train_part, config.smoothing, closed)
    guesser = config.guesser.relabel(scheme.map_tag) if config.guesser else None
    predicted = [viterbi(model, sent, guesser) for sent in test_part.sentences]
    report = evaluate(test_part, predicted, model, guesser, mode, scheme.code, size)
    log.info("%s: %d tags, ambiguous acc %s", scheme.code, size, pct(report.ambiguous_acc_pct))
    return report


def _job(args) -> EvalReport:
    corpus, features, code, mode, config = args
    return run_experiment(corpus, ReductionScheme(features, code), mode, config)


def sweep(corpus: TaggedCorpus, features: dict, codes: Sequence[str], mode: str = "held_out",
          config: ExperimentConfig = ExperimentConfig(), workers: int = 1) -> list[EvalReport]:
    """One report per code, in the order given."""
    for code in codes:
        try:
            ReductionScheme(features, code)
        except DataError as e:
            raise SweepError(code, e) from e
    jobs = [(corpus, features, code, mode, config) for code in codes]
    if workers <= 1 or len(jobs) <= 1:
        out = []
        for job in jobs:
            try:
                out.append(_job(job))
            except Exception as e:
                raise SweepError(job[2], e) from e
        return out
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        futures = [pool.submit(_job, job) for job in jobs]
        out = []
        for job, fut in zip(jobs, futures):
            try:
                out.append(fut.result())
            except Exception as e:
                for f in futures:
                    f.cancel()
                raise SweepError(job[2], e) from e
        return out


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return pct(v)
    return str(v)


def emit_report(reports: Sequence[EvalReport], fmt: str = "tsv") -> str:
    if not reports:
        raise DataError("no reports to emit")
    rows = [
        (str(k), r.scheme, str(r.tagset_size), pct(r.ambiguity_pct), _cell(r.ambiguous_acc_pct),
         _cell(r.unknown_acc_pct), _cell(r.overall_acc_pct), _cell(r.n_ambiguous),
         _cell(r.n_unknown), _cell(r.n_tokens))
        for k, r in enumerate(reports, start=1)
    ]
    if fmt == "tsv":
        return "".join("\t".join(row) + "\n" for row in [TSV_COLUMNS, *rows])
    if fmt == "plot_points":
        pts = sorted(zip(reports, rows), key=lambda rr: (-rr[0].tagset_size, int(rr[1][0])))
        return "tagset_size,accuracy_pct,index\n" + "".join(
            f"{r.tagset_size},{row[4]},{row[0]}\n" for r, row in pts)
    if fmt == "pretty":
        header = ("#", "Tagset", "Size", "Ambig %", "Amb acc %", "Unk acc %", "Overall %",
                  "N amb", "N unk", "N tok")
        widths = [max(len(x) for x in col) for col in zip(header, *rows)]
        line = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip()
        body = [line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]
        note = ("# ambiguity counts every test token (known or unknown) with >1 hypothesised tag;\n"
                "# ambiguous accuracy covers known words with >1 tag, unknown accuracy words unseen in training\n")
        return note + "\n".join(body) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
