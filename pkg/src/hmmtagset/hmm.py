"""First-order HMM tagger: counting, add-one transition smoothing, Viterbi.

Transitions are estimated from tag-bigram counts with a boundary pseudo-tag
bracketing each sentence.  With smoothing on, one is added to every
transition count and each row total grows by the number of states.  Known
words emit ``count(word, tag) / freq(tag)``; unknown words emit a constant,
so only the transition model ranks their candidate tags.
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

from hmmtagset.corpus import CorpusError, Lexicon, TaggedCorpus, Token, build_lexicon
from hmmtagset.errors import DataError
from hmmtagset.tagset import TagsetSpec

BOUNDARY = "<S>"
FORMAT_VERSION = 1
NEG_INF = float("-inf")


class ModelError(DataError):
    pass


def _log(p: float) -> float:
    return math.log(p) if p > 0 else NEG_INF


@dataclass(frozen=True)
class HmmModel:
    tagset: TagsetSpec
    transitions: dict  # (from, to) -> raw count, zero counts absent
    tag_freq: dict  # tag (incl. BOUNDARY) -> count of outgoing transitions
    lexicon: Lexicon
    smoothing: bool = True
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if BOUNDARY in self.tagset.tags:
            raise ModelError(f"{BOUNDARY} is reserved for the sentence boundary")

    @property
    def tags(self) -> tuple[str, ...]:
        return self.tagset.ordered

    @property
    def states(self) -> tuple[str, ...]:
        return self.tagset.ordered + (BOUNDARY,)

    @property
    def n_states(self) -> int:
        return len(self.tagset.tags) + 1

    def count(self, i: str, j: str) -> int:
        return self.transitions.get((i, j), 0)

    def freq(self, tag: str) -> int:
        return self.tag_freq.get(tag, 0)

    def _check_state(self, tag: str) -> None:
        if tag != BOUNDARY and tag not in self.tagset.tags:
            raise ModelError(f"unknown tag {tag!r}")

    def log_transition_table(self) -> dict[str, dict[str, float]]:
        """Cached ``table[i][j] = log P(j | i)`` over all states."""
        table = self._cache.get("logtrans")
        if table is None:
            table = {i: {j: _log(transition_prob(self, i, j)) if self.smoothing or self.freq(i) else NEG_INF
                         for j in self.states}
                     for i in self.states}
            self._cache["logtrans"] = table
        return table


def train(corpus: TaggedCorpus, smoothing: bool = True, closed: Iterable[str] = ()) -> HmmModel:
    if corpus.token_count == 0:
        raise CorpusError("cannot train on an empty corpus")
    trans = Counter()
    freq = Counter()
    for sent in corpus.sentences:
        prev = BOUNDARY
        for tok in sent:
            if tok.tag is None:
                raise CorpusError(f"untagged token {tok.surface!r} in training data")
            trans[prev, tok.tag] += 1
            freq[prev] += 1
            prev = tok.tag
        trans[prev, BOUNDARY] += 1
        freq[prev] += 1
    tags = corpus.tags
    return HmmModel(
        tagset=TagsetSpec(tags, frozenset(closed) & tags),
        transitions=dict(trans),
        tag_freq=dict(freq),
        lexicon=build_lexicon(corpus),
        smoothing=smoothing,
    )


def transition_prob(model: HmmModel, i: str, j: str) -> float:
    model._check_state(i)
    model._check_state(j)
    c = model.count(i, j)
    f = model.freq(i)
    if model.smoothing:
        return (c + 1) / (f + model.n_states)
    if f == 0:
        raise ModelError(f"tag {i!r} has zero frequency; unsmoothed row undefined")
    return c / f


def emission_prob(model: HmmModel, word: str, tag: str) -> float:
    if word not in model.lexicon:
        return 1.0
    f = model.freq(tag)
    return model.lexicon.count(word, tag) / f if f else 0.0


def relabel(model: HmmModel, mapping: dict[str, str] | Callable[[str], str]) -> HmmModel:
    """Merge a trained model's counts under a tag relabelling."""
    fn = mapping.get if isinstance(mapping, dict) else mapping

    def m(tag):
        if tag == BOUNDARY:
            return tag
        out = fn(tag)
        return tag if out is None else out

    trans = Counter()
    for (i, j), c in model.transitions.items():
        trans[m(i), m(j)] += c
    freq = Counter()
    for t, c in model.tag_freq.items():
        freq[m(t)] += c
    entries: dict[str, dict[str, int]] = {}
    for word, tag, c in model.lexicon.items():
        row = entries.setdefault(word, {})
        row[m(tag)] = row.get(m(tag), 0) + c
    tags = frozenset(m(t) for t in model.tagset.tags)
    closed = frozenset(m(t) for t in model.tagset.closed)
    return HmmModel(TagsetSpec(tags, closed), dict(trans), dict(freq), Lexicon(entries), model.smoothing)


@dataclass(frozen=True)
class Hypothesis:
    position: int
    candidates: tuple
    is_unknown: bool


def hypothesize(model: HmmModel, word: str, guesser=None, position: int = 0) -> Hypothesis:
    """Candidate tags for one word.

    Known words get their lexicon tags.  Unknown words get every open-class
    tag, narrowed by ``guesser`` (anything with a ``guess(word, tagset)``
    method) unless that would leave nothing.
    """
    known = model.lexicon.tags(word)
    if known:
        return Hypothesis(position, known, False)
    open_tags = model.tagset.open_tags
    if not open_tags:
        raise ModelError("no open-class tags to hypothesise for unknown words")
    cands = open_tags
    if guesser is not None:
        allowed = set(guesser.guess(word, model.tagset))
        narrowed = tuple(t for t in open_tags if t in allowed)
        if narrowed:
            cands = narrowed
    return Hypothesis(position, cands, True)


def _words(sentence) -> list[str]:
    return [t.surface if isinstance(t, Token) else t for t in sentence]


def best_path(
    candidates: Sequence[Sequence[str]],
    log_trans: Callable[[str, str], float],
    log_emit: Callable[[int, str], float],
) -> tuple[list[str], float]:
    """Viterbi over per-position candidate lists.

    Ties go to the earliest candidate, both for backpointers and the final
    state; with sorted candidate lists this picks, among optimal paths, the
    smallest one compared from the last position backwards.
    """
    if not candidates:
        raise ModelError("cannot decode an empty sentence")
    for k, c in enumerate(candidates):
        if not c:
            raise ModelError(f"empty hypothesis set at position {k}")

    delta = {j: log_trans(BOUNDARY, j) + log_emit(0, j) for j in candidates[0]}
    backptrs = []
    for pos in range(1, len(candidates)):
        prev = candidates[pos - 1]
        new, bp = {}, {}
        for j in candidates[pos]:
            best_i = prev[0]
            best = delta[best_i] + log_trans(best_i, j)
            for i in prev[1:]:
                s = delta[i] + log_trans(i, j)
                if s > best:
                    best, best_i = s, i
            new[j] = best + log_emit(pos, j)
            bp[j] = best_i
        delta = new
        backptrs.append(bp)

    last = candidates[-1]
    tag = last[0]
    score = delta[tag] + log_trans(tag, BOUNDARY)
    for j in last[1:]:
        s = delta[j] + log_trans(j, BOUNDARY)
        if s > score:
            score, tag = s, j

    path = [tag]
    for bp in reversed(backptrs):
        tag = bp[tag]
        path.append(tag)
    path.reverse()
    return path, score


def decode(
    model: HmmModel, sentence, guesser=None, candidates: Sequence[Sequence[str]] | None = None
) -> tuple[list[str], float]:
    """Best tag sequence and its log-probability.

    ``candidates`` overrides the per-word hypothesis sets.
    """
    words = _words(sentence)
    if not words:
        raise ModelError("cannot decode an empty sentence")
    if candidates is None:
        candidates = [hypothesize(model, w, guesser, k).candidates for k, w in enumerate(words)]
    table = model.log_transition_table()
    known = [w in model.lexicon for w in words]

    def log_emit(pos, tag):
        if not known[pos]:
            return 0.0
        return _log(emission_prob(model, words[pos], tag))

    return best_path(candidates, lambda i, j: table[i][j], log_emit)


def viterbi(model: HmmModel, sentence, guesser=None) -> list[str]:
    return decode(model, sentence, guesser)[0]


def path_log_prob(model: HmmModel, sentence, tags: Sequence[str]) -> float:
    """Log-probability of one tag path, summed in the same order as Viterbi."""
    words = _words(sentence)
    table = model.log_transition_table()

    def emit(k, t):
        return _log(emission_prob(model, words[k], t)) if words[k] in model.lexicon else 0.0

    score = table[BOUNDARY][tags[0]] + emit(0, tags[0])
    for k in range(1, len(tags)):
        score = score + table[tags[k - 1]][tags[k]] + emit(k, tags[k])
    return score + table[tags[-1]][BOUNDARY]


def save_model(model: HmmModel) -> str:
    out = [f"HMM-MODEL {FORMAT_VERSION}", f"SMOOTHING {'on' if model.smoothing else 'off'}", "TAGS"]
    for t in model.tags:
        out.append(f"{t}\t{int(t in model.tagset.closed)}\t{model.freq(t)}")
    out.append("TRANS")
    for i, j in sorted(model.transitions):
        c = model.transitions[i, j]
        if c:
            out.append(f"{i}\t{j}\t{c}")
    out.append("LEX")
    out.extend(f"{w}\t{t}\t{c}" for w, t, c in model.lexicon.items())
    return "\n".join(out) + "\n"


def load_model(source: str | TextIO) -> HmmModel:
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = [l.rstrip("\r\n") for l in source]
    if not lines or lines[0].split() != ["HMM-MODEL", str(FORMAT_VERSION)]:
        raise ModelError("not a version-1 model file")
    if len(lines) < 2 or lines[1] not in ("SMOOTHING on", "SMOOTHING off"):
        raise ModelError("missing SMOOTHING line")
    smoothing = lines[1] == "SMOOTHING on"

    tags, closed, freq, trans, lex = set(), set(), {}, {}, {}
    section = None
    for lineno, line in enumerate(lines[2:], start=3):
        if line in ("TAGS", "TRANS", "LEX"):
            section = line
            continue
        if not line:
            continue
        fields = line.split("\t")
        if section is None or len(fields) != 3:
            raise ModelError(f"line {lineno}: malformed model line {line!r}")
        try:
            n = int(fields[2])
        except ValueError:
            raise ModelError(f"line {lineno}: bad count {fields[2]!r}") from None
        if section == "TAGS":
            tags.add(fields[0])
            if fields[1] == "1":
                closed.add(fields[0])
            freq[fields[0]] = n
        elif section == "TRANS":
            trans[fields[0], fields[1]] = n
        else:
            lex.setdefault(fields[0], {})[fields[1]] = n
    freq[BOUNDARY] = sum(c for (i, _), c in trans.items() if i == BOUNDARY)
    return HmmModel(TagsetSpec(tags, closed), trans, freq, Lexicon(lex), smoothing)
