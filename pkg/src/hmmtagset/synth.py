"""Seeded synthetic corpora drawn from an explicit HMM.

Tags are base classes crossed with inflectional feature axes, e.g. ``T3-G1-N0``
for base 3, gender value 1, number value 0.  Transitions favour agreement on
feature values so the finer tagset carries real information.  The generating
parameters are kept (:class:`TrueHmm`) for oracle decoding.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import string
from dataclasses import asdict, dataclass, field

from hmmtagset.corpus import TaggedCorpus, Token
from hmmtagset.errors import DataError
from hmmtagset.hmm import BOUNDARY, best_path

SUFFIX_ALPHABET = "aeiou" + "nrst"


@dataclass(frozen=True)
class SyntheticSpec:
    base_tags: int = 8
    axes: tuple = (("G", 2), ("N", 2))
    vocab_size: int = 3000
    ambiguity: float = 0.4
    n_tokens: int = 50_000
    min_len: int = 4
    max_len: int = 20
    agreement: float = 4.0
    suffix_marking: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple((str(a), int(n)) for a, n in self.axes))
        letters = [a for a, _ in self.axes]
        if any(len(a) != 1 or not a.isalpha() or not a.isupper() for a in letters):
            raise DataError("axis names must be single uppercase letters")
        if len(set(letters)) != len(letters):
            raise DataError("duplicate axis letters")
        if any(n < 1 for _, n in self.axes) or self.base_tags < 1:
            raise DataError("cardinalities must be positive")
        if not 0 <= self.ambiguity < 1:
            raise DataError("ambiguity target must be in [0, 1)")
        if not 1 <= self.min_len <= self.max_len:
            raise DataError("need 1 <= min_len <= max_len")
        if self.n_tokens < 1:
            raise DataError("n_tokens must be positive")

    @property
    def tags(self) -> list[str]:
        values = [[f"{a}{v}" for v in range(n)] for a, n in self.axes]
        return ["-".join((f"T{b}",) + combo)
                for b in range(self.base_tags)
                for combo in itertools.product(*values)]

    @property
    def n_ambiguous_types(self) -> int:
        return len(self.tags) if self.ambiguity > 0 else 0


def scheme_rules(spec: SyntheticSpec) -> str:
    """Rule file removing each feature axis of the synthetic tagset."""
    lines = []
    for axis, n in spec.axes:
        lines.append(f"FEATURE {axis}")
        for v in range(n):
            lines.append(f"RULE *-{axis}{v}-* => $1-$2")
            lines.append(f"RULE *-{axis}{v} => $1")
    return "\n".join(lines) + "\n"


@dataclass
class TrueHmm:
    """Generating parameters: probabilities, not counts."""

    start: dict  # tag -> P(tag | boundary)
    trans: dict  # tag -> {tag -> P}
    emit: dict  # tag -> {word -> P}
    suffixes: dict = field(default_factory=dict)  # tag -> suffix when suffix-marked

    def __post_init__(self):
        self.word_tags = {}
        for tag in sorted(self.emit):
            for w in self.emit[tag]:
                self.word_tags.setdefault(w, []).append(tag)

    def decode(self, words) -> list[str]:
        """Viterbi with the true parameters.

        Sentence length is drawn independently of the tags, so the end
        transition is a constant and is left out.
        """
        words = [w.surface if isinstance(w, Token) else w for w in words]
        cands = [self.word_tags[w] for w in words]

        def lt(i, j):
            if j == BOUNDARY:
                return 0.0
            p = self.start[j] if i == BOUNDARY else self.trans[i][j]
            return math.log(p) if p > 0 else float("-inf")

        return best_path(cands, lt, lambda k, t: math.log(self.emit[t][words[k]]))[0]

    def to_json(self) -> str:
        return json.dumps({"start": self.start, "trans": self.trans, "emit": self.emit,
                           "suffixes": self.suffixes}, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "TrueHmm":
        d = json.loads(text)
        return cls(d["start"], d["trans"], d["emit"], d.get("suffixes", {}))


def _normalise(weights: dict) -> dict:
    z = sum(weights.values())
    return {k: v / z for k, v in weights.items()}


def _sample(rng: random.Random, dist: list[tuple[str, float]]) -> str:
    r = rng.random()
    acc = 0.0
    for k, p in dist:
        acc += p
        if r < acc:
            return k
    return dist[-1][0]


def generate_synthetic_corpus(spec: SyntheticSpec) -> tuple[TaggedCorpus, TrueHmm]:
    rng = random.Random(spec.seed)
    tags = spec.tags
    n_tags = len(tags)
    n_amb = spec.n_ambiguous_types
    n_unamb = spec.vocab_size - n_amb
    need = n_tags if spec.ambiguity < 1 else 0
    if n_unamb < need:
        raise DataError(
            f"vocabulary of {spec.vocab_size} too small: {n_tags} tags need "
            f"{n_amb} ambiguous plus at least {need} unambiguous word types"
        )

    suffixes = {}
    if spec.suffix_marking:
        pairs = ["".join(p) for p in itertools.product(SUFFIX_ALPHABET, repeat=2)]
        if len(pairs) < n_tags:
            raise DataError("too many tags for distinct two-letter suffixes")
        rng.shuffle(pairs)
        suffixes = dict(zip(tags, pairs))

    used = set()

    def new_word(tag):
        while True:
            stem = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(3, 7)))
            w = stem + suffixes.get(tag, "")
            if w not in used:
                used.add(w)
                return w

    # ambiguous types: each shares two tags; every tag is covered
    word_sets: dict[str, list[str]] = {t: [] for t in tags}
    amb_words: dict[str, list[str]] = {t: [] for t in tags}
    order = tags[:]
    rng.shuffle(order)
    base_of = {t: t.split("-")[0] for t in tags}
    for k in range(n_amb):
        first = order[k % n_tags]
        same_base = [t for t in tags if t != first and base_of[t] == base_of[first]]
        pool = same_base if same_base and k % 2 == 0 else [t for t in tags if t != first]
        if not pool:
            break
        second = rng.choice(pool)
        w = new_word(first)
        amb_words[first].append(w)
        amb_words[second].append(w)

    # unambiguous types, dealt round-robin over a shuffled tag order
    deal = tags[:]
    rng.shuffle(deal)
    for k in range(n_unamb):
        t = deal[k % n_tags]
        word_sets[t].append(new_word(t))

    emit = {}
    for t in tags:
        dist = {}
        amb = amb_words[t]
        plain = word_sets[t]
        amb_mass = spec.ambiguity if amb and plain else (1.0 if amb else 0.0)
        for w in amb:
            dist[w] = amb_mass / len(amb)
        if plain:
            z = sum(1.0 / (r + 1) for r in range(len(plain)))
            for r, w in enumerate(plain):
                dist[w] = (1 - amb_mass) / ((r + 1) * z)
        emit[t] = dist

    base = {b: {c: rng.gammavariate(0.4, 1.0) + 1e-3 for c in range(spec.base_tags)}
            for b in range(spec.base_tags)}
    feat = {t: t.split("-")[1:] for t in tags}
    bidx = {t: int(base_of[t][1:]) for t in tags}
    trans = {}
    for t in tags:
        w = {}
        for u in tags:
            agree = sum(1 for a, b in zip(feat[t], feat[u]) if a == b)
            w[u] = base[bidx[t]][bidx[u]] * spec.agreement ** agree
        trans[t] = _normalise(w)
    start = _normalise({t: rng.gammavariate(0.5, 1.0) + 1e-3 for t in tags})

    true = TrueHmm(start, trans, emit, suffixes)
    emit_lists = {t: sorted(d.items()) for t, d in emit.items()}
    trans_lists = {t: list(d.items()) for t, d in trans.items()}
    start_list = list(start.items())

    sentences = []
    remaining = spec.n_tokens
    while remaining > 0:
        n = min(rng.randint(spec.min_len, spec.max_len), remaining)
        tag = _sample(rng, start_list)
        sent = []
        for k in range(n):
            if k:
                tag = _sample(rng, trans_lists[tag])
            sent.append(Token(_sample(rng, emit_lists[tag]), tag))
        sentences.append(tuple(sent))
        remaining -= n
    return TaggedCorpus(tuple(sentences)), true


def guesser_rules(true: TrueHmm) -> str:
    """Suffix rules that pin each suffix-marked word to its tag."""
    lines = [f"GUESS {k} suffix:{s} -> {t}"
             for k, (t, s) in enumerate(sorted(true.suffixes.items()), start=1)]
    return "\n".join(lines) + ("\n" if lines else "")


def realized_ambiguity(corpus: TaggedCorpus) -> float:
    """Fraction of tokens whose word type occurs with more than one tag."""
    seen: dict[str, set] = {}
    for tok in corpus.tokens():
        seen.setdefault(tok.surface, set()).add(tok.tag)
    amb = sum(1 for tok in corpus.tokens() if len(seen[tok.surface]) > 1)
    return amb / corpus.token_count


def spec_to_json(spec: SyntheticSpec) -> dict:
    return asdict(spec)
