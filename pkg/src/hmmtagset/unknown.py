"""Surface-feature guessing for unknown words, and lookup analysis of unknowns.

Guesser rule file lines look like::

    GUESS 1 cap -> NP
    GUESS 2 suffix:ed -> VBD,VBN
    GUESS 3 shape:d*d -> CD

The lowest priority number that matches wins.  Features: ``suffix:<text>``,
``prefix:<text>``, ``cap`` (contains an uppercase letter), ``allcap`` (every
cased character is uppercase), ``digit``, ``hyphen`` and ``shape:<glob>``,
where the shape maps uppercase to ``X``, lowercase to ``x`` and digits to
``d``, collapses repeats, and is matched with shell-style wildcards.
"""

from __future__ import annotations

import io
import re
from collections import Counter
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from hmmtagset._fmt import pct
from hmmtagset.corpus import Lexicon, TaggedCorpus
from hmmtagset.errors import DataError
from hmmtagset.tagset import TagsetSpec

FEATURES = ("suffix", "prefix", "cap", "allcap", "digit", "hyphen", "shape")
_WITH_ARG = {"suffix", "prefix", "shape"}


class GuesserError(DataError):
    pass


def word_shape(word: str) -> str:
    out = []
    for c in word:
        s = "X" if c.isupper() else "x" if c.islower() else "d" if c.isdigit() else c
        if not out or out[-1] != s:
            out.append(s)
    return "".join(out)


@dataclass(frozen=True)
class GuesserRule:
    feature: str
    arg: str
    allowed: frozenset
    priority: int

    def __post_init__(self):
        if self.feature not in FEATURES:
            raise GuesserError(f"unknown feature {self.feature!r}")
        if (self.feature in _WITH_ARG) != bool(self.arg):
            raise GuesserError(f"feature {self.feature!r} argument mismatch: {self.arg!r}")
        if not self.allowed:
            raise GuesserError("guesser rule with no tags")
        object.__setattr__(self, "allowed", frozenset(self.allowed))

    def matches(self, word: str) -> bool:
        f = self.feature
        if f == "suffix":
            return word.endswith(self.arg)
        if f == "prefix":
            return word.startswith(self.arg)
        if f == "cap":
            return any(c.isupper() for c in word)
        if f == "allcap":
            return any(c.isupper() for c in word) and not any(c.islower() for c in word)
        if f == "digit":
            return any(c.isdigit() for c in word)
        if f == "hyphen":
            return "-" in word
        return fnmatchcase(word_shape(word), self.arg)

    def relabel(self, fn) -> "GuesserRule":
        return GuesserRule(self.feature, self.arg, frozenset(fn(t) for t in self.allowed), self.priority)


_LINE = re.compile(r"GUESS\s+(-?\d+)\s+(\S+)\s*->\s*(\S+)$")


def parse_guesser_file(source: str | TextIO) -> list[GuesserRule]:
    if isinstance(source, str):
        source = io.StringIO(source)
    rules = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise GuesserError(f"line {lineno}: expected 'GUESS <priority> <feature> -> tags', got {line!r}")
        prio, spec, tags = m.groups()
        feature, _, arg = spec.partition(":")
        tagset = frozenset(t for t in tags.split(",") if t)
        try:
            rules.append(GuesserRule(feature, arg, tagset, int(prio)))
        except GuesserError as e:
            raise GuesserError(f"line {lineno}: {e}") from None
    _check_priorities(rules)
    return sorted(rules, key=lambda r: r.priority)


def read_guesser_file(path) -> list[GuesserRule]:
    with open(path, encoding="utf-8") as f:
        return parse_guesser_file(f)


def _check_priorities(rules: Sequence[GuesserRule]) -> None:
    seen = Counter(r.priority for r in rules)
    dup = sorted(p for p, n in seen.items() if n > 1)
    if dup:
        raise GuesserError(f"duplicate guesser priorities: {dup}")


def validate_rules(rules: Sequence[GuesserRule], tagset: TagsetSpec) -> None:
    _check_priorities(rules)
    open_tags = set(tagset.open_tags)
    for r in rules:
        bad = r.allowed - open_tags
        if bad:
            raise GuesserError(
                f"rule {r.priority} allows tags outside the open class: {' '.join(sorted(bad))}"
            )


def guess_tags(word: str, rules: Sequence[GuesserRule], tagset: TagsetSpec) -> frozenset:
    """Allowed tags of the best matching rule, else the whole open class.

    Tags outside the open class are ignored; if nothing is left the open class
    is returned, so the result is never empty for a usable tagset.
    """
    open_tags = frozenset(tagset.open_tags)
    for rule in sorted(rules, key=lambda r: r.priority):
        if rule.matches(word):
            hit = rule.allowed & open_tags
            return hit or open_tags
    return open_tags


@dataclass(frozen=True)
class Guesser:
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda r: r.priority)))
        _check_priorities(self.rules)

    def guess(self, word: str, tagset: TagsetSpec) -> frozenset:
        return guess_tags(word, self.rules, tagset)

    def relabel(self, fn) -> "Guesser":
        return Guesser(tuple(r.relabel(fn) for r in self.rules))


@dataclass
class UnknownAnalysis:
    total_unknown: int
    found_in_full_lexicon: int
    single_tag: int
    multi_tag: int
    histogram: dict = field(default_factory=dict)  # number of tags -> types

    def __post_init__(self):
        if self.single_tag + self.multi_tag != self.found_in_full_lexicon:
            raise DataError("single + multi must equal found")
        if self.found_in_full_lexicon > self.total_unknown:
            raise DataError("found exceeds total unknown")

    @property
    def single_fraction(self) -> float | None:
        return self.single_tag / self.total_unknown if self.total_unknown else None

    @property
    def multi_fraction(self) -> float | None:
        return self.multi_tag / self.total_unknown if self.total_unknown else None


def analyze_unknown_words(full_lexicon: Lexicon, train_lexicon: Lexicon, test: TaggedCorpus) -> UnknownAnalysis:
    """Look up the test's unknown word types in a lexicon from the whole corpus.

    Counting is by type: each distinct unknown surface form counts once.
    """
    unknown = sorted({t.surface for t in test.tokens() if t.surface not in train_lexicon})
    hist = Counter()
    for w in unknown:
        hist[len(full_lexicon.tags(w))] += 1
    not_found = hist.pop(0, 0)
    single = hist.get(1, 0)
    found = len(unknown) - not_found
    return UnknownAnalysis(len(unknown), found, single, found - single, dict(sorted(hist.items())))


def format_analysis(a: UnknownAnalysis) -> str:
    def share(n):
        return pct(Fraction(100 * n, a.total_unknown) if a.total_unknown else None)

    lines = [
        "# unknown-word analysis (counted by word type, not token)",
        f"unknown_types\t{a.total_unknown}",
        f"found_in_full_lexicon\t{a.found_in_full_lexicon}\t{share(a.found_in_full_lexicon)}%",
        f"single_tag\t{a.single_tag}\t{share(a.single_tag)}%",
        f"multi_tag\t{a.multi_tag}\t{share(a.multi_tag)}%",
        "# tags_per_type\ttypes",
    ]
    lines += [f"{k}\t{v}" for k, v in sorted(a.histogram.items())]
    return "\n".join(lines) + "\n"
