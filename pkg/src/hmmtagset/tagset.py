"""Tagset declarations and feature-condensing reduction schemes.

A rule file groups rewrite rules by grammatical feature::

    FEATURE N number
    RULE NN-SG => NN
    RULE V-*-SG => V-$1

``*`` captures a (greedy, nonempty) stretch of the tag and ``$k`` in the
replacement refers to the k-th capture.  A scheme code such as ``GnDc`` keeps
the uppercase distinctions and applies the rules of the lowercase features,
in code order.
"""

from __future__ import annotations

import io
import itertools
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

from hmmtagset.corpus import TaggedCorpus, Token
from hmmtagset.errors import DataError

log = logging.getLogger(__name__)

_REF = re.compile(r"\$(\d+)")


class SchemeError(DataError):
    pass


@dataclass(frozen=True)
class TagsetSpec:
    tags: frozenset
    closed: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "closed", frozenset(self.closed))
        if not self.closed <= self.tags:
            raise SchemeError(f"closed tags not in tagset: {sorted(self.closed - self.tags)}")

    def __len__(self) -> int:
        return len(self.tags)

    def __contains__(self, tag) -> bool:
        return tag in self.tags

    @property
    def size(self) -> int:
        return len(self.tags)

    @property
    def open_tags(self) -> tuple[str, ...]:
        return tuple(sorted(self.tags - self.closed))

    @property
    def ordered(self) -> tuple[str, ...]:
        return tuple(sorted(self.tags))


@dataclass(frozen=True)
class ReductionRule:
    pattern: str
    replacement: str

    def __post_init__(self):
        if not self.pattern or any(c.isspace() for c in self.pattern):
            raise SchemeError(f"bad rule pattern {self.pattern!r}")
        arity = self.pattern.count("*")
        for m in _REF.finditer(self.replacement):
            k = int(m.group(1))
            if not 1 <= k <= arity:
                raise SchemeError(
                    f"rule {self.pattern} => {self.replacement}: ${k} but pattern has {arity} wildcard(s)"
                )

    @cached_property
    def _regex(self) -> re.Pattern:
        return re.compile("(.+)".join(re.escape(p) for p in self.pattern.split("*")))

    def apply(self, tag: str) -> str | None:
        """Rewritten tag, or None when the pattern does not match."""
        m = self._regex.fullmatch(tag)
        if m is None:
            return None
        return _REF.sub(lambda r: m.group(int(r.group(1))), self.replacement)


def _apply_rules(rules: Iterable[ReductionRule], tag: str) -> str:
    for rule in rules:
        out = rule.apply(tag)
        if out is not None:
            return out
    return tag


@dataclass(frozen=True)
class ReductionScheme:
    features: dict  # letter -> tuple[ReductionRule, ...], declaration order
    code: str

    def __post_init__(self):
        letters = list(self.features)
        if len(self.code) != len(letters) or [c.upper() for c in self.code] != letters:
            raise SchemeError(
                f"code {self.code!r} does not match declared features {''.join(letters)!r}"
            )

    @property
    def active(self) -> tuple[str, ...]:
        """Letters whose rules are applied (lowercase in the code)."""
        return tuple(c.upper() for c in self.code if c.islower())

    def map_tag(self, tag: str) -> str:
        for letter in self.active:
            tag = _apply_rules(self.features[letter], tag)
        return tag

    def tag_map(self, tags: Iterable[str]) -> dict[str, str]:
        return {t: self.map_tag(t) for t in tags}


def parse_scheme_file(source: str | TextIO) -> dict[str, tuple[ReductionRule, ...]]:
    if isinstance(source, str):
        source = io.StringIO(source)
    groups: dict[str, list[ReductionRule]] = {}
    current = None
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "FEATURE":
            letter = rest.split()[0] if rest.split() else ""
            if len(letter) != 1 or not letter.isalpha():
                raise SchemeError(f"line {lineno}: feature must be a single letter, got {letter!r}")
            letter = letter.upper()
            if letter in groups:
                raise SchemeError(f"line {lineno}: duplicate feature letter {letter}")
            groups[letter] = []
            current = letter
        elif head == "RULE":
            if current is None:
                raise SchemeError(f"line {lineno}: RULE before any FEATURE")
            lhs, sep, rhs = rest.partition("=>")
            if not sep or not lhs.strip() or not rhs.strip():
                raise SchemeError(f"line {lineno}: expected 'RULE <pattern> => <replacement>'")
            try:
                groups[current].append(ReductionRule(lhs.strip(), rhs.strip()))
            except SchemeError as e:
                raise SchemeError(f"line {lineno}: {e}") from None
        else:
            raise SchemeError(f"line {lineno}: unrecognised directive {head!r}")
    return {k: tuple(v) for k, v in groups.items()}


def read_scheme_file(path) -> dict[str, tuple[ReductionRule, ...]]:
    with open(path, encoding="utf-8") as f:
        return parse_scheme_file(f)


def apply_scheme(corpus: TaggedCorpus, scheme: ReductionScheme) -> TaggedCorpus:
    if not scheme.active:
        return corpus
    cache: dict[str, str] = {}

    def rewrite(tok: Token) -> Token:
        if tok.tag is None:
            return tok
        new = cache.get(tok.tag)
        if new is None:
            new = cache[tok.tag] = scheme.map_tag(tok.tag)
        return tok if new == tok.tag else Token(tok.surface, new)

    return TaggedCorpus(tuple(tuple(rewrite(t) for t in s) for s in corpus.sentences))


def scheme_code_enumerate(features: Iterable[str]) -> list[str]:
    """All keep/drop codes, fewest dropped features first.

    >>> scheme_code_enumerate("GN")
    ['GN', 'Gn', 'gN', 'gn']
    """
    letters = [f.upper() for f in features]
    if not 1 <= len(letters) <= 8:
        raise SchemeError("need between 1 and 8 feature letters")
    if len(set(letters)) != len(letters):
        raise SchemeError(f"duplicate feature letters in {''.join(letters)!r}")
    masks = sorted(itertools.product((0, 1), repeat=len(letters)), key=lambda m: (sum(m), m))
    return ["".join(c.lower() if lower else c for c, lower in zip(letters, m)) for m in masks]


def parse_closed_file(source: str | TextIO) -> frozenset:
    if isinstance(source, str):
        source = io.StringIO(source)
    tags = set()
    for line in source:
        line = line.strip()
        if line and not line.startswith("#"):
            tags.add(line)
    return frozenset(tags)


def read_closed_file(path) -> frozenset:
    with open(path, encoding="utf-8") as f:
        return parse_closed_file(f)


def tagset_of(corpus: TaggedCorpus, closed: Iterable[str] = ()) -> TagsetSpec:
    """Distinct gold tags of ``corpus``; closed-class flags from ``closed``.

    Declared closed tags that never occur are dropped with a warning.
    """
    tags = corpus.tags
    closed = frozenset(closed)
    missing = closed - tags
    if missing:
        log.warning("closed-class tags absent from corpus: %s", " ".join(sorted(missing)))
    return TagsetSpec(tags, closed & tags)


def reduce_closed(closed: Iterable[str], scheme: ReductionScheme) -> frozenset:
    """Closed-class declaration carried over to a reduced tagset.

    A declared tag stays closed under its reduced name; names already in the
    reduced vocabulary are kept as given.
    """
    closed = frozenset(closed)
    return closed | {scheme.map_tag(t) for t in closed}
