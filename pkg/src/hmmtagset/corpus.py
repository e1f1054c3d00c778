"""Vertical-format tagged corpora: parsing, splitting, serialization, lexicons.

A corpus file holds one token per line as ``surface<TAB>tag``.  A blank line
ends a sentence and lines starting with ``#`` are comments.  A line holding
only a surface form is an untagged token (used when tagging fresh text).
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from hmmtagset.errors import DataError


class CorpusError(DataError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    surface: str
    tag: str | None = None

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise CorpusError(f"invalid surface form {self.surface!r}")


Sentence = tuple  # tuple[Token, ...]


@dataclass(frozen=True)
class TaggedCorpus:
    sentences: tuple
    skipped: int = 0
    skipped_lines: tuple = field(default=(), compare=False)

    @classmethod
    def from_pairs(cls, sentences: Iterable[Iterable[tuple[str, str | None]]]) -> "TaggedCorpus":
        """Build a corpus from nested ``(surface, tag)`` pairs."""
        out = []
        for sent in sentences:
            toks = tuple(Token(w, t) for w, t in sent)
            if toks:
                out.append(toks)
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.sentences)

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent

    @property
    def tags(self) -> frozenset:
        return frozenset(t.tag for t in self.tokens() if t.tag is not None)

    @property
    def is_tagged(self) -> bool:
        return all(t.tag is not None for t in self.tokens())


def _lines(source: str | TextIO) -> Iterator[str]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        yield line.rstrip("\r\n")


def parse_corpus(source: str | TextIO, strict: bool = False) -> TaggedCorpus:
    """Parse a vertical-format corpus.

    In lenient mode malformed lines are skipped and recorded on the result
    (``skipped`` / ``skipped_lines``); in strict mode the first one raises.
    A token with an empty tag field is an error in both modes.
    """
    sentences = []
    current: list[Token] = []
    skipped = []
    saw_content = False

    for lineno, line in enumerate(_lines(source), start=1):
        if line.startswith("#"):
            saw_content = True
            continue
        if not line.strip():
            if current:
                sentences.append(tuple(current))
                current = []
            continue
        saw_content = True
        fields = line.split("\t")
        if len(fields) == 2 and fields[0] and not fields[1].strip():
            raise CorpusError("token with empty tag field", lineno)
        ok = (
            1 <= len(fields) <= 2
            and fields[0]
            and not any(c.isspace() for c in fields[0])
            and (len(fields) == 1 or not any(c.isspace() for c in fields[1]))
        )
        if not ok:
            if strict:
                raise CorpusError(f"malformed line {line!r}", lineno)
            skipped.append(lineno)
            continue
        current.append(Token(fields[0], fields[1] if len(fields) == 2 else None))

    if current:
        sentences.append(tuple(current))
    if not saw_content:
        raise CorpusError("empty input")
    return TaggedCorpus(tuple(sentences), len(skipped), tuple(skipped))


def read_corpus(path, strict: bool = False) -> TaggedCorpus:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f, strict=strict)


def serialize_corpus(corpus: TaggedCorpus) -> str:
    parts = []
    for sent in corpus.sentences:
        for tok in sent:
            parts.append(tok.surface if tok.tag is None else f"{tok.surface}\t{tok.tag}")
        parts.append("")
    return "".join(p + "\n" for p in parts)


def split_corpus(
    corpus: TaggedCorpus,
    train_fraction: float = 0.95,
    mode: str = "held_out",
    sample_size: int | None = None,
) -> tuple[TaggedCorpus, TaggedCorpus]:
    """Split by sentence into ``(train, test)``.

    ``held_out``: the first ``ceil(train_fraction * n)`` sentences train, the
    rest test.  ``in_sample``: train on everything and test on an evenly spaced
    sample of sentences holding at least ``sample_size`` tokens (default: 5%
    of the corpus).
    """
    n = len(corpus.sentences)
    if n == 0:
        raise CorpusError("cannot split an empty corpus")
    if not 0 < train_fraction <= 1:
        raise ValueError(f"train_fraction must be in (0, 1], got {train_fraction}")

    if mode == "held_out":
        # round() guards against 0.95 * 100 = 95.00000000000001 style noise
        n_train = math.ceil(round(train_fraction * n, 9))
        if n_train >= n:
            raise CorpusError(
                f"train fraction {train_fraction} leaves no test sentences ({n} sentences)"
            )
        return (
            TaggedCorpus(corpus.sentences[:n_train]),
            TaggedCorpus(corpus.sentences[n_train:]),
        )

    if mode == "in_sample":
        total = corpus.token_count
        if sample_size is None:
            sample_size = max(1, math.ceil(total / 20))
        sample_size = min(sample_size, total)
        lengths = [len(s) for s in corpus.sentences]
        for k in range(1, n + 1):
            idx = [i * n // k for i in range(k)]
            if sum(lengths[i] for i in idx) >= sample_size:
                break
        test = tuple(corpus.sentences[i] for i in idx)
        return TaggedCorpus(corpus.sentences), TaggedCorpus(test)

    raise ValueError(f"unknown split mode {mode!r}")


class Lexicon:
    """Word form to tag occurrence counts."""

    def __init__(self, entries: dict[str, dict[str, int]] | None = None):
        self.entries: dict[str, dict[str, int]] = {}
        for word, tags in (entries or {}).items():
            if not tags:
                raise DataError(f"lexicon entry {word!r} has no tags")
            for tag, count in tags.items():
                if count < 1:
                    raise DataError(f"non-positive count for {word!r}/{tag}")
            self.entries[word] = dict(tags)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lexicon) and self.entries == other.entries

    def tags(self, word: str) -> tuple[str, ...]:
        """Sorted hypothesis set for a known word, empty for an unknown one."""
        return tuple(sorted(self.entries.get(word, ())))

    def count(self, word: str, tag: str) -> int:
        return self.entries.get(word, {}).get(tag, 0)

    @property
    def mass(self) -> int:
        return sum(sum(tags.values()) for tags in self.entries.values())

    def items(self) -> Iterator[tuple[str, str, int]]:
        for word in sorted(self.entries):
            tags = self.entries[word]
            for tag in sorted(tags):
                yield word, tag, tags[tag]


def build_lexicon(corpus: TaggedCorpus) -> Lexicon:
    if corpus.token_count == 0:
        raise CorpusError("cannot build a lexicon from an empty corpus")
    counts = Counter()
    for tok in corpus.tokens():
        if tok.tag is None:
            raise CorpusError(f"untagged token {tok.surface!r}")
        counts[tok.surface, tok.tag] += 1
    entries: dict[str, dict[str, int]] = {}
    for (word, tag), c in counts.items():
        entries.setdefault(word, {})[tag] = c
    return Lexicon(entries)


def serialize_lexicon(lexicon: Lexicon) -> str:
    return "".join(f"{w}\t{t}\t{c}\n" for w, t, c in lexicon.items())


def parse_lexicon(source: str | TextIO) -> Lexicon:
    entries: dict[str, dict[str, int]] = {}
    for lineno, line in enumerate(_lines(source), start=1):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise CorpusError(f"malformed lexicon line {line!r}", lineno)
        word, tag, count = fields
        try:
            n = int(count)
        except ValueError:
            raise CorpusError(f"bad count {count!r}", lineno) from None
        if n < 1:
            raise CorpusError(f"bad count {count!r}", lineno)
        entries.setdefault(word, {})[tag] = n
    return Lexicon(entries)
