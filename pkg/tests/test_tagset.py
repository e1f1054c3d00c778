import itertools
import random

import pytest

from hmmtagset.corpus import TaggedCorpus
from hmmtagset.tagset import (
    ReductionRule,
    ReductionScheme,
    SchemeError,
    TagsetSpec,
    apply_scheme,
    parse_closed_file,
    parse_scheme_file,
    read_scheme_file,
    reduce_closed,
    scheme_code_enumerate,
    tagset_of,
)

from conftest import FIXTURES, RULES, corpus_of


def test_parse_readback():
    rules = parse_scheme_file("FEATURE N\nRULE NN-SG => NN\nRULE NN-PL => NN")
    assert list(rules) == ["N"]
    assert rules["N"] == (ReductionRule("NN-SG", "NN"), ReductionRule("NN-PL", "NN"))


def test_capture_arity():
    assert parse_scheme_file("FEATURE N\nRULE V-*-SG => V-$1")["N"][0].apply("V-3-SG") == "V-3"
    with pytest.raises(SchemeError, match=r"\$2"):
        parse_scheme_file("FEATURE N\nRULE V-*-SG => V-$2")


def test_duplicate_feature():
    with pytest.raises(SchemeError, match="duplicate"):
        parse_scheme_file("FEATURE N\nRULE A => B\nFEATURE n\nRULE C => D\n")


@pytest.mark.parametrize("text", ["RULE A => B", "FEATURE N\nRULE A B", "FEATURE NN\n", "BOGUS"])
def test_bad_files(text):
    with pytest.raises(SchemeError):
        parse_scheme_file(text)


def test_swedish_style_fixture():
    rules = read_scheme_file(FIXTURES / "swedish_style.rules")
    assert list(rules) == ["G", "N", "D", "C"]
    assert all(len(r) == 2 for r in rules.values())


def test_rule_semantics():
    r = ReductionRule("*-G*-*", "$1-$3")
    assert r.apply("T3-G1-N0") == "T3-N0"
    assert r.apply("T3-N0") is None
    assert ReductionRule("NN", "N").apply("NNS") is None  # whole-tag match only


def test_first_match_wins():
    s = ReductionScheme({"X": (ReductionRule("A*", "first"), ReductionRule("AB", "second"))}, "x")
    assert s.map_tag("AB") == "first"
    assert s.map_tag("ZZ") == "ZZ"


def test_code_must_match_features():
    feats = {"G": (), "N": ()}
    for bad in ("G", "NG", "GNX", "gx"):
        with pytest.raises(SchemeError):
            ReductionScheme(feats, bad)


class TestEnumerate:
    def test_four(self):
        codes = scheme_code_enumerate("GNDC")
        assert len(codes) == 16 and len(set(codes)) == 16
        assert codes[0] == "GNDC" and codes[-1] == "gndc"

    def test_one(self):
        assert scheme_code_enumerate("V") == ["V", "v"]

    def test_two(self):
        assert scheme_code_enumerate(["G", "N"]) == ["GN", "Gn", "gN", "gn"]

    def test_lowercase_count_nondecreasing(self):
        codes = scheme_code_enumerate("CAPNV")
        counts = [sum(c.islower() for c in code) for code in codes]
        assert counts == sorted(counts) and len(codes) == 32

    @pytest.mark.parametrize("bad", ["GG", "", "ABCDEFGHI"])
    def test_errors(self, bad):
        with pytest.raises(SchemeError):
            scheme_code_enumerate(bad)


def _crossed_corpus():
    # 3 genders x 2 numbers = 6 noun tags
    tags = [f"NN-{g}-{n}" for g in ("MAS", "NEU", "UTR") for n in ("SIN", "PLU")]
    return TaggedCorpus.from_pairs([[(f"w{k}", t)] for k, t in enumerate(tags)]), tags


_GN_RULES = """
FEATURE G
RULE *-MAS-* => $1-$2
RULE *-NEU-* => $1-$2
RULE *-UTR-* => $1-$2
FEATURE N
RULE *-SIN => $1
RULE *-PLU => $1
"""


class TestApplyScheme:
    def test_identity(self):
        c, _ = _crossed_corpus()
        feats = parse_scheme_file(_GN_RULES)
        assert apply_scheme(c, ReductionScheme(feats, "GN")) == c

    def test_collapse_number(self):
        c = corpus_of("a/NN-SG b/NN-PL a/NN-PL")
        out = apply_scheme(c, ReductionScheme(parse_scheme_file("FEATURE N\nRULE NN-SG => NN\nRULE NN-PL => NN"), "n"))
        assert out.tags == {"NN"}
        assert out.token_count == 3

    def test_crossed_gN(self):
        # by hand: NN-MAS-SIN -> NN-SIN, ..., leaving NN-SIN and NN-PLU
        c, _ = _crossed_corpus()
        out = apply_scheme(c, ReductionScheme(parse_scheme_file(_GN_RULES), "gN"))
        assert out.tags == {"NN-SIN", "NN-PLU"}
        assert tagset_of(out).size == 2
        assert [t.surface for t in out.tokens()] == [t.surface for t in c.tokens()]

    def test_crossed_all_codes(self):
        c, _ = _crossed_corpus()
        feats = parse_scheme_file(_GN_RULES)
        sizes = {code: len(apply_scheme(c, ReductionScheme(feats, code)).tags) for code in scheme_code_enumerate("GN")}
        assert sizes == {"GN": 6, "Gn": 3, "gN": 2, "gn": 1}


class TestTagsetOf:
    def test_two_tags(self):
        assert tagset_of(corpus_of("a/X b/Y a/X")).size == 2

    def test_closed_flags(self, caplog):
        spec = tagset_of(corpus_of("a/X b/Y"), closed={"Y", "Q"})
        assert spec.closed == {"Y"}
        assert spec.open_tags == ("X",)
        assert "Q" in caplog.text

    def test_spec_checks_closed_subset(self):
        with pytest.raises(SchemeError):
            TagsetSpec({"A"}, {"B"})

    def test_closed_file(self):
        assert parse_closed_file("# c\nAT\n\nIN\n") == {"AT", "IN"}

    def test_reduce_closed(self):
        s = ReductionScheme(parse_scheme_file("FEATURE N\nRULE DT-* => DT"), "n")
        assert reduce_closed({"DT-SG", "IN"}, s) >= {"DT", "IN"}


# shipped rule files: idempotence and pairwise commutativity over a tag universe

def _literal_tags(features):
    tags = set()
    for rules in features.values():
        for r in rules:
            if "*" not in r.pattern:
                tags.add(r.pattern)
                tags.add(r.replacement)
    return tags


def _swedish_universe():
    out = set()
    for base in ("NN", "JJ", "PN"):
        for parts in itertools.product(("MAS", "NEU", "UTR", None), ("SIN", "PLU", None),
                                       ("IND", "DEF", None), ("NOM", "GEN", None)):
            out.add("-".join([base] + [p for p in parts if p]))
    return out


def _french_universe():
    out = set()
    for base in ("NOM", "DET", "ADJ", "VER", "AUX-avoir", "AUX-etre"):
        for parts in itertools.product(("1", "3", "6", None), ("m", "f", None), ("s", "p", None)):
            out.add("-".join([base] + [p for p in parts if p]))
    return out


_SHIPPED = {
    "swedish.rules": _swedish_universe,
    "french.rules": _french_universe,
    "english.rules": lambda: _literal_tags(read_scheme_file(RULES / "english.rules")) | {"AT", "IN", "VB"},
}


@pytest.mark.parametrize("name", sorted(_SHIPPED))
def test_shipped_rules_idempotent_and_commutative(name):
    feats = read_scheme_file(RULES / name)
    letters = list(feats)
    universe = _SHIPPED[name]()
    for code in scheme_code_enumerate(letters):
        s = ReductionScheme(feats, code)
        for t in universe:
            once = s.map_tag(t)
            assert s.map_tag(once) == once, (code, t)
    single = {a: ReductionScheme(feats, "".join(c.lower() if c == a else c for c in letters)) for a in letters}
    for a, b in itertools.combinations(letters, 2):
        for t in universe:
            assert single[a].map_tag(single[b].map_tag(t)) == single[b].map_tag(single[a].map_tag(t)), (a, b, t)


def test_shipped_code_counts():
    assert list(read_scheme_file(RULES / "swedish.rules")) == ["G", "N", "D", "C"]
    assert list(read_scheme_file(RULES / "french.rules")) == ["G", "N", "P", "V"]
    assert list(read_scheme_file(RULES / "english.rules")) == ["C", "A", "P", "N", "V"]


def _random_rules(rng, tags):
    lines = []
    for letter in rng.sample("GNDCPVA", rng.randint(1, 4)):
        lines.append(f"FEATURE {letter}")
        for _ in range(rng.randint(1, 3)):
            src = rng.choice(tags)
            if rng.random() < 0.5:
                lines.append(f"RULE {src} => {rng.choice(tags)}")
            else:
                lines.append(f"RULE {src[0]}* => {src[0]}$1" if rng.random() < 0.5 else f"RULE {src[0]}* => {src[0]}")
    return parse_scheme_file("\n".join(lines))


def test_random_monotone_and_surface_preserving():
    rng = random.Random(7)
    tags = ["A1", "A2", "B1", "B2", "C1", "C2"]
    for _ in range(50):
        c = TaggedCorpus.from_pairs([[(f"w{rng.randrange(9)}", rng.choice(tags)) for _ in range(rng.randint(1, 6))]
                                     for _ in range(rng.randint(1, 15))])
        feats = _random_rules(rng, tags)
        for code in scheme_code_enumerate(list(feats)):
            out = apply_scheme(c, ReductionScheme(feats, code))
            assert len(out.tags) <= len(c.tags)
            assert [[t.surface for t in s] for s in out.sentences] == [[t.surface for t in s] for s in c.sentences]
        upper = ReductionScheme(feats, "".join(feats))
        assert apply_scheme(c, upper) == c
