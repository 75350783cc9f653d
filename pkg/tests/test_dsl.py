"""Structure-equation language: parsing, canonical printing, errors."""

import pytest

from nilcoh import dsl
from nilcoh.catalog import catalog
from nilcoh.dsl import DslError, FLAG_NAME, parse, parse_gauss, pretty

BASIC = """\
algebra "demo" dim 4
param t
flag invariant_cohomology_is_manifold_cohomology true

# two non-trivial equations
d f3 = f1^F1
d f4 = (1/(1-t*conj(t))) * f1^f2 - (t/(1-t*conj(t))) * f1^F2
"""


def test_parse_basic():
    spec = parse(BASIC)
    assert spec.name == "demo"
    assert spec.n == 4
    assert spec.params == ("t",)
    assert spec.flag_invariant_ok is True
    assert spec.d_gen(1, False).is_zero() and spec.d_gen(2, False).is_zero()
    assert not spec.d_gen(3, False).is_zero()
    c = spec.d_gen(4, False).coeff(((1, 2), ()))
    assert c.evaluate({"t": parse_gauss("1/2")}) == parse_gauss("4/3")


def test_flag_name_constant():
    assert FLAG_NAME == "invariant_cohomology_is_manifold_cohomology"
    spec = parse('algebra "x" dim 2\nflag invariant_cohomology_is_manifold_cohomology false')
    assert spec.flag_invariant_ok is False
    spec2 = parse('algebra "x" dim 2')
    assert spec2.flag_invariant_ok is None


def test_unicode_minus_accepted():
    spec = parse('algebra "x" dim 2\nd f2 = −1/2 * f1^F1')
    assert spec.d_gen(2, False).coeff(((1,), (1,))).const_value() == parse_gauss("-1/2")


def test_pretty_is_canonical_fixed_point():
    spec = parse(BASIC)
    once = pretty(spec)
    assert pretty(parse(once)) == once


def test_pretty_round_trips_every_catalog_entry():
    for entry in catalog():
        text = pretty(entry.spec)
        reparsed = parse(text)
        assert pretty(reparsed) == text
        assert reparsed.name == entry.spec.name
        assert reparsed.params == entry.spec.params
        assert reparsed.flag_invariant_ok == entry.spec.flag_invariant_ok
        for j in range(1, entry.spec.n + 1):
            assert (reparsed.d_gen(j, False) - entry.spec.d_gen(j, False)).is_zero()


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("param t", "header line must come first"),
        ('algebra "x" dim 0', "dim must be at least 1"),
        ('algebra "x" dim 2\nd f3 = f1^f2', "unknown generator 'f3' (dim is 2)"),
        ('algebra "x" dim 2\nd f1 = f1^f2\nd f1 = f1^f2', "duplicate equation for f1"),
        ('algebra "x" dim 2\nd F1 = f1^f2', "structure equations are given on f1..fn"),
        ('algebra "x" dim 2\nflag invariant_cohomology_is_manifold_cohomology maybe',
         "flag value must be true or false"),
        ('algebra "x" dim 2\nd f1 = t*f1^f2', "undeclared parameter 't'"),
        ('algebra "x" dim 3\nd f1 = f1^f2^f3',
         "each term must be a wedge of exactly two generators, got 3"),
        ('algebra "x" dim 2\nd f1 = f2',
         "each term must be a wedge of exactly two generators, got 1"),
    ],
)
def test_errors_carry_position_and_reason(source, fragment):
    with pytest.raises(DslError) as exc:
        parse(source)
    msg = str(exc.value)
    assert fragment in msg
    assert msg.startswith("line ")


def test_parse_gauss_rejects_parameters():
    with pytest.raises(DslError):
        parse_gauss("t")
    with pytest.raises(DslError):
        parse_gauss("")


def test_comments_and_blank_lines_ignored():
    spec = parse('algebra "x" dim 2\n\n# comment only\nd f2 = f1^F1  # trailing\n')
    assert not spec.d_gen(2, False).is_zero()
