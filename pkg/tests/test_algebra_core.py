from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobkit import Ring
from frobkit.field import finite_field, is_prime
from frobkit.ring import ContextMismatch, ParseError, degree_of, frobenius_power

from oracles import padd, pmul


# -- fields ---------------------------------------------------------------------------

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)]


@pytest.mark.parametrize("p,k", FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = finite_field(p, k)
    els = list(F.elements())
    assert len(els) == p ** k
    for a in els:
        assert F.add(a, F.neg(a)) == F.from_int(0)
        if not F.is_zero(a):
            assert F.mul(a, F.inv(a)) == F.from_int(1)
        # Frobenius is additive and bijective, root inverts it
        assert F.root(F.frob(a)) == a
    for a in els[:9]:
        for b in els[:9]:
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
            assert F.mul(a, b) == F.mul(b, a)


def test_gf4_generator_relation():
    F = finite_field(2, 2)
    g = F.generator()
    assert F.to_str(F.mul(g, g)) == "g+1"
    assert F.pow(g, 3) == F.from_int(1)


def test_field_rejects_composite():
    assert not is_prime(9)
    with pytest.raises(ValueError):
        finite_field(4, 1)


# -- ring arithmetic --------------------------------------------------------------------

@pytest.fixture
def R2():
    return Ring(2, ["x", "y", "z"], params=["c1", "a"])


def test_char2_cancellation(R2):
    x, y, _ = R2.gens()
    assert ((x + y) + (x + y)).is_zero()
    assert (x + y) * (x + y) == x ** 2 + y ** 2


def test_fractional_exponents_add(R2):
    x = R2.gen("x")
    assert x * R2("x^(1/2)") == R2("x^(3/2)")


def test_fractional_exponent_denominator_must_be_p_power(R2):
    with pytest.raises((ParseError, ValueError)):
        R2("x^(1/3)")


def test_frobenius_power_examples(R2):
    x, y, z = R2.gens()
    assert frobenius_power(x + y, 1) == x ** 2 + y ** 2
    assert frobenius_power(R2("c1*x"), 1) == R2("c1^2*x^2")


def test_z8_on_fermat_cubic():
    R = Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"])
    x, y, z = R.gens()
    z8 = frobenius_power(z ** 2, 2)
    assert z8 == z ** 8
    assert R.equal_mod(z8, (x ** 3 + y ** 3) ** 2 * z ** 2)


def test_degree_of():
    R = Ring(2, ["x", "y"], weights=[1, 1])
    assert degree_of(R("x*y")) == 2
    assert degree_of(R("x + y^2")) is None
    assert degree_of(R("(x*y)^(1/2)")) == 1


def test_context_mismatch(R2):
    S = Ring(2, ["x", "y"])
    with pytest.raises(ContextMismatch):
        R2.gen("x") + S.gen("x")


def test_parse_errors(R2):
    for bad in ("x^^2", "x + * y", "w", "(x + y", ""):
        with pytest.raises(ParseError):
            R2(bad)


def test_param_fractions_normalize(R2):
    f = R2("(c1*a + c1)/(a + 1) * x")
    assert f == R2("c1*x")
    assert R2("x/(a+1)") * R2("a + 1") == R2("x")


def test_weights_must_make_relations_homogeneous():
    with pytest.raises(ValueError):
        Ring(2, ["x", "y"], weights=[1, 2], relations=["x^2 + y^2"])


def test_gf4_coefficients():
    R = Ring(2, ["x"], k=2)
    f = R("g*x + 1")
    assert frobenius_power(f, 2) == R("g*x^4 + 1")  # g^4 = g in GF(4)


# -- hypothesis: ring axioms and Frobenius ----------------------------------------------

def _poly_strategy(nvars, p, maxdeg=3):
    mono = st.tuples(*[st.integers(0, maxdeg) for _ in range(nvars)])
    return st.dictionaries(mono, st.integers(1, p - 1), max_size=5)


def _to_ring(R, d):
    out = R.zero
    for m, c in d.items():
        out = out + R.monomial(m, R.from_int(c).constant_value())
    return out


def _to_dict(f):
    return {tuple(int(e) for e in m): int(c) for m, c in f.terms.items()}


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_ring_axioms_and_oracle(p, data):
    R = Ring(p, ["x", "y", "z"])
    fs = [data.draw(_poly_strategy(3, p)) for _ in range(3)]
    f, g, h = (_to_ring(R, d) for d in fs)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f
    assert _to_dict(f * g) == pmul(fs[0], fs[1], p)
    assert _to_dict(f + g) == padd(fs[0], fs[1], p)
    assert R.parse(str(f * g - h)) == f * g - h


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data(), e1=st.integers(0, 2), e2=st.integers(0, 2))
def test_frobenius_additive_and_composes(p, data, e1, e2):
    R = Ring(p, ["x", "y"])
    f = _to_ring(R, data.draw(_poly_strategy(2, p, 2)))
    g = _to_ring(R, data.draw(_poly_strategy(2, p, 2)))
    assert frobenius_power(f + g, e1) == frobenius_power(f, e1) + frobenius_power(g, e1)
    assert frobenius_power(f, e1 + e2) == frobenius_power(frobenius_power(f, e1), e2)
    assert frobenius_power(f, 1) == f ** p


@given(a=st.integers(0, 4), b=st.integers(1, 4), c=st.integers(0, 4), d=st.integers(0, 4),
       k=st.integers(0, 2))
def test_degree_additive(a, b, c, d, k):
    R = Ring(2, ["x", "y"], weights=[Fraction(1, 2), 1])
    q = 2 ** k
    f = R(f"x^({a}/{q})*y^{b} + x^({a + 2 * q * b}/{q})")
    g = R(f"x^{c}*y^{d}")
    df, dg = degree_of(f), degree_of(g)
    assert df == Fraction(a, 2 * q) + b
    assert degree_of(f * g) == df + dg
    assert degree_of(f + g) is None or df == dg
