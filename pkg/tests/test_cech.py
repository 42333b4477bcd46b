import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobkit import Ring
from frobkit.cech import (CechComplex, CohomologyClass, class_from_relation, contracting_homotopy_with_unit,
                          differential, frobenius_on_cochain, is_coboundary, is_cocycle, solve_coboundary,
                          trivialize_nilpotent_class)
from frobkit.extensions import VerificationFailure
from frobkit.fixtures import _veronese
from frobkit.frobenius import f_nilpotent_order


def d(c):
    """Differential, with the zero map past the top degree."""
    C = c.complex
    if c.degree >= C.top:
        return C.zero(c.degree + 1, c.N)
    return differential(c)


# -- random cochains -----------------------------------------------------------------

RINGS = {
    2: Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1]),
    3: Ring(3, ["x", "y", "z"]),
}
SEQS = {2: (["x", "y"], ["x", "y", "z"], ["x^2", "y + z"]), 3: (["x", "y", "z"], ["x + y", "z^2"], ["x", "y"])}


def _poly(R, draw):
    mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
    terms = draw(st.dictionaries(mono, st.integers(1, R.p - 1), max_size=3))
    return sum((R.monomial(m, c) for m, c in terms.items()), R.zero)


@st.composite
def cochains(draw, p, unit=False):
    R = RINGS[p]
    xs = [R(s) for s in draw(st.sampled_from(SEQS[p]))]
    if unit:
        xs = [R.one] + xs
    C = CechComplex(R, xs, draw(st.integers(1, 2)))
    deg = draw(st.integers(0, C.top))
    comps = {S: _poly(R, draw) for S in C.subsets(deg)}
    return C.cochain(deg, comps)


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=100)
@given(data=st.data())
def test_dd_zero(p, data):
    c = data.draw(cochains(p))
    assert d(d(c)).is_zero()


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=100)
@given(data=st.data())
def test_frobenius_commutes_with_d(p, data):
    c = data.draw(cochains(p))
    assert frobenius_on_cochain(d(c)).equals(d(frobenius_on_cochain(c)))
    C = c.complex
    c2 = C.cochain(c.degree, {S: _poly(C.ring, data.draw) for S in C.subsets(c.degree)}, N=c.N)
    assert frobenius_on_cochain(c + c2).equals(frobenius_on_cochain(c) + frobenius_on_cochain(c2))


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=100)
@given(data=st.data())
def test_homotopy_identity(p, data):
    c = data.draw(cochains(p, unit=True))
    h = contracting_homotopy_with_unit
    lhs = d(h(c)) + h(d(c)) if c.degree > 0 else h(d(c))
    assert lhs.equals(c)


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=50)
@given(data=st.data())
def test_homotopy_kills_first_block_of_cocycles(p, data):
    c = data.draw(cochains(p, unit=True))
    if c.degree == 0:
        return
    z = d(c)  # a cocycle
    r = z - d(contracting_homotopy_with_unit(z))
    assert all(r.numerator(S).is_zero() for S in r.complex.subsets(r.degree) if 0 in S)


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=50)
@given(data=st.data(), extra=st.integers(1, 2))
def test_truncation_refinement_stable(p, data, extra):
    c = data.draw(cochains(p))
    up = c.at_level(c.N + extra)
    assert up.equals(c)
    assert d(up).equals(d(c))
    assert frobenius_on_cochain(up).equals(frobenius_on_cochain(c))


def test_homotopy_zero_away_from_unit():
    R = RINGS[3]
    C = CechComplex(R, [R.one, R("x"), R("y")])
    c = C.cochain(1, {(1,): R("x*y"), (2,): R("y")})
    assert contracting_homotopy_with_unit(c).is_zero()
    r = C.cochain(0, {(): R("x + 1")})
    assert d(r).equals(C.cochain(1, {(0,): (R("x + 1"), 0), (1,): (R("x + 1"), 0), (2,): (R("x + 1"), 0)}))


# -- fixtures ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def veronese():
    V = _veronese()
    A, B, C, D = V.gens()
    Cx = CechComplex(V, [A, D])
    eta = Cx.cochain(1, {(0,): (B ** 2, 1), (1,): (C ** 2, 1)})
    return V, Cx, eta


def test_veronese_cocycle(veronese):
    V, Cx, eta = veronese
    assert d(eta).is_zero()
    assert V.reduce(V("B^2*D - A*C^2")).is_zero()


def test_veronese_not_a_coboundary(veronese):
    _, _, eta = veronese
    res = solve_coboundary(eta)
    assert not res.found and res.exact


def test_veronese_frobenius_is_coboundary(veronese):
    V, Cx, eta = veronese
    F = frobenius_on_cochain(eta)
    res = solve_coboundary(F)
    assert res.found
    assert res.preimage.equals(Cx.cochain(0, {(): V("A*D")}))
    assert d(res.preimage).equals(F)


def test_veronese_trivialization(veronese):
    V, Cx, eta = veronese
    res = trivialize_nilpotent_class(CohomologyClass(eta), e_max=3)
    S, xi, tower, record = res
    assert res.verify()
    assert record["nilpotency_order"] == 1
    assert d(xi).equals(eta.to_ring(S.ring))
    assert tower.solvable_tower


def test_trivialize_already_coboundary(veronese):
    V, Cx, _ = veronese
    beta = Cx.cochain(0, {(): V("B*C + A")})
    res = trivialize_nilpotent_class(d(beta))
    assert res.extension.names() == ()
    assert res.verify()


def test_fermat_top_class_trivialized():
    R = RINGS[2]
    x, y, z = R.gens()
    eta = CechComplex(R, [x, y]).cochain(2, {(0, 1): (z ** 2, 1)})
    F = frobenius_on_cochain(eta)
    hand = CechComplex(R, [x, y]).cochain(1, {(0,): (z * y, 2), (1,): (z * x, 2)})
    assert d(hand).equals(F)
    res = trivialize_nilpotent_class(eta, e_max=3)
    assert res.verify() and len(res.tower.steps) >= 1


def test_solve_recovers_random_preimage():
    R = RINGS[3]
    C = CechComplex(R, [R("x"), R("y"), R("z")])
    beta = C.cochain(1, {(0,): R("y^2 + x"), (1,): R("x*z"), (2,): R("2*y")})
    c = d(beta)
    pre = is_coboundary(c)
    assert pre is not None and d(pre).equals(c)


def test_class_from_relation():
    R = RINGS[3]
    x, y, z = R.gens()
    kos = class_from_relation([x, y, z], [y, -x, R.zero])
    assert is_cocycle(kos.cochain)
    assert is_coboundary(kos.cochain) is not None
    with pytest.raises(VerificationFailure):
        class_from_relation([x, y, z], [y, x, R.zero])


def test_nilpotency_of_zero_class(veronese):
    _, Cx, _ = veronese
    assert f_nilpotent_order(Cx.zero(1), 2).order == 0
