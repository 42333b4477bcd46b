import itertools
from fractions import Fraction

import pytest

from frobkit import Ring
from frobkit.cech import CechComplex, differential, frobenius_on_cochain, is_coboundary
from frobkit.extensions import VerificationFailure
from frobkit.graded import (PowerIdentityCertificate, fermat_rees_fixture, rees_presentation, splinter_fixture,
                            sqrt_identity, sqrt_search, top_cohomology_trivialize, verify_ex53_family,
                            verify_power_identity)

from oracles import homogeneous_monomials, ideal_dim


def _dicts(polys, n):
    return [{tuple(int(e) for e in m)[:n]: int(c) for m, c in f.terms.items()} for f in polys]


def test_rees_examples():
    F = rees_presentation(Ring(2, ["x"]), ["x"])
    assert F.ring.variables == ("x", "X") and F.kernel == () and F.verify()
    F = rees_presentation(Ring(2, ["x", "y"]), ["x", "y"])
    assert [str(k) for k in F.kernel] == ["y*X + x*Y"]
    assert F.verify()


def test_fermat_rees_fixture_kernel_substitutes_to_zero():
    F = fermat_rees_fixture()
    assert F.verify()
    assert "x^3 + y^3 + z^3" in [str(k) for k in F.kernel]
    assert "y*X + x*Y" in [str(k) for k in F.kernel]


def test_rees_hilbert_counts():
    # A[It] for A = K[x,y], I = (x,y): degree-d piece spanned by x^a y^b t^c, a+b = d, c <= d
    F = rees_presentation(Ring(2, ["x", "y"]), ["x", "y"])
    ker = _dicts(F.kernel, 4)
    for d in range(7):
        total = len(homogeneous_monomials(4, d))
        assert total - ideal_dim(ker, 2, 4, d) == (d + 1) ** 2


@pytest.mark.parametrize("d", [2, 3])
def test_splinter_ring_hilbert_counts(d):
    s = splinter_fixture(d)
    n = d + 1
    ker = _dicts(s.kernel, n)
    for k in range(7 if d == 2 else 5):
        # monomials of x-degree d*k in the semigroup generated by x1..xd and x_i^d
        count = sum(1 for e in itertools.product(range(d * k + 1), repeat=d)
                    if sum(e) == d * k and len({v % d for v in e}) == 1)
        assert len(homogeneous_monomials(n, k)) - ideal_dim(ker, 2, n, k) == count


def test_splinter_dimensions():
    assert splinter_fixture(1).dimensions == {-3: 1, -2: 1, -1: 1, 0: 0}
    s2 = splinter_fixture(2)
    assert s2.dimensions == {-3: 5, -2: 3, -1: 1, 0: 0}
    assert s2.witness is not None and s2.witness_coboundary is False
    assert [str(k) for k in s2.kernel] == ["u^2 + v1*v2"]
    s3 = splinter_fixture(3)
    assert s3.dimensions == {-3: 10, -2: 4, -1: 1, 0: 0}
    assert all(v > 0 for n, v in s3.dimensions.items() if n < 0)


def test_sqrt_identity():
    c = sqrt_identity(1)
    assert c.holds and c.level == 1 and c.verify()
    assert sqrt_identity(2).holds


def test_power_identity_trivial_and_failure():
    R = Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"])
    for k in range(3):
        assert verify_power_identity(R("x^(1/2)*y"), R("x^(1/2)*y"), k if k else None).holds
    with pytest.raises(VerificationFailure):
        verify_power_identity(R("z^2"), R("x^(3/2)*z^(1/2)"), 1)
    with pytest.raises((ValueError, VerificationFailure)):
        verify_power_identity(R("z^(1/4)"), R("z^(1/4)"), 1)


def test_power_identity_certificate_recomputes():
    R = Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"])
    c = verify_power_identity(R("z^2"), R("x^(3/2)*z^(1/2) + y^(3/2)*z^(1/2)"), 1)
    assert isinstance(c, PowerIdentityCertificate)
    assert c.difference == R("z^4 + x^3*z + y^3*z")
    assert R.reduce(c.difference).is_zero()


def test_ex53_layers():
    report, certs = verify_ex53_family((1, 2, 4))
    assert report["all_hold"]
    layers = {L["q"]: L for L in report["layers"]}
    assert layers[2]["identities"]["root[xyz]"]["level"] == 2
    assert layers[2]["identities"]["root[xyz]"]["rhs"] == "x^(5/4)*y^(1/2)*z^(1/4)*t + x^(1/2)*y^(5/4)*z^(1/4)*t"
    assert all(v["level"] == 3 for k, v in layers[4]["identities"].items() if k.startswith("root"))
    assert all(c.verify() for c in certs)


def test_sqrt_search_bounded():
    found, degrees = sqrt_search(fermat_rees_fixture().ring, "x*y", 6)
    assert not found and max(degrees) == 6


def test_prop54_degree_zero():
    R = Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1])
    x, y, z = R.gens()
    eta = CechComplex(R, [x, y]).cochain(2, {(0, 1): (z ** 2, 1)})
    res = top_cohomology_trivialize(eta, e_max=3)
    assert res.record["e"] == 1 and res.verify()
    assert eta.degree_weight() == 0
    assert frobenius_on_cochain(eta).degree_weight() == 0


def test_prop54_degree_one_above_top():
    R = Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1])
    x, y, z = R.gens()
    eta = CechComplex(R, [x, y]).cochain(2, {(0, 1): (z ** 3, 1)})
    res = top_cohomology_trivialize(eta, e_max=3)
    assert res.record["top_degree_bound"] == 0
    assert res.record["e"] == 1 and res.verify()
    assert frobenius_on_cochain(eta).degree_weight() == 2 * eta.degree_weight()


def test_prop54_polynomial_ring_already_trivial():
    R = Ring(2, ["x", "y"], weights=[1, 1])
    x, y = R.gens()
    C = CechComplex(R, [x, y])
    for num in (x * y, x ** 2 * y, x ** 3):
        eta = C.cochain(2, {(0, 1): (num, 1)})
        assert is_coboundary(eta) is not None


def test_prop54_rejects_negative_degree():
    R = Ring(2, ["x", "y"], weights=[1, 1])
    x, y = R.gens()
    eta = CechComplex(R, [x, y]).cochain(2, {(0, 1): (R.one, 1)})
    with pytest.raises(ValueError):
        top_cohomology_trivialize(eta)


def test_degree_bookkeeping_fractional():
    R = Ring(2, ["x", "y"], weights=[1, 1])
    x, y = R.gens()
    eta = CechComplex(R, [x, y]).cochain(2, {(0, 1): (R("x^(1/2)*y^(1/2)"), 1)})
    assert eta.degree_weight() == Fraction(-1)
    assert frobenius_on_cochain(eta, 2).degree_weight() == -4
