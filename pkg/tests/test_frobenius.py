import random

import pytest

from frobkit import Ring
from frobkit.cech import CechComplex
from frobkit.frobenius import (CertificateError, FrobeniusClosureCertificate, bracket_power,
                               f_nilpotent_order, frobenius_closure_test)
from frobkit.groebner import Ideal, buchberger, ideal_member, same_ideal

from oracles import dense_member, sympy_zero_mod


@pytest.fixture(scope="module")
def fermat():
    return Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1])


def test_bracket_power_examples():
    R = Ring(2, ["x", "y"])
    x, y = R.gens()
    assert bracket_power(Ideal(R, [x, y]), 1).gens == (x ** 2, y ** 2)
    I = Ideal(R, [x + y, y])
    assert bracket_power(I, 0).gens == I.gens
    assert bracket_power(I, 2).gens == (x ** 4 + y ** 4, y ** 4)


def test_bracket_power_composes():
    R = Ring(3, ["x", "y", "z"])
    I = Ideal(R, [R("x + y*z"), R("y^2 - z")])
    for e1, e2 in ((0, 1), (1, 1), (1, 0)):
        assert same_ideal(bracket_power(I, e1 + e2), bracket_power(bracket_power(I, e1), e2))


def test_fermat_certificate(fermat):
    x, y, z = fermat.gens()
    assert not ideal_member(z ** 2, Ideal(fermat, [x, y]))
    cert = frobenius_closure_test(z ** 2, Ideal(fermat, [x, y]), 4)
    assert cert.level == 1
    assert cert.coefficients == (z * x, z * y)
    assert cert.verify()
    # independent oracle: z^4 - zx*x^2 - zy*y^2 vanishes modulo the cubic
    assert sympy_zero_mod("z^4 - z*x*x^2 - z*y*y^2", ["x^3 + y^3 + z^3"], ["x", "y", "z"], 2)


def test_level0_z2_fails_by_linear_algebra():
    # degree-2 piece of (x, y, x^3+y^3+z^3) has no z^2
    gens = [{(1, 0, 0): 1}, {(0, 1, 0): 1}, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}]
    assert not dense_member({(0, 0, 2): 1}, gens, 2, 6)


def test_trivial_level0():
    R = Ring(3, ["x", "y"])
    cert = frobenius_closure_test(R("x"), Ideal(R, [R("x")]), 2)
    assert cert.level == 0 and cert.coefficients == (R.one,)


def test_no_certificate_is_inconclusive():
    R = Ring(2, ["x", "y"])
    assert frobenius_closure_test(R("y"), Ideal(R, [R("x")]), 3) is None


def test_certificate_rejects_bad_identity(fermat):
    x, y, z = fermat.gens()
    with pytest.raises(CertificateError):
        FrobeniusClosureCertificate(z ** 2, (x, y), 1, (x, y))


def test_monotone_in_level(fermat):
    x, y, z = fermat.gens()
    I = Ideal(fermat, [x, y])
    cert = frobenius_closure_test(z ** 2, I, 1)
    for e in range(cert.level, 4):
        G = buchberger(bracket_power(I, e))
        assert G.contains(z ** (2 * 2 ** e))


def test_regular_ring_frobenius_closed():
    # in a polynomial ring, z^(p^e) in I^[p^e] iff z in I
    rng = random.Random(5)
    for i in range(12):
        p = (2, 3)[i % 2]
        R = Ring(p, ["x", "y"])
        x, y = R.gens()
        pool = [x, y, x * y, x ** 2 + y, x + y ** 2, x * y + y ** 2, x ** 2]
        gens = rng.sample(pool, 2)
        z = rng.choice(pool) * rng.choice([R.one, x, y]) + rng.choice([R.zero, x, y])
        I = Ideal(R, gens)
        level0 = ideal_member(z, I)
        cert = frobenius_closure_test(z, I, 2)
        assert (cert is not None) == level0
        if cert is not None:
            assert cert.level == 0


def test_nilpotency_orders(fermat):
    from frobkit.fixtures import _veronese
    V = _veronese()
    A, B, C, D = V.gens()
    Cx = CechComplex(V, [A, D])
    eta = Cx.cochain(1, {(0,): (B ** 2, 1), (1,): (C ** 2, 1)})
    res = f_nilpotent_order(eta, 4)
    assert res.order == 1
    assert res.preimage.numerator(()) == A * D
    assert f_nilpotent_order(Cx.zero(1), 4).order == 0
    x, y, z = fermat.gens()
    top = CechComplex(fermat, [x, y]).cochain(2, {(0, 1): (z ** 2, 1)})
    assert f_nilpotent_order(top, 4).order == 1
