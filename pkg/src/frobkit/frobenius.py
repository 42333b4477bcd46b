"""Bracket powers, Frobenius-closure certificates and F-nilpotency."""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import Ideal, buchberger, lift_to_generators
from .ring import frobenius_power

DEFAULT_E_MAX = 4


class CertificateError(ArithmeticError):
    """A certificate identity failed to re-verify."""


def bracket_power(ideal, e):
    """The ideal generated by p^e-th powers of the given generators."""
    if e < 0:
        raise ValueError("e must be nonnegative")
    return Ideal(ideal.ring, [frobenius_power(g, e) for g in ideal.gens])


@dataclass(frozen=True)
class FrobeniusClosureCertificate:
    """z^(p^e) = sum_i b_i * a_i^(p^e) in the ring of z."""

    element: object
    generators: tuple
    level: int
    coefficients: tuple

    def __post_init__(self):
        if not self.generators or self.generators[0].is_zero():
            raise ValueError("first generator must be nonzero")
        if len(self.generators) != len(self.coefficients):
            raise ValueError("one coefficient per generator")
        if not self.verify():
            raise CertificateError("Frobenius closure identity does not hold")

    @property
    def ring(self):
        return self.element.ring

    def residual(self):
        e = self.level
        diff = frobenius_power(self.element, e)
        for a, b in zip(self.generators, self.coefficients):
            diff = diff - b * frobenius_power(a, e)
        return diff

    def verify(self) -> bool:
        return self.ring.reduce(self.residual()).is_zero()

    def to_dict(self):
        return {
            "kind": "frobenius_closure",
            "element": str(self.element),
            "generators": [str(a) for a in self.generators],
            "level": self.level,
            "coefficients": [str(b) for b in self.coefficients],
            "identity": f"({self.element})^{self.ring.p ** self.level} = "
                        + " + ".join(f"({b})*({a})^{self.ring.p ** self.level}"
                                     for a, b in zip(self.generators, self.coefficients)),
        }


def frobenius_closure_test(z, ideal, e_max=DEFAULT_E_MAX, **budget):
    """Least e <= e_max with z^(p^e) in I^[p^e], with cofactors.

    Returns None when no level up to e_max works; that is inconclusive,
    not a proof that z lies outside the Frobenius closure.
    """
    if e_max < 0:
        raise ValueError("e_max must be nonnegative")
    ring = ideal.ring
    z = ring.coerce(z)
    gens = ideal.gens
    if not gens:
        return None
    for e in range(e_max + 1):
        G = buchberger(bracket_power(ideal, e), track=True, **budget)
        lift = lift_to_generators(frobenius_power(z, e), G)
        if lift is None:
            continue
        # cofactors of the defining relations vanish in the ring: dropped
        coeffs = tuple(ring.reduce(ring.coerce(c)) for c in lift[:len(gens)])
        return FrobeniusClosureCertificate(z, gens, e, coeffs)
    return None


@dataclass
class NilpotencyResult:
    order: int | None          # least e with F^e(class) a coboundary
    preimage: object = None    # beta with d(beta) = F^e(eta)
    e_max: int = DEFAULT_E_MAX

    @property
    def exceeded(self):
        return self.order is None


def f_nilpotent_order(cls, e_max=DEFAULT_E_MAX, **solver):
    """Least e <= e_max with F^e(eta) a coboundary within the solver budget."""
    from .cech import frobenius_on_cochain, is_coboundary
    eta = getattr(cls, "cochain", cls)
    cur = eta
    for e in range(e_max + 1):
        if e:
            cur = frobenius_on_cochain(cur)
        beta = is_coboundary(cur, **solver)
        if beta is not None:
            return NilpotencyResult(e, beta, e_max)
    return NilpotencyResult(None, None, e_max)
