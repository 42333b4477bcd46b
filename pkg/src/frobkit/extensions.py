"""Presented ring extensions, Artin-Schreier towers and the explicit
witness constructions for Frobenius and plus closure.

An extension is never built from fractions.  New elements enter through
monic relations ``t^d = lower``; when an element is known to be a
fraction (for instance t0 = (z - sum t_i a_i)/a0) the identifying
relation is added only after certifying that it is nilpotent in the
current presentation.  Such relations vanish in every reduced ring
receiving the presentation, so identities verified after adding them
still hold in the integral domain the construction is modelled on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .frobenius import CertificateError, FrobeniusClosureCertificate
from .ring import MonomialOrder, Polynomial, Ring, frobenius_power


class VerificationFailure(AssertionError):
    """A constructed identity did not reduce to zero.  Always a bug."""


# -- Galois tower bookkeeping -------------------------------------------------

@dataclass(frozen=True)
class TowerStep:
    kind: str      # root_of_unity | radical | artin_schreier | inseparable_root | additive_root
    data: tuple = ()
    birational: bool = False

    def to_dict(self):
        d = {"kind": self.kind}
        for k, v in self.data:
            d[k] = v
        if self.kind == "inseparable_root":
            d["birational"] = self.birational
        return d


@dataclass
class GaloisTowerReport:
    p: int
    steps: list = field(default_factory=list)

    def add(self, kind, birational=False, **data):
        self.steps.append(TowerStep(kind, tuple((k, str(v)) for k, v in data.items()), birational))

    def extend(self, other):
        self.steps.extend(other.steps)
        return self

    @property
    def generically_separable(self):
        # a p-th root that already lies in the fraction field adds no field extension
        return not any(s.kind == "inseparable_root" and not s.birational for s in self.steps)

    @property
    def solvable_tower(self):
        for s in self.steps:
            if s.kind == "inseparable_root" and not s.birational:
                return False
            if s.kind == "radical":
                n = int(dict(s.data)["n"])
                if n % self.p == 0:
                    return False
            if s.kind == "additive_root":
                return False
        return True

    def kinds(self):
        return [s.kind for s in self.steps]

    def to_dict(self):
        return {
            "steps": [s.to_dict() for s in self.steps],
            "generically_separable": self.generically_separable,
            "solvable_tower": self.solvable_tower,
        }


# -- presented extensions -----------------------------------------------------

@dataclass(frozen=True)
class Adjoined:
    name: str
    degree: int
    lower: str       # text of the right-hand side in the extension ring


class PresentedExtension:
    """base[t_1, ..., t_m] / (t_i^d_i - lower_i, certified side relations).

    ``lower_i`` has t_i-degree < d_i and involves only earlier t_j and base
    variables.  The monomial order puts the t's in a lex block (latest
    adjoined largest) ahead of the base order, so the monic relations have
    the expected leading terms.
    """

    def __init__(self, base, adjoined=(), side=()):
        if isinstance(base, PresentedExtension):
            raise TypeError("base must be a Ring; use .adjoin to grow an extension")
        self.base = base
        self.adjoined = tuple(adjoined)
        self.side = tuple(side)   # (text, level): (text)^(p^level) reduced to 0 before adding
        self.ring = self._build_ring()

    def _build_ring(self):
        base = self.base
        names = tuple(a.name for a in self.adjoined)
        if not names:
            return base
        variables = base.variables + names
        n = len(variables)
        tower_idx = list(range(base.nvars, n))[::-1]
        blocks = [("lex", tower_idx)] + [(k, list(idx)) for k, idx in base.order.blocks]
        weights = None
        if base.order.weights is not None:
            weights = tuple(base.order.weights) + (1,) * len(names)
        order = MonomialOrder(blocks, weights)
        rels = [str(r) for r in base.relations]
        rels += [f"{a.name}^{a.degree} - ({a.lower})" for a in self.adjoined]
        rels += [s for s, _ in self.side]
        return Ring(base.p, variables, k=base.k, params=base.params, relations=rels, order=order,
                    gen_name=base.base_field.gen_name or "g",
                    modulus=getattr(base.base_field, "modulus", None),
                    name=(base.name or "R") + "[" + ",".join(names) + "]")

    @classmethod
    def over(cls, ring_or_ext):
        if isinstance(ring_or_ext, PresentedExtension):
            return ring_or_ext
        return cls(ring_or_ext)

    def __repr__(self):
        return f"<PresentedExtension {self.ring!r}>"

    @property
    def p(self):
        return self.base.p

    def names(self):
        return tuple(a.name for a in self.adjoined)

    def fresh_name(self, stem):
        taken = set(self.ring.variables) | set(self.ring.params)
        if self.base.k > 1:
            taken.add(self.base.base_field.gen_name)
        if stem not in taken:
            return stem
        for i in itertools.count(1):
            cand = f"{stem}_{i}"
            if cand not in taken:
                return cand

    def adjoin(self, name, degree, lower):
        """Adjoin a root of T^degree = lower; ``lower`` may mention ``name``."""
        if degree < 1:
            raise ValueError("degree must be positive")
        if name in self.ring.variables:
            raise ValueError(f"{name} already used")
        probe = Ring(self.base.p, self.ring.variables + (name,), k=self.base.k, params=self.base.params,
                     gen_name=self.base.base_field.gen_name or "g",
                     modulus=getattr(self.base.base_field, "modulus", None))
        low = probe(lower) if isinstance(lower, str) else probe.coerce(lower)
        if not low.is_integral():
            raise ValueError("relations need integer exponents")
        if low.degree_in(name) >= degree:
            raise ValueError("lower part must have smaller degree in the new generator")
        return PresentedExtension(self.base, self.adjoined + (Adjoined(name, degree, str(low)),), self.side)

    def add_certified_relation(self, g, max_level=4):
        """Add g = 0 after checking g^(p^k) = 0 here for some k <= max_level.

        Returns (extension, k); k = -1 means g already reduced to zero.
        """
        g = self.ring.coerce(g)
        if self.ring.reduce(g).is_zero():
            return self, -1
        for k in range(1, max_level + 1):
            if self.ring.reduce(frobenius_power(g, k)).is_zero():
                ext = PresentedExtension(self.base, self.adjoined, self.side + ((str(g), k),))
                return ext, k
        raise VerificationFailure(f"{g} is not certified nilpotent up to level {max_level}")

    def embed(self, f):
        return self.ring.coerce(f)

    def normal_form(self, f):
        return self.ring.reduce(self.ring.coerce(f))

    def gen(self, name):
        return self.ring.gen(name)

    def to_dict(self):
        return {
            "base": self.base.spec(),
            "adjoined": [{"name": a.name, "relation": f"{a.name}^{a.degree} = {a.lower}"} for a in self.adjoined],
            "certified_relations": [{"relation": f"{s} = 0", "nilpotency_level": k} for s, k in self.side],
        }


def normal_form_ext(ext, elem):
    """Unique representative of elem in the extension."""
    return ext.normal_form(elem)


def _ext_and_ring(R):
    ext = PresentedExtension.over(R)
    return ext, ext.ring


def adjoin_artin_schreier_family(R, a0, q, b, names=None):
    """Adjoin roots t_i of T^p + a0^q T - b_i.

    The tower lists a primitive (p-1)-th root of unity, a (p-1)-th root of
    -a0^q, then one Artin-Schreier step per b_i; for p = 2 the first two
    steps are trivial and omitted.
    """
    ext, ring = _ext_and_ring(R)
    p = ring.p
    a0 = ring.coerce(a0)
    if ring.reduce(a0).is_zero():
        raise ValueError("a0 must be nonzero")
    report = GaloisTowerReport(p)
    b = [ring.coerce(x) for x in b]
    if not b:
        return ext, report
    aq = a0 ** q
    if p > 2:
        report.add("root_of_unity", n=p - 1)
        report.add("radical", n=p - 1, element=-aq)
    for i, bi in enumerate(b, start=1):
        nm = ext.fresh_name(names[i - 1] if names else f"t{i}")
        t = f"({bi}) - ({aq})*{nm}"
        ext = ext.adjoin(nm, p, t)
        report.add("artin_schreier", root=nm, a=aq, b=bi, derivative=aq)
    return ext, report


def separability_audit(ext, name, a):
    """The formal T-derivative of T^p + a T - b is a: a unit of the
    fraction field whenever a != 0, so the step is separable."""
    return not ext.normal_form(a).is_zero()


def verify_artin_schreier_reduction(p):
    """Check c^p((T/c)^p - T/c - b/c^p) = T^p + aT - b given c^(p-1) = -a.

    Computed in F_p[T, c, u, a, b]/(c^(p-1) + a, c*u - 1), u standing for 1/c.
    """
    R = Ring(p, ["T", "c", "u", "a", "b"], relations=[f"c^{p - 1} + a", "c*u - 1"], order="lex")
    T, c, u, a, b = R.gens()
    s = T * u
    lhs = c ** p * (s ** p - s - b * u ** p)
    rhs = T ** p + a * T - b
    return R.reduce(lhs - rhs).is_zero()


# -- the solvable witness for Frobenius closure ----------------------------------

@dataclass
class WitnessResult:
    extension: PresentedExtension
    coefficients: tuple          # t_0..t_m with z = sum t_i a_i
    generators: tuple
    tower: GaloisTowerReport
    record: dict

    def verify(self) -> bool:
        ring = self.extension.ring
        z = ring(self.record["_element"])
        total = ring.zero
        for t, a in zip(self.coefficients, self.generators):
            total = total + ring.coerce(t) * ring.coerce(a)
        return ring.reduce(z - total).is_zero()

    def to_dict(self):
        rec = {k: v for k, v in self.record.items() if not k.startswith("_")}
        return {
            "kind": "solvable_witness",
            "extension": self.extension.to_dict(),
            "coefficients": [str(t) for t in self.coefficients],
            "generators": [str(a) for a in self.generators],
            "tower": self.tower.to_dict(),
            "record": rec,
        }


def _level_one_witness(ext, z, gens, coeffs, tag):
    """One Frobenius level: z^p = sum c_i a_i^p  ==>  z = sum t_i a_i."""
    ring = ext.ring
    p = ring.p
    a0 = ring.coerce(gens[0])
    others = [ring.coerce(a) for a in gens[1:]]
    cs = [ring.coerce(c) for c in coeffs]
    z = ring.coerce(z)
    report = GaloisTowerReport(p)
    names = [f"t{i}{tag}" for i in range(1, len(gens))]
    ext, rep = adjoin_artin_schreier_family(ext, a0, p, cs[1:], names=names)
    tnames = tuple(dict(s.data)["root"] for s in rep.steps if s.kind == "artin_schreier")
    report.extend(rep)
    ring = ext.ring
    ts = [ring.gen(n) for n in tnames]
    a0r = ring.coerce(a0)
    ar = [ring.coerce(a) for a in others]
    zr = ring.coerce(z)
    lower = ring.coerce(cs[0])
    for t, a in zip(ts, ar):
        lower = lower + t * frobenius_power(a, 1)
    t0name = ext.fresh_name(f"t0{tag}")
    ext = ext.adjoin(t0name, p, lower)
    report.add("inseparable_root", birational=True, p=p, element=lower)
    ring = ext.ring
    ts = [ring.coerce(t) for t in ts]
    t0 = ring.gen(t0name)
    zr, a0r = ring.coerce(zr), ring.coerce(a0r)
    ar = [ring.coerce(a) for a in ar]
    # (i) cleared relation identity, checked before the fraction relation is added
    s = zr
    for t, a in zip(ts, ar):
        s = s - t * a
    lhs = frobenius_power(s, 1)
    rhs = frobenius_power(a0r, 1) * ring.coerce(lower)
    if not ring.reduce(lhs - rhs).is_zero():
        raise VerificationFailure("cleared witness relation failed")
    # t0 = (z - sum t_i a_i)/a0 lies in the fraction field: certify and add
    ext, lvl = ext.add_certified_relation(a0r * t0 - s)
    ring = ext.ring
    coeffs_out = (ring.gen(t0name),) + tuple(ring.gen(n) for n in tnames)
    total = ring.zero
    for t, a in zip(coeffs_out, (a0,) + tuple(others)):
        total = total + t * ring.coerce(a)
    if not ring.reduce(ring.coerce(z) - total).is_zero():
        raise VerificationFailure("z = sum t_i a_i failed")
    info = {
        "relation_identity": f"({s})^{p} = ({a0r})^{p}*({lower})",
        "fraction_relation": f"{a0r}*{t0name} = {s}",
        "nilpotency_level": lvl,
    }
    return ext, coeffs_out, report, info


def solvable_witness(cert: FrobeniusClosureCertificate):
    """Extension S and t_0..t_m with z = sum t_i a_i in S, built through
    Artin-Schreier steps (solvable) one Frobenius level at a time."""
    if not cert.verify():
        raise CertificateError("certificate does not verify")
    R = cert.ring
    p = R.p
    gens = cert.generators
    e = cert.level
    ext = PresentedExtension.over(R)
    tower = GaloisTowerReport(p)
    levels = []
    if e == 0:
        coeffs = tuple(cert.coefficients)
        ring = ext.ring
        total = ring.zero
        for t, a in zip(coeffs, gens):
            total = total + t * a
        if not ring.reduce(cert.element - total).is_zero():
            raise VerificationFailure("level-0 certificate does not give z in I")
        return WitnessResult(ext, coeffs, gens, tower,
                             {"_element": str(cert.element), "level": 0, "levels": []})
    # z^(p^e) = sum b_i a_i^(p^e): peel one Frobenius level at a time
    coeffs = tuple(cert.coefficients)
    for j in range(e - 1, -1, -1):
        zj = frobenius_power(cert.element, j)
        gj = tuple(frobenius_power(a, j) for a in gens)
        tag = "" if e == 1 else f"_{e - j}"
        ext, coeffs, rep, info = _level_one_witness(ext, zj, gj, coeffs, tag)
        tower.extend(rep)
        info["level"] = j
        levels.append(info)
    ring = ext.ring
    result = WitnessResult(ext, coeffs, tuple(ring.coerce(a) for a in gens), tower,
                           {"_element": str(cert.element), "level": e, "levels": levels,
                            "identity": " + ".join(f"({t})*({a})" for t, a in zip(coeffs, gens))
                            + f" = {cert.element}"})
    if not result.verify():
        raise VerificationFailure("witness identity failed")
    return result


# -- Dickson invariants --------------------------------------------------------

@dataclass
class DicksonResult:
    n: int
    q: int
    ring: Ring                 # F_q[x_1..x_n, T]
    coefficients: tuple        # c_1..c_n
    product: Polynomial

    def additive_polynomial(self, arg):
        """D(arg) = arg^(q^n) + sum c_i arg^(q^(n-i)) in the ring of arg."""
        ring = arg.ring
        out = arg ** (self.q ** self.n)
        for i, c in enumerate(self.coefficients, start=1):
            out = out + ring.coerce(c) * arg ** (self.q ** (self.n - i))
        return out

    def to_dict(self):
        return {"kind": "dickson", "n": self.n, "q": self.q,
                "coefficients": {f"c{i}": str(c) for i, c in enumerate(self.coefficients, start=1)},
                "product_terms": len(self.product.terms)}


class BudgetError(RuntimeError):
    pass


def dickson_polynomial(n, q, names=None, budget=64):
    """Expand prod_{v in F_q^n} (T - v.x) = T^(q^n) + c_1 T^(q^(n-1)) + ... + c_n T."""
    from .field import is_power_of
    if n < 1:
        raise ValueError("n must be positive")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if not is_power_of(q, p):
        raise ValueError("q must be a prime power")
    k = 0
    while p ** k < q:
        k += 1
    if q ** n > budget:
        raise BudgetError(f"q^n = {q ** n} exceeds budget {budget}")
    names = list(names or [f"x{i}" for i in range(1, n + 1)])
    ring = Ring(p, names + ["T"], k=k, order="lex")
    F = ring.base_field
    xs = [ring.gen(v) for v in names]
    T = ring.gen("T")
    prod = ring.one
    for v in itertools.product(list(F.elements()), repeat=n):
        lin = T
        for c, x in zip(v, xs):
            if c:
                lin = lin - x.scale(c)
        prod = prod * lin
    ti = ring.index["T"]
    wanted = {q ** (n - i): i for i in range(0, n + 1)}
    coeffs = [ring.zero] * (n + 1)
    by_deg = {}
    for m, c in prod.terms.items():
        d = m[ti]
        mm = m[:ti] + (0,) + m[ti + 1:]
        by_deg.setdefault(d, {})[mm] = c
    for d, terms in by_deg.items():
        if d not in wanted:
            raise VerificationFailure(f"unexpected T^{d} term in the Dickson product")
        coeffs[wanted[d]] = Polynomial(ring, terms)
    if coeffs[0] != ring.one:
        raise VerificationFailure("Dickson product is not monic of degree q^n")
    return DicksonResult(n, q, ring, tuple(coeffs[1:]), prod)


# -- plus-closure examples --------------------------------------------------------

@dataclass
class PlusClosureRecord:
    kind: str
    q: int
    n: int
    ring: Ring
    extension: PresentedExtension
    expansion_terms: int
    reduced: Polynomial
    relation: Polynomial
    witness: str

    @property
    def holds(self):
        return self.reduced.is_zero()

    def verify(self):
        return self.holds

    def to_dict(self):
        return {"kind": "plus_closure_example", "example": self.kind, "q": self.q, "n": self.n,
                "relation": str(self.relation),
                "extension": self.extension.to_dict(),
                "expansion_terms": self.expansion_terms,
                "reduced_expansion": str(self.reduced),
                "witness": self.witness, "holds": self.holds}


def verify_plus_closure_example(kind="ex41", p=2, q=None, n=2, budget=64):
    """Constructive check that z lies in (x, y)^+ for the Dickson-type
    hypersurfaces: with u, v the prescribed roots, w = z - u x - v y is
    killed by the additive polynomial with (xy)-power coefficients."""
    if kind == "ex41":
        q, n = p, 2
    elif kind != "ex42":
        raise ValueError(f"unknown example {kind!r}")
    if q is None:
        raise ValueError("ex42 needs q")
    from .field import is_power_of
    pp = next(d for d in range(2, q + 1) if q % d == 0)
    if not is_power_of(q, pp):
        raise ValueError("q must be a prime power")
    k = 0
    while pp ** k < q:
        k += 1
    Q = q ** n
    if Q > budget:
        raise BudgetError(f"q^n = {Q} exceeds budget {budget}")
    cs = [f"c{i}" for i in range(1, n + 1)]
    base = Ring(pp, ["z", "x", "y"], k=k, params=["a", "b"] + cs, order="lex")
    z, x, y = base.gens()
    a, b = base.param("a"), base.param("b")
    xy = x * y

    def shaped(var_poly, scale):
        # T^Q + sum c_i scale^(Q - Q/q^i) T^(Q/q^i)
        ring = var_poly.ring
        scale = ring.coerce(scale)
        out = var_poly ** Q
        for i in range(1, n + 1):
            d = Q // q ** i
            out = out + ring.param(cs[i - 1]) * scale ** (Q - d) * var_poly ** d
        return out

    relation = shaped(z, xy) + a * x ** Q + b * y ** Q
    R = Ring(pp, ["z", "x", "y"], k=k, params=["a", "b"] + cs, relations=[str(relation)],
             order="lex", name="Rdickson")
    ext = PresentedExtension(R)
    probe_u = Ring(pp, ["z", "x", "y", "u"], k=k, params=["a", "b"] + cs)
    u = probe_u.gen("u")
    lower_u = -(shaped(u, y) - u ** Q + probe_u.param("a"))
    ext = ext.adjoin("u", Q, lower_u)
    probe_v = Ring(pp, ["z", "x", "y", "u", "v"], k=k, params=["a", "b"] + cs)
    v = probe_v.gen("v")
    lower_v = -(shaped(v, x) - v ** Q + probe_v.param("b"))
    ext = ext.adjoin("v", Q, lower_v)
    S = ext.ring
    zS, xS, yS, uS, vS = (S.gen(s) for s in ("z", "x", "y", "u", "v"))
    w = zS - uS * xS - vS * yS
    D = shaped(w, xS * yS)
    reduced = S.reduce(D)
    return PlusClosureRecord(kind, q, n, R, ext, len(D.terms), reduced, R.coerce(relation),
                             "z = u*x + v*y + (x*y)*w', w' a root of "
                             + " + ".join([f"T^{Q}"] + [f"c{i}*T^{Q // q ** i}" if Q // q ** i > 1 else f"c{i}*T" for i in range(1, n + 1)]))
