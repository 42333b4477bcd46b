"""Graded fixtures: Rees algebras, identities between p-power roots,
the cubic-cone root family, top local cohomology in nonnegative degree,
and the splinter semigroup rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cech import (CechComplex, Cochain, differential, frobenius_on_cochain, is_cocycle,
                   solve_coboundary, standard_monomials, _weights_for, _wdeg_poly)
from .extensions import GaloisTowerReport, PresentedExtension, VerificationFailure
from .groebner import kernel_of_ring_map
from .ring import Polynomial, Ring, frobenius_power


# -- Rees algebras -------------------------------------------------------------------

@dataclass
class ReesFixture:
    base: Ring                    # A[t]
    generators: tuple             # images in A[t]
    ring: Ring                    # the presentation, graded
    kernel: tuple

    def verify(self) -> bool:
        """Every kernel generator maps to zero under the substitution."""
        sub = dict(zip(self.ring.variables, self.generators))
        for g in self.kernel:
            img = g.subs(sub, self.base)
            if not self.base.reduce(img).is_zero():
                return False
        return True

    def to_dict(self):
        return {"kind": "rees", "ring": self.ring.spec(),
                "generators": dict(zip(self.ring.variables, map(str, self.generators))),
                "kernel_generators": len(self.kernel)}


def presentation(targets, names=None, weights=None, name=None, **budget):
    """Quotient ring K[names]/kernel of names -> targets."""
    pres, ideal = kernel_of_ring_map(targets, names, weights=weights, name=name, **budget)
    return pres.with_relations(ideal.gens, name=name), tuple(ideal.gens)


def rees_presentation(A, gens, t="t", names=None, weights=None, graded=True, **budget):
    """Graded presentation of A[g_1 t, ..., g_k t] plus A's own generators.

    The source is A[t]; the presentation variables are A's variables
    followed by ``names`` (default: the generators' names upper-cased when
    they are variables, else G1, G2, ...).  All generators get degree 1
    unless weights are given; ``graded=False`` leaves the presentation
    ungraded (for base rings that are not homogeneous).
    """
    if t in A.variables:
        raise ValueError(f"{t} already names a variable of A")
    At = Ring(A.p, A.variables + (t,), k=A.k, params=A.params,
              relations=[str(r) for r in A.relations], gen_name=A.base_field.gen_name or "g",
              modulus=getattr(A.base_field, "modulus", None), name="A[t]")
    gens = [At.coerce(A(g)) for g in gens]
    if any(At.reduce(g).is_zero() for g in gens):
        raise ValueError("Rees generators must be nonzero")
    if names is None:
        names = []
        for i, g in enumerate(gens, start=1):
            s = str(g)
            cand = s.upper() if s in A.variables else f"G{i}"
            names.append(cand if cand not in A.variables else f"G{i}")
    tt = At.gen(t)
    targets = list(At.gens()[:-1]) + [g * tt for g in gens]
    allnames = list(A.variables) + list(names)
    if weights is None and graded:
        weights = [1] * len(allnames)
    R, kern = presentation(targets, allnames, weights=weights, name="Rees", **budget)
    return ReesFixture(At, tuple(targets), R, kern)


def fermat_rees_fixture(k=1):
    """The Rees ring of (x, y, z) over F_{2^k}[x,y,z]/(x^3+y^3+z^3)."""
    A = Ring(2, ["x", "y", "z"], k=k, relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1], name="A")
    return rees_presentation(A, ["x", "y", "z"])


# -- identities between p-power roots ----------------------------------------------------

@dataclass
class PowerIdentityCertificate:
    lhs: Polynomial
    rhs: Polynomial
    level: int
    difference: Polynomial          # lhs^(p^k) - rhs^(p^k), integral exponents
    normal_form: Polynomial
    note: str = "equality of p^k-th powers in a domain forces lhs = rhs"

    @property
    def holds(self):
        return self.normal_form.is_zero()

    def verify(self) -> bool:
        ring = self.lhs.ring
        d = frobenius_power(self.lhs, self.level) - frobenius_power(self.rhs, self.level)
        return d.is_integral() and ring.reduce(d).is_zero()

    def to_dict(self):
        return {"kind": "power_identity", "lhs": str(self.lhs), "rhs": str(self.rhs),
                "level": self.level, "power": self.lhs.ring.p ** self.level,
                "difference_terms": len(self.difference.terms),
                "normal_form": str(self.normal_form), "holds": self.holds,
                "domain_hypothesis": self.note}


def integral_level(f):
    """Least k with f^(p^k) having integer exponents."""
    p = f.ring.p
    k = 0
    for m in f.terms:
        for e in m:
            d = Fraction(e).denominator
            j = 0
            while d > 1:
                if d % p:
                    raise ValueError("exponent denominators must be powers of p")
                d //= p
                j += 1
            k = max(k, j)
    return k


def verify_power_identity(lhs, rhs, k=None):
    ring = lhs.ring
    rhs = ring.coerce(rhs) if not isinstance(rhs, (int, str)) else ring(rhs)
    need = max(integral_level(lhs), integral_level(rhs))
    if k is None:
        k = need
    if k < need:
        raise ValueError(f"powers are not integral at level {k}; need {need}")
    d = frobenius_power(lhs, k) - frobenius_power(rhs, k)
    nf = ring.reduce(d)
    cert = PowerIdentityCertificate(lhs, rhs, k, d, nf)
    if not cert.holds:
        raise VerificationFailure(f"{lhs} = {rhs} fails at level {k}")
    return cert


def sqrt_identity(k=1):
    """z^2 = x (xz)^(1/2) + y (yz)^(1/2) on the Fermat cubic in char 2."""
    A = Ring(2, ["x", "y", "z"], k=k, relations=["x^3 + y^3 + z^3"], weights=[1, 1, 1], name="A")
    return verify_power_identity(A("z^2"), A("x*(x*z)^(1/2) + y*(y*z)^(1/2)"), 1)


def _q_root_family(ring, q, a, b, c, t):
    """Identities for the ordered triple (a, b, c) of the cubic variables."""
    e1 = 1 - Fraction(2, q)
    e2 = Fraction(1, q)
    A = a ** e1 * (b * c) ** e2
    B = t * b ** e1 * (a * c) ** e2
    lin = b + a * t
    products = (A * B * lin, t * A * B * a + A * b ** e1 * (a * c) ** e2 * b * t)
    simple = (A * B, t * (a * b) ** (1 - e2) * c ** (2 * e2))
    h = Fraction(1, 2 * q)
    root = (t * (a * b) ** (1 - e2) * c ** (2 * e2),
            t * b ** (1 - e2) * (a * c) ** h * a + a ** (1 - e2) * (b * c) ** h * b * t)
    return {"products": products, "simplification": simple, "root": root}


def verify_ex53_family(q_list=(2, 4, 8), k_field=1):
    """Certify the identity layers of the cubic-cone root family for each q."""
    R = Ring(2, ["x", "y", "z", "t"], k=k_field, relations=["x^3 + y^3 + z^3"], name="A[t]")
    x, y, z, t = R.gens()
    report = {"ring": R.spec(), "layers": []}
    certs = []
    for q in q_list:
        if q < 1 or q & (q - 1):
            raise ValueError("q must be a power of 2")
        layer = {"q": q, "identities": {}}
        if q == 1:
            # the family collapses to the square-root identity itself
            c = verify_power_identity(z ** 2, x * (x * z) ** Fraction(1, 2) + y * (y * z) ** Fraction(1, 2), 1)
            certs.append(c)
            layer["identities"]["root"] = c.to_dict()
            report["layers"].append(layer)
            continue
        for perm in itertools.permutations((x, y, z)):
            fam = _q_root_family(R, q, *perm, t)
            label = "".join(str(v) for v in perm)
            for kind, (lhs, rhs) in fam.items():
                c = verify_power_identity(lhs, rhs)
                certs.append(c)
                layer["identities"][f"{kind}[{label}]"] = {"level": c.level, "holds": c.holds,
                                                          "lhs": str(lhs), "rhs": str(rhs)}
        layer["elements"] = [str(e) for e in _family_elements(R, q, x, y, z, t)]
        report["layers"].append(layer)
    report["all_hold"] = all(c.holds for c in certs)
    return report, certs


def _family_elements(R, q, x, y, z, t):
    e1 = 1 - Fraction(2, q)
    e2 = Fraction(1, q)
    out = []
    for a, b, c in ((x, y, z), (y, x, z), (z, x, y)):
        out.append(a ** e1 * (b * c) ** e2)
    for a, b, c in ((x, y, z), (y, x, z), (z, x, y)):
        out.append(t * a ** e1 * (b * c) ** e2)
    return out


def sqrt_search(R, target="x*y", max_degree=6):
    """Bounded search for g, h in R, h != 0, with g^2 = target*h^2 (char 2,
    prime field).  Squaring is F_2-linear, so this is linear algebra in
    each degree; returns (found, degrees searched)."""
    if R.p != 2 or R.k != 1 or R.params:
        raise ValueError("the linear squaring search needs F_2 coefficients")
    w = _weights_for(R, None)
    if w is None:
        raise ValueError("graded ring required")
    tgt = R(target)
    dt = _wdeg_poly(tgt, w)
    if dt is None or dt % 2:
        raise ValueError("target must be homogeneous of even degree")
    K = R.field
    searched = []
    for d in range(0, max_degree + 1):
        gd = Fraction(d) + dt / 2
        gm = standard_monomials(R, gd, w)
        hm = standard_monomials(R, Fraction(d), w)
        rows = {}
        cols = [("g", m) for m in gm] + [("h", m) for m in hm]
        for j, (kind, m) in enumerate(cols):
            img = R.reduce(R.monomial(tuple(2 * e for e in m)) * (tgt if kind == "h" else R.one))
            for mono, c in img.terms.items():
                rows.setdefault(mono, {})[j] = c
        r_all = linalg.rank(K, list(rows.values()))
        grows = [{j: c for j, c in row.items() if j < len(gm)} for row in rows.values()]
        r_g = linalg.rank(K, grows)
        searched.append(d)
        if r_all < r_g + len(hm):
            return True, searched
    return False, searched


# -- top local cohomology ----------------------------------------------------------------

def top_piece_dimension(C, degree, truncation, weights=None):
    """dim of C^top in the given internal degree modulo coboundaries, both
    at denominator power ``truncation``."""
    ring = C.ring
    w = _weights_for(ring, weights)
    if w is None:
        raise ValueError("graded ring required")
    K = ring.field
    top = C.top
    full = C.subsets(top)[0]
    xdeg = [_wdeg_poly(x, w) for x in C.xs]
    M = truncation
    dtop = Fraction(degree) + M * sum(xdeg)
    if dtop < 0:
        return 0
    basis = standard_monomials(ring, dtop, w)
    if not basis:
        return 0
    rows = []
    for S in C.subsets(top - 1):
        u = [j for j in full if j not in S][0]
        dS = Fraction(degree) + M * sum(xdeg[j] for j in S)
        for m in standard_monomials(ring, dS, w):
            img = ring.reduce(ring.monomial(m) * C.xs[u] ** M)
            rows.append(dict(img.terms))
    index = {m: i for i, m in enumerate(basis)}
    mat = [{index[m]: c for m, c in r.items()} for r in rows]
    return len(basis) - linalg.rank(K, mat)


def top_degree_bound(C, truncation=None, max_degree=8, weights=None):
    """Largest degree in [0, max_degree] with a nonzero top piece at the
    truncation, or None when all of them vanish."""
    M = truncation or max(2, C.N)
    best = None
    for m in range(0, max_degree + 1):
        if top_piece_dimension(C, m, M, weights) > 0:
            best = m
    return best


@dataclass
class TopTrivialization:
    extension: PresentedExtension
    preimage: Cochain
    eta: Cochain
    tower: GaloisTowerReport
    record: dict

    def __iter__(self):
        return iter((self.extension, self.preimage, self.record))

    def verify(self) -> bool:
        eta = self.eta.to_ring(self.extension.ring)
        pre = self.preimage.to_ring(self.extension.ring)
        return differential(pre).equals(eta)

    def to_dict(self):
        return {"kind": "top_cohomology", "extension": self.extension.to_dict(),
                "eta": self.eta.to_dict(), "preimage": self.preimage.to_dict(),
                "tower": self.tower.to_dict(), "record": self.record}


def top_cohomology_trivialize(eta, e_max=4, weights=None, **solver):
    """Kill a top-degree class of nonnegative degree in a finite extension."""
    C = eta.complex
    ring = C.ring
    p = ring.p
    if eta.degree != C.top:
        raise ValueError("eta must be a top-degree cochain")
    w = _weights_for(ring, weights)
    n = eta.degree_weight(w) if not eta.is_zero() else Fraction(0)
    if n is None:
        raise ValueError("eta must be homogeneous")
    if n < 0:
        raise ValueError("only nonnegative degrees are covered")
    record = {"degree": str(n)}
    if n >= 1:
        record["top_degree_bound"] = top_degree_bound(C, weights=w)
    found = None
    for e in range(1, e_max + 1):
        cur = frobenius_on_cochain(eta, e)
        if n != 0 and record.get("top_degree_bound") is not None and n * p ** e <= record["top_degree_bound"]:
            continue
        res = solve_coboundary(cur, weights=w, **solver)
        if res.found:
            found = (e, res.preimage, ())
            break
        if n == 0:
            extras = [frobenius_on_cochain(eta, e - j) for j in range(1, e + 1)]
            res = solve_coboundary(cur, extra=extras, weights=w, **solver)
            if res.found:
                # d(alpha) + sum c_j F^(e-j) eta = F^e eta, so r_j = -c_j
                K = ring.field
                found = (e, res.preimage, tuple(K.neg(c) for c in res.coefficients))
                break
    if found is None:
        return None
    e, alpha, rs = found
    K = ring.field
    rs = tuple(rs) or tuple(K.zero for _ in range(e))
    record.update({"e": e, "r": [K.to_str(r) for r in rs], "alpha": alpha.to_dict()})
    tower = GaloisTowerReport(p)
    ext = PresentedExtension.over(ring)
    pe = p ** e
    M = alpha.N
    L = -(-M // pe)
    names = {}
    for S, b in sorted(alpha.comps.items()):
        xS = C.xpow(S, 1)
        nm = ext.fresh_name(f"tau{len(names) + 1}")
        lower = b * xS ** (L * pe - M)
        probe = f"({lower})"
        for j, r in enumerate(rs, start=1):
            if not K.is_zero(r):
                coef = ring.constant(r) * xS ** (L * (pe - p ** (e - j)))
                probe += f" - ({coef})*{nm}^{p ** (e - j)}"
        ext = ext.adjoin(nm, pe, probe)
        names[S] = nm
        if any(not K.is_zero(r) for r in rs):
            tower.add("additive_root", degree=pe, element=lower)
        else:
            tower.add("inseparable_root", p=p, element=lower, e=e)
    S_ring = ext.ring
    CS = C.over(S_ring)
    beta = CS.cochain(eta.degree - 1, {S: S_ring.gen(nm) for S, nm in names.items()}, N=L)
    check = frobenius_on_cochain(beta, e)
    for j, r in enumerate(rs, start=1):
        if not K.is_zero(r):
            check = check + frobenius_on_cochain(beta, e - j).scale(S_ring.constant(r))
    if not check.equals(alpha.to_ring(S_ring)):
        raise VerificationFailure("additive equation for beta failed")
    theta = eta.to_ring(S_ring) - differential(beta)
    lin = frobenius_on_cochain(theta, e)
    for j, r in enumerate(rs, start=1):
        if not K.is_zero(r):
            lin = lin + frobenius_on_cochain(theta, e - j).scale(S_ring.constant(r))
    if not lin.is_zero():
        raise VerificationFailure("theta is not a root of the additive polynomial")
    certified = []
    extra_pre = None
    if all(K.is_zero(r) for r in rs):
        # theta^(p^e) = 0: certify each numerator as nilpotent
        for S, num in sorted(theta.comps.items()):
            ext, lvl = ext.add_certified_relation(num, max_level=e)
            certified.append({"relation": f"{num} = 0", "nilpotency_level": lvl})
    else:
        # theta is a root of T^(p^e) + r_1 T^(p^(e-1)) + ... in the normal ring S;
        # only constant roots already in K are handled
        (Sfull, num), = theta.comps.items() if theta.comps else ((C.subsets(C.top)[0], S_ring.zero),)
        xK = CS.xpow(Sfull, theta.N)
        hit = None
        for c in K.elements():
            g = num - xK.scale(c)
            try:
                ext2, lvl = ext.add_certified_relation(g, max_level=e)
            except VerificationFailure:
                continue
            hit = (c, ext2, lvl, g)
            break
        if hit is None:
            record["inconclusive"] = "theta is not a constant of the coefficient field"
            return None
        c, ext, lvl, g = hit
        certified.append({"relation": f"{g} = 0", "nilpotency_level": lvl, "constant": K.to_str(c)})
        if not K.is_zero(c):
            # the constant c sits in the top component: c = d(+-c on the complementary face)
            top = C.subsets(C.top)[0]
            face = top[1:]
            extra_pre = (face, c)
    S_ring = ext.ring
    CS = C.over(S_ring)
    pre = beta.to_ring(S_ring)
    if extra_pre is not None:
        face, c = extra_pre
        pre = pre + CS.cochain(eta.degree - 1, {face: S_ring.constant(c) * CS.xpow(face, pre.N)}, N=pre.N)
    record["certified_relations"] = certified
    out = TopTrivialization(ext, pre, eta, tower, record)
    if not out.verify():
        raise VerificationFailure("eta = d(preimage) failed over the extension")
    return out


# -- splinter semigroup rings ----------------------------------------------------------

@dataclass
class SplinterReport:
    d: int
    ring: Ring
    kernel: tuple
    truncation: int
    dimensions: dict            # degree -> dim of the top piece at the truncation
    witness: Cochain | None
    witness_coboundary: bool | None

    def to_dict(self):
        return {"kind": "splinter", "d": self.d, "ring": self.ring.spec(),
                "truncation": self.truncation,
                "top_piece_dimensions": {str(k): v for k, v in sorted(self.dimensions.items())},
                "witness": self.witness.to_dict() if self.witness is not None else None,
                "witness_is_coboundary_within_budget": self.witness_coboundary}


def splinter_fixture(d, truncation=3, degrees=range(-3, 1), p=2):
    """K[x_1...x_d, x_1^d, ..., x_d^d] with all generators in degree 1."""
    if d < 1:
        raise ValueError("d must be positive")
    P = Ring(p, [f"x{i}" for i in range(1, d + 1)])
    xs = P.gens()
    if d == 1:
        R = Ring(p, ["v1"], weights=[1], name="K[x]")
        kern = ()
        sop = [R.gen("v1")]
    else:
        prod = P.one
        for x in xs:
            prod = prod * x
        names = ["u"] + [f"v{i}" for i in range(1, d + 1)]
        R, kern = presentation([prod] + [x ** d for x in xs], names, weights=[1] * (d + 1),
                               name=f"splinter{d}")
        sop = [R.gen(f"v{i}") for i in range(1, d + 1)]
    C = CechComplex(R, sop, truncation)
    dims = {m: top_piece_dimension(C, m, truncation) for m in degrees}
    witness = None
    cob = None
    if d >= 2:
        u = R.gen("u")
        witness = C.cochain(d, {tuple(range(d)): u}, N=1)
        res = solve_coboundary(witness, max_truncation=truncation)
        cob = res.found
    return SplinterReport(d, R, tuple(kern), truncation, dims, witness, cob)
