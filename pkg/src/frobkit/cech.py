"""Čech complexes C(x_0..x_n; R) on a presented ring.

Degree-i cochains are indexed by the i-element subsets of {0..n}; C^0 is a
single copy of the ring (the empty subset).  Every component of a cochain
is stored as a numerator over x_S^N with one truncation exponent N for the
whole cochain, so the direct-limit structure of local cohomology becomes
explicit bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .extensions import GaloisTowerReport, PresentedExtension, VerificationFailure
from .ring import Polynomial, Ring, frobenius_power, mono_divides


class TruncationError(ValueError):
    """A component does not clear into the requested denominator power."""


class CechComplex:
    def __init__(self, ring, xs, N=1):
        if isinstance(ring, PresentedExtension):
            ring = ring.ring
        self.ring = ring
        self.xs = tuple(ring(x) for x in xs)
        if not self.xs:
            raise ValueError("need at least one element")
        for x in self.xs:
            if ring.reduce(x).is_zero():
                raise ValueError("elements must be nonzero")
            if not x.is_integral():
                raise ValueError("elements must have integer exponents")
        self.N = N
        self.n = len(self.xs) - 1
        self._subsets = {}

    @property
    def top(self):
        return self.n + 1

    def subsets(self, i):
        if i not in self._subsets:
            if i < 0 or i > self.n + 1:
                self._subsets[i] = ()
            else:
                self._subsets[i] = tuple(itertools.combinations(range(self.n + 1), i))
        return self._subsets[i]

    def xpow(self, S, N):
        out = self.ring.one
        for j in S:
            out = out * self.xs[j] ** N
        return out

    def over(self, ring):
        """The same complex with coefficients in a ring containing this one."""
        if isinstance(ring, PresentedExtension):
            ring = ring.ring
        return CechComplex(ring, [ring.coerce(x) for x in self.xs], self.N)

    def is_unit_complex(self):
        x0 = self.xs[0]
        return x0.is_constant() and not x0.is_zero()

    def cochain(self, degree, comps, N=None):
        """Build a cochain from {subset: numerator} (over x_S^N) or
        {subset: (numerator, k)} meaning numerator / x_S^k."""
        fixed = {}
        levels = {}
        for S, v in comps.items():
            S = tuple(sorted(S))
            if len(S) != degree or (S and (S[0] < 0 or S[-1] > self.n)):
                raise ValueError(f"subset {S} does not index degree {degree}")
            if isinstance(v, tuple):
                num, k = v
            else:
                num, k = v, N if N is not None else self.N
            fixed[S] = self.ring(num)
            levels[S] = k
        M = max(levels.values(), default=N if N is not None else self.N)
        if N is not None:
            if M > N:
                raise TruncationError(f"denominator power {M} exceeds truncation {N}")
            M = N
        out = {S: num * self.xpow(S, M - levels[S]) for S, num in fixed.items()}
        return Cochain(self, degree, out, M)

    def zero(self, degree, N=None):
        return Cochain(self, degree, {}, self.N if N is None else N)

    def __repr__(self):
        return f"<CechComplex ({', '.join(map(str, self.xs))}) over {self.ring!r}>"


class Cochain:
    """Components num_S / x_S^N; numerators kept in normal form."""

    def __init__(self, complex, degree, comps, N):
        self.complex = complex
        self.degree = degree
        self.N = N
        ring = complex.ring
        clean = {}
        for S, num in comps.items():
            r = ring.reduce(ring.coerce(num))
            if not r.is_zero():
                clean[tuple(S)] = r
        self.comps = clean

    @property
    def ring(self):
        return self.complex.ring

    def numerator(self, S):
        return self.comps.get(tuple(S), self.ring.zero)

    def is_zero(self):
        return not self.comps

    def at_level(self, M):
        if M < self.N:
            raise TruncationError("cannot lower the truncation exponent")
        if M == self.N:
            return self
        C = self.complex
        return Cochain(C, self.degree, {S: n * C.xpow(S, M - self.N) for S, n in self.comps.items()}, M)

    def _aligned(self, other):
        if other.complex is not self.complex and not _same_complex(self.complex, other.complex):
            raise ValueError("cochains on different complexes")
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        M = max(self.N, other.N)
        return self.at_level(M), other.at_level(M), M

    def __add__(self, other):
        a, b, M = self._aligned(other)
        out = dict(a.comps)
        for S, n in b.comps.items():
            out[S] = out.get(S, self.ring.zero) + n
        return Cochain(self.complex, self.degree, out, M)

    def __neg__(self):
        return Cochain(self.complex, self.degree, {S: -n for S, n in self.comps.items()}, self.N)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r):
        r = self.ring(r)
        return Cochain(self.complex, self.degree, {S: r * n for S, n in self.comps.items()}, self.N)

    def equals(self, other) -> bool:
        """Equality of numerators over a common denominator, modulo the
        relations.  In a domain this is equality in the localizations."""
        return (self - other).is_zero()

    def to_ring(self, ring):
        """Coerce into a complex over a ring containing this one."""
        C = self.complex.over(ring)
        return Cochain(C, self.degree, {S: C.ring.coerce(n) for S, n in self.comps.items()}, self.N)

    def degree_weight(self, weights=None):
        """Internal degree of a homogeneous cochain, or None."""
        w = _weights_for(self.ring, weights)
        if w is None:
            return None
        deg = None
        for S, n in self.comps.items():
            d = _wdeg_poly(n, w)
            if d is None:
                return None
            d = d - self.N * sum((_wdeg_poly(self.complex.xs[j], w) for j in S), Fraction(0))
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg

    def to_dict(self):
        xs = self.complex.xs
        out = {}
        for S, n in sorted(self.comps.items()):
            den = "*".join(f"({xs[j]})^{self.N}" for j in S) or "1"
            out["{" + ",".join(map(str, S)) + "}"] = f"({n})/({den})"
        return {"degree": self.degree, "truncation": self.N,
                "elements": [str(x) for x in xs], "components": out}

    def __repr__(self):
        return f"<Cochain deg {self.degree} N={self.N} {self.to_dict()['components']}>"


def _same_complex(A, B):
    return A.ring.same(B.ring) and len(A.xs) == len(B.xs) and all(
        A.ring.coerce(x) == y for x, y in zip(B.xs, A.xs))


def _weights_for(ring, weights):
    if weights is not None:
        return tuple(Fraction(w) for w in weights)
    if ring.weights is not None:
        return tuple(Fraction(w) for w in ring.weights)
    if ring.order.weights is not None and len(ring.order.weights) == ring.nvars:
        return tuple(Fraction(w) for w in ring.order.weights)
    return None


def _wdeg_poly(f, w):
    deg = None
    for m in f.terms:
        d = sum((Fraction(e) * wi for e, wi in zip(m, w)), Fraction(0))
        if deg is None:
            deg = d
        elif d != deg:
            return None
    return deg if deg is not None else Fraction(0)


# -- the differential and Frobenius ------------------------------------------------

def differential(c: Cochain) -> Cochain:
    """(dc)_U = sum_k (-1)^k c_{U - u_k} * x_{u_k}^N."""
    C = c.complex
    if c.degree >= C.top:
        raise ValueError("no differential out of the top degree")
    out = {}
    for U in C.subsets(c.degree + 1):
        acc = c.ring.zero
        for k, u in enumerate(U):
            num = c.comps.get(U[:k] + U[k + 1:])
            if num is None:
                continue
            term = num * C.xs[u] ** c.N
            acc = acc + term if k % 2 == 0 else acc - term
        out[U] = acc
    return Cochain(C, c.degree + 1, out, c.N)


def frobenius_on_cochain(c: Cochain, e: int = 1) -> Cochain:
    """Componentwise p^e-th power; the truncation exponent is multiplied by p^e."""
    if e == 0:
        return c
    q = c.ring.p ** e
    return Cochain(c.complex, c.degree, {S: frobenius_power(n, e) for S, n in c.comps.items()}, c.N * q)


def is_cocycle(c: Cochain) -> bool:
    if c.degree >= c.complex.top:
        return True
    return differential(c).is_zero()


@dataclass
class CohomologyClass:
    cochain: Cochain

    def __post_init__(self):
        if not is_cocycle(self.cochain):
            raise VerificationFailure("not a cocycle")

    @property
    def degree(self):
        return self.cochain.degree

    def to_dict(self):
        return self.cochain.to_dict()


# -- the unit complex homotopy --------------------------------------------------

def contracting_homotopy_with_unit(c: Cochain) -> Cochain:
    """h(c)_T = c_{{0} u T} for T avoiding 0; then dh + hd = id."""
    C = c.complex
    if not C.is_unit_complex():
        raise ValueError("first element of the complex must be a unit")
    if c.degree == 0:
        return C.zero(-1, c.N)
    x0 = C.xs[0].constant_value()
    inv = C.ring.field.inv(x0)
    out = {}
    for S, n in c.comps.items():
        if S[0] == 0:
            out[S[1:]] = n.scale(C.ring.field.pow(inv, c.N))
    return Cochain(C, c.degree - 1, out, c.N)


# -- coboundary solving ------------------------------------------------------------

def standard_monomials(ring, degree=None, weights=None, max_total=None):
    """Monomials not divisible by a leading monomial of the relation basis,
    of a given weighted degree or of total degree <= max_total."""
    lms = ring.relation_basis.leading_monomials() if ring.relations else []
    n = ring.nvars
    out = []
    if degree is not None:
        w = weights
        degree = Fraction(degree)
        if degree < 0:
            return []

        def rec(i, left, cur):
            if i == n:
                if left == 0:
                    m = tuple(cur)
                    if not any(mono_divides(l, m) for l in lms):
                        out.append(m)
                return
            e = 0
            while e * w[i] <= left:
                cur.append(e)
                rec(i + 1, left - e * w[i], cur)
                cur.pop()
                e += 1
        rec(0, degree, [])
        return out
    if max_total is None:
        raise ValueError("give a degree or a total-degree cap")
    for t in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(range(n), t):
            m = [0] * n
            for j in combo:
                m[j] += 1
            m = tuple(m)
            if not any(mono_divides(l, m) for l in lms):
                out.append(m)
    return out


@dataclass
class CoboundarySearch:
    preimage: Cochain | None
    coefficients: tuple = ()      # scalars multiplying the extra cochains
    truncation: int | None = None
    exact: bool = False           # a negative answer is a proof in this degree
    columns: int = 0

    @property
    def found(self):
        return self.preimage is not None


DEFAULT_DEGREE_CAP = 12


def solve_coboundary(c: Cochain, *, extra=(), weights=None, degree_cap=DEFAULT_DEGREE_CAP,
                     max_truncation=None):
    """Search beta and scalars r with d(beta) + sum r_j extra_j = c.

    Numerators of beta range over standard monomials: of the forced degree
    when c is homogeneous for a grading under which the relations are
    homogeneous, otherwise of total degree <= degree_cap.  The truncation
    exponent of beta runs from c.N up to max_truncation (default c.N + 2).
    """
    C = c.complex
    ring = C.ring
    K = ring.field
    i = c.degree
    if i == 0:
        ok = c.is_zero() and not extra
        return CoboundarySearch(C.zero(-1) if ok else None, (), c.N, True)
    extra = list(extra)
    N0 = max([c.N] + [e.N for e in extra])
    w = _weights_for(ring, weights)
    graded = w is not None and all(_wdeg_poly(r, w) is not None for r in ring.relations)
    if graded:
        deg = c.degree_weight(w) if not c.is_zero() else None
        if deg is None and not c.is_zero():
            graded = False
        for e in extra:
            de = e.degree_weight(w)
            if de is None and not e.is_zero():
                graded = False
            elif deg is None:
                deg = de
            elif de is not None and de != deg:
                graded = False
        if deg is None:
            deg = Fraction(0)
    top = max_truncation if max_truncation is not None else N0 + 2
    if i - 1 == 0:
        top = N0      # C^0 has no denominators: one level decides everything
    cache = {}

    def nf(f):
        return ring.reduce(f)

    result = None
    for M in range(N0, top + 1):
        cols = []          # (S, monomial) or ("extra", j)
        for S in C.subsets(i - 1):
            if graded:
                dS = deg + M * sum((_wdeg_poly(C.xs[j], w) for j in S), Fraction(0))
                mons = standard_monomials(ring, dS, w)
            else:
                mons = standard_monomials(ring, max_total=degree_cap)
            cols.extend((S, m) for m in mons)
        ncols_main = len(cols)
        cols.extend(("extra", j) for j in range(len(extra)))
        # equations: one per (U, monomial of the normal form)
        rowmap = {}
        rows = []
        rhs = []

        def eq(U, mono):
            key = (U, mono)
            if key not in rowmap:
                rowmap[key] = len(rows)
                rows.append({})
                rhs.append(K.zero)
            return rowmap[key]

        for col, (S, m) in enumerate(cols[:ncols_main]):
            for u in range(C.n + 1):
                if u in S:
                    continue
                U = tuple(sorted(S + (u,)))
                k = U.index(u)
                ck = (m, u, M)
                if ck not in cache:
                    cache[ck] = nf(ring.monomial(m) * C.xs[u] ** M)
                img = cache[ck]
                sign = 1 if k % 2 == 0 else -1
                for mono, coef in img.terms.items():
                    r = eq(U, mono)
                    v = coef if sign == 1 else K.neg(coef)
                    rows[r][col] = K.add(rows[r].get(col, K.zero), v)
        cM = c.at_level(M)
        for j, e in enumerate(extra):
            eM = e.at_level(M)
            for U, num in eM.comps.items():
                for mono, coef in num.terms.items():
                    r = eq(U, mono)
                    col = ncols_main + j
                    rows[r][col] = K.add(rows[r].get(col, K.zero), coef)
        for U, num in cM.comps.items():
            for mono, coef in num.terms.items():
                r = eq(U, mono)
                rhs[r] = K.add(rhs[r], coef)
        sol = linalg.solve(K, rows, rhs, len(cols))
        if sol is None:
            continue
        comps = {}
        for (S, m), v in zip(cols[:ncols_main], sol[:ncols_main]):
            if not K.is_zero(v):
                comps[S] = comps.get(S, ring.zero) + ring.monomial(m, v)
        beta = Cochain(C, i - 1, comps, M)
        coeffs = tuple(sol[ncols_main:])
        check = differential(beta)
        for r_j, e in zip(coeffs, extra):
            check = check + e.scale(ring.constant(r_j))
        if not check.equals(c):
            raise VerificationFailure("coboundary solution failed to re-verify")
        result = CoboundarySearch(beta, coeffs, M, True, len(cols))
        break
    if result is None:
        result = CoboundarySearch(None, (), top, graded and i - 1 == 0)
    return result


def is_coboundary(c: Cochain, **budget):
    """A preimage beta with d(beta) = c, or None (none within budget)."""
    res = solve_coboundary(c, **budget)
    return res.preimage


# -- classes from relations -------------------------------------------------------

def class_from_relation(xs, coeffs, ring=None, N=1):
    """The H^2 class of a relation u x_1 + v x_2 + w x_3 = 0:
    eta_12 = w/(x_1 x_2), eta_13 = -v/(x_1 x_3), eta_23 = u/(x_2 x_3)."""
    if len(xs) != 3 or len(coeffs) != 3:
        raise ValueError("three parameters and three coefficients expected")
    ring = ring or xs[0].ring
    x = [ring(a) for a in xs]
    u, v, w = (ring(a) for a in coeffs)
    if not ring.reduce(u * x[0] + v * x[1] + w * x[2]).is_zero():
        raise VerificationFailure("relation does not hold")
    C = CechComplex(ring, x, N)
    eta = C.cochain(2, {(0, 1): (w, 1), (0, 2): (-v, 1), (1, 2): (u, 1)}, N=N)
    return CohomologyClass(eta)


# -- trivialization of Frobenius-nilpotent classes -------------------------------------

@dataclass
class TrivializationResult:
    extension: PresentedExtension
    xi: Cochain
    tower: GaloisTowerReport
    record: dict
    eta: Cochain = field(repr=False, default=None)

    def __iter__(self):
        return iter((self.extension, self.xi, self.tower, self.record))

    def verify(self) -> bool:
        eta = self.eta.to_ring(self.extension.ring)
        xi = self.xi.to_ring(self.extension.ring)
        if xi.degree != eta.degree - 1:
            return False
        return differential(xi).equals(eta)

    def to_dict(self):
        return {"kind": "trivialization", "extension": self.extension.to_dict(),
                "eta": self.eta.to_dict(), "xi": self.xi.to_dict(),
                "tower": self.tower.to_dict(), "record": self.record}


def _smallest_power(p, n):
    q = 1
    while q < n:
        q *= p
    return q


def _pth_root_poly(f):
    """g with g^p = f in the ambient polynomial ring, if f is visibly a p-th power."""
    p = f.ring.p
    K = f.ring.field
    terms = {}
    for m, c in f.terms.items():
        if any(not isinstance(e, int) or e % p for e in m):
            return None
        if not K.is_constant_field():
            return None
        terms[tuple(e // p for e in m)] = K.root(c)
    return Polynomial(f.ring, terms)


def _one_step(ext, eta, alpha, tag, p):
    """Given F(eta) = d(alpha) over ext, return (ext', xi, tower, info) with
    eta = d(xi) over ext'."""
    ring = ext.ring
    C = eta.complex
    i = eta.degree
    tower = GaloisTowerReport(p)
    info = {"degree": i}
    # extraction: alpha over a p-power truncation q
    q = _smallest_power(p, max(alpha.N, p))
    alpha = alpha.at_level(q)
    first = [S for S in C.subsets(i - 1) if S and S[0] == 0]
    info["first_block"] = ["{" + ",".join(map(str, S)) + "}" for S in first]
    info["q"] = q
    x0 = C.xs[0]
    names = {}
    bs = []
    for S in first:
        b = alpha.numerator(S)
        if b.is_zero():
            continue
        nm = ext.fresh_name(f"t{len(names) + 1}{tag}")
        ext = ext.adjoin(nm, p, f"({b}) - ({x0 ** q})*{nm}")
        names[S] = nm
        bs.append(b)
        tower.add("artin_schreier", a=x0 ** q, b=b, derivative=x0 ** q)
    if names and p > 2:
        pre = GaloisTowerReport(p)
        pre.add("root_of_unity", n=p - 1)
        pre.add("radical", n=p - 1, element=-(x0 ** q))
        tower.steps = pre.steps + tower.steps
    ring = ext.ring
    CS = C.over(ring)
    eta = eta.to_ring(ring)
    alpha = alpha.to_ring(ring)
    # beta_S = t/(x0 mu)^(q/p) on the first block, so that alpha = F(beta) + gamma
    beta = CS.cochain(i - 1, {S: ring.gen(nm) for S, nm in names.items()}, N=q // p)
    gamma_comps = dict(alpha.comps)
    for S, nm in names.items():
        gamma_comps[S] = ring.gen(nm) * ring.coerce(x0) ** q
    gamma = Cochain(CS, i - 1, gamma_comps, q)
    if not (frobenius_on_cochain(beta) + gamma).equals(alpha):
        raise VerificationFailure("alpha = F(beta) + gamma failed")
    eta1 = eta - differential(beta)
    if not frobenius_on_cochain(eta1).equals(differential(gamma)):
        raise VerificationFailure("F(eta - d beta) = d gamma failed")
    # move gamma to the unit complex (1, x_1..x_n) and kill its first block
    U = CechComplex(ring, [ring.one] + [ring.coerce(x) for x in C.xs[1:]], q)
    ucomps = {}
    for S, n in gamma.comps.items():
        if S and S[0] == 0:
            qt, rem = _divide_by_power(n, ring.coerce(x0), q)
            if rem:
                raise VerificationFailure("first-block entry of gamma not divisible by x0^q")
            ucomps[S] = qt
        else:
            ucomps[S] = n
    gu = Cochain(U, i - 1, ucomps, q)
    zeta = contracting_homotopy_with_unit(gu)
    gu2 = gu - differential(zeta) if i - 1 > 0 else gu
    if any(S and S[0] == 0 for S in gu2.comps):
        raise VerificationFailure("homotopy did not clear the first block")
    # back into C(x; S): no component touches index 0 any more
    gamma2 = Cochain(CS, i - 1, gu2.comps, gu2.N)
    if not frobenius_on_cochain(eta1).equals(differential(gamma2)):
        raise VerificationFailure("F(eta') = d gamma' failed")
    # stage (g): p-th roots of the remaining entries
    Q = gamma2.N
    Qp = Q if Q % p == 0 else _smallest_power(p, max(Q, p))
    gamma2 = gamma2.at_level(Qp)
    L = Qp // p
    roots = {}
    stage_g = []
    for T, cT in sorted(gamma2.comps.items()):
        g = _pth_root_poly(ring.ambient().coerce(cT))
        if g is not None:
            roots[T] = ring.coerce(g)
            continue
        nm = ext.fresh_name(f"s{len(stage_g) + 1}{tag}")
        ext = ext.adjoin(nm, p, cT)
        roots[T] = nm
        stage_g.append(T)
        tower.add("inseparable_root", birational=True, p=p, element=cT)
    ring = ext.ring
    CS = C.over(ring)
    eta1 = eta1.to_ring(ring)
    beta = beta.to_ring(ring)
    xi = CS.cochain(i - 1, {T: ring.gen(r) if isinstance(r, str) else r for T, r in roots.items()}, N=L)
    if not frobenius_on_cochain(xi).equals(gamma2.to_ring(ring)):
        raise VerificationFailure("F(xi) = gamma' failed")
    # eta' - d(xi) has vanishing p-th power: certify and record each entry
    diff = eta1 - differential(xi)
    certified = []
    for S, n in sorted(diff.comps.items()):
        ext, lvl = ext.add_certified_relation(n, max_level=1)
        certified.append({"component": "{" + ",".join(map(str, S)) + "}",
                          "relation": f"{n} = 0", "nilpotency_level": lvl})
    ring = ext.ring
    xi_total = xi.to_ring(ring) + beta.to_ring(ring)
    if not differential(xi_total).equals(eta.to_ring(ring)):
        raise VerificationFailure("eta = d(xi) failed")
    info.update({
        "artin_schreier": {"{" + ",".join(map(str, S)) + "}": nm for S, nm in names.items()},
        "stage_g_roots": len(stage_g),
        "certified_relations": certified,
    })
    return ext, xi_total, tower, info


def _divide_by_power(f, x, k):
    """(quotient, nonzero remainder?) for f / x^k as ambient polynomials."""
    if k == 0:
        return f, False
    ring = f.ring
    from .groebner import Ideal, buchberger, normal_form
    amb = ring.ambient()
    g = amb.coerce(x ** k)
    G = buchberger(Ideal(amb, [g]))
    cert = normal_form(amb.coerce(f), G)
    if not cert.remainder.is_zero():
        return None, True
    K = amb.field
    factor = K.div(G.polys[0].lc(), g.lc())
    return ring.coerce(cert.quotients[0].scale(factor)), False


def trivialize_nilpotent_class(eta, e_max=4, **solver):
    """Extension S and xi with eta = d(xi) in C(x; S) for an F-nilpotent class."""
    from .frobenius import f_nilpotent_order
    if isinstance(eta, CohomologyClass):
        eta = eta.cochain
    if not is_cocycle(eta):
        raise VerificationFailure("not a cocycle")
    if eta.degree == 0:
        raise ValueError("degree-0 classes are never coboundaries")
    base = eta.ring
    p = base.p
    nil = f_nilpotent_order(eta, e_max, **solver)
    if nil.exceeded:
        return None
    e = nil.order
    ext = PresentedExtension.over(base)
    tower = GaloisTowerReport(p)
    record = {"nilpotency_order": e, "levels": []}
    if e == 0:
        res = TrivializationResult(ext, nil.preimage, tower, record, eta)
        if not res.verify():
            raise VerificationFailure("preimage failed")
        return res
    alpha = nil.preimage
    for j in range(e - 1, -1, -1):
        eta_j = frobenius_on_cochain(eta, j).to_ring(ext.ring)
        tag = "" if e == 1 else f"_{e - j}"
        ext, xi, rep, info = _one_step(ext, eta_j, alpha.to_ring(ext.ring), tag, p)
        tower.extend(rep)
        info["level"] = j
        record["levels"].append(info)
        alpha = xi
    record["stage_g_used"] = any(l["stage_g_roots"] for l in record["levels"])
    res = TrivializationResult(ext, alpha, tower, record, eta)
    if not res.verify():
        raise VerificationFailure("final identity eta = d(xi) failed")
    return res
