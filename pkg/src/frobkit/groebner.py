"""Buchberger engine: reduced Gröbner bases, division certificates,
membership with cofactors, colon ideals, elimination and ring-map kernels.

Quotient rings are handled by always adjoining the ring's defining
relations to the generators; everything is computed in the ambient
polynomial ring.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .ring import MonomialOrder, Polynomial, Ring, mono_divides, mono_lcm

MAX_PAIRS = 100_000
MAX_DEGREE = 60


class BudgetExceeded(RuntimeError):
    """A resource cap was hit; the computation made no claim."""


def _negkey(k):
    if isinstance(k, tuple):
        return tuple(_negkey(x) for x in k)
    return -k


class Ideal:
    def __init__(self, ring, gens):
        self.ring = ring
        out = []
        for g in gens:
            g = ring(g) if isinstance(g, (str, int)) else ring.coerce(g)
            if not g.is_integral():
                raise ValueError("ideal generators need integer exponents")
            if not g.is_zero():
                out.append(g)
        self.gens = tuple(out)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens))})"

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)


@dataclass
class DivisionCertificate:
    dividend: Polynomial
    divisors: tuple
    quotients: tuple
    remainder: Polynomial

    def verify(self) -> bool:
        total = self.remainder
        for q, g in zip(self.quotients, self.divisors):
            total = total + q * g
        if total != self.dividend:
            return False
        lms = [g.lm() for g in self.divisors]
        return not any(mono_divides(l, m) for m in self.remainder.terms for l in lms)


@dataclass
class GroebnerBasis:
    ideal: Ideal
    ring: Ring                # ambient polynomial ring holding the basis
    polys: tuple
    sources: tuple = ()       # generators the lift refers to
    lift: tuple | None = None  # lift[k][j]: coefficient of sources[j] in polys[k]
    stats: dict = field(default_factory=dict)

    def leading_monomials(self):
        return [g.lm() for g in self.polys]

    def is_unit(self):
        return any(g.is_constant() and not g.is_zero() for g in self.polys)

    def contains(self, f) -> bool:
        return reduce_poly(self.ring.coerce(f), self).is_zero()

    def s_polynomial(self, i, j):
        f, g = self.polys[i], self.polys[j]
        L = mono_lcm(f.lm(), g.lm())
        R = self.ring
        mf = R.monomial(tuple(a - b for a, b in zip(L, f.lm())), R.field.div(R.field.from_int(1), f.lc()))
        mg = R.monomial(tuple(a - b for a, b in zip(L, g.lm())), R.field.div(R.field.from_int(1), g.lc()))
        return mf * f - mg * g

    def verify(self) -> bool:
        """Every S-polynomial reduces to zero and every source generator lies in the span."""
        n = len(self.polys)
        if any(not reduce_poly(self.s_polynomial(i, j), self).is_zero()
               for i in range(n) for j in range(i + 1, n)):
            return False
        return all(self.contains(g) for g in self.ideal.gens)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and [str(g) for g in self.polys] == [str(g) for g in other.polys]

    def __hash__(self):
        return hash(tuple(str(g) for g in self.polys))


class _Reducer:
    """Division by a list of (monic-izable) dict polynomials."""

    def __init__(self, ring, basis):
        self.ring = ring
        self.K = ring.field
        self.key = ring.order.key
        self.basis = []
        for g in basis:
            lm, lc = self.lead(g)
            self.basis.append((lm, self.K.inv(lc), g))

    def lead(self, f):
        m = max(f, key=self.key)
        return m, f[m]

    def reduce(self, f, track=False, full=True):
        K = self.K
        add, mul, neg, iz = K.add, K.mul, K.neg, K.is_zero
        key = self.key
        f = dict(f)
        heap = [(_negkey(key(m)), m) for m in f]
        heapq.heapify(heap)
        inheap = set(f)
        rem = {}
        quots = [dict() for _ in self.basis] if track else None
        basis = self.basis
        steps = 0
        while heap:
            _, m = heapq.heappop(heap)
            inheap.discard(m)
            c = f.get(m)
            if c is None:
                continue
            for idx, (lm, lcinv, g) in enumerate(basis):
                if all(a <= b for a, b in zip(lm, m)):
                    d = tuple(a - b for a, b in zip(m, lm))
                    coef = mul(c, lcinv)
                    nc = neg(coef)
                    for gm, gc in g.items():
                        mm = tuple(a + b for a, b in zip(gm, d))
                        v = mul(nc, gc)
                        if mm in f:
                            s = add(f[mm], v)
                            if iz(s):
                                del f[mm]
                            else:
                                f[mm] = s
                        else:
                            f[mm] = v
                            if mm not in inheap:
                                inheap.add(mm)
                                heapq.heappush(heap, (_negkey(key(mm)), mm))
                    if track:
                        q = quots[idx]
                        s = add(q.get(d, K.zero), coef)
                        if iz(s):
                            q.pop(d, None)
                        else:
                            q[d] = s
                    steps += 1
                    break
            else:
                rem[m] = c
                del f[m]
                if not full:
                    rem.update(f)
                    break
        return rem, quots


def _dict_add(K, f, g, scale=None):
    out = dict(f)
    for m, c in g.items():
        if scale is not None:
            c = K.mul(c, scale)
        s = K.add(out[m], c) if m in out else c
        if K.is_zero(s):
            out.pop(m, None)
        else:
            out[m] = s
    return out


def _dict_mul_term(K, f, mono, c):
    return {tuple(a + b for a, b in zip(m, mono)): K.mul(v, c) for m, v in f.items()}


def _dict_mul(K, f, g):
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            s = K.add(out[m], K.mul(c1, c2)) if m in out else K.mul(c1, c2)
            if K.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
    return out


def _lift_combine(K, lifts, quots, n):
    """sum_k quots[k] * lifts[k] as a list of n dicts."""
    out = [dict() for _ in range(n)]
    for q, lv in zip(quots, lifts):
        if not q:
            continue
        for j in range(n):
            if lv[j]:
                out[j] = _dict_add(K, out[j], _dict_mul(K, q, lv[j]))
    return out


def buchberger(ideal, *, max_pairs=MAX_PAIRS, max_degree=MAX_DEGREE, track=False):
    """Reduced Gröbner basis of ``ideal`` plus the ring's defining relations.

    Normal selection strategy with Buchberger's coprime and chain criteria.
    With ``track=True`` each basis element carries its expression in the
    source generators (ideal generators first, then relations).
    """
    ring = ideal.ring
    amb = ring.ambient()
    K = amb.field
    key = amb.order.key
    sources = [amb.coerce(g) for g in ideal.gens] + [amb.coerce(r) for r in ring.relations]
    nsrc = len(sources)

    G = []        # dict polys
    lms = []
    lifts = []
    alive = []
    pending = set()
    heap = []
    pairs_done = 0

    def unit_lift(j):
        v = [dict() for _ in range(nsrc)]
        v[j] = {(0,) * amb.nvars: K.one}
        return v

    def make_monic(f, lv):
        lm = max(f, key=key)
        inv = K.inv(f[lm])
        f = {m: K.mul(c, inv) for m, c in f.items()}
        if lv is not None:
            lv = [{m: K.mul(c, inv) for m, c in d.items()} for d in lv]
        return f, lm, lv

    def add_element(f, lv):
        f, lm, lv = make_monic(f, lv)
        if sum(lm) > max_degree:
            raise BudgetExceeded(f"basis element degree {sum(lm)} exceeds cap {max_degree}")
        k = len(G)
        G.append(f)
        lms.append(lm)
        lifts.append(lv)
        alive.append(True)
        for i in range(k):
            if not alive[i]:
                continue
            L = mono_lcm(lms[i], lm)
            pending.add((i, k))
            heapq.heappush(heap, (sum(L), key(L), i, k))

    # seed: interreduce sources lightly by inserting their normal forms
    for j, s in enumerate(sources):
        if s.is_zero():
            continue
        active = [G[i] for i in range(len(G)) if alive[i]]
        red = _Reducer(amb, active)
        r, q = red.reduce(s.terms, track=track)
        if r:
            lv = None
            if track:
                act_lifts = [lifts[i] for i in range(len(G)) if alive[i]]
                sub = _lift_combine(K, act_lifts, q, nsrc)
                lv = [_dict_add(K, a, b, K.neg(K.one)) for a, b in zip(unit_lift(j), sub)]
            add_element(r, lv)

    while heap:
        _, _, i, k = heapq.heappop(heap)
        if (i, k) not in pending:
            continue
        pending.discard((i, k))
        lm_i, lm_k = lms[i], lms[k]
        L = mono_lcm(lm_i, lm_k)
        # coprime criterion
        if all(a == 0 or b == 0 for a, b in zip(lm_i, lm_k)):
            continue
        # chain criterion
        skip = False
        for j in range(len(G)):
            if j in (i, k) or not mono_divides(lms[j], L):
                continue
            if (min(i, j), max(i, j)) not in pending and (min(k, j), max(k, j)) not in pending:
                skip = True
                break
        if skip:
            continue
        pairs_done += 1
        if pairs_done > max_pairs:
            raise BudgetExceeded(f"pair count exceeds cap {max_pairs}")
        di = tuple(a - b for a, b in zip(L, lm_i))
        dk = tuple(a - b for a, b in zip(L, lm_k))
        s = _dict_add(K, _dict_mul_term(K, G[i], di, K.one), _dict_mul_term(K, G[k], dk, K.one), K.neg(K.one))
        if not s:
            continue
        active_idx = [j for j in range(len(G)) if alive[j]]
        red = _Reducer(amb, [G[j] for j in active_idx])
        r, q = red.reduce(s, track=track)
        if r:
            lv = None
            if track:
                ls = [_dict_add(K, _dict_mul_term(K, a, di, K.one), _dict_mul_term(K, b, dk, K.one), K.neg(K.one))
                      for a, b in zip(lifts[i], lifts[k])]
                sub = _lift_combine(K, [lifts[j] for j in active_idx], q, nsrc)
                lv = [_dict_add(K, a, b, K.neg(K.one)) for a, b in zip(ls, sub)]
            add_element(r, lv)

    # minimal basis, then interreduce tails
    idx = [i for i in range(len(G)) if alive[i]]
    minimal = []
    for i in idx:
        if any(j != i and mono_divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i) for j in idx):
            continue
        minimal.append(i)
    minimal.sort(key=lambda i: key(lms[i]), reverse=True)
    final, final_lifts = [], []
    for i in minimal:
        others = [G[j] for j in minimal if j != i]
        red = _Reducer(amb, others)
        head = {lms[i]: G[i][lms[i]]}
        tail = {m: c for m, c in G[i].items() if m != lms[i]}
        r, q = red.reduce(tail, track=track)
        f = dict(r)
        f.update(head)
        lv = None
        if track:
            sub = _lift_combine(K, [lifts[j] for j in minimal if j != i], q, nsrc)
            lv = [_dict_add(K, a, b, K.neg(K.one)) for a, b in zip(lifts[i], sub)]
        f, _, lv = make_monic(f, lv)
        final.append(f)
        final_lifts.append(lv)
    polys = tuple(Polynomial(amb, f, _trusted=True) for f in final)
    lift = None
    if track:
        lift = tuple(tuple(Polynomial(amb, d, _trusted=True) for d in lv) for lv in final_lifts)
    return GroebnerBasis(ideal, amb, polys, tuple(sources), lift,
                         {"pairs": pairs_done, "size": len(polys)})


def reduce_poly(f, G, target=None):
    """Normal form of ``f`` modulo the basis ``G``."""
    amb = G.ring
    f = amb.coerce(f)
    if not f.is_integral():
        raise ValueError("normal forms need integer exponents")
    if not G.polys or f.is_zero():
        r = f
    else:
        red = _Reducer(amb, [g.terms for g in G.polys])
        rem, _ = red.reduce(f.terms)
        r = Polynomial(amb, rem, _trusted=True)
    if target is not None and target is not amb:
        return Polynomial(target, r.terms, _trusted=True)
    return r


def normal_form(f, G) -> DivisionCertificate:
    amb = G.ring
    f = amb.coerce(f)
    if not f.is_integral():
        raise ValueError("normal forms need integer exponents")
    red = _Reducer(amb, [g.terms for g in G.polys]) if G.polys else None
    if red is None or f.is_zero():
        return DivisionCertificate(f, G.polys, tuple(amb.zero for _ in G.polys), f)
    rem, quots = red.reduce(f.terms, track=True)
    return DivisionCertificate(
        f, G.polys,
        tuple(Polynomial(amb, q, _trusted=True) for q in quots),
        Polynomial(amb, rem, _trusted=True),
    )


def ideal_member(f, ideal, **budget) -> bool:
    G = buchberger(ideal, **budget)
    return G.contains(f)


def lift_to_generators(f, G):
    """Express f in terms of G.sources, or None if f is not in the ideal.

    Returns a tuple aligned with ``G.sources``.
    """
    if G.lift is None:
        raise ValueError("basis was computed without tracking")
    cert = normal_form(f, G)
    if not cert.remainder.is_zero():
        return None
    amb = G.ring
    out = [amb.zero for _ in G.sources]
    for q, lv in zip(cert.quotients, G.lift):
        if q.is_zero():
            continue
        for j, c in enumerate(lv):
            if not c.is_zero():
                out[j] = out[j] + q * c
    return tuple(out)


def same_ideal(I, J, **budget) -> bool:
    return buchberger(I, **budget) == buchberger(J, **budget)


# -- elimination and friends ---------------------------------------------------

def _elimination_ring(ring, elim_vars, extra_vars=(), name=None):
    """Ring on ring.variables + extra_vars with a block order whose first
    block holds ``elim_vars`` (and the extras)."""
    variables = ring.variables + tuple(extra_vars)
    n = len(variables)
    first = [variables.index(v) for v in list(extra_vars) + [v for v in elim_vars if v not in extra_vars]]
    rest = [i for i in range(n) if i not in first]
    blocks = [("grevlex", first)]
    if rest:
        blocks.append(("grevlex", rest))
    order = MonomialOrder(blocks)
    return Ring(ring.p, variables, k=ring.k, params=ring.params,
                relations=[str(r) for r in ring.relations], order=order,
                gen_name=ring.base_field.gen_name or "g",
                modulus=getattr(ring.base_field, "modulus", None), name=name)


def elimination(ideal, keep, **budget):
    """I ∩ K[keep] (defining relations included), as an Ideal of ideal.ring."""
    ring = ideal.ring
    keep = tuple(keep)
    elim = [v for v in ring.variables if v not in keep]
    if not elim:
        G = buchberger(ideal, **budget)
        return Ideal(ring, [ring.coerce(g) for g in G.polys])
    er = _elimination_ring(ring, elim)
    G = buchberger(Ideal(er, [er.coerce(g) for g in ideal.gens]), **budget)
    idx = [er.index[v] for v in elim]
    kept = [g for g in G.polys if all(m[i] == 0 for m in g.terms for i in idx)]
    return Ideal(ring, [ring.ambient().coerce(Polynomial(er.ambient(), g.terms, _trusted=True)) for g in kept])


def colon_ideal(ideal, f, **budget):
    """(I : f) by intersecting with (f) via one auxiliary variable."""
    ring = ideal.ring
    f = ring.coerce(f)
    if f.is_zero():
        raise ValueError("colon by zero")
    aux = "_colon_t"
    er = _elimination_ring(ring, [], extra_vars=(aux,))
    t = er.gen(aux)
    fe = er.coerce(f)
    gens = [t * er.coerce(g) for g in ideal.gens] + [t * er.coerce(r) for r in ring.relations]
    gens.append((er.one - t) * fe)
    G = buchberger(Ideal(er.ambient(), gens), **budget)
    ti = er.index[aux]
    amb = ring.ambient()
    fa = amb.coerce(f)
    fbasis = GroebnerBasis(Ideal(amb, [fa]), amb, (fa,))
    out = []
    for g in G.polys:
        if any(m[ti] for m in g.terms):
            continue
        h = Polynomial(amb, {m[:ti] + m[ti + 1:]: c for m, c in g.terms.items()}, _trusted=True)
        cert = normal_form(h, fbasis)
        if not cert.remainder.is_zero():
            raise ArithmeticError("intersection element not divisible by f")
        out.append(cert.quotients[0])
    # express in the quotient ring: reduce modulo the relations, drop zeros
    res = [ring.reduce(ring.coerce(q)) for q in out]
    return Ideal(ring, [q for q in res if not q.is_zero()])


def kernel_of_ring_map(targets, names=None, *, weights=None, name=None, **budget):
    """Presentation ideal of the subalgebra generated by ``targets``.

    Returns ``(presentation_ring, Ideal)`` where the ring is the polynomial
    ring on ``names`` (default A, B, C, ...) and the ideal is the kernel.
    """
    targets = list(targets)
    if not targets:
        raise ValueError("no targets")
    src = targets[0].ring
    targets = [src.coerce(t) for t in targets]
    if names is None:
        names = [chr(ord("A") + i) for i in range(len(targets))]
    names = list(names)
    if len(names) != len(targets):
        raise ValueError("one name per target")
    if weights is None and all(r.degree() is not None for r in src.relations):
        degs = [t.degree() for t in targets]
        weights = degs if all(d is not None and d > 0 for d in degs) else None
    # rename the source variables so the new names can never collide
    renamed = {v: f"_src_{v}" for v in src.variables}
    graph_vars = tuple(renamed[v] for v in src.variables) + tuple(names)
    first = list(range(src.nvars))
    rest = list(range(src.nvars, len(graph_vars)))
    order = MonomialOrder([("grevlex", first), ("grevlex", rest)])
    gr = Ring(src.p, graph_vars, k=src.k, params=src.params, order=order,
              gen_name=src.base_field.gen_name or "g",
              modulus=getattr(src.base_field, "modulus", None))

    def move(f):
        return Polynomial(gr, {m + (0,) * len(names): c for m, c in f.terms.items()}, _trusted=True)

    gens = [move(src.ambient().coerce(r)) for r in src.relations]
    for nm, t in zip(names, targets):
        gens.append(gr.gen(nm) - move(src.ambient().coerce(t)))
    G = buchberger(Ideal(gr, gens), **budget)
    k = src.nvars
    pres = Ring(src.p, names, k=src.k, params=src.params, weights=weights,
                order="wgrevlex" if weights else "grevlex",
                gen_name=src.base_field.gen_name or "g",
                modulus=getattr(src.base_field, "modulus", None), name=name)
    kern = []
    for g in G.polys:
        if all(all(e == 0 for e in m[:k]) for m in g.terms):
            kern.append(Polynomial(pres, {m[k:]: c for m, c in g.terms.items()}))
    return pres, Ideal(pres, kern)


@dataclass
class RegularSequenceResult:
    regular: bool
    index: int | None = None       # 1-based index where regularity fails
    witness: Polynomial | None = None
    reason: str = ""

    def __bool__(self):
        return self.regular


def is_regular_sequence(seq, ring=None, **budget) -> RegularSequenceResult:
    """Check that seq is a regular sequence on ring (a presented quotient)."""
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    ring = ring or seq[0].ring
    seq = [ring.coerce(s) for s in seq]
    for i, x in enumerate(seq):
        prev = Ideal(ring, seq[:i])
        Gprev = buchberger(prev, **budget)
        if ring.reduce(x).is_zero():
            return RegularSequenceResult(False, i + 1, ring.one, "element is zero modulo predecessors" if i else "element is zero")
        col = colon_ideal(prev, x, **budget)
        for g in col.gens:
            if not Gprev.contains(g):
                return RegularSequenceResult(False, i + 1, g, "zero divisor modulo predecessors")
    full = buchberger(Ideal(ring, seq), **budget)
    if full.is_unit():
        return RegularSequenceResult(False, len(seq), None, "ideal is the unit ideal")
    return RegularSequenceResult(True)
