"""Exact coefficient fields: F_p, F_{p^k}, and rational functions in
transcendental parameters over either of them.

Every field object exposes the same small duck-typed interface (``zero``,
``one``, ``add``, ``sub``, ``neg``, ``mul``, ``inv``, ``div``, ``pow``,
``frob``, ``is_zero``, ``from_int``, ``to_str``) so that polynomial code
never needs to know which one it is holding.  Elements of the finite fields
are plain ints; elements of the parameter field are :class:`ParamFraction`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def p_adic_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


class PrimeField:
    """The prime field F_p, elements are ints in ``range(p)``."""

    k = 1
    gen_name = None

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.q = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.p)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def frob(self, a, e: int = 1):
        return a

    def root(self, a, e: int = 1):
        return a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def elements(self):
        return range(self.p)

    def to_str(self, a) -> str:
        return str(a)

    def is_constant_field(self):
        return True


def _poly_mulmod(a, b, mod, p):
    # a, b: coefficient lists (low to high) of length k; mod monic of degree k
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return prod[:k]


def _is_irreducible(mod, p):
    k = len(mod) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(mod)
            for i in range(len(rem) - 1, d - 1, -1):
                c = rem[i]
                if c:
                    for j in range(d + 1):
                        rem[i - d + j] = (rem[i - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> tuple:
    """Smallest monic irreducible of degree k over F_p, ordered by its
    base-p integer encoding (coefficients low to high, leading 1 omitted)."""
    for code in range(p ** k):
        tail = [(code // p ** i) % p for i in range(k)]
        mod = tail + [1]
        if tail[0] != 0 and _is_irreducible(mod, p):
            return tuple(mod)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class ExtensionField:
    """F_q for q = p^k with k > 1.

    An element is the int ``sum(c_i * p**i)`` encoding its coordinates
    against the power basis of ``F_p[g]/(modulus)``.  Multiplication uses
    log/exp tables, so q is capped at 2**16.
    """

    MAX_Q = 1 << 16

    def __init__(self, p: int, k: int, modulus=None, gen_name: str = "g"):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 2:
            raise ValueError("use PrimeField for k = 1")
        q = p ** k
        if q > self.MAX_Q:
            raise ValueError(f"field size {q} exceeds table budget {self.MAX_Q}")
        self.p, self.k, self.q = p, k, q
        self.modulus = tuple(modulus) if modulus else default_modulus(p, k)
        if len(self.modulus) != k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(self.modulus), p):
            raise ValueError("modulus is not irreducible")
        self.gen_name = gen_name
        self.zero = 0
        self.one = 1
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.k == self.k and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.k, self.modulus))

    def _vec(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _code(self, v):
        return sum(c * self.p ** i for i, c in enumerate(v))

    def _build_tables(self):
        p, q = self.p, self.q
        mod = list(self.modulus)
        for cand in range(2, q):
            exp = [1]
            v = self._vec(cand)
            cur = [1] + [0] * (self.k - 1)
            seen_one = False
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, v, mod, p)
                c = self._code(cur)
                if c == 1:
                    seen_one = True
                    break
                exp.append(c)
            if not seen_one and len(exp) == q - 1:
                break
        else:  # pragma: no cover - a finite field always has a primitive element
            raise RuntimeError("no primitive element found")
        self._exp = exp + exp
        self._log = [0] * q
        for i, c in enumerate(exp):
            self._log[c] = i
        if p == 2:
            self._addt = None
        else:
            self._addt = [[self._code([(x + y) % p for x, y in zip(self._vec(a), self._vec(b))])
                           for b in range(q)] for a in range(q)] if q <= 1024 else None

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self._addt is not None:
            return self._addt[a][b]
        return self._code([(x + y) % self.p for x, y in zip(self._vec(a), self._vec(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        return self._code([-x % self.p for x in self._vec(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frob(self, a, e: int = 1):
        return self.pow(a, pow(self.p, e % self.k))

    def root(self, a, e: int = 1):
        # inverse of frob: a^(p^(k - e mod k))
        return self.pow(a, pow(self.p, (-e) % self.k))

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def generator(self):
        return self.p  # the class of g in the power basis

    def elements(self):
        return range(self.q)

    def to_str(self, a) -> str:
        v = self._vec(a)
        parts = []
        for i in range(self.k - 1, -1, -1):
            c = v[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = self.gen_name if i == 1 else f"{self.gen_name}^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def is_constant_field(self):
        return True


def finite_field(p: int, k: int = 1, modulus=None, gen_name: str = "g"):
    if k == 1:
        return PrimeField(p)
    return ExtensionField(p, k, modulus, gen_name)


# -- polynomials in the parameters -------------------------------------------
# A parameter polynomial is a dict {exponent tuple: nonzero base-field element}.

def _pp_add(F, f, g):
    h = dict(f)
    for m, c in g.items():
        s = F.add(h.get(m, 0), c)
        if s:
            h[m] = s
        else:
            h.pop(m, None)
    return h


def _pp_neg(F, f):
    return {m: F.neg(c) for m, c in f.items()}


def _pp_scale(F, f, c):
    if c == 0:
        return {}
    return {m: F.mul(a, c) for m, a in f.items()}


def _pp_mul(F, f, g):
    h = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            s = F.add(h.get(m, 0), F.mul(c1, c2))
            if s:
                h[m] = s
            else:
                h.pop(m, None)
    return h


def _pp_lead(f):
    # lex order on exponent tuples, first parameter most significant
    m = max(f)
    return m, f[m]


def _pp_divexact(F, f, g):
    """f / g, assuming g divides f exactly (lex-leading-term division)."""
    if not g:
        raise ZeroDivisionError("division by zero parameter polynomial")
    gm, gc = _pp_lead(g)
    ginv = F.inv(gc)
    q = {}
    r = dict(f)
    while r:
        rm, rc = _pp_lead(r)
        d = tuple(a - b for a, b in zip(rm, gm))
        if min(d) < 0:
            raise ArithmeticError("inexact parameter polynomial division")
        c = F.mul(rc, ginv)
        q[d] = c
        r = _pp_add(F, r, _pp_neg(F, _pp_mul(F, {d: c}, g)))
    return q


def _pp_deg(f, i):
    return max((m[i] for m in f), default=-1)


def _pp_coeff(f, i, k):
    """Coefficient of the i-th parameter to the power k (drops that variable)."""
    out = {}
    for m, c in f.items():
        if m[i] == k:
            mm = m[:i] + (0,) + m[i + 1:]
            out[mm] = c
    return out


def _pp_shift(f, i, k):
    return {m[:i] + (m[i] + k,) + m[i + 1:]: c for m, c in f.items()}


def _pp_monic(F, f):
    if not f:
        return f
    _, c = _pp_lead(f)
    return _pp_scale(F, f, F.inv(c))


def _pp_content(F, f, i, n):
    g = {}
    for k in range(_pp_deg(f, i) + 1):
        c = _pp_coeff(f, i, k)
        if c:
            g = _pp_gcd(F, g, c, i + 1, n)
            if len(g) == 1 and all(e == 0 for e in next(iter(g))):
                break
    return g


def _pp_prem(F, f, g, i):
    dg = _pp_deg(g, i)
    lg = _pp_coeff(g, i, dg)
    r = f
    while r and _pp_deg(r, i) >= dg:
        dr = _pp_deg(r, i)
        lr = _pp_coeff(r, i, dr)
        r = _pp_add(F, _pp_mul(F, lg, r), _pp_neg(F, _pp_mul(F, _pp_shift(lr, i, dr - dg), g)))
    return r


def _pp_gcd(F, f, g, i, n):
    """Monic gcd of f and g, both free of parameters with index < i."""
    if not f:
        return _pp_monic(F, g)
    if not g:
        return _pp_monic(F, f)
    if i >= n:
        return {(0,) * n: F.one}
    if _pp_deg(f, i) <= 0 and _pp_deg(g, i) <= 0:
        return _pp_gcd(F, f, g, i + 1, n)
    cf = _pp_content(F, f, i, n)
    cg = _pp_content(F, g, i, n)
    c = _pp_gcd(F, cf, cg, i + 1, n)
    a = _pp_divexact(F, f, cf)
    b = _pp_divexact(F, g, cg)
    if _pp_deg(a, i) < _pp_deg(b, i):
        a, b = b, a
    while b and _pp_deg(b, i) > 0:
        r = _pp_prem(F, a, b, i)
        if r:
            r = _pp_divexact(F, r, _pp_content(F, r, i, n))
        a, b = b, r
    if b:  # b is free of parameter i: the primitive gcd is trivial
        a = {(0,) * n: F.one}
    return _pp_monic(F, _pp_mul(F, c, _pp_divexact(F, a, _pp_content(F, a, i, n))))


def param_poly_gcd(F, f, g, n):
    return _pp_gcd(F, f, g, 0, n)


class ParamFraction:
    """Element of F_q(params): a reduced numerator/denominator pair.

    Canonical form: gcd(num, den) = 1 and den monic in lex order on the
    parameters, so equality is equality of the stored dicts.
    """

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den, _normalized=False):
        self.field = field
        if not _normalized:
            num, den = field._normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    def __eq__(self, other):
        if isinstance(other, ParamFraction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int) and other == 0:
            return not self.num
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"ParamFraction({self.field.to_str(self)})"


class ParamField:
    """The rational function field F_q(a, b, ...) over a finite field."""

    def __init__(self, base, params):
        self.base = base
        self.params = tuple(params)
        self.n = len(self.params)
        self.p = base.p
        self.q = base.q
        self.k = base.k
        self.gen_name = base.gen_name
        self._unit = (0,) * self.n
        self.zero = ParamFraction(self, {}, {self._unit: base.one}, True)
        self.one = ParamFraction(self, {self._unit: base.one}, {self._unit: base.one}, True)

    def __repr__(self):
        return f"{self.base!r}({', '.join(self.params)})"

    def __eq__(self, other):
        return isinstance(other, ParamField) and other.base == self.base and other.params == self.params

    def __hash__(self):
        return hash((self.base, self.params))

    def _normalize(self, num, den):
        F = self.base
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return {}, {self._unit: F.one}
        if len(den) == 1:
            (dm, dc), = den.items()
            if all(e == 0 for e in dm):
                return _pp_scale(F, num, F.inv(dc)), {self._unit: F.one}
            # monomial denominator: cancel the common monomial factor
            low = tuple(min(m[i] for m in num) for i in range(self.n))
            common = tuple(min(a, b) for a, b in zip(low, dm))
            if any(common):
                num = {tuple(a - b for a, b in zip(m, common)): c for m, c in num.items()}
                dm = tuple(a - b for a, b in zip(dm, common))
            inv = F.inv(dc)
            return _pp_scale(F, num, inv), {dm: F.one}
        g = param_poly_gcd(F, num, den, self.n)
        if len(g) > 1 or any(e for e in next(iter(g))):
            num = _pp_divexact(F, num, g)
            den = _pp_divexact(F, den, g)
        _, lc = _pp_lead(den)
        inv = F.inv(lc)
        return _pp_scale(F, num, inv), _pp_scale(F, den, inv)

    def from_base(self, c):
        if c == 0:
            return self.zero
        return ParamFraction(self, {self._unit: c}, {self._unit: self.base.one}, True)

    def from_int(self, n: int):
        return self.from_base(self.base.from_int(n))

    def param(self, name_or_index):
        i = self.params.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        m = tuple(1 if j == i else 0 for j in range(self.n))
        return ParamFraction(self, {m: self.base.one}, {self._unit: self.base.one}, True)

    def add(self, a, b):
        F = self.base
        if not a.num:
            return b
        if not b.num:
            return a
        if a.den == b.den:
            return ParamFraction(self, _pp_add(F, a.num, b.num), a.den)
        num = _pp_add(F, _pp_mul(F, a.num, b.den), _pp_mul(F, b.num, a.den))
        return ParamFraction(self, num, _pp_mul(F, a.den, b.den))

    def neg(self, a):
        return ParamFraction(self, _pp_neg(self.base, a.num), a.den, True)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        F = self.base
        if not a.num or not b.num:
            return self.zero
        if len(a.den) == 1 and len(b.den) == 1 and self._unit in a.den and self._unit in b.den:
            return ParamFraction(self, _pp_mul(F, a.num, b.num), a.den, True)
        return ParamFraction(self, _pp_mul(F, a.num, b.num), _pp_mul(F, a.den, b.den))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of zero parameter fraction")
        return ParamFraction(self, dict(a.den), dict(a.num))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def frob(self, a, e: int = 1):
        # termwise: (sum c m)^(p^e) = sum c^(p^e) m^(p^e) in characteristic p
        F = self.base
        pe = self.p ** e

        def fr(f):
            return {tuple(x * pe for x in m): F.frob(c, e) for m, c in f.items()}

        return ParamFraction(self, fr(a.num), fr(a.den), True)

    def root(self, a, e: int = 1):
        F = self.base
        pe = self.p ** e

        def rt(f):
            out = {}
            for m, c in f.items():
                if any(x % pe for x in m):
                    raise ArithmeticError("parameter fraction is not a p^e-th power")
                out[tuple(x // pe for x in m)] = F.root(c, e)
            return out

        return ParamFraction(self, rt(a.num), rt(a.den), True)

    def is_zero(self, a):
        return not a.num

    def is_constant_field(self):
        return False

    def is_base(self, a):
        """True when a is a constant of the finite base field."""
        return (len(a.den) == 1 and self._unit in a.den
                and all(m == self._unit for m in a.num))

    def base_value(self, a):
        return a.num.get(self._unit, 0)

    def _pp_str(self, f):
        F = self.base
        terms = []
        for m in sorted(f, reverse=True):
            c = f[m]
            factors = []
            for name, e in zip(self.params, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            cs = F.to_str(c)
            if not factors:
                terms.append(cs if "+" not in cs else f"({cs})")
            elif c == F.one:
                terms.append("*".join(factors))
            else:
                terms.append(("(" + cs + ")" if "+" in cs else cs) + "*" + "*".join(factors))
        return "+".join(terms) if terms else "0"

    def to_str(self, a) -> str:
        ns = self._pp_str(a.num)
        if len(a.den) == 1 and self._unit in a.den:
            return ns
        return f"({ns})/({self._pp_str(a.den)})"
