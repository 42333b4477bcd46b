"""Ring contexts and sparse polynomials with p-power fractional exponents."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property, lru_cache

from .field import ParamField, finite_field, is_power_of


class ContextMismatch(ValueError):
    """Raised when two polynomials from different rings are combined."""


class ParseError(ValueError):
    pass


def _norm_exp(e):
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e)
    return e


def _norm_mono(m):
    return tuple(_norm_exp(e) for e in m)


def mono_is_integral(m) -> bool:
    return all(type(e) is int for e in m)


def mono_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


class MonomialOrder:
    """A block order: blocks are compared lexicographically, each block by
    its own rule ("grevlex", "wgrevlex" or "lex") on its variable indices."""

    KINDS = ("grevlex", "wgrevlex", "lex")

    def __init__(self, blocks, weights=None):
        blocks = tuple((kind, tuple(idx)) for kind, idx in blocks)
        for kind, _ in blocks:
            if kind not in self.KINDS:
                raise ValueError(f"unknown monomial order {kind!r}")
        self.blocks = blocks
        self.weights = tuple(weights) if weights is not None else None
        self.key = lru_cache(maxsize=1 << 18)(self._make_key())

    @classmethod
    def simple(cls, kind, n, weights=None):
        return cls([(kind, range(n))], weights)

    def _make_key(self):
        parts = []
        for kind, idx in self.blocks:
            if kind == "lex":
                parts.append(lambda m, idx=idx: tuple(m[i] for i in idx))
            elif kind == "grevlex":
                ridx = idx[::-1]
                parts.append(lambda m, idx=idx, ridx=ridx:
                             (sum(m[i] for i in idx),) + tuple(-m[i] for i in ridx))
            else:
                w = self.weights
                if w is None:
                    raise ValueError("wgrevlex needs weights")
                ridx = idx[::-1]
                parts.append(lambda m, idx=idx, ridx=ridx:
                             (sum(w[i] * m[i] for i in idx),) + tuple(-m[i] for i in ridx))
        if len(parts) == 1:
            return parts[0]
        return lambda m: tuple(part(m) for part in parts)

    def spec(self):
        return [[kind, list(idx)] for kind, idx in self.blocks]

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.blocks == other.blocks and self.weights == other.weights

    def __hash__(self):
        return hash((self.blocks, self.weights))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Ring:
    """A presented ring ``K[vars]/(relations)`` of prime characteristic.

    ``K`` is F_q (q = p^k) or the fraction field F_q(params).  Relations
    must have integer exponents.  Weights, when given, define a
    Q-grading under which every relation has to be homogeneous.
    """

    def __init__(self, p, variables, *, k=1, params=(), relations=(), weights=None,
                 order="grevlex", gen_name="g", modulus=None, name=None):
        variables = tuple(variables)
        params = tuple(params)
        for v in variables + params:
            if not _IDENT.match(v):
                raise ValueError(f"bad identifier {v!r}")
        names = variables + params + ((gen_name,) if k > 1 else ())
        if len(set(names)) != len(names):
            raise ValueError("variable, parameter and generator names must be distinct")
        self.base_field = finite_field(p, k, modulus, gen_name)
        self.field = ParamField(self.base_field, params) if params else self.base_field
        self.p = p
        self.k = k
        self.q = p ** k
        self.variables = variables
        self.params = params
        self.nvars = len(variables)
        self.index = {v: i for i, v in enumerate(variables)}
        self.name = name
        if weights is not None:
            if isinstance(weights, dict):
                weights = [weights.get(v, 1) for v in variables]
            weights = tuple(Fraction(w) for w in weights)
            weights = tuple(_norm_exp(w) for w in weights)
            if len(weights) != self.nvars:
                raise ValueError("one weight per variable required")
            if any(w <= 0 for w in weights):
                raise ValueError("weights must be positive")
        self.weights = weights
        if isinstance(order, MonomialOrder):
            self.order = order
        else:
            self.order = MonomialOrder.simple(order, self.nvars, weights)
        self.zero = Polynomial(self, {})
        self.one = self.constant(self.field.one)
        rels = []
        for r in relations:
            f = self.parse(r) if isinstance(r, str) else self.coerce(r)
            if f.is_zero():
                continue
            if not f.is_integral():
                raise ValueError("defining relations must have integer exponents")
            if weights is not None and f.degree() is None:
                raise ValueError(f"relation {f} is not homogeneous for the given weights")
            rels.append(f)
        self.relations = tuple(rels)

    # -- identity --------------------------------------------------------------
    def spec(self):
        return {
            "characteristic": self.p,
            "field_degree": self.k,
            "modulus": list(getattr(self.base_field, "modulus", ())) or None,
            "variables": list(self.variables),
            "weights": [str(w) for w in self.weights] if self.weights else None,
            "parameters": list(self.params),
            "relations": [str(r) for r in self.relations],
            "order": self.order.spec(),
        }

    @cached_property
    def _spec_key(self):
        return repr(self.spec())

    def same(self, other) -> bool:
        return self is other or (isinstance(other, Ring) and self._spec_key == other._spec_key)

    def __repr__(self):
        label = self.name or "Ring"
        rel = f"/({', '.join(map(str, self.relations))})" if self.relations else ""
        return f"<{label} {self.field!r}[{', '.join(self.variables)}]{rel}>"

    # -- element constructors --------------------------------------------------
    def constant(self, c):
        if self.field.is_zero(c):
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c}, _trusted=True)

    def from_int(self, n):
        return self.constant(self.field.from_int(n))

    def gen(self, name):
        if name not in self.index:
            raise KeyError(name)
        i = self.index[name]
        m = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {m: self.field.one}, _trusted=True)

    def gens(self):
        return tuple(self.gen(v) for v in self.variables)

    def param(self, name):
        return self.constant(self.field.param(name))

    def monomial(self, exps, coeff=None):
        exps = _norm_mono(tuple(Fraction(e) if not isinstance(e, int) else e for e in exps))
        return Polynomial(self, {exps: self.field.one if coeff is None else coeff})

    def parse(self, text):
        return _Parser(self, text).parse()

    def __call__(self, obj):
        if isinstance(obj, str):
            return self.parse(obj)
        if isinstance(obj, int):
            return self.from_int(obj)
        return self.coerce(obj)

    def coerce(self, f):
        """Map a polynomial of another ring into this one by variable name."""
        if isinstance(f, int):
            return self.from_int(f)
        if not isinstance(f, Polynomial):
            raise TypeError(f"cannot coerce {type(f).__name__}")
        if f.ring is self:
            return f
        src = f.ring
        if src.same(self):
            return Polynomial(self, f.terms, _trusted=True)
        if src.p != self.p or src.base_field != self.base_field:
            raise ContextMismatch("incompatible coefficient fields")
        pos = []
        for v in src.variables:
            if v not in self.index:
                raise ContextMismatch(f"variable {v} not in target ring")
            pos.append(self.index[v])
        conv = self._coeff_converter(src)
        out = {}
        n = self.nvars
        for m, c in f.terms.items():
            mm = [0] * n
            for j, e in zip(pos, m):
                mm[j] = e
            out[tuple(mm)] = conv(c)
        return Polynomial(self, out)

    def _coeff_converter(self, src):
        if src.params == self.params:
            return lambda c: c
        if not src.params:
            return lambda c: self.field.from_base(c)
        if not set(src.params) <= set(self.params):
            raise ContextMismatch("parameter sets differ")
        perm = [self.params.index(a) for a in src.params]
        K = self.field

        def conv(c):
            def mp(d):
                out = {}
                for m, v in d.items():
                    mm = [0] * K.n
                    for j, e in zip(perm, m):
                        mm[j] = e
                    out[tuple(mm)] = v
                return out
            from .field import ParamFraction
            return ParamFraction(K, mp(c.num), mp(c.den))
        return conv

    # -- derived rings ---------------------------------------------------------
    def extend(self, new_vars, relations=(), *, new_weights=None, order=None, name=None,
               keep_relations=True, params=None):
        """Polynomial ring on ``variables + new_vars`` with given order."""
        variables = self.variables + tuple(new_vars)
        if self.weights is not None and new_weights is not None:
            weights = self.weights + tuple(new_weights)
        else:
            weights = None
        rels = [str(r) for r in self.relations] if keep_relations else []
        return Ring(self.p, variables, k=self.k, params=self.params if params is None else params,
                    relations=rels + [str(r) if isinstance(r, Polynomial) else r for r in relations],
                    weights=weights, order=order or "grevlex",
                    gen_name=self.base_field.gen_name or "g",
                    modulus=getattr(self.base_field, "modulus", None), name=name)

    def with_relations(self, relations, name=None):
        return Ring(self.p, self.variables, k=self.k, params=self.params,
                    relations=[str(r) for r in self.relations] + [str(r) for r in relations],
                    weights=self.weights, order=self.order,
                    gen_name=self.base_field.gen_name or "g",
                    modulus=getattr(self.base_field, "modulus", None), name=name or self.name)

    def ambient(self):
        """The polynomial ring with the same variables and no relations."""
        if not self.relations:
            return self
        return self._ambient

    @cached_property
    def _ambient(self):
        return Ring(self.p, self.variables, k=self.k, params=self.params, weights=self.weights,
                    order=self.order, gen_name=self.base_field.gen_name or "g",
                    modulus=getattr(self.base_field, "modulus", None))

    # -- reduction modulo the defining relations -------------------------------
    @cached_property
    def relation_basis(self):
        from .groebner import Ideal, buchberger
        return buchberger(Ideal(self.ambient(), [self.ambient().coerce(r) for r in self.relations]))

    def reduce(self, f):
        """Normal form of f modulo the defining relations."""
        f = self.coerce(f)
        if not self.relations:
            return f
        from .groebner import reduce_poly
        return reduce_poly(self.ambient().coerce(f), self.relation_basis, target=self)

    def equal_mod(self, f, g) -> bool:
        return self.reduce(f - g).is_zero()


class Polynomial:
    """Immutable sparse polynomial: ``terms`` maps exponent tuples to
    nonzero coefficients.  Exponents are ints or Fractions with p-power
    denominators."""

    __slots__ = ("ring", "terms", "_sorted", "_hash")

    def __init__(self, ring, terms, _trusted=False):
        self.ring = ring
        if not _trusted:
            iz = ring.field.is_zero
            clean = {}
            for m, c in terms.items():
                if not iz(c):
                    m = _norm_mono(m)
                    if any(e < 0 for e in m):
                        raise ValueError("negative exponent")
                    for e in m:
                        if isinstance(e, Fraction) and not is_power_of(e.denominator, ring.p):
                            raise ValueError(f"exponent {e} has a non-p-power denominator")
                    clean[m] = c
            terms = clean
        self.terms = terms
        self._sorted = None
        self._hash = None

    # -- basic queries ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_integral(self):
        return all(mono_is_integral(m) for m in self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and all(e == 0 for e in next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def sorted_terms(self):
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def lm(self):
        return self.sorted_terms()[0][0]

    def lc(self):
        return self.sorted_terms()[0][1]

    def lt(self):
        m, c = self.sorted_terms()[0]
        return Polynomial(self.ring, {m: c}, _trusted=True)

    def monomials(self):
        return [m for m, _ in self.sorted_terms()]

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var):
        i = self.ring.index[var] if isinstance(var, str) else var
        return max((m[i] for m in self.terms), default=-1)

    def variables_used(self):
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.variables[i])
        return used

    def degree(self):
        """Common weighted degree if homogeneous (unit weights when the
        ring has none), else None.  The zero polynomial has no degree."""
        w = self.ring.weights or (1,) * self.ring.nvars
        degs = {_norm_exp(sum((wi * e for wi, e in zip(w, m)), Fraction(0))) for m in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    # -- arithmetic ------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring is self.ring or other.ring.same(self.ring):
                return other
            raise ContextMismatch("polynomials live in different rings")
        if isinstance(other, int):
            return self.ring.from_int(other)
        K = self.ring.field
        if isinstance(other, type(K.one)) and not isinstance(other, bool):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.ring.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = K.add(terms[m], c) if m in terms else c
            if K.is_zero(s):
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.ring, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        return Polynomial(self.ring, {m: K.neg(c) for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.ring.field
        add, mul, iz = K.add, K.mul, K.is_zero
        out = {}
        frac = not (self.is_integral() and other.is_integral()) if (self.terms and other.terms) else False
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if frac:
                    m = _norm_mono(m)
                c = mul(c1, c2)
                if m in out:
                    s = add(out[m], c)
                    if iz(s):
                        del out[m]
                    else:
                        out[m] = s
                elif not iz(c):
                    out[m] = c
        return Polynomial(self.ring, out, _trusted=True)

    __rmul__ = __mul__

    def scale(self, c):
        K = self.ring.field
        if K.is_zero(c):
            return self.ring.zero
        return Polynomial(self.ring, {m: K.mul(a, c) for m, a in self.terms.items()}, _trusted=True)

    def mul_monomial(self, mono, c=None):
        K = self.ring.field
        out = {}
        for m, a in self.terms.items():
            out[tuple(x + y for x, y in zip(m, mono))] = a if c is None else K.mul(a, c)
        if c is not None and K.is_zero(c):
            return self.ring.zero
        return Polynomial(self.ring, out, _trusted=mono_is_integral(mono))

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = int(n)
        if isinstance(n, int):
            if n < 0:
                raise ValueError("negative power")
            p = self.ring.p
            out = self.ring.one
            base = self
            # split off the p-adic part: f^(p*m) = frob(f)^m is cheap termwise
            e = 0
            while n and n % p == 0:
                n //= p
                e += 1
            if e:
                base = frobenius_power(base, e)
            while n:
                if n & 1:
                    out = out * base
                n >>= 1
                if n:
                    base = base * base
            return out
        n = Fraction(n)
        if len(self.terms) != 1:
            raise ValueError("fractional powers are only defined for single terms")
        if n < 0:
            raise ValueError("negative power")
        (m, c), = self.terms.items()
        K = self.ring.field
        num, den = n.numerator, n.denominator
        e = 0
        d = den
        while d % self.ring.p == 0:
            d //= self.ring.p
            e += 1
        if d != 1:
            raise ValueError("fractional exponents need p-power denominators")
        c = K.pow(K.root(c, e), num)
        mono = tuple(x * n for x in m)
        return Polynomial(self.ring, {_norm_mono(mono): c})

    def frobenius(self, e=1):
        return frobenius_power(self, e)

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (other.ring is self.ring or other.ring.same(self.ring)) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- substitution ----------------------------------------------------------
    def subs(self, mapping, target=None):
        """Substitute polynomials for variables.  ``mapping`` sends variable
        names to polynomials of ``target`` (default: this ring); unmapped
        variables are coerced by name.  Integer exponents only."""
        target = target or self.ring
        if not self.is_integral():
            raise ValueError("substitution needs integer exponents")
        images = []
        for v in self.ring.variables:
            if v in mapping:
                img = mapping[v]
                images.append(target(img) if not isinstance(img, Polynomial) else target.coerce(img))
            else:
                images.append(target.gen(v))
        conv = target._coeff_converter(self.ring)
        cache = {}

        def pw(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        out = target.zero
        for m, c in self.terms.items():
            t = target.constant(conv(c))
            for i, e in enumerate(m):
                if e:
                    t = t * pw(i, e)
            out = out + t
        return out

    # -- printing --------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def frobenius_power(f, e=1):
    """f^(p^e), computed termwise (additivity of Frobenius in char p)."""
    if e < 0:
        raise ValueError("e must be nonnegative")
    if e == 0:
        return f
    ring = f.ring
    pe = ring.p ** e
    K = ring.field
    frac = not f.is_integral()
    terms = {}
    for m, c in f.terms.items():
        mm = tuple(x * pe for x in m)
        terms[_norm_mono(mm) if frac else mm] = K.frob(c, e)
    return Polynomial(ring, terms, _trusted=True)


def degree_of(f):
    return f.degree()


def _fmt_exp(e):
    if isinstance(e, Fraction):
        return f"^({e.numerator}/{e.denominator})"
    return "" if e == 1 else f"^{e}"


def format_monomial(ring, m):
    parts = [f"{v}{_fmt_exp(e)}" for v, e in zip(ring.variables, m) if e]
    return "*".join(parts)


def format_poly(f):
    if f.is_zero():
        return "0"
    K = f.ring.field
    out = []
    for m, c in f.sorted_terms():
        mono = format_monomial(f.ring, m)
        cs = K.to_str(c)
        if not mono:
            out.append(cs if "+" not in cs else f"({cs})")
        elif c == K.one:
            out.append(mono)
        else:
            if "+" in cs or "/" in cs or "*" in cs:
                cs = f"({cs})"
            out.append(f"{cs}*{mono}")
    return " + ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = []
        for num, ident, op in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", int(num)))
            elif ident:
                self.toks.append(("id", ident))
            elif op.strip():
                if op not in "+-*/^()":
                    raise ParseError(f"unexpected character {op!r} in {text!r}")
                self.toks.append(("op", op))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        if op is not None and tok != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty polynomial string")
        f = self.expr()
        if self.pos != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return f

    def expr(self):
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            g = self.factor()
            if op == "*":
                f = f * g
            else:
                if not g.is_constant() or g.is_zero():
                    raise ParseError("division only by nonzero constants or parameter expressions")
                K = self.ring.field
                f = f.scale(K.inv(g.constant_value()))
        return f

    def factor(self):
        f = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            f = f ** self.exponent()
        return f

    def exponent(self):
        kind, val = self.take()
        if kind == "num":
            return val
        if (kind, val) != ("op", "("):
            raise ParseError("bad exponent")
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        kind, num = self.take()
        if kind != "num":
            raise ParseError("bad exponent")
        den = 1
        if self.peek() == ("op", "/"):
            self.take()
            kind, den = self.take()
            if kind != "num" or den == 0:
                raise ParseError("bad exponent")
        self.take(")")
        e = Fraction(sign * num, den)
        return int(e) if e.denominator == 1 else e

    def atom(self):
        kind, val = self.take()
        ring = self.ring
        if kind == "num":
            return ring.from_int(val)
        if kind == "id":
            if val in ring.index:
                return ring.gen(val)
            if val in ring.params:
                return ring.param(val)
            if ring.k > 1 and val == ring.base_field.gen_name:
                c = ring.base_field.generator()
                return ring.constant(ring.field.from_base(c) if ring.params else c)
            raise ParseError(f"unknown symbol {val!r}")
        if val == "(":
            f = self.expr()
            self.take(")")
            return f
        raise ParseError(f"unexpected {val!r} in {self.text!r}")
