"""The catalog of worked examples, each runnable end to end.

A fixture returns a :class:`Outcome`: a verdict, serializable
certificates, and a list of zero-argument checks that are re-run when the
report is written.  Nothing here is cached between runs.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .cech import (CechComplex, class_from_relation, differential, frobenius_on_cochain,
                   is_cocycle, solve_coboundary, trivialize_nilpotent_class)
from .extensions import (dickson_polynomial, solvable_witness, verify_artin_schreier_reduction,
                         verify_plus_closure_example)
from .frobenius import f_nilpotent_order, frobenius_closure_test
from .graded import (fermat_rees_fixture, presentation, rees_presentation, splinter_fixture,
                     sqrt_identity, sqrt_search, top_cohomology_trivialize, verify_ex53_family)
from .groebner import Ideal
from .ring import Ring


@dataclass
class Outcome:
    verdict: str                       # verified | refuted | inconclusive
    certificates: list = field(default_factory=list)
    tower: dict | None = None
    details: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    degrees: list = field(default_factory=list)      # (label, deg eta, deg F(eta), p)
    support: list = field(default_factory=list)      # exponent vectors for plotting


@dataclass(frozen=True)
class FixtureInfo:
    name: str
    ids: tuple
    modules: tuple
    summary: str


def _fermat(weights=True):
    return Ring(2, ["x", "y", "z"], relations=["x^3 + y^3 + z^3"],
                weights=[1, 1, 1] if weights else None, name="Fermat")


def _veronese():
    P = Ring(2, ["x", "y"])
    x, y = P.gens()
    R, _ = presentation([x ** 4, x ** 3 * y, x * y ** 3, y ** 4], ["A", "B", "C", "D"],
                        weights=[1, 1, 1, 1], name="Veronese")
    return R


# -- individual fixtures ---------------------------------------------------------------

def _degree_rows(label, c):
    """(label, deg eta, deg F(eta), p) when the cochain is homogeneous."""
    d = c.degree_weight()
    if d is None:
        return []
    return [(label, d, frobenius_on_cochain(c).degree_weight(), c.ring.p)]


def run_frobclosure_fermat2(e_max=4, **_):
    R = _fermat(False)
    x, y, z = R.gens()
    I = Ideal(R, [x, y])
    level0 = frobenius_closure_test(z ** 2, I, e_max=0)
    cert = frobenius_closure_test(z ** 2, I, e_max=e_max)
    ok = level0 is None and cert is not None and cert.level == 1 \
        and cert.coefficients == (z * x, z * y)
    return Outcome("verified" if ok else "refuted", [cert.to_dict()] if cert else [],
                   details={"level0_member": level0 is not None},
                   checks=[cert.verify] if cert else [],
                   support=[m for c in cert.coefficients for m in c.terms] if cert else [])


def run_witness_fermat2(e_max=4, **_):
    R = _fermat(False)
    x, y, z = R.gens()
    cert = frobenius_closure_test(z ** 2, Ideal(R, [x, y]), e_max=e_max)
    w = solvable_witness(cert)
    S = w.extension.ring
    t0, t1 = S.gen("t0"), S.gen("t1")
    xs, ys, zs = S.gen("x"), S.gen("y"), S.gen("z")
    checks = [
        w.verify,
        lambda: S.reduce(t0 ** 2 - (zs * xs + t1 * ys ** 2)).is_zero(),
        lambda: S.reduce(t1 ** 2 - (zs * ys + xs ** 2 * t1)).is_zero(),
        lambda: S.reduce(zs ** 2 - (t0 * xs + t1 * ys)).is_zero(),
    ]
    tower = w.tower
    ok = all(c() for c in checks) and tower.solvable_tower and tower.kinds().count("artin_schreier") == 1
    return Outcome("verified" if ok else "refuted", [cert.to_dict(), w.to_dict()], tower.to_dict(),
                   checks=checks)


def _dickson_checks(d):
    ring = d.ring
    q, n = d.q, d.n
    names = ring.variables[:-1]
    R2 = Ring(ring.p, list(names) + ["T", "U"], k=ring.k, order="lex")
    T, U = R2.gen("T"), R2.gen("U")
    D = d.additive_polynomial
    checks = [lambda: (D(T + U) - D(T) - D(U)).is_zero()]
    xs = [ring.gen(v) for v in names]
    F = ring.base_field

    def vanishing():
        for v in itertools.product(list(F.elements()), repeat=n):
            lin = ring.zero
            for c, x in zip(v, xs):
                if c:
                    lin = lin + x.scale(c)
            if not D(lin).is_zero():
                return False
        return True
    checks.append(vanishing)
    return checks


def run_dickson(which=("p2", "p3"), **_):
    certs = []
    checks = []
    ok = True
    support = []
    for w in which:
        q = int(w[1:])
        d = dickson_polynomial(2, q)
        certs.append(d.to_dict())
        cs = _dickson_checks(d)
        checks.extend(cs)
        if q == 2:
            x1, x2 = d.ring.gen("x1"), d.ring.gen("x2")
            want = (x1 ** 2 + x1 * x2 + x2 ** 2, x1 ** 2 * x2 + x1 * x2 ** 2)
            ok = ok and d.coefficients == want
        support.extend(m for c in d.coefficients for m in c.terms)
    ok = ok and all(c() for c in checks)
    return Outcome("verified" if ok else "refuted", certs, checks=checks, support=support)


def run_ex41(**_):
    r = verify_plus_closure_example("ex41", p=2)
    return Outcome("verified" if r.holds else "refuted", [r.to_dict()], checks=[r.verify])


def run_ex42(**_):
    r = verify_plus_closure_example("ex42", q=2, n=2)
    r1 = verify_plus_closure_example("ex42", q=3, n=1)
    ok = r.holds and r1.holds
    return Outcome("verified" if ok else "refuted", [r.to_dict(), r1.to_dict()],
                   checks=[r.verify, r1.verify])


def run_ex44(**_):
    A = Ring(2, ["x", "y", "z"], params=["a", "b", "c1", "c2"],
             relations=["z^8 + c1*(x*y)^2*z^4 + c2*(x*y)^3*z^2 + a*x^4 + b*y^4"], name="A")
    F = rees_presentation(A, ["x", "y", "z"], graded=False)
    R = F.ring
    x, y, z, X, Y, Z = R.gens()
    cls = class_from_relation([x, Y, y + X], [Z ** 2, z ** 2, z * Z])
    # the Koszul relation gives a trivial class
    kos = class_from_relation([x, Y, y + X], [Y, x, 0])
    kos_cob = solve_coboundary(kos.cochain, degree_cap=2)
    checks = [F.verify, lambda: is_cocycle(cls.cochain), lambda: kos_cob.found]
    ok = all(c() for c in checks)
    return Outcome("verified" if ok else "refuted",
                   [{"kind": "cocycle", "class": cls.to_dict()}, F.to_dict()],
                   details={"koszul_class_is_coboundary": kos_cob.found}, checks=checks,
                   degrees=_degree_rows("ex44", cls.cochain))


def run_veronese(e_max=4, **_):
    R = _veronese()
    A, B, C, D = R.gens()
    Cx = CechComplex(R, [A, D])
    eta = Cx.cochain(1, {(0,): (B ** 2, 1), (1,): (C ** 2, 1)})
    base = solve_coboundary(eta)
    Feta = frobenius_on_cochain(eta)
    pre = solve_coboundary(Feta)
    expected = Cx.cochain(0, {(): A * D})
    res = trivialize_nilpotent_class(eta, e_max=e_max)
    checks = [lambda: is_cocycle(eta),
              lambda: pre.found and differential(expected).equals(Feta),
              res.verify]
    ok = (not base.found and base.exact and pre.found and pre.preimage.equals(expected)
          and all(c() for c in checks))
    degs = [("veronese", eta.degree_weight(), Feta.degree_weight(), 2)]
    return Outcome("verified" if ok else "refuted", [res.to_dict()], res.tower.to_dict(),
                   details={"base_coboundary": base.found, "base_refutation_exact": base.exact,
                            "frobenius_preimage": pre.preimage.to_dict() if pre.found else None},
                   checks=checks, degrees=degs)


def run_prop54(e_max=4, **_):
    R = _fermat()
    x, y, z = R.gens()
    Cx = CechComplex(R, [x, y])
    eta = Cx.cochain(2, {(0, 1): (z ** 2, 1)})
    res = top_cohomology_trivialize(eta, e_max=e_max)
    eta1 = Cx.cochain(2, {(0, 1): (z ** 3, 1)})
    res1 = top_cohomology_trivialize(eta1, e_max=e_max)
    nil = f_nilpotent_order(eta, e_max)
    checks = [res.verify, res1.verify, lambda: nil.order == 1]
    ok = res.record["e"] == 1 and all(c() for c in checks)
    degs = []
    for label, c in (("z^2/(xy)", eta), ("z^3/(xy)", eta1)):
        degs.append((label, c.degree_weight(), frobenius_on_cochain(c).degree_weight(), 2))
    return Outcome("verified" if ok else "refuted", [res.to_dict(), res1.to_dict()], res.tower.to_dict(),
                   details={"degree1_e": res1.record["e"],
                            "top_degree_bound": res1.record.get("top_degree_bound")},
                   checks=checks, degrees=degs)


def run_ex52(**_):
    certs = []
    checks = []
    for k in (1, 2):
        c = sqrt_identity(k)
        certs.append(dict(c.to_dict(), field_degree=k))
        checks.append(c.verify)
    F = fermat_rees_fixture()
    R = F.ring
    x, y, z, X, Y, Z = R.gens()
    cls = class_from_relation([x, Y, y + X], [Z ** 2, z ** 2, z * Z], ring=R)
    checks += [F.verify, lambda: is_cocycle(cls.cochain)]
    ok = all(c() for c in checks)
    certs.append({"kind": "cocycle", "class": cls.to_dict()})
    return Outcome("verified" if ok else "refuted", certs, details={"rees": F.to_dict()}, checks=checks,
                   degrees=_degree_rows("ex52", cls.cochain))


def run_ex53(q_list=(2, 4, 8), search_degree=6, **_):
    report, certs = verify_ex53_family(q_list)
    F = fermat_rees_fixture()
    found, searched = sqrt_search(F.ring, "x*y", search_degree)
    ok = report["all_hold"] and not found
    report["sqrt_xy_search"] = {"found": found, "degrees": searched}
    return Outcome("verified" if ok else "refuted",
                   [c.to_dict() for c in certs], details=report,
                   checks=[c.verify for c in certs])


def run_ex55(truncation=3, **_):
    out = []
    checks = []
    degs = []
    ok = True
    for d in (1, 2, 3):
        s = splinter_fixture(d, truncation=truncation)
        out.append(s.to_dict())
        neg = [s.dimensions[m] for m in s.dimensions if m < 0]
        ok = ok and all(v > 0 for v in neg)
        if s.witness is not None:
            ok = ok and s.witness_coboundary is False
            degs += _degree_rows(f"splinter d={d}", s.witness)
    return Outcome("verified" if ok else "refuted", out, checks=checks, degrees=degs)


CATALOG = (
    FixtureInfo("frobclosure-fermat2", ("frobclosure-fermat2",), ("frobenius",),
                "z^2 in (x,y)^F on the Fermat cubic, char 2"),
    FixtureInfo("witness-fermat2", ("witness-fermat2",), ("extensions",),
                "Artin-Schreier witness z^2 = t0 x + t1 y"),
    FixtureInfo("dickson", ("dickson-p2", "dickson-p3"), ("extensions",),
                "Dickson invariants for GL_2(F_2) and GL_2(F_3)"),
    FixtureInfo("ex41-p2", ("ex41-p2",), ("extensions",),
                "z in (x,y)^+ on the Dickson hypersurface, p = 2"),
    FixtureInfo("ex42-q2n2", ("ex42-q2n2",), ("extensions",),
                "Dickson hypersurface family, q = 2, n = 2"),
    FixtureInfo("ex44-class", ("ex44-class",), ("cech", "graded"),
                "H^2 class of a Rees-ring relation"),
    FixtureInfo("veronese-trivialize", ("veronese-trivialize",), ("cech", "frobenius"),
                "F-nilpotent H^1 class on a toric ring, trivialized"),
    FixtureInfo("prop54-fermat2", ("prop54-fermat2",), ("graded", "cech"),
                "top cohomology in nonnegative degree killed by a finite extension"),
    FixtureInfo("ex52-sqrt", ("ex52-sqrt",), ("graded",),
                "z^2 = x (xz)^(1/2) + y (yz)^(1/2)"),
    FixtureInfo("ex53-family", ("ex53-family",), ("graded",),
                "q-th root identity family on the cubic Rees ring"),
    FixtureInfo("ex55-splinter", ("ex55-splinter",), ("graded",),
                "negative top cohomology of K[x1...xd, x_i^d]"),
)

_RUNNERS = {
    "frobclosure-fermat2": run_frobclosure_fermat2,
    "witness-fermat2": run_witness_fermat2,
    "dickson-p2": lambda **kw: run_dickson(("p2",), **kw),
    "dickson-p3": lambda **kw: run_dickson(("p3",), **kw),
    "ex41-p2": run_ex41,
    "ex42-q2n2": run_ex42,
    "ex44-class": run_ex44,
    "veronese-trivialize": run_veronese,
    "prop54-fermat2": run_prop54,
    "ex52-sqrt": run_ex52,
    "ex53-family": run_ex53,
    "ex55-splinter": run_ex55,
}


def list_fixtures(module=None):
    if module is None:
        return list(CATALOG)
    return [f for f in CATALOG if module in f.modules]


def fixture_ids():
    return [i for f in CATALOG for i in f.ids]


def run_fixture(fid, **budget):
    if fid not in _RUNNERS:
        raise KeyError(f"unknown fixture {fid!r}")
    t = time.perf_counter()
    out = _RUNNERS[fid](**budget)
    out.details.setdefault("runtime_s", round(time.perf_counter() - t, 4))
    return out


def lemma_reduction_outcome(primes=(2, 3, 5)):
    res = {p: verify_artin_schreier_reduction(p) for p in primes}
    return Outcome("verified" if all(res.values()) else "refuted",
                   [{"kind": "artin_schreier_reduction", "p": p, "holds": v} for p, v in res.items()],
                   checks=[lambda p=p: verify_artin_schreier_reduction(p) for p in primes])
