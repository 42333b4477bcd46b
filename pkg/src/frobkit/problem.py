"""Declarative problem files (YAML) and the task runners behind the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import yaml

from . import fixtures as fx
from .cech import (CechComplex, CohomologyClass, is_cocycle, solve_coboundary,
                   trivialize_nilpotent_class)
from .extensions import VerificationFailure, dickson_polynomial, solvable_witness
from .frobenius import DEFAULT_E_MAX, f_nilpotent_order, frobenius_closure_test
from .graded import rees_presentation, top_cohomology_trivialize, verify_power_identity
from .groebner import BudgetExceeded, Ideal, buchberger, ideal_member, is_regular_sequence
from .report import Report, finalize
from .ring import Ring

TASKS = ("groebner", "regseq", "frobclosure", "witness", "dickson", "cech", "trivialize",
         "rees", "power-identity", "prop54", "verify-example")

BUDGET_KEYS = ("e_max", "truncation", "degree_cap", "pairs_cap", "seed")


class ProblemError(ValueError):
    """The problem file is malformed."""


@dataclass
class ProblemSpec:
    ring: Ring | None
    task: dict
    budgets: dict = field(default_factory=dict)

    @property
    def kind(self):
        return self.task["kind"]


def build_ring(block):
    if not isinstance(block, dict):
        raise ProblemError("ring block must be a mapping")
    try:
        p = int(block["characteristic"])
    except (KeyError, TypeError, ValueError):
        raise ProblemError("ring.characteristic is required") from None
    variables = block.get("variables")
    weights = block.get("weights")
    if isinstance(variables, dict):
        weights = list(variables.values())
        variables = list(variables.keys())
    if not variables:
        raise ProblemError("ring.variables is required")
    return Ring(p, [str(v) for v in variables], k=int(block.get("field_degree", 1)),
                params=[str(a) for a in block.get("parameters", []) or []],
                relations=[str(r) for r in block.get("relations", []) or []],
                weights=weights, order=block.get("order", "grevlex"),
                name=block.get("name"))


def load_problem(text, overrides=None):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProblemError(f"not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ProblemError("problem file must be a mapping")
    task = data.get("task")
    if not isinstance(task, dict) or task.get("kind") not in TASKS:
        raise ProblemError(f"task.kind must be one of {', '.join(TASKS)}")
    budgets = dict(data.get("budgets") or {})
    unknown = set(budgets) - set(BUDGET_KEYS)
    if unknown:
        raise ProblemError(f"unknown budget keys: {sorted(unknown)}")
    for k, v in (overrides or {}).items():
        if v is not None:
            budgets[k] = v
    ring = build_ring(data["ring"]) if "ring" in data else None
    if ring is None and task["kind"] not in ("dickson", "verify-example"):
        raise ProblemError("a ring block is required for this task")
    return ProblemSpec(ring, task, budgets)


def _need(task, key):
    if key not in task:
        raise ProblemError(f"task.{key} is required for {task['kind']}")
    return task[key]


def _polys(ring, items):
    return [ring(str(s)) for s in items]


def _gb_budget(b):
    out = {}
    if b.get("pairs_cap") is not None:
        out["max_pairs"] = int(b["pairs_cap"])
    return out


def _solver_budget(b):
    out = {}
    if b.get("degree_cap") is not None:
        out["degree_cap"] = int(b["degree_cap"])
    if b.get("truncation") is not None:
        out["max_truncation"] = int(b["truncation"])
    return out


def _cochain(ring, task, budgets):
    xs = _polys(ring, _need(task, "elements"))
    C = CechComplex(ring, xs, int(budgets.get("truncation") or 1))
    comps = {}
    for c in _need(task, "components"):
        S = tuple(int(j) for j in c["subset"])
        comps[S] = (ring(str(c["numerator"])), int(c.get("power", 1)))
    return C.cochain(int(_need(task, "degree")), comps)


# -- task runners: each returns a Report ---------------------------------------------

def run_problem(spec: ProblemSpec) -> Report:
    t = time.perf_counter()
    runner = _RUNNERS[spec.kind]
    rep = runner(spec)
    rep.timings["total_s"] = round(time.perf_counter() - t, 4)
    rep.budgets = {k: v for k, v in spec.budgets.items()}
    return rep


def _groebner(spec):
    R, task = spec.ring, spec.task
    I = Ideal(R.ambient(), [R.ambient().coerce(g) for g in _polys(R, _need(task, "generators"))]
              + list(R.ambient().coerce(r) for r in R.relations))
    G = buchberger(I, **_gb_budget(spec.budgets))
    checks = [lambda: all(G.contains(g) for g in I.gens)]
    summary = {"basis_size": len(G.polys), "unit_ideal": G.is_unit()}
    verdict = "verified"
    if "member" in task:
        f = R.ambient().coerce(R(str(task["member"])))
        member = G.contains(f)
        summary["member"] = str(f)
        summary["is_member"] = member
        verdict = "verified" if member else "refuted"
    return finalize("groebner", verdict, checks, summary=summary,
                    certificates=[{"kind": "groebner_basis", "basis": [str(g) for g in G.polys]}])


def _regseq(spec):
    R = spec.ring
    seq = _polys(R, _need(spec.task, "sequence"))
    res = is_regular_sequence(seq, R, **_gb_budget(spec.budgets))
    summary = {"regular": res.regular, "failing_index": res.index,
               "witness": str(res.witness) if res.witness is not None else None, "reason": res.reason}
    return finalize("regseq", "verified" if res.regular else "refuted", summary=summary)


def _frobclosure(spec):
    R, task = spec.ring, spec.task
    z = R(str(_need(task, "element")))
    I = Ideal(R, _polys(R, _need(task, "ideal")))
    e_max = int(spec.budgets.get("e_max", DEFAULT_E_MAX))
    cert = frobenius_closure_test(z, I, e_max, **_gb_budget(spec.budgets))
    if cert is None:
        return Report("frobclosure", "inconclusive", summary={"e_max": e_max},
                      message=f"no level e <= {e_max} works; membership in the closure not decided")
    return finalize("frobclosure", "verified", [cert.verify], summary={"level": cert.level},
                    certificates=[cert.to_dict()])


def _witness(spec):
    R, task = spec.ring, spec.task
    z = R(str(_need(task, "element")))
    I = Ideal(R, _polys(R, _need(task, "ideal")))
    e_max = int(spec.budgets.get("e_max", DEFAULT_E_MAX))
    cert = frobenius_closure_test(z, I, e_max, **_gb_budget(spec.budgets))
    if cert is None:
        return Report("witness", "inconclusive", message=f"no Frobenius certificate up to e = {e_max}")
    w = solvable_witness(cert)
    return finalize("witness", "verified", [cert.verify, w.verify],
                    summary={"level": cert.level, "coefficients": [str(t) for t in w.coefficients],
                             "solvable_tower": w.tower.solvable_tower},
                    certificates=[cert.to_dict(), w.to_dict()], tower=w.tower.to_dict())


def _dickson(spec):
    task = spec.task
    n, q = int(_need(task, "n")), int(_need(task, "q"))
    d = dickson_polynomial(n, q, budget=int(task.get("budget", 64)))
    checks = fx._dickson_checks(d)
    return finalize("dickson", "verified", checks, summary={"n": n, "q": q},
                    certificates=[d.to_dict()])


def _cech(spec):
    eta = _cochain(spec.ring, spec.task, spec.budgets)
    if not is_cocycle(eta):
        return Report("cech", "refuted", summary={"cocycle": False}, message="not a cocycle")
    solver = _solver_budget(spec.budgets)
    direct = solve_coboundary(eta, **solver)
    e_max = int(spec.budgets.get("e_max", DEFAULT_E_MAX))
    nil = f_nilpotent_order(eta, e_max, **solver)
    summary = {"cocycle": True, "coboundary": direct.found, "refutation_exact": direct.exact and not direct.found,
               "nilpotency_order": nil.order}
    certs = [{"kind": "cocycle", "class": eta.to_dict()}]
    if nil.preimage is not None:
        certs.append({"kind": "frobenius_preimage", "e": nil.order, "preimage": nil.preimage.to_dict()})
    verdict = "verified" if nil.order is not None else "inconclusive"
    return finalize("cech", verdict, [lambda: is_cocycle(eta)], summary=summary, certificates=certs)


def _trivialize(spec):
    eta = _cochain(spec.ring, spec.task, spec.budgets)
    if not is_cocycle(eta):
        return Report("trivialize", "refuted", message="not a cocycle")
    e_max = int(spec.budgets.get("e_max", DEFAULT_E_MAX))
    res = trivialize_nilpotent_class(CohomologyClass(eta), e_max, **_solver_budget(spec.budgets))
    if res is None:
        return Report("trivialize", "inconclusive", message=f"F-nilpotency not found up to e = {e_max}")
    return finalize("trivialize", "verified", [res.verify],
                    summary={"nilpotency_order": res.record["nilpotency_order"],
                             "adjoined": list(res.extension.names())},
                    certificates=[res.to_dict()], tower=res.tower.to_dict())


def _rees(spec):
    R, task = spec.ring, spec.task
    F = rees_presentation(R, [str(g) for g in _need(task, "generators")],
                          graded=bool(task.get("graded", R.weights is not None)),
                          **_gb_budget(spec.budgets))
    return finalize("rees", "verified", [F.verify],
                    summary={"relations": [str(r) for r in F.ring.relations]},
                    certificates=[F.to_dict()])


def _power_identity(spec):
    R, task = spec.ring, spec.task
    lhs, rhs = R(str(_need(task, "lhs"))), R(str(_need(task, "rhs")))
    k = task.get("level")
    try:
        cert = verify_power_identity(lhs, rhs, None if k is None else int(k))
    except VerificationFailure as exc:
        return Report("power-identity", "refuted", message=str(exc))
    return finalize("power-identity", "verified", [cert.verify], summary={"level": cert.level},
                    certificates=[cert.to_dict()])


def _prop54(spec):
    eta = _cochain(spec.ring, spec.task, spec.budgets)
    e_max = int(spec.budgets.get("e_max", DEFAULT_E_MAX))
    res = top_cohomology_trivialize(eta, e_max, **_solver_budget(spec.budgets))
    if res is None:
        return Report("prop54", "inconclusive", message=f"no additive relation found up to e = {e_max}")
    return finalize("prop54", "verified", [res.verify], summary={"e": res.record["e"]},
                    certificates=[res.to_dict()], tower=res.tower.to_dict())


def run_fixture_report(fid, budgets=None) -> Report:
    budgets = dict(budgets or {})
    kw = {}
    if budgets.get("e_max") is not None:
        kw["e_max"] = int(budgets["e_max"])
    if budgets.get("truncation") is not None and fid == "ex55-splinter":
        kw["truncation"] = int(budgets["truncation"])
    t = time.perf_counter()
    out = fx.run_fixture(fid, **kw)
    rep = finalize(f"verify-example:{fid}", out.verdict, out.checks,
                   summary={k: v for k, v in out.details.items() if k != "runtime_s"},
                   certificates=out.certificates, tower=out.tower,
                   budgets={k: v for k, v in budgets.items() if v is not None})
    rep.timings["total_s"] = round(time.perf_counter() - t, 4)
    return rep, out


def _verify_example(spec):
    rep, _ = run_fixture_report(str(_need(spec.task, "id")), spec.budgets)
    return rep


_RUNNERS = {
    "groebner": _groebner, "regseq": _regseq, "frobclosure": _frobclosure, "witness": _witness,
    "dickson": _dickson, "cech": _cech, "trivialize": _trivialize, "rees": _rees,
    "power-identity": _power_identity, "prop54": _prop54, "verify-example": _verify_example,
}

RECOVERABLE = (ProblemError, BudgetExceeded, ValueError, KeyError, TypeError)
