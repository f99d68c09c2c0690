"""JSON job descriptions in, structured reports out.

A job names a field, a group scheme, an input (branch, plane curve, or
subgroup), a command and budgets; running it produces a report dict that
re-parses and is byte-stable modulo the timing block.
"""

from __future__ import annotations

import time

from .branches import Branch, is_centered_at_infinity, validate_branch
from .errors import (
    BudgetExceeded,
    CoefficientFieldTooSmall,
    IrrationalExponentInSubstitution,
    MustabError,
    WildRamification,
)
from .fields import FieldSpec
from .groups import GroupElement, GroupScheme, iwasawa
from .ideals import Budgets, Ideal, ideal_equal
from .newton import PlaneCurveInput, places_at_infinity
from .pipeline import StabilizerRun, compute_stabilizer
from .samples import random_kpoint_sl2
from .series import parse_series, series_to_json
from .stabilizer import mu_reduce
from .subgroups import SubgroupDesc, conjugate_stab, is_solvable, verify_subgroup

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3
EXIT_BUDGET = 4
EXIT_VERIFY = 5

UNSUPPORTED = (CoefficientFieldTooSmall, WildRamification, IrrationalExponentInSubstitution)


class JobError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_budgets(data: dict | None, overrides: dict | None = None) -> Budgets:
    b = Budgets()
    merged = dict(data or {})
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v
    if "precision" in merged:
        b.precision = int(merged["precision"])
    if "degree_bound" in merged:
        b.degree_bound = int(merged["degree_bound"])
    if "order_budget" in merged:
        b.order_budget = int(merged["order_budget"])
    if "spoly_budget" in merged:
        b.spoly_budget = int(merged["spoly_budget"])
    if b.precision < 1 or b.precision > 64:
        raise JobError("precision out of range [1, 64]", EXIT_INVALID)
    if b.degree_bound < 1 or b.degree_bound > 12:
        raise JobError("degree bound out of range [1, 12]", EXIT_INVALID)
    if b.order_budget < 1 or b.order_budget > 24:
        raise JobError("order budget out of range [1, 24]", EXIT_INVALID)
    return b


def parse_branch(data: dict, scheme: GroupScheme, d: int | None) -> Branch:
    field = scheme.field
    entries = data["entries"]
    r = scheme.root
    if r.kind == "Additive":
        series = tuple(parse_series(e, field, d) for e in entries)
    else:
        series = tuple(tuple(parse_series(e, field, d) for e in row) for row in entries)
    return validate_branch(scheme, series)


def parse_plane_curve(data: dict, scheme: GroupScheme) -> PlaneCurveInput:
    from .poly import PolyRing

    ring = PolyRing(scheme.field, ("x", "y"))
    f = ring.parse(data["f"])
    emb = data["embedding"]
    r = scheme.root
    if r.kind == "Additive":
        embedding = [ring.parse(p) for p in emb]
    else:
        embedding = [[ring.parse(p) for p in row] for row in emb]
    return PlaneCurveInput(f, embedding, scheme, bool(data.get("trusted_irreducible", False)))


def run_job(job: dict, overrides: dict | None = None, strict: bool = False) -> tuple[dict, int]:
    """Execute one JobSpec; returns (report, exit_code)."""
    start = time.time()
    report: dict = {
        "schema": "mustab-report-v1",
        "inputs": job,
        "results": {},
        "checks": {},
        "witnesses": {},
        "errors": [],
    }
    code = EXIT_OK
    try:
        try:
            field = FieldSpec.from_json(job["field"])
            scheme = GroupScheme.from_json(job["group"], field)
            d = job.get("exponent_d")
            command = job["command"]
            budgets = parse_budgets(job.get("budgets"), overrides)
            algorithm = (overrides or {}).get("algorithm") or job.get("algorithm", "both")
        except JobError:
            raise
        except Exception as exc:
            raise JobError(f"invalid job: {exc}", EXIT_INVALID)
        report["command"] = command

        if command == "places":
            curve = parse_plane_curve(job["input"]["plane_curve"], scheme)
            branches = places_at_infinity(curve, budgets.precision)
            report["results"]["branches"] = [_branch_json(b) for b in branches]
        elif command == "stab":
            branches = _input_branches(job, scheme, d, budgets)
            runs = [compute_stabilizer(b, algorithm, budgets) for b in branches]
            report["results"]["stabilizers"] = [_run_json(r) for r in runs]
            _theorem_checks(report, runs, budgets, strict)
        elif command == "reduce":
            branch = parse_branch(job["input"]["branch"], scheme, d)
            reduced, cert, dim_before, dim_after = mu_reduce(branch, budgets)
            report["results"]["reduced"] = _branch_json(reduced)
            report["results"]["dim_before"] = dim_before
            report["results"]["dim_after"] = dim_after
            report["results"]["certificate"] = cert.to_json() if cert else None
        elif command == "iwasawa":
            branch = parse_branch(job["input"]["branch"], scheme, d)
            u, b2 = iwasawa(branch.element)
            report["results"]["u"] = _element_json(u)
            report["results"]["b"] = _element_json(b2)
            report["results"]["u_integral"] = u.is_integral()
        elif command == "verify":
            sub = job["input"]["subgroup"]
            ring = scheme.coordinate_ring()
            ideal = Ideal(ring, tuple(ring.parse(s) for s in sub["ideal"]))
            from .ideals import krull_dim

            desc = SubgroupDesc(scheme, ideal, krull_dim(ideal))
            ok, rep = verify_subgroup(desc, budgets)
            solv = is_solvable(desc, budgets) if ok else None
            report["results"]["verified_subgroup"] = ok
            report["results"]["verify_report"] = {k: v for k, v in rep.items()}
            if solv is not None:
                report["results"]["solvable"] = solv.value
                report["results"]["solvable_note"] = solv.note
                if strict and solv.value is None:
                    code = max(code, EXIT_VERIFY)
            if not ok:
                code = max(code, EXIT_VERIFY)
        else:
            raise JobError(f"unknown command {command!r}", EXIT_INVALID)
    except JobError as exc:
        report["errors"].append({"type": "JobError", "message": str(exc)})
        code = exc.code
    except UNSUPPORTED as exc:
        report["errors"].append({"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_UNSUPPORTED
    except BudgetExceeded as exc:
        report["errors"].append({"type": "BudgetExceeded", "message": str(exc)})
        code = EXIT_BUDGET
    except MustabError as exc:
        report["errors"].append({"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_VERIFY
    if any(v == "fail" for v in report["checks"].values()):
        code = max(code, EXIT_VERIFY)
    report["timing"] = {"seconds": round(time.time() - start, 3)}
    report["budget_usage"] = {
        "precision": (overrides or {}).get("precision") or (job.get("budgets") or {}).get("precision", 12),
        "degree_bound": (overrides or {}).get("degree_bound") or (job.get("budgets") or {}).get("degree_bound", 8),
        "order_budget": (overrides or {}).get("order_budget") or (job.get("budgets") or {}).get("order_budget", 6),
    }
    return report, code


def _input_branches(job: dict, scheme: GroupScheme, d, budgets: Budgets) -> list[Branch]:
    inp = job["input"]
    if "branch" in inp:
        return [parse_branch(inp["branch"], scheme, d)]
    if "plane_curve" in inp:
        curve = parse_plane_curve(inp["plane_curve"], scheme)
        return places_at_infinity(curve, budgets.precision)
    raise JobError("stab requires a branch or plane_curve input", EXIT_INVALID)


def _branch_json(b: Branch) -> dict:
    el = b.element
    r = b.scheme.root
    if r.kind == "Additive":
        entries = [series_to_json(s) for s in el.entries]
    else:
        entries = [[series_to_json(s) for s in row] for row in el.entries]
    return {
        "entries": entries,
        "ramification": b.ramification,
        "centered_at_infinity": is_centered_at_infinity(b),
        "trusted_irreducible": b.trusted_irreducible,
        "notes": list(b.notes),
    }


def _element_json(el: GroupElement) -> list:
    r = el.scheme.root
    if r.kind == "Additive":
        return [series_to_json(s) for s in el.entries]
    return [[series_to_json(s) for s in row] for row in el.entries]


def _run_json(run: StabilizerRun) -> dict:
    out = {
        "bounded": run.bounded,
        "dim_before_reduction": run.dim_before,
        "dim_after_reduction": run.dim_after,
        "agreement": run.agreement,
        "notes": list(run.notes),
        "subgroup": run.subgroup.to_json(),
    }
    if run.reparam is not None:
        out["reparam"] = run.reparam.to_json()
    if run.degeneration is not None:
        out["degeneration"] = run.degeneration.desc.to_json()
        out["degeneration"]["fiber"] = [str(g) for g in run.degeneration.fiber.gens]
        out["degeneration"]["component_dims"] = run.degeneration.component_dims
    if run.certificate is not None:
        out["reduction_certificate"] = run.certificate.to_json()
    return out


def _theorem_checks(report: dict, runs: list[StabilizerRun], budgets: Budgets, strict: bool):
    checks = report["checks"]
    witnesses = report["witnesses"]

    def set_check(name: str, ok: bool | None, witness: str = ""):
        prev = checks.get(name)
        if ok is None:
            if prev is None:
                checks[name] = "skipped"
            return
        if ok:
            if prev != "fail":
                checks[name] = "pass"
        else:
            checks[name] = "fail"
            if witness:
                witnesses[name] = witness

    for i, run in enumerate(runs):
        desc = run.subgroup
        if run.bounded:
            trivial = desc.dim == 0
            set_check("bounded_trivial", trivial, f"branch {i}: dim {desc.dim}")
            set_check("dim_equality", None)
            set_check("infinite", None)
        else:
            set_check("bounded_trivial", None)
            set_check(
                "dim_equality",
                desc.dim == run.dim_after,
                f"branch {i}: dim Stab {desc.dim} vs dim p {run.dim_after}",
            )
            set_check("infinite", desc.dim >= 1, f"branch {i}: dim {desc.dim}")
        solv = is_solvable(desc, budgets)
        if solv.value is None:
            set_check("solvable", False if strict else None, solv.note)
        else:
            set_check("solvable", solv.value is True, solv.note)
        if run.agreement is not None:
            set_check("agreement", run.agreement, _agreement_witness(run, i))
        if not run.bounded and desc.scheme.root.kind == "SL" and desc.scheme.root.n == 2:
            set_check("conjugation", _conjugation_check(run, budgets), f"branch {i}")
        else:
            set_check("conjugation", None)


def _agreement_witness(run: StabilizerRun, index: int) -> str:
    if run.agreement or run.reparam is None or run.degeneration is None:
        return f"branch {index}"
    left = run.reparam.ideal
    right = run.degeneration.desc.ideal
    from .ideals import ideal_member

    separator = None
    for g in left.gens:
        if not ideal_member(g, right)[0]:
            separator = g
            break
    if separator is None:
        for g in right.gens:
            if not ideal_member(g, left)[0]:
                separator = g
                break
    return (
        f"branch {index}: reparam <{', '.join(str(g) for g in left.gens)}>"
        f" vs degeneration <{', '.join(str(g) for g in right.gens)}>;"
        f" separating generator {separator}"
    )


def _conjugation_check(run: StabilizerRun, budgets: Budgets, samples: int = 2, seed: int = 31) -> bool:
    import random

    rng = random.Random(seed)
    field = run.reduced.field
    for _ in range(samples):
        g = random_kpoint_sl2(field, rng)
        moved = run.reduced.translate(g)
        moved_run = compute_stabilizer(moved, "reparam", budgets)
        conj = conjugate_stab(run.subgroup, g)
        if not ideal_equal(moved_run.subgroup.ideal, conj.ideal, budgets.spoly_budget):
            return False
    return True
