"""End-to-end stabilizer runs: reduction, both algorithms, agreement.

Bounded branches short-circuit to the trivial subgroup through the residue
point (the stabilizer of a bounded type with residue in k is trivial);
unbounded branches are mu-reduced first, then handed to the
reparameterization and/or degeneration algorithms, whose ideals are
compared by mutual membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .branches import Branch, implicitize, is_centered_at_infinity
from .degeneration import DegenerationResult, stab_degeneration, verify_flat_rows_at
from .exponents import exp
from .groups import GroupElement, KPoint
from .ideals import Budgets, Ideal, ideal_equal
from .series import PuiseuxSeries, ScalarDomain, ser_subst
from .stabilizer import mu_reduce, stab_reparam
from .subgroups import SubgroupDesc, TubeCertificate, solve_point, verify_subgroup


@dataclass
class StabilizerRun:
    branch: Branch
    reduced: Branch
    certificate: TubeCertificate | None
    dim_before: int
    dim_after: int
    bounded: bool
    reparam: SubgroupDesc | None = None
    degeneration: DegenerationResult | None = None
    agreement: bool | None = None
    notes: list[str] = dc_field(default_factory=list)

    @property
    def subgroup(self) -> SubgroupDesc:
        if self.reparam is not None:
            return self.reparam
        if self.degeneration is not None:
            return self.degeneration.desc
        raise ValueError("no stabilizer was computed")


def trivial_subgroup(branch: Branch) -> SubgroupDesc:
    scheme = branch.scheme
    ring = scheme.coordinate_ring()
    ident = scheme.identity()._values()
    gens = tuple(ring.var(n) - ring.from_scalar(ident[n]) for n in scheme.coordinates())
    desc = SubgroupDesc(scheme, Ideal(ring, gens), 0, None, {"algorithm": "bounded-trivial"})
    verify_subgroup(desc)
    return desc


def compute_stabilizer(branch: Branch, algorithm: str = "both", budgets: Budgets | None = None) -> StabilizerRun:
    budgets = budgets or Budgets()
    if not is_centered_at_infinity(branch):
        # bounded with residue in k: the stabilizer is the trivial subgroup
        residue = branch.element.res()
        desc = trivial_subgroup(branch)
        desc.flags["bounded_residue"] = str(residue)
        run = StabilizerRun(branch, branch, None, 0, 0, True, reparam=desc)
        run.notes.append("bounded branch: stabilizer is trivial by the residue-point argument")
        return run

    reduced, cert, dim_before, dim_after = mu_reduce(branch, budgets)
    run = StabilizerRun(branch, reduced, cert, dim_before, dim_after, False)
    if dim_after < dim_before:
        run.notes.append(f"mu-reduction lowered the type dimension {dim_before} -> {dim_after}")

    if algorithm in ("reparam", "both"):
        run.reparam = stab_reparam(reduced, budgets)
    if algorithm in ("degeneration", "both"):
        D = min(budgets.degree_bound, 3) if _entries_inexact(reduced) else min(budgets.degree_bound, 4)
        V = implicitize(reduced, max(2, D))
        run.degeneration = stab_degeneration(reduced, V, budgets)
    if run.reparam is not None and run.degeneration is not None:
        run.agreement = ideal_equal(run.reparam.ideal, run.degeneration.desc.ideal, budgets.spoly_budget)
    return run


def _entries_inexact(branch: Branch) -> bool:
    return any(s.precision is not None for s in branch.element._flat())


def lift_residue_point(run: StabilizerRun, h: KPoint, precision: int = 8) -> GroupElement | None:
    """An O-point of the translated variety with residue h, found by solving
    the reparameterization family at h and forming a(s0) a(t)^-1."""
    desc = run.reparam
    if desc is None or desc.param is None:
        return None
    param = desc.param
    ring = param.ring
    field = ring.field
    gens = list(param.relations.gens)
    targets = h._values()
    names = run.reduced.scheme.coordinates()
    flat = param.entry_list()
    for name, p in zip(names, flat):
        gens.append(p - ring.from_scalar(targets[name]))
    sol = solve_point(Ideal(ring, tuple(gens)), defaults={"lam": field.one(), "lami": field.one()})
    if sol is None:
        return None
    dom = ScalarDomain(field)
    lam = sol.get("lam", field.one())
    s_terms = [(exp(1), lam**param.ram_power)]
    for i, g in enumerate(param.gammas):
        c = sol.get(f"c{i + 1}", field.zero())
        if not c.is_zero():
            s_terms.append((exp(1) + exp(g), lam**param.ram_power * c))
    s0 = PuiseuxSeries(dom, s_terms, None)
    from .stabilizer import _scalar_lead_root

    lead_root = _scalar_lead_root(lam, param.ram_power)
    el = run.reduced.element
    r = el.scheme.root
    prec = exp(precision)
    if r.kind == "Additive":
        moved = GroupElement(el.scheme, tuple(ser_subst(f, s0, prec=prec, lead_root=lead_root) for f in el.entries), check=False)
    else:
        rows = tuple(tuple(ser_subst(f, s0, prec=prec, lead_root=lead_root) for f in row) for row in el.entries)
        y = ser_subst(el.y, s0, prec=prec, lead_root=lead_root) if r.kind == "GL" else None
        moved = GroupElement(el.scheme, rows, y, check=False)
    g = moved.mul(el.inv())
    if not g.is_integral():
        return None
    if g.res() != h:
        return None
    return g


def halevi_lift_check(run: StabilizerRun, points: list[KPoint], precision: int = 8) -> dict:
    """Lift each fiber point and verify it against the flat model rows."""
    lifted = 0
    exact_residues = 0
    flat_ok = 0
    for h in points:
        g = lift_residue_point(run, h, precision)
        if g is None:
            continue
        lifted += 1
        exact_residues += 1  # lift_residue_point already enforced the match
        if run.degeneration is not None and verify_flat_rows_at(run.degeneration.flat_rows, g):
            flat_ok += 1
    return {
        "requested": len(points),
        "lifted": lifted,
        "exact_residue": exact_residues,
        "on_flat_model": flat_ok,
    }
