"""Subgroup descriptors over the residue field, with certification.

A SubgroupDesc is an ideal in the ambient scheme's matrix coordinates,
optionally with a polynomial parameterization.  verify_subgroup certifies
the group axioms symbolically (generic points, ideal membership);
is_solvable runs the derived series on parameterized/sampled points;
conjugate_stab pulls the ideal back along an inner automorphism.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement

from .fields import Scalar
from .groups import GroupScheme, KPoint
from .ideals import (
    Budgets,
    Ideal,
    groebner_basis,
    ideal_equal,
    ideal_member,
    krull_dim,
    normal_form,
)
from .factor import scalar_roots
from .linalg import nullspace
from .poly import Lex, Poly, PolyRing
from .series import PuiseuxSeries


@dataclass
class ParamFamily:
    """Residue family M(params) on the constraint variety V(relations)."""

    ring: PolyRing
    entries: tuple                  # matrix (tuple of tuples) or vector of Poly
    relations: Ideal
    ram_power: int
    gammas: tuple                   # ansatz exponents, aligned with c-variables

    def entry_list(self) -> list[Poly]:
        if self.entries and isinstance(self.entries[0], tuple):
            return [e for row in self.entries for e in row]
        return list(self.entries)


@dataclass
class SubgroupDesc:
    scheme: GroupScheme
    ideal: Ideal
    dim: int
    param: ParamFamily | None = None
    flags: dict = dc_field(default_factory=dict)
    cosets: tuple[Ideal, ...] = ()

    def classification(self) -> str:
        return classify_subgroup(self)

    def to_json(self) -> dict:
        out = {
            "ideal": [str(g) for g in self.ideal.gens],
            "dim": self.dim,
            "flags": dict(self.flags),
            "classification": self.classification(),
            "cosets": [[str(g) for g in c.gens] for c in self.cosets],
        }
        if self.param is not None:
            names = {"lam": "c1", "lami": "c2"}
            for i in range(len(self.param.gammas)):
                names[f"c{i + 1}"] = f"c{i + 3}"
            target = PolyRing(self.param.ring.field, tuple(names.get(v, v) for v in self.param.ring.variables))
            def rn(p: Poly) -> str:
                return str(p.rename(names, target))
            if self.param.entries and isinstance(self.param.entries[0], tuple):
                out["param"] = [[rn(e) for e in row] for row in self.param.entries]
            else:
                out["param"] = [rn(e) for e in self.param.entries]
            out["param_relations"] = [rn(g) for g in self.param.relations.gens]
        return out


@dataclass
class TubeCertificate:
    s: PuiseuxSeries
    eps: object       # GroupElement in mu

    def to_json(self) -> dict:
        from .series import series_to_json

        return {"s": series_to_json(self.s), "eps": str(self.eps)}


@dataclass
class Failure:
    reason: str
    order: object | None = None    # first unsatisfiable constraint exponent

    def to_json(self) -> dict:
        return {"reason": self.reason, "order": None if self.order is None else str(self.order)}


# -- point solving on small constraint varieties -----------------------------

def solve_point(
    J: Ideal,
    presets: dict[str, Scalar] | None = None,
    defaults: dict[str, Scalar] | None = None,
    budget: int = 4000,
) -> dict[str, Scalar] | None:
    """One k-point of V(J), or None.

    Lex Groebner basis, then back-substitution from the last variable with
    roots from the certified factorization fragment; unconstrained
    variables take their default value (0, overridable per name).
    """
    ring = J.ring
    gb = groebner_basis(J, Lex(), budget).gens
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return None
    presets = dict(presets or {})
    defaults = defaults or {}

    def backsub(assign: dict[str, Scalar], remaining: list[str]):
        if not remaining:
            for g in gb:
                if not g.eval_scalars(assign).is_zero():
                    return None
            return assign
        var = remaining[-1]
        if var in presets:
            candidates = [presets[var]]
        else:
            univars = []
            for g in gb:
                used = g.variables_used()
                if var in used and used <= set(assign) | {var}:
                    sub = _partial_eval(g, assign)
                    if not sub.is_zero():
                        univars.append(sub)
            if any(u.is_constant() for u in univars):
                return None  # a constraint collapsed to a nonzero constant
            if not univars:
                candidates = [defaults.get(var, ring.field.zero())]
            else:
                try:
                    roots = scalar_roots(univars[0])
                except Exception:
                    return None
                candidates = [
                    r for r in roots
                    if all(u.eval_scalars({var: r}).is_zero() for u in univars)
                ]
        for cand in candidates:
            out = backsub({**assign, var: cand}, remaining[:-1])
            if out is not None:
                return out
        return None

    return backsub({}, list(ring.variables))


def _partial_eval(g: Poly, assign: dict[str, Scalar]) -> Poly:
    """Evaluate the assigned variables, keep the rest symbolic."""
    ring = g.ring
    values = {}
    for v in ring.variables:
        values[v] = ring.from_scalar(assign[v]) if v in assign else ring.var(v)
    return g.subs_polys(values, ring)


# -- verification -------------------------------------------------------------

def _point_ring_values(scheme: GroupScheme, ring: PolyRing, prefix: str) -> dict[str, Poly]:
    """Coordinate variables of one generic point named with a prefix."""
    return {name: ring.var(prefix + name) for name in scheme.coordinates()}


def _matrix_of(values: dict[str, Poly], scheme: GroupScheme):
    r = scheme.root
    names = scheme.coordinates()
    if r.kind == "Additive":
        return [values[n] for n in names]
    n = r.n
    return [[values[f"x{i + 1}{j + 1}"] for j in range(n)] for i in range(n)]


def _poly_mat_mul(a, b, ring: PolyRing):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero()
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _poly_adjugate(rows, ring: PolyRing):
    from .groups import _poly_det

    n = len(rows)
    out = []
    for i in range(n):
        out_row = []
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = _poly_det(minor, ring) if minor else ring.one()
            out_row.append(cof if (i + j) % 2 == 0 else -cof)
        out.append(out_row)
    return out


def _substituted(f: Poly, matrix, scheme: GroupScheme, ring: PolyRing, y_image: Poly | None = None) -> Poly:
    """f with scheme coordinates replaced by the entries of `matrix`."""
    r = scheme.root
    values: dict[str, Poly] = {}
    names = scheme.coordinates()
    if r.kind == "Additive":
        for n_, p in zip(names, matrix):
            values[n_] = p
    else:
        n = r.n
        for i in range(n):
            for j in range(n):
                values[f"x{i + 1}{j + 1}"] = matrix[i][j]
        if r.kind == "GL":
            values["y"] = y_image if y_image is not None else ring.var("y")
    return f.subs_polys(values, ring)


def verify_subgroup(H: SubgroupDesc, budgets: Budgets | None = None) -> tuple[bool, dict]:
    """Certify identity membership and closure under product and inverse.

    Closure is checked on two independent generic points via ideal
    membership; the report carries any failing generator.
    """
    budgets = budgets or Budgets()
    scheme = H.scheme
    field = scheme.field
    report: dict = {"identity": False, "product": False, "inverse": False}
    ring0 = H.ideal.ring

    ident = scheme.identity()
    id_values = ident._values()
    for g in H.ideal.gens:
        if not g.eval_scalars(id_values).is_zero():
            report["witness"] = f"identity fails {g}"
            H.flags["verified_subgroup"] = False
            return False, report
    report["identity"] = True

    names = scheme.coordinates()
    big = PolyRing(field, tuple("u" + n for n in names) + tuple("v" + n for n in names))
    uvals = {n: big.var("u" + n) for n in names}
    vvals = {n: big.var("v" + n) for n in names}
    rel_gens: list[Poly] = []
    for f in list(H.ideal.gens) + scheme.defining_polys(ring0):
        rel_gens.append(f.subs_polys({n: uvals[n] for n in names}, big))
        rel_gens.append(f.subs_polys({n: vvals[n] for n in names}, big))
    relations = Ideal(big, tuple(rel_gens))
    gb = groebner_basis(relations, budget=budgets.spoly_budget).gens

    r = scheme.root
    if r.kind == "Additive":
        prod = [uvals[n] + vvals[n] for n in names]
        inv_pt = [-uvals[n] for n in names]
        y_prod = y_inv = None
    else:
        n = r.n
        umat = [[uvals[f"x{i + 1}{j + 1}"] for j in range(n)] for i in range(n)]
        vmat = [[vvals[f"x{i + 1}{j + 1}"] for j in range(n)] for i in range(n)]
        prod = _poly_mat_mul(umat, vmat, big)
        adj = _poly_adjugate(umat, big)
        if r.kind == "GL":
            y_prod = uvals["y"] * vvals["y"]
            inv_pt = [[adj[i][j] * uvals["y"] for j in range(len(adj))] for i in range(len(adj))]
            from .groups import _poly_det

            y_inv = _poly_det(umat, big)
        else:
            y_prod = y_inv = None
            inv_pt = adj

    ok = True
    for f in H.ideal.gens:
        fp = _substituted(f, prod, scheme, big, y_prod)
        if not normal_form(fp, list(gb), big.order).is_zero():
            report["witness"] = f"product leaves the ideal at {f}"
            ok = False
            break
    if ok:
        report["product"] = True
        for f in H.ideal.gens:
            fi = _substituted(f, inv_pt, scheme, big, y_inv)
            if not normal_form(fi, list(gb), big.order).is_zero():
                report["witness"] = f"inverse leaves the ideal at {f}"
                ok = False
                break
        if ok:
            report["inverse"] = True
    H.flags["verified_subgroup"] = ok
    return ok, report


# -- conjugation ---------------------------------------------------------------

def conjugate_stab(H: SubgroupDesc, g: KPoint) -> SubgroupDesc:
    """Descriptor of g H g^-1: pull the ideal back along x -> g^-1 x g."""
    scheme = H.scheme
    ring = H.ideal.ring
    r = scheme.root
    if r.kind == "Additive":
        # conjugation is trivial in an abelian group
        return SubgroupDesc(scheme, H.ideal, H.dim, H.param, dict(H.flags), H.cosets)
    n = r.n
    ginv = g.inv()
    xmat = [[ring.var(f"x{i + 1}{j + 1}") for j in range(n)] for i in range(n)]

    def smul(c: Scalar, p: Poly) -> Poly:
        return p.scale(c)

    # g^-1 * X * g, entries linear in the coordinates
    left = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = ring.zero()
            for k in range(n):
                acc = acc + smul(ginv.entries[i][k], xmat[k][j])
            left[i][j] = acc
    moved = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = ring.zero()
            for k in range(n):
                acc = acc + smul(g.entries[k][j], left[i][k])
            moved[i][j] = acc
    new_gens = [_substituted(f, moved, scheme, ring) for f in H.ideal.gens]
    new_ideal = groebner_basis(Ideal(ring, tuple(new_gens)))

    param = None
    if H.param is not None:
        pr = H.param.ring
        if isinstance(H.param.entries[0], tuple):
            m = [[e for e in row] for row in H.param.entries]
            conj = [[pr.zero() for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    acc = pr.zero()
                    for k in range(n):
                        for l in range(n):
                            acc = acc + m[k][l].scale(g.entries[i][k] * ginv.entries[l][j])
                    conj[i][j] = acc
            param = ParamFamily(pr, tuple(tuple(row) for row in conj), H.param.relations, H.param.ram_power, H.param.gammas)
    return SubgroupDesc(scheme, new_ideal, H.dim, param, dict(H.flags), H.cosets)


# -- classification -------------------------------------------------------------

def classify_subgroup(H: SubgroupDesc) -> str:
    scheme = H.scheme
    ring = H.ideal.ring
    r = scheme.root
    ident = scheme.identity()
    trivial_gens = []
    id_values = ident._values()
    for name in scheme.coordinates():
        trivial_gens.append(ring.var(name) - ring.from_scalar(id_values[name]))
    trivial = Ideal(ring, tuple(trivial_gens))
    if ideal_equal(H.ideal, trivial):
        return "trivial"
    if r.kind == "Additive":
        if all(g.total_degree() <= 1 for g in H.ideal.gens):
            return f"linear subspace of dimension {H.dim}"
        return f"additive subgroup of dimension {H.dim}"
    if r.kind == "SL" and r.n == 2:
        templates = {
            "upper unipotent": ("x11 - 1", "x21", "x22 - 1"),
            "lower unipotent": ("x11 - 1", "x12", "x22 - 1"),
            "diagonal torus": ("x12", "x21", "x11*x22 - 1"),
        }
        for name, gens in templates.items():
            tid = Ideal(ring, tuple(ring.parse(s) for s in gens))
            if ideal_equal(H.ideal, tid):
                return name
        if ideal_member(ring.parse("x21"), H.ideal)[0]:
            return f"Borel-contained subgroup of dimension {H.dim}"
        if ideal_member(ring.parse("x12"), H.ideal)[0]:
            return f"opposite-Borel-contained subgroup of dimension {H.dim}"
    return f"subgroup of dimension {H.dim}"


# -- solvability ----------------------------------------------------------------

@dataclass
class SolvabilityResult:
    value: bool | None          # None = inconclusive
    certified: bool
    steps: int
    note: str = ""


def _is_abelian_symbolic(ideal: Ideal, scheme: GroupScheme, budget: int) -> bool:
    field = scheme.field
    names = scheme.coordinates()
    r = scheme.root
    if r.kind == "Additive":
        return True
    big = PolyRing(field, tuple("u" + n for n in names) + tuple("v" + n for n in names))
    uvals = {n: big.var("u" + n) for n in names}
    vvals = {n: big.var("v" + n) for n in names}
    rel: list[Poly] = []
    ring0 = ideal.ring
    for f in list(ideal.gens) + scheme.defining_polys(ring0):
        rel.append(f.subs_polys(uvals, big))
        rel.append(f.subs_polys(vvals, big))
    gb = groebner_basis(Ideal(big, tuple(rel)), budget=budget).gens
    n = r.n
    umat = [[uvals[f"x{i + 1}{j + 1}"] for j in range(n)] for i in range(n)]
    vmat = [[vvals[f"x{i + 1}{j + 1}"] for j in range(n)] for i in range(n)]
    uv = _poly_mat_mul(umat, vmat, big)
    vu = _poly_mat_mul(vmat, umat, big)
    for i in range(n):
        for j in range(n):
            if not normal_form(uv[i][j] - vu[i][j], list(gb), big.order).is_zero():
                return False
    return True


def ideal_of_points(points: list[dict[str, Scalar]], ring: PolyRing, degree: int) -> Ideal:
    """Vanishing ideal of a finite point cloud, up to a degree bound."""
    nvars = ring.nvars
    monos = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            monos.append(tuple(m))
    monos.sort(key=lambda m: (sum(m), m))
    rows = []
    for pt in points:
        row = []
        for m in monos:
            acc = ring.field.one()
            for i, e in enumerate(m):
                if e:
                    acc = acc * pt[ring.variables[i]] ** e
            row.append(acc)
        rows.append(row)
    basis = nullspace(rows, len(monos), ring.field)
    gens = []
    for vec in basis:
        p = ring.zero()
        for c, m in zip(vec, monos):
            if not c.is_zero():
                p = p + ring.monomial(m, c)
        if not p.is_zero():
            gens.append(p)
    return groebner_basis(Ideal(ring, tuple(gens))) if gens else Ideal(ring, ())


def _sample_kpoints(H: SubgroupDesc, rng: random.Random, count: int) -> list[KPoint]:
    """k-points of H: from the parameterized family when present, else from
    ambient samplers when the ideal cuts out the whole scheme."""
    scheme = H.scheme
    field = scheme.field
    out: list[KPoint] = []
    if H.param is not None:
        pr = H.param.ring
        tries = 0
        while len(out) < count and tries < count * 30:
            tries += 1
            presets = {}
            for v in pr.variables:
                if v in ("lam", "lami"):
                    continue
                presets[v] = _random_field_scalar(field, rng)
            sol = solve_point(H.param.relations, presets=presets, defaults={"lam": field.one(), "lami": field.one()})
            if sol is None:
                # retry with unconstrained c's only
                sol = solve_point(H.param.relations, defaults={"lam": field.one(), "lami": field.one(), **{v: _random_field_scalar(field, rng) for v in pr.variables if v.startswith("c")}})
            if sol is None:
                continue
            pt = _param_point(H, sol)
            if pt is not None:
                out.append(pt)
        return out
    scheme_ideal = Ideal(H.ideal.ring, tuple(scheme.defining_polys(H.ideal.ring)))
    if ideal_equal(H.ideal, scheme_ideal):
        r = scheme.root
        if r.kind == "SL":
            from .samples import random_kpoint_sl2

            if r.n == 2:
                return [random_kpoint_sl2(field, rng) for _ in range(count)]
        if r.kind == "Additive":
            return [
                KPoint(scheme, tuple(_random_field_scalar(field, rng) for _ in range(r.n)))
                for _ in range(count)
            ]
    return out


def _random_field_scalar(field, rng: random.Random) -> Scalar:
    if field.char == 0:
        return field.from_int(rng.randrange(-6, 7))
    return list(field.elements())[rng.randrange(field.order)]


def _param_point(H: SubgroupDesc, sol: dict[str, Scalar]) -> KPoint | None:
    scheme = H.scheme
    r = scheme.root
    entries = H.param.entries
    try:
        if isinstance(entries[0], tuple):
            rows = tuple(tuple(e.eval_scalars(sol) for e in row) for row in entries)
            return KPoint(scheme, rows)
        return KPoint(scheme, tuple(e.eval_scalars(sol) for e in entries))
    except Exception:
        return None


def is_solvable(H: SubgroupDesc, budgets: Budgets | None = None, rng_seed: int = 20) -> SolvabilityResult:
    """Derived series on parameterized/sampled points.

    True when the series reaches the trivial group within dim+1 steps
    (abelian levels certified symbolically); certified False when a step
    stabilizes at a symbolically nonabelian verified subgroup.
    """
    budgets = budgets or Budgets()
    if not H.flags.get("verified_subgroup"):
        verify_subgroup(H, budgets)
        if not H.flags.get("verified_subgroup"):
            return SolvabilityResult(None, False, 0, "not a verified subgroup")
    scheme = H.scheme
    r = scheme.root
    if r.kind == "Additive":
        H.flags["solvable"] = True
        return SolvabilityResult(True, True, 0, "additive groups are abelian")
    if _is_abelian_symbolic(H.ideal, scheme, budgets.spoly_budget):
        H.flags["solvable"] = True
        return SolvabilityResult(True, True, 0, "abelian")

    rng = random.Random(rng_seed)
    current = H.ideal
    steps = 0
    max_steps = max(1, H.dim) + 1
    samples = _sample_kpoints(H, rng, budgets.sample_budget)
    if len(samples) < 4:
        return SolvabilityResult(None, False, 0, "cannot sample enough points")
    ring = H.ideal.ring
    while steps < max_steps:
        steps += 1
        commutators = []
        for _ in range(budgets.sample_budget):
            a = samples[rng.randrange(len(samples))]
            b = samples[rng.randrange(len(samples))]
            c = a.mul(b).mul(a.inv()).mul(b.inv())
            commutators.append(c)
        closed = list(commutators)
        for _ in range(budgets.sample_budget // 2):
            a = commutators[rng.randrange(len(commutators))]
            b = commutators[rng.randrange(len(commutators))]
            closed.append(a.mul(b))
        pts = [p._values() for p in closed]
        nxt = ideal_of_points(pts, ring, max(2, min(3, budgets.degree_bound)))
        ident = scheme.identity()
        trivial = all(g.eval_scalars(ident._values()).is_zero() for g in nxt.gens)
        if not trivial:
            return SolvabilityResult(None, False, steps, "identity escaped the sampled ideal")
        id_gens = [ring.var(n) - ring.from_scalar(ident._values()[n]) for n in scheme.coordinates()]
        if ideal_equal(nxt, Ideal(ring, tuple(id_gens))):
            H.flags["solvable"] = True
            return SolvabilityResult(True, True, steps, "derived series reached the trivial group")
        if _is_abelian_symbolic(nxt, scheme, budgets.spoly_budget):
            H.flags["solvable"] = True
            return SolvabilityResult(True, True, steps, "derived series reached an abelian group")
        if ideal_equal(nxt, current):
            sub = SubgroupDesc(scheme, nxt, krull_dim(nxt))
            ok, _ = verify_subgroup(sub, budgets)
            if ok:
                H.flags["solvable"] = False
                return SolvabilityResult(False, True, steps, "derived series stabilized at a nonabelian subgroup")
            return SolvabilityResult(None, False, steps, "stabilized at an uncertified set")
        current = nxt
        samples = closed
    return SolvabilityResult(None, False, steps, "derived series did not settle within the step budget")
