"""Tube equivalence, mu-reduction and the reparameterization stabilizer.

The common engine is a polynomial ansatz s = lam^r * t * (1 + sum c_i
t^{gamma_i}) whose coefficients live in k[lam, lami, c_1..c_m] with
lam * lami = 1.  Substituting the ansatz into a branch and multiplying by
a reference realization turns "the quotient is infinitesimal/integral"
into polynomial constraints on the parameters; solving or eliminating
those constraints yields tube certificates and the stabilizer family.
"""

from __future__ import annotations

from fractions import Fraction

from .branches import Branch, is_centered_at_infinity, type_dimension
from .errors import (
    BudgetExceeded,
    IrrationalExponentInSubstitution,
    NotCenteredAtInfinity,
    NotReduced,
    PrecisionInsufficient,
)
from .exponents import EXP_ZERO, Exponent, exp
from .groups import GroupElement, GroupScheme
from .ideals import Budgets, Ideal, eliminate, groebner_basis, krull_dim, normal_form
from .poly import Poly, PolyRing
from .series import PolyDomain, PuiseuxSeries, ScalarDomain, ser_subst
from .subgroups import (
    Failure,
    ParamFamily,
    SubgroupDesc,
    TubeCertificate,
    solve_point,
    verify_subgroup,
)


def ansatz_exponents(branch: Branch, order_budget: int) -> list[Fraction]:
    """Reparameterization exponents: the branch's exponent lattice steps
    (1/ram)Z in (0, order_budget], which contains the closure under
    addition of all exponent differences present in the entries."""
    r = branch.ramification
    out = []
    k = 1
    while Fraction(k, r) <= order_budget:
        out.append(Fraction(k, r))
        k += 1
        if len(out) >= 24:
            break
    return out


class Ansatz:
    """Symbolic reparameterization with polynomial coefficients."""

    def __init__(self, branch: Branch, order_budget: int):
        self.branch = branch
        field = branch.field
        self.r = branch.ramification
        self.gammas = tuple(ansatz_exponents(branch, order_budget))
        names = ("lam", "lami") + tuple(f"c{i + 1}" for i in range(len(self.gammas)))
        self.ring = PolyRing(field, names)
        self.dom = PolyDomain(self.ring, (("lam", "lami"),))
        tail_terms = [(exp(g), self.ring.var(f"c{i + 1}")) for i, g in enumerate(self.gammas)]
        one = PuiseuxSeries.one(self.dom)
        self.tail = PuiseuxSeries(self.dom, tail_terms, None)
        lam_r = PuiseuxSeries.monomial(self.dom, exp(1), self.ring.var("lam") ** self.r)
        self.s = lam_r * (one + self.tail)
        self.relation = self.ring.var("lam") * self.ring.var("lami") - self.ring.one()
        # constraints live at exponents <= 0; the quotient multiplies by an
        # inverse whose poles are bounded by n times the branch's pole order,
        # so that is all the precision the substitution needs
        pole = Fraction(0)
        for s in branch.element._flat():
            if s.terms:
                lead = s.terms[0][0]
                if lead.sign() < 0 and lead.is_rational() and -lead.as_fraction() > pole:
                    pole = -lead.as_fraction()
        n = branch.scheme.root.n
        self.work_prec = exp(pole * n + 2)

    def lift_series(self, f: PuiseuxSeries) -> PuiseuxSeries:
        terms = [(e, self.ring.from_scalar(c)) for e, c in f.terms]
        return PuiseuxSeries(self.dom, terms, f.precision)

    def _lead_root(self, gamma: Fraction) -> Poly:
        e = gamma * self.r
        assert e.denominator == 1, "ramification mismatch in ansatz"
        e = int(e)
        return self.ring.var("lam") ** e if e >= 0 else self.ring.var("lami") ** (-e)

    def subst(self, f: PuiseuxSeries, prec: Exponent | None = None) -> PuiseuxSeries:
        return ser_subst(
            self.lift_series(f),
            self.s,
            prec=prec,
            lead_root=self._lead_root,
            parts=(exp(1), self.tail),
        )

    def subst_element(self, prec: Exponent | None = None) -> GroupElement:
        prec = prec or self.work_prec
        el = self.branch.element
        r = el.scheme.root
        if r.kind == "Additive":
            entries = tuple(self.subst(s, prec) for s in el.entries)
            return GroupElement(el.scheme, entries, check=False)
        rows = tuple(tuple(self.subst(s, prec) for s in row) for row in el.entries)
        y = self.subst(el.y, prec) if r.kind == "GL" else None
        return GroupElement(el.scheme, rows, y, check=False)

    def lift_element(self, el: GroupElement) -> GroupElement:
        r = el.scheme.root
        if r.kind == "Additive":
            return GroupElement(el.scheme, tuple(self.lift_series(s) for s in el.entries), check=False)
        rows = tuple(tuple(self.lift_series(s) for s in row) for row in el.entries)
        y = self.lift_series(el.y) if r.kind == "GL" else None
        return GroupElement(el.scheme, rows, y, check=False)

    def numeric_s(self, assignment: dict) -> PuiseuxSeries:
        """The reparameterization series at a concrete parameter point."""
        field = self.ring.field
        dom = ScalarDomain(field)
        lam = assignment.get("lam", field.one())
        terms = [(exp(1), lam**self.r)]
        for i, g in enumerate(self.gammas):
            c = assignment.get(f"c{i + 1}", field.zero())
            if not c.is_zero():
                terms.append((exp(1) + exp(g), lam**self.r * c))
        return PuiseuxSeries(dom, terms, None)


def _mu_conditions(e: GroupElement, require_identity_residue: bool):
    """Constraint polynomials from 'E is integral (and residues to the
    identity)'; returns (constraints as (slot, poly), residue matrix)."""
    scheme = e.scheme
    r = scheme.root
    ident = scheme.identity()
    id_vals = ident._values()
    names = scheme.coordinates()
    flat_names = list(names)
    if r.kind == "Additive":
        flat = list(e.entries)
    else:
        flat = [e.entries[i][j] for i in range(r.n) for j in range(r.n)]
        if r.kind == "GL":
            flat.append(e.y)
        else:
            flat_names = flat_names[: r.n * r.n]
    constraints = []
    residue = []
    for name, s in zip(flat_names, flat):
        if s.precision is not None and s.precision.sign() <= 0:
            raise PrecisionInsufficient(f"entry {name} known only below t^({s.precision})")
        res_poly = None
        for ee, c in s.terms:
            sign = ee.sign()
            if sign < 0:
                constraints.append((ee, c))
            elif sign == 0:
                res_poly = c
        if res_poly is None:
            res_poly = s.dom.zero()
        if require_identity_residue:
            idc = id_vals.get(name)
            if idc is not None:
                constraints.append((EXP_ZERO, res_poly - s.dom.ring.from_scalar(idc)))
        residue.append(res_poly)
    return constraints, residue


def mu_correct(a: Branch, b: Branch, order_budget: int = 6, budgets: Budgets | None = None):
    """Certificate that mu . a = mu . b (a reparameterization s and a
    correction eps in mu with a(s) = eps * b), or a Failure recording the
    first unsatisfiable constraint."""
    budgets = budgets or Budgets()
    if a.scheme != b.scheme:
        return Failure("branches on different schemes")
    # direct attempt without reparameterization
    try:
        eps = a.element.mul(b.element.inv())
        if eps.in_mu():
            dom = ScalarDomain(a.field)
            t = PuiseuxSeries.monomial(dom, exp(1), a.field.one())
            return TubeCertificate(t, eps)
    except PrecisionInsufficient:
        pass
    if a.element._flat() and any(s.has_irrational_exponent() for s in a.element._flat()):
        return Failure("irrational exponents block reparameterization and the direct correction failed")

    ansatz = Ansatz(a, order_budget)
    a_sub = ansatz.subst_element()
    b_inv = ansatz.lift_element(b.element.inv())
    e = a_sub.mul(b_inv)
    try:
        constraints, _ = _mu_conditions(e, require_identity_residue=True)
    except PrecisionInsufficient as exc:
        raise BudgetExceeded(f"precision too low to decide equivalence: {exc}")
    gens = [p for _, p in constraints] + [ansatz.relation]
    J = Ideal(ansatz.ring, tuple(gens))
    sol = solve_point(J, defaults={"lam": a.field.one(), "lami": a.field.one()})
    if sol is None:
        slot = _first_unsatisfiable(constraints, ansatz)
        return Failure("reparameterization constraints are unsolvable over k", slot)
    s0 = ansatz.numeric_s(sol)
    lam_val = sol.get("lam", a.field.one())
    a_at_s = _subst_branch(a, s0, _scalar_lead_root(lam_val, ansatz.r))
    eps = a_at_s.mul(b.element.inv())
    if eps.in_mu():
        return TubeCertificate(s0, eps)
    return Failure("solved constraints failed final mu verification")


def _first_unsatisfiable(constraints, ansatz: Ansatz):
    ordered = sorted(constraints, key=lambda t: t[0])
    acc = [ansatz.relation]
    for slot, p in ordered:
        acc.append(p)
        gb = groebner_basis(Ideal(ansatz.ring, tuple(acc)))
        if any(g.is_constant() and not g.is_zero() for g in gb.gens):
            return slot
    return None


def _scalar_lead_root(lam_val, r: int):
    """lead^gamma for lead = lam^r, evaluated through the known lam."""

    def root(gamma):
        e = gamma * r
        assert e.denominator == 1
        e = int(e)
        return lam_val**e if e >= 0 else lam_val.inv() ** (-e)

    return root


def _subst_branch(branch: Branch, s: PuiseuxSeries, lead_root=None) -> GroupElement:
    el = branch.element
    r = el.scheme.root
    if r.kind == "Additive":
        return GroupElement(el.scheme, tuple(ser_subst(f, s, lead_root=lead_root) for f in el.entries), check=False)
    rows = tuple(tuple(ser_subst(f, s, lead_root=lead_root) for f in row) for row in el.entries)
    y = ser_subst(el.y, s, lead_root=lead_root) if r.kind == "GL" else None
    return GroupElement(el.scheme, rows, y, check=False)


def mu_reduce(branch: Branch, budgets: Budgets | None = None):
    """Best-effort minimal-dimension representative of the tube class.

    Enumerates truncations of positive-exponent tails (with a determinant
    repair for matrix schemes), keeps candidates certified tube-equivalent
    by mu_correct, and returns one minimizing the budgeted type dimension.
    """
    budgets = budgets or Budgets()
    D = max(2, min(budgets.degree_bound, 6))
    dim_before, D = _type_dim_best_effort(branch, D)
    candidates = _truncation_candidates(branch)
    dom = ScalarDomain(branch.field)
    ident_cert = TubeCertificate(
        PuiseuxSeries.monomial(dom, exp(1), branch.field.one()),
        _identity_eps(branch),
    )
    best = (dim_before, _term_count(branch), branch, ident_cert)
    irrational = any(s.has_irrational_exponent() for s in branch.element._flat())
    for cand in candidates:
        try:
            cert = mu_correct(branch, cand, budgets.order_budget, budgets)
        except BudgetExceeded:
            cert = None
        if not isinstance(cert, TubeCertificate):
            cert = None
            if irrational:
                # the original cannot go through substitution; certify from
                # the rational-exponent side instead
                try:
                    back = mu_correct(cand, branch, budgets.order_budget, budgets)
                except BudgetExceeded:
                    back = None
                if isinstance(back, TubeCertificate):
                    cert = back
        if cert is None:
            continue
        try:
            dim_cand, _ = type_dimension(cand, D)
        except PrecisionInsufficient:
            continue  # cannot certify this candidate's dimension
        key = (dim_cand, _term_count(cand))
        if key < (best[0], best[1]):
            best = (dim_cand, key[1], cand, cert)
    dim_after, _, reduced, cert = best
    notes = set(reduced.notes)
    if dim_after == 1:
        notes.add("reduction_certified_minimal")
    reduced = Branch(reduced.element, reduced.ramification, reduced.trusted_irreducible, tuple(sorted(notes)))
    return reduced, cert, dim_before, dim_after


def _type_dim_best_effort(branch: Branch, D: int) -> tuple[int, int]:
    """Type dimension at the largest degree <= D the precision supports."""
    while D > 2:
        try:
            dim, _ = type_dimension(branch, D)
            return dim, D
        except PrecisionInsufficient:
            D -= 1
    dim, _ = type_dimension(branch, 2)
    return dim, 2


def _identity_eps(branch: Branch) -> GroupElement:
    return branch.scheme.identity().to_series()


def _term_count(branch: Branch) -> int:
    return sum(len(s.terms) for s in branch.element._flat())


def _truncation_candidates(branch: Branch) -> list[Branch]:
    el = branch.element
    scheme = el.scheme
    r = scheme.root
    flat = el._flat()
    out: list[Branch] = []

    def rebuild(new_flat):
        if r.kind == "Additive":
            entries = tuple(new_flat)
            return GroupElement(scheme, entries, check=False)
        n = r.n
        rows = tuple(tuple(new_flat[i * n + j] for j in range(n)) for i in range(n))
        return GroupElement(scheme, rows, check=r.kind != "GL")

    seen = set()
    for idx, s in enumerate(flat):
        for cut_at, (e, _) in enumerate(s.terms):
            if e.sign() <= 0:
                continue
            truncated = PuiseuxSeries(s.dom, s.terms[:cut_at], s.precision)
            new_flat = list(flat)
            new_flat[idx] = truncated
            key = tuple(tuple(x.terms) for x in new_flat)
            if key in seen:
                continue
            seen.add(key)
            cand = _try_candidate(scheme, rebuild, new_flat, branch)
            if cand is not None:
                out.append(cand)
    # all-entries truncation with determinant repair
    all_cut = [PuiseuxSeries(s.dom, [(e, c) for e, c in s.terms if e.sign() <= 0], s.precision) for s in flat]
    if r.kind in ("SL", "GL") and any(a.terms != b.terms for a, b in zip(all_cut, flat)):
        repaired = _repair_det(scheme, all_cut)
        if repaired is not None:
            key = tuple(tuple(x.terms) for x in repaired)
            if key not in seen:
                cand = _try_candidate(scheme, rebuild, repaired, branch)
                if cand is not None:
                    out.append(cand)
    elif r.kind == "Additive":
        key = tuple(tuple(x.terms) for x in all_cut)
        if key not in seen and any(a.terms != b.terms for a, b in zip(all_cut, flat)):
            cand = _try_candidate(scheme, rebuild, all_cut, branch)
            if cand is not None:
                out.append(cand)
    return out


def _try_candidate(scheme, rebuild, new_flat, original: Branch) -> Branch | None:
    try:
        el = rebuild(new_flat)
        el._validate()
    except Exception:
        return None
    ram = 1
    for s in el._flat():
        ram = _lcm_int(ram, s.ramification())
    return Branch(el, ram, original.trusted_irreducible, original.notes)


def _repair_det(scheme: GroupScheme, flat: list[PuiseuxSeries]) -> list[PuiseuxSeries] | None:
    """Solve the last diagonal entry from det = 1 (SL only)."""
    from .groups import mat_det
    from .series import PuiseuxSeries as PS

    r = scheme.root
    if r.kind != "SL":
        return None
    n = r.n
    rows = [[flat[i * n + j] for j in range(n)] for i in range(n)]
    dom = rows[0][0].dom
    one = PS.one(dom)
    minor = [[rows[i][j] for j in range(n - 1)] for i in range(n - 1)]
    cof = mat_det(minor) if n > 1 else one
    if not cof.terms:
        return None
    save = rows[n - 1][n - 1]
    rows[n - 1][n - 1] = one
    full = mat_det(rows)
    try:
        x = (one - (full - cof)) * cof.inv()
    except Exception:
        return None
    rows[n - 1][n - 1] = x
    return [rows[i][j] for i in range(n) for j in range(n)]


def _lcm_int(a: int, b: int) -> int:
    g, x = a, b
    while x:
        g, x = x, g % x
    return a * b // g


def stab_reparam(branch: Branch, budgets: Budgets | None = None) -> SubgroupDesc:
    """Stabilizer via the reparameterization ansatz: integrality of
    a(s) a(t)^-1 carves the parameter variety; its residue family
    implicitizes to the subgroup ideal."""
    budgets = budgets or Budgets()
    if not is_centered_at_infinity(branch):
        raise NotCenteredAtInfinity("stabilizer ansatz requires an unbounded branch")
    if any(s.has_irrational_exponent() for s in branch.element._flat()):
        raise IrrationalExponentInSubstitution("run mu_reduce first: irrational exponents in the branch")

    ansatz = Ansatz(branch, budgets.order_budget)
    a_sub = ansatz.subst_element()
    a_inv = ansatz.lift_element(branch.element.inv())
    e = a_sub.mul(a_inv)
    constraints, residue = _mu_conditions(e, require_identity_residue=False)
    gens = [p for _, p in constraints] + [ansatz.relation]
    J = groebner_basis(Ideal(ansatz.ring, tuple(gens)), budget=budgets.spoly_budget)

    residue = [normal_form(p, list(J.gens), ansatz.ring.order) for p in residue]

    scheme = branch.scheme
    coords = scheme.coordinates()
    big = PolyRing(branch.field, ansatz.ring.variables + coords)
    lift = {v: v for v in ansatz.ring.variables}
    big_gens = [g.rename(lift, big) for g in J.gens]
    for name, rp in zip(coords, residue):
        big_gens.append(big.var(name) - rp.rename(lift, big))
    image = eliminate(Ideal(big, tuple(big_gens)), ansatz.ring.variables, budgets.spoly_budget)
    ring_out = scheme.coordinate_ring()
    ideal_out = groebner_basis(
        Ideal(ring_out, tuple(g.restrict(ring_out) for g in image.gens)), budget=budgets.spoly_budget
    )
    dim = krull_dim(ideal_out) if ideal_out.gens else len(coords)

    r = scheme.root
    if r.kind == "Additive":
        entries = tuple(residue)
    else:
        n = r.n
        entries = tuple(tuple(residue[i * n + j] for j in range(n)) for i in range(n))
    param = ParamFamily(ansatz.ring, entries, J, ansatz.r, ansatz.gammas)
    # soundness: every generator of the ideal must vanish identically on the
    # residue family modulo the constraint relations
    family_values = dict(zip(coords, residue))
    for g in ideal_out.gens:
        composed = g.subs_polys({v: family_values[v] for v in coords}, ansatz.ring)
        if not normal_form(composed, list(J.gens), ansatz.ring.order).is_zero():
            raise RuntimeError(f"stabilizer generator {g} does not vanish on its own family")
    desc = SubgroupDesc(scheme, ideal_out, dim, param, {"algorithm": "reparam"})
    verify_subgroup(desc, budgets)

    type_dim, D = _type_dim_best_effort(branch, max(2, min(budgets.degree_bound, 6)))
    if dim < type_dim:
        raise NotReduced(
            f"stabilizer dimension {dim} below type dimension {type_dim} at degree {D}; run mu_reduce first"
        )
    desc.flags["type_dimension"] = type_dim
    return desc
