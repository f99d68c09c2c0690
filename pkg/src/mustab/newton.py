"""Places at infinity of plane curves, by Newton polygon iteration.

The projective closure of V(f) meets the line at infinity in the roots of
the degree form; around each such point we expand the local branches as
Puiseux series chart by chart ([1:c:0] with y/x expanded in z = 1/x, and
[0:1:0] with x/y expanded in z = 1/y), then push the parameterizations
through the embedding into the group scheme.

Over F_p a missing Newton-polygon root triggers one automatic extension to
F_{p^n}; over Q and Q(sqrt d) it surfaces as CoefficientFieldTooSmall.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .branches import Branch, is_centered_at_infinity, validate_branch
from .errors import BudgetExceeded, CoefficientFieldTooSmall, WildRamification
from .exponents import exp
from .factor import uni_factor
from .fields import FieldSpec, Scalar
from .groups import GroupScheme, eval_poly_series
from .ideals import Ideal, ideal_member
from .poly import Poly, PolyRing
from .series import PuiseuxSeries, ScalarDomain


@dataclass
class PlaneCurveInput:
    """An irreducible plane curve with an embedding into a group scheme.

    embedding is a vector of polynomials in (x, y) for Additive schemes or
    an n x n matrix of polynomials for matrix schemes.
    """

    f: Poly
    embedding: list
    scheme: GroupScheme
    trusted_irreducible: bool = False

    def __post_init__(self):
        ring = self.f.ring
        if set(ring.variables) != {"x", "y"} and tuple(ring.variables) != ("x", "y"):
            raise ValueError("plane curves use variables x, y")
        self._check_embedding_lands_in_scheme()

    def _flat_embedding(self) -> list[Poly]:
        r = self.scheme.root
        if r.kind == "Additive":
            return list(self.embedding)
        return [self.embedding[i][j] for i in range(r.n) for j in range(r.n)]

    def _check_embedding_lands_in_scheme(self):
        ring = self.f.ring
        r = self.scheme.root
        defs = self.scheme.defining_polys()
        values = {}
        names = self.scheme.coordinates()
        flat = self._flat_embedding()
        for name, p in zip(names, flat):
            values[name] = p
        curve = Ideal(ring, (self.f,))
        for eq in defs:
            if "y" in eq.variables_used() and r.kind == "GL":
                continue  # inverse-determinant coordinate is not polynomial in (x, y)
            pulled = eq.subs_polys(values, ring)
            if not ideal_member(pulled, curve)[0]:
                raise ValueError(f"embedding does not land in the scheme: {eq} pulls back to {pulled}")


def check_irreducible_fragment(f: Poly) -> tuple[bool, bool]:
    """(checked, irreducible) within the supported fragment: linear always,
    univariate via factorization, nondegenerate conics via the 3x3
    determinant (char != 2)."""
    deg = f.total_degree()
    if deg == 1:
        return True, True
    used = f.variables_used()
    if len(used) <= 1:
        fac = uni_factor(f)
        if fac.complete:
            total = sum(m for _, m in fac.factors)
            return True, total == 1
        return False, True
    if deg == 2 and f.ring.field.char != 2:
        field = f.ring.field
        half = field.from_int(2).inv()

        def coeff(ex, ey):
            for m, c in f.terms.items():
                if m[f.ring.variables.index("x")] == ex and m[f.ring.variables.index("y")] == ey:
                    return c
            return field.zero()

        a, b, c = coeff(2, 0), coeff(1, 1), coeff(0, 2)
        d, e, g = coeff(1, 0), coeff(0, 1), coeff(0, 0)
        m = [
            [a, b * half, d * half],
            [b * half, c, e * half],
            [d * half, e * half, g],
        ]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if not det.is_zero():
            return True, True
        return False, True
    return False, True


# -- Puiseux-polynomial support (terms w^i z^j with fractional j) -----------

def _pp_from_poly(g: Poly, wname: str, zname: str) -> dict:
    wi = g.ring.variables.index(wname)
    zi = g.ring.variables.index(zname)
    out: dict = {}
    for m, c in g.terms.items():
        out[(m[wi], Fraction(m[zi]))] = c
    return out


def _pp_shift_w(pp: dict, c: Scalar, field: FieldSpec) -> dict:
    """w -> c + w."""
    out: dict = {}
    for (i, j), a in pp.items():
        cpow = [field.one()]
        for _ in range(i):
            cpow.append(cpow[-1] * c)
        b = 1
        for m in range(i + 1):
            coeff = a * field.from_int(b) * cpow[i - m]
            key = (m, j)
            cur = out.get(key)
            out[key] = coeff if cur is None else cur + coeff
            b = b * (i - m) // (m + 1)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _pp_w_content(pp: dict) -> int:
    return min(i for (i, _) in pp)


def _pp_divide_w(pp: dict, k: int) -> dict:
    return {(i - k, j): c for (i, j), c in pp.items()}


def _lower_hull_edges(pp: dict) -> list[tuple[Fraction, list[tuple[int, Fraction]]]]:
    """Edges of the lower-left Newton polygon with positive gamma = -slope."""
    best: dict[int, Fraction] = {}
    for (i, j) in pp:
        if i not in best or j < best[i]:
            best[i] = j
    pts = sorted(best.items())
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    edges = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if slope < 0:
            gamma = -slope
            mu = y1 + x1 * gamma
            on_edge = [(i, j) for (i, j) in pp if j + i * gamma == mu]
            edges.append((gamma, on_edge))
    return edges


def _pp_substitute(pp: dict, gamma: Fraction, c: Scalar, field: FieldSpec) -> dict:
    """w -> z^gamma (c + w), then divide by the minimal z-power."""
    out: dict = {}
    for (i, j), a in pp.items():
        cpow = [field.one()]
        for _ in range(i):
            cpow.append(cpow[-1] * c)
        b = 1
        for m in range(i + 1):
            coeff = a * field.from_int(b) * cpow[i - m]
            if not coeff.is_zero():
                key = (m, j + i * gamma)
                cur = out.get(key)
                out[key] = coeff if cur is None else cur + coeff
            b = b * (i - m) // (m + 1)
    out = {k: v for k, v in out.items() if not v.is_zero()}
    mu = min(j for (_, j) in out)
    return {(i, j - mu): v for (i, j), v in out.items()}


class _ExtensionNeeded(Exception):
    def __init__(self, factor: Poly):
        self.factor = factor


def _complete_roots(phi: Poly):
    """All roots of phi over the algebraic closure must lie in k; nonlinear
    factors mean some are missing, which is fatal here (or triggers an
    extension over F_p)."""
    field = phi.ring.field
    if phi.is_constant():
        return []
    fac = uni_factor(phi)
    nonlinear = [g for g, _ in fac.factors + fac.unfactored if g.total_degree() >= 2]
    if nonlinear:
        if field.kind == "Fp":
            raise _ExtensionNeeded(nonlinear[0])
        raise CoefficientFieldTooSmall(
            f"Newton-polygon roots of {phi} are not all in {field}"
        )
    return fac.roots()


def _edge_roots(pp_edge_terms, field: FieldSpec, gamma: Fraction):
    """Nonzero k-roots of the edge polynomial.

    Roots conjugate to a k-rational root under c -> zeta_q^p c (q the
    ramification of the edge) parameterize the same place via t -> zeta t,
    so irreducible factors dividing c^q - r^q for a found root r are
    redundant rather than missing.
    """
    ring = PolyRing(field, ("c",))
    phi = ring.zero()
    for (i, _), a in pp_edge_terms:
        phi = phi + ring.monomial((i,), a)
    if phi.is_constant():
        return []
    fac = uni_factor(phi)
    roots = [(r, m) for r, m in fac.roots() if not r.is_zero()]
    nonlinear = [g for g, _ in fac.factors + fac.unfactored if g.total_degree() >= 2]
    q = gamma.denominator
    missing = []
    for h in nonlinear:
        covered = False
        if q > 1:
            from .factor import uni_divmod

            for r, _ in roots:
                orbit = ring.parse("c") ** q - ring.from_scalar(r**q)
                if uni_divmod(orbit, h)[1].is_zero():
                    covered = True
                    break
        if not covered:
            missing.append(h)
    if missing:
        if field.kind == "Fp":
            raise _ExtensionNeeded(missing[0])
        raise CoefficientFieldTooSmall(
            f"Newton-polygon edge roots of {phi} are not all in {field}"
        )
    return roots


def _np_expansions(pp: dict, field: FieldSpec, prec_left: Fraction, budget: int):
    """All Puiseux expansions w(z) with positive valuation solving pp = 0,
    as (terms, exact) pairs; terms are ascending (Fraction, Scalar)."""
    if budget <= 0:
        raise BudgetExceeded("Newton polygon recursion budget exhausted")
    out = []
    k = _pp_w_content(pp)
    if k >= 1:
        out.append(([], True))  # the exact branch w = 0
        pp = _pp_divide_w(pp, k)
    if (0, Fraction(0)) in pp:
        return out  # remaining part does not vanish at the origin
    if prec_left <= 0:
        return out + [([], False)]
    for gamma, edge_terms in _lower_hull_edges(pp):
        if field.char and gamma.denominator % field.char == 0:
            raise WildRamification(
                f"edge exponent {gamma} is wildly ramified in characteristic {field.char}"
            )
        terms_on_edge = [((i, j), pp[(i, j)]) for (i, j) in edge_terms]
        for root, _mult in _edge_roots(terms_on_edge, field, gamma):
            sub = _pp_substitute(pp, gamma, root, field)
            if gamma >= prec_left:
                out.append(([(gamma, root)], False))
                continue
            for tail, tail_exact in _np_expansions(sub, field, prec_left - gamma, budget - 1):
                shifted = [(gamma + g2, c2) for g2, c2 in tail]
                out.append(([(gamma, root)] + shifted, tail_exact))
    return out


def _homogeneous_parts(f: Poly):
    d = f.total_degree()
    parts = {}
    for m, c in f.terms.items():
        parts.setdefault(sum(m), {})[m] = c
    return d, parts


def _degree_form_roots(f: Poly):
    """Points at infinity [1:c:0] (roots of the degree form in the x-chart)
    plus a flag for [0:1:0]."""
    ring = f.ring
    field = ring.field
    d, parts = _homogeneous_parts(f)
    top = parts[d]
    cring = PolyRing(field, ("c",))
    phi = cring.zero()
    yi = ring.variables.index("y")
    y_top_coeff = field.zero()
    for m, c in top.items():
        phi = phi + cring.monomial((m[yi],), c)
        if m[yi] == d:
            y_top_coeff = c
    roots = _complete_roots(phi)
    has_vertical = y_top_coeff.is_zero()
    return [r for r, _ in roots], has_vertical


def _localize(f: Poly, chart: str) -> Poly:
    """Homogenize and restrict to the chart: X=1 gives G(w, z) = z^d f(1/z, w/z)
    with x = 1/z, y = w/z; Y=1 gives G(u, z) = z^d f(u/z, 1/z)."""
    ring = f.ring
    field = ring.field
    d = f.total_degree()
    out_ring = PolyRing(field, ("w", "z"))
    out = out_ring.zero()
    xi = ring.variables.index("x")
    yi = ring.variables.index("y")
    for m, c in f.terms.items():
        i, j = m[xi], m[yi]
        zdeg = d - i - j
        mono = (j, zdeg) if chart == "X" else (i, zdeg)
        out = out + out_ring.monomial(mono, c)
    return out


def places_at_infinity(curve: PlaneCurveInput, precision: int = 12, budget: int = 200) -> list[Branch]:
    """One validated Branch per place of the curve at infinity whose image
    under the embedding is centered at infinity."""
    try:
        return _places(curve, precision, budget)
    except _ExtensionNeeded as need:
        field = curve.f.ring.field
        if field.kind != "Fp":
            raise CoefficientFieldTooSmall(f"missing roots over {field}")
        mod = _monic_int_coeffs(need.factor)
        ext = FieldSpec("Fq", p=field.p, modulus=mod)
        lifted = _lift_curve(curve, ext)
        try:
            return _places(lifted, precision, budget)
        except _ExtensionNeeded:
            raise CoefficientFieldTooSmall(
                f"roots escape one extension level over F_{field.p}"
            )


def _monic_int_coeffs(g: Poly) -> tuple[int, ...]:
    deg = g.total_degree()
    lead = None
    coeffs = [0] * (deg + 1)
    vi = next(i for i in range(g.ring.nvars) if any(m[i] for m in g.terms))
    for m, c in g.terms.items():
        coeffs[m[vi]] = c.rep
    lead = coeffs[deg]
    inv = pow(lead, -1, g.ring.field.p)
    return tuple((c * inv) % g.ring.field.p for c in coeffs)


def _lift_curve(curve: PlaneCurveInput, ext: FieldSpec) -> PlaneCurveInput:
    def lift_poly(p: Poly, ring: PolyRing) -> Poly:
        return Poly(ring, {m: c.embed(ext) for m, c in p.terms.items()})

    fring = PolyRing(ext, curve.f.ring.variables, curve.f.ring.order_name)
    r = curve.scheme.root
    scheme = GroupScheme(r.kind, r.n, ext)
    if r.kind == "Additive":
        emb = [lift_poly(p, fring) for p in curve.embedding]
    else:
        emb = [[lift_poly(p, fring) for p in row] for row in curve.embedding]
    return PlaneCurveInput(lift_poly(curve.f, fring), emb, scheme, curve.trusted_irreducible)


def _places(curve: PlaneCurveInput, precision: int, budget: int) -> list[Branch]:
    f = curve.f
    field = f.ring.field
    checked, irreducible = check_irreducible_fragment(f)
    if checked and not irreducible:
        raise ValueError(f"{f} is reducible; places are per irreducible curve")
    trusted = curve.trusted_irreducible or not checked
    dom = ScalarDomain(field)
    prec_z = Fraction(precision + 1)
    expansions: list[tuple[str, Scalar | None, list, bool]] = []

    roots, has_vertical = _degree_form_roots(f)
    gx = _localize(f, "X")
    for c0 in roots:
        pp = _pp_from_poly(gx, "w", "z")
        pp = _pp_shift_w(pp, c0, field)
        for terms, exact in _np_expansions(pp, field, prec_z, budget):
            expansions.append(("X", c0, terms, exact))
    if has_vertical:
        gy = _localize(f, "Y")
        pp = _pp_from_poly(gy, "w", "z")
        for terms, exact in _np_expansions(pp, field, prec_z, budget):
            expansions.append(("Y", None, terms, exact))

    branches: list[Branch] = []
    for chart, c0, terms, exact in expansions:
        e = 1
        for g, _ in terms:
            e = _lcm(e, g.denominator)
        prec_t = None if exact else exp(e * (prec_z - 1))
        pole = PuiseuxSeries.monomial(dom, exp(-e), field.one())
        w_terms = [(exp(Fraction(g) * e), c) for g, c in terms]
        if chart == "X":
            w_series = PuiseuxSeries(dom, [(exp(0), c0)] + w_terms, None if exact else exp(e * prec_z))
            xs = pole
            ys = (w_series * pole).truncate(prec_t) if prec_t is not None else w_series * pole
        else:
            u_series = PuiseuxSeries(dom, w_terms, None if exact else exp(e * prec_z))
            ys = pole
            xs = (u_series * pole).truncate(prec_t) if prec_t is not None else u_series * pole
        branch = _embed_branch(curve, xs, ys)
        if branch is None:
            continue
        branch.trusted_irreducible = trusted
        if is_centered_at_infinity(branch):
            branches.append(branch)

    return _dedup_branches(branches)


def _lcm(a: int, b: int) -> int:
    g, x = a, b
    while x:
        g, x = x, g % x
    return a * b // g


def _embed_branch(curve: PlaneCurveInput, xs: PuiseuxSeries, ys: PuiseuxSeries) -> Branch | None:
    field = curve.f.ring.field
    dom = ScalarDomain(field)
    values = {"x": xs, "y": ys}
    r = curve.scheme.root
    if r.kind == "Additive":
        entries = tuple(eval_poly_series(p, values, dom) for p in curve.embedding)
    else:
        entries = tuple(
            tuple(eval_poly_series(p, values, dom) for p in row) for row in curve.embedding
        )
    return validate_branch(curve.scheme, entries)


def _dedup_branches(branches: list[Branch]) -> list[Branch]:
    """Drop duplicates: identical parameterizations first, then anything
    tube-equivalent to an earlier branch."""
    from .stabilizer import mu_correct  # lazy: avoids an import cycle
    from .subgroups import TubeCertificate

    out: list[Branch] = []
    for b in branches:
        dup = False
        for seen in out:
            if b.element.entries == seen.element.entries:
                dup = True
                break
            try:
                cert = mu_correct(seen, b, order_budget=4)
            except Exception:
                cert = None
            if isinstance(cert, TubeCertificate):
                dup = True
                break
        if not dup:
            out.append(b)
    return out
