"""Ideals and Groebner machinery: Buchberger, elimination, membership,
Krull dimension.

Buchberger runs with the coprime-lcm and chain criteria under a
configurable S-pair budget; bases are returned reduced and monic, sorted
by leading monomial, so re-running is a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import BudgetExceeded, EmptyVariety
from .poly import BlockOrder, Monomial, MonomialOrder, Poly, PolyRing, order_by_name

DEFAULT_SPOLY_BUDGET = 10_000


@dataclass(frozen=True)
class Ideal:
    ring: PolyRing
    gens: tuple[Poly, ...]

    def __post_init__(self):
        for g in self.gens:
            if g.ring != self.ring:
                raise ValueError("generator outside the declared ring")
        object.__setattr__(self, "gens", tuple(g for g in self.gens if not g.is_zero()))

    def is_zero(self) -> bool:
        return not self.gens

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


def ideal(ring: PolyRing, *gens) -> Ideal:
    out = []
    for g in gens:
        out.append(ring.parse(g) if isinstance(g, str) else g)
    return Ideal(ring, tuple(out))


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_quot(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def reduce_poly(f: Poly, basis: list[Poly], order: MonomialOrder) -> tuple[list[Poly], Poly]:
    """Multivariate division: f = sum(q_i g_i) + r with no term of r
    divisible by any leading monomial; returns (quotients, remainder)."""
    ring = f.ring
    quots = [ring.zero() for _ in basis]
    rem = ring.zero()
    p = f
    lead = [(g.leading_monomial(order), g.leading_coefficient(order)) for g in basis]
    while not p.is_zero():
        m = p.leading_monomial(order)
        c = p.terms[m]
        for i, (lm, lc) in enumerate(lead):
            if _mono_divides(lm, m):
                factor = ring.monomial(_mono_quot(m, lm), c / lc)
                quots[i] = quots[i] + factor
                p = p - factor * basis[i]
                break
        else:
            t = ring.monomial(m, c)
            rem = rem + t
            p = p - t
    return quots, rem


def normal_form(f: Poly, basis: list[Poly], order: MonomialOrder) -> Poly:
    return reduce_poly(f, basis, order)[1]


def s_poly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    ring = f.ring
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = _mono_lcm(lf, lg)
    mf = ring.monomial(_mono_quot(lcm, lf), f.leading_coefficient(order).inv())
    mg = ring.monomial(_mono_quot(lcm, lg), g.leading_coefficient(order).inv())
    return mf * f - mg * g


def buchberger(gens: list[Poly], order: MonomialOrder, budget: int = DEFAULT_SPOLY_BUDGET) -> list[Poly]:
    import heapq

    basis = [g.monic(order) for g in gens if not g.is_zero()]
    if not basis:
        return []
    lms = [g.leading_monomial(order) for g in basis]
    heap: list = []

    def push(i: int, j: int):
        lcm = _mono_lcm(lms[i], lms[j])
        heapq.heappush(heap, (order.key(lcm), i, j, lcm))

    for i, j in combinations(range(len(basis)), 2):
        push(i, j)
    processed = 0
    handled: set[tuple[int, int]] = set()
    while heap:
        _, i, j, lcm = heapq.heappop(heap)
        handled.add((i, j))
        if lcm == tuple(a + b for a, b in zip(lms[i], lms[j])):
            continue  # coprime leading monomials
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _mono_divides(lms[k], lcm):
                p1 = (min(i, k), max(i, k))
                p2 = (min(j, k), max(j, k))
                if p1 in handled and p2 in handled:
                    chain = True
                    break
        if chain:
            continue
        processed += 1
        if processed > budget:
            raise BudgetExceeded(f"S-polynomial budget {budget} exceeded")
        r = normal_form(s_poly(basis[i], basis[j], order), basis, order)
        if not r.is_zero():
            basis.append(r.monic(order))
            lms.append(basis[-1].leading_monomial(order))
            new = len(basis) - 1
            for k in range(new):
                push(k, new)
    return _interreduce(basis, order)


def _interreduce(basis: list[Poly], order: MonomialOrder) -> list[Poly]:
    # minimal basis: smaller leading monomials can only divide larger ones,
    # so one ascending pass suffices
    basis = sorted(basis, key=lambda g: order.key(g.leading_monomial(order)))
    kept: list[Poly] = []
    for g in basis:
        lm = g.leading_monomial(order)
        if any(_mono_divides(h.leading_monomial(order), lm) for h in kept):
            continue
        kept.append(g)
    reduced = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1:]
        r = normal_form(g, others, order) if others else g
        if not r.is_zero():
            reduced.append(r.monic(order))
    return sorted(reduced, key=lambda g: order.key(g.leading_monomial(order)))


def groebner_basis(I: Ideal, order: MonomialOrder | str | None = None,
                   budget: int = DEFAULT_SPOLY_BUDGET) -> Ideal:
    if isinstance(order, str):
        order = order_by_name(order)
    order = order or I.ring.order
    return Ideal(I.ring, tuple(buchberger(list(I.gens), order, budget)))


def ideal_member(f: Poly, I: Ideal, order: MonomialOrder | str | None = None,
                 budget: int = DEFAULT_SPOLY_BUDGET) -> tuple[bool, list[Poly]]:
    """Membership with a division certificate against the reduced basis."""
    if isinstance(order, str):
        order = order_by_name(order)
    order = order or I.ring.order
    gb = buchberger(list(I.gens), order, budget)
    if not gb:
        return f.is_zero(), []
    quots, rem = reduce_poly(f, gb, order)
    return rem.is_zero(), quots


def ideal_contains(I: Ideal, J: Ideal, budget: int = DEFAULT_SPOLY_BUDGET) -> bool:
    """True when every generator of J lies in I."""
    order = I.ring.order
    gb = buchberger(list(I.gens), order, budget)
    return all(normal_form(g, gb, order).is_zero() if gb else g.is_zero() for g in J.gens)


def ideal_equal(I: Ideal, J: Ideal, budget: int = DEFAULT_SPOLY_BUDGET) -> bool:
    return ideal_contains(I, J, budget) and ideal_contains(J, I, budget)


def eliminate(I: Ideal, drop: tuple[str, ...] | list[str],
              budget: int = DEFAULT_SPOLY_BUDGET) -> Ideal:
    """Generators of I intersected with the subring omitting `drop`.

    Returns an ideal over the restricted ring.  Dropping nothing returns
    the Groebner basis of I over the original ring.
    """
    drop = tuple(drop)
    for v in drop:
        if v not in I.ring.variables:
            raise ValueError(f"{v!r} is not a ring variable")
    if not drop:
        return groebner_basis(I, budget=budget)
    keep = tuple(v for v in I.ring.variables if v not in drop)
    first = tuple(I.ring.variables.index(v) for v in drop)
    second = tuple(I.ring.variables.index(v) for v in keep)
    order = BlockOrder(first, second)
    gb = buchberger(list(I.gens), order, budget)
    target = PolyRing(I.ring.field, keep, I.ring.order_name)
    kept = [g.restrict(target) for g in gb if not (g.variables_used() & set(drop))]
    return Ideal(target, tuple(kept))


def krull_dim(I: Ideal, budget: int = DEFAULT_SPOLY_BUDGET) -> int:
    """Krull dimension of V(I) from independent variable sets modulo the
    leading-term ideal."""
    order = I.ring.order
    gb = buchberger(list(I.gens), order, budget)
    if any(g.is_constant() and not g.is_zero() for g in gb):
        raise EmptyVariety("ideal contains a unit")
    n = I.ring.nvars
    leads = [g.leading_monomial(order) for g in gb]
    if not leads:
        return n
    indices = list(range(n))
    for size in range(n, -1, -1):
        for subset in combinations(indices, size):
            sset = set(subset)
            ok = True
            for lm in leads:
                if all((e == 0 or i in sset) for i, e in enumerate(lm)):
                    ok = False
                    break
            if ok:
                return size
    return 0


def ideal_intersect(I: Ideal, J: Ideal, budget: int = DEFAULT_SPOLY_BUDGET) -> Ideal:
    """I cap J via the u-trick: eliminate u from u*I + (1-u)*J."""
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")
    ring = I.ring
    aux = PolyRing(ring.field, ("_u",) + ring.variables, ring.order_name)
    u = aux.var("_u")
    lift = {v: v for v in ring.variables}
    gens = [u * g.rename(lift, aux) for g in I.gens]
    gens += [(aux.one() - u) * g.rename(lift, aux) for g in J.gens]
    elim = eliminate(Ideal(aux, tuple(gens)), ("_u",), budget)
    back = [g.rename(lift, ring) for g in elim.gens]
    return Ideal(ring, tuple(back))


@dataclass
class Budgets:
    """Work caps shared across the pipeline."""

    precision: int = 12
    degree_bound: int = 8
    order_budget: int = 6
    spoly_budget: int = DEFAULT_SPOLY_BUDGET
    sample_budget: int = 24
    extras: dict = dc_field(default_factory=dict)
