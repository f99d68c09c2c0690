"""Curve branches: validated parameterizations, boundedness, and the
degree-bounded Zariski closure (implicitization) with its Krull dimension.

Implicitization is exact linear algebra on the series expansions of all
coordinate monomials up to a degree bound.  For exact (Laurent-polynomial)
entries the computed relations are certain; for truncated entries a
window-stability check guards against spurious relations and raises
PrecisionInsufficient instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .errors import PrecisionInsufficient
from .exponents import Exponent
from .groups import GroupElement, GroupScheme
from .ideals import Ideal, groebner_basis
from .linalg import nullspace
from .poly import PolyRing
from .series import PuiseuxSeries, ScalarDomain


@dataclass
class Branch:
    """A parameterized curve germ a(t) on a group scheme."""

    element: GroupElement
    ramification: int
    trusted_irreducible: bool = False
    notes: tuple[str, ...] = ()

    @property
    def scheme(self) -> GroupScheme:
        return self.element.scheme

    @property
    def field(self):
        return self.element.scheme.field

    def series_by_coordinate(self) -> dict[str, PuiseuxSeries]:
        return self.element._values()

    def translate(self, g) -> Branch:
        """Left-translate by a k-point g."""
        moved = g.to_series().mul(self.element)
        return Branch(moved, self.ramification, self.trusted_irreducible, self.notes)

    def __str__(self):
        return f"branch {self.element} (ram {self.ramification})"


def _lcm(a: int, b: int) -> int:
    g, x = a, b
    while x:
        g, x = x, g % x
    return a * b // g


def validate_branch(scheme: GroupScheme, entries, y=None) -> Branch:
    """Check the entries against the scheme equations and infer ramification.

    Raises NotOnGroup with the offending equation and residual term.
    """
    element = GroupElement(scheme, entries, y=y, check=True)
    ram = 1
    for s in element._flat():
        ram = _lcm(ram, s.ramification())
    return Branch(element, ram)


def is_centered_at_infinity(branch: Branch) -> bool:
    """Unbounded exactly when some coordinate has negative valuation."""
    return not branch.element.is_integral()


@dataclass
class ClosureResult:
    ideal: Ideal
    dim: int
    degree_bound: int
    certified_exact: bool


def implicitize(branch: Branch, degree_bound: int, return_details: bool = False):
    """Generators of all polynomial relations of total degree <= degree_bound
    among the coordinates of a(t)."""
    if degree_bound < 1:
        raise ValueError("degree bound must be >= 1")
    scheme = branch.scheme
    field = scheme.field
    names = scheme.coordinates()
    ring = PolyRing(field, names)
    values = branch.series_by_coordinate()
    series_list = [values[v] for v in names]
    nvars = len(names)

    monos = []
    for d in range(degree_bound + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            monos.append(tuple(m))
    monos.sort(key=lambda m: (sum(m), m))

    evaluated = []
    for m in monos:
        acc = PuiseuxSeries.one(ScalarDomain(field))
        for i, e in enumerate(m):
            if e:
                acc = acc * series_list[i] ** e
        evaluated.append(acc)

    hi: Exponent | None = None
    exact = True
    for s in evaluated:
        if s.precision is not None:
            exact = False
            if hi is None or s.precision < hi:
                hi = s.precision
    slots = sorted(
        {e for s in evaluated for e, _ in s.terms if hi is None or e < hi},
        key=lambda e: e,
    )
    if not exact and (hi is None or len(slots) < 2):
        raise PrecisionInsufficient("too few known exponent slots for implicitization")

    def kernel(active_slots):
        rows = [[s.coefficient(e) for s in evaluated] for e in active_slots]
        return nullspace(rows, len(monos), field)

    basis = kernel(slots)
    if not exact:
        drop = max(1, len(slots) // 5)
        smaller = kernel(slots[:-drop])
        if len(smaller) != len(basis):
            raise PrecisionInsufficient(
                f"relations unstable under window shrink ({len(smaller)} vs {len(basis)}); raise precision"
            )

    gens = []
    lead_monos = []
    for vec in basis:
        p = ring.zero()
        lead = None
        for c, m in zip(vec, monos):
            if not c.is_zero():
                p = p + ring.monomial(m, c)
                lead = m  # columns ascend in deglex, so the last hit leads
        if not p.is_zero():
            gens.append(p)
            lead_monos.append(lead)
    # the kernel of an ascending-ordered matrix has one basis vector per free
    # column, led by that column: lead_monos is the degree-<=D slice of the
    # leading-term ideal, which is all the dimension count needs
    dim = _dim_from_leading_monomials(lead_monos, nvars)
    ideal_out = groebner_basis(Ideal(ring, tuple(gens))) if gens else Ideal(ring, ())
    if not return_details:
        return ideal_out
    return ClosureResult(ideal_out, dim, degree_bound, exact)


def _dim_from_leading_monomials(lead_monos, nvars: int) -> int:
    from itertools import combinations

    if not lead_monos:
        return nvars
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            sset = set(subset)
            if all(any(e and i not in sset for i, e in enumerate(m)) for m in lead_monos):
                return size
    return 0


def type_dimension(branch: Branch, degree_bound: int) -> tuple[int, int]:
    """Krull dimension of the degree-bounded closure; an upper bound for the
    true dimension, certified at the stated degree."""
    closure = implicitize(branch, degree_bound, return_details=True)
    return closure.dim, degree_bound
