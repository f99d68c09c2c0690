"""Truncated generalized Puiseux series with explicit precision.

A series is a finite ascending list of (Exponent, coefficient) terms plus
a precision bound: coefficients at exponents >= precision are unknown.
precision None means the series is exact (all omitted coefficients are
genuinely zero), which is the common case for Laurent-polynomial branch
data and keeps implicitization sound.

Coefficients are Scalars by default, but any ring-like objects work
(multivariate polynomials are used by the stabilizer ansatz); the
CoeffDomain adapter supplies zero/one, rational images and unit inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FieldMismatch,
    IrrationalExponentInSubstitution,
    NegativeValuation,
    PrecisionInsufficient,
    WildRamification,
    ZeroLeadingTerm,
)
from .exponents import EXP_ZERO, Exponent, exp
from .fields import FieldSpec, Scalar
from .poly import Poly, PolyRing

DEFAULT_PRECISION = Exponent(Fraction(12))
HARD_CAP = Exponent(Fraction(64))


@dataclass(frozen=True)
class PrecisionPolicy:
    default_order: Exponent = DEFAULT_PRECISION
    hard_cap: Exponent = HARD_CAP

    def __post_init__(self):
        if self.hard_cap < self.default_order:
            raise ValueError("default precision exceeds the hard cap")

    def clamp(self, e: Exponent) -> Exponent:
        return e if e <= self.hard_cap else self.hard_cap


class CoeffDomain:
    """Adapter for the coefficient ring of a series."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def inv(self, c):
        raise NotImplementedError

    @property
    def char(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class ScalarDomain(CoeffDomain):
    field: FieldSpec

    def zero(self):
        return self.field.zero()

    def one(self):
        return self.field.one()

    def from_fraction(self, q: Fraction):
        if self.field.char and q.denominator % self.field.char == 0:
            raise WildRamification(f"denominator {q.denominator} vanishes in characteristic {self.field.char}")
        return self.field.from_fraction(q)

    def inv(self, c: Scalar):
        return c.inv()

    @property
    def char(self) -> int:
        return self.field.char


@dataclass(frozen=True)
class PolyDomain(CoeffDomain):
    """Polynomial coefficients; units are constants or monomials in
    declared reciprocal-variable pairs (e.g. lam * lami = 1)."""

    ring: PolyRing
    unit_pairs: tuple[tuple[str, str], ...] = ()

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def from_fraction(self, q: Fraction):
        if self.ring.field.char and q.denominator % self.ring.field.char == 0:
            raise WildRamification(f"denominator {q.denominator} vanishes in characteristic {self.ring.field.char}")
        return self.ring.from_scalar(self.ring.field.from_fraction(q))

    def inv(self, c: Poly):
        if c.is_constant():
            return self.ring.from_scalar(c.constant_coefficient().inv())
        if len(c.terms) == 1:
            swap = {}
            for u, v in self.unit_pairs:
                swap[u], swap[v] = v, u
            (mono, coeff), = c.terms.items()
            out_mono = [0] * self.ring.nvars
            for i, e in enumerate(mono):
                if e:
                    name = self.ring.variables[i]
                    if name not in swap:
                        raise ValueError(f"cannot invert non-unit variable {name}")
                    out_mono[self.ring.variables.index(swap[name])] = e
            return self.ring.monomial(tuple(out_mono), coeff.inv())
        raise ValueError(f"cannot invert non-monomial coefficient {c}")

    @property
    def char(self) -> int:
        return self.ring.field.char


def _min_prec(p: Exponent | None, q: Exponent | None) -> Exponent | None:
    if p is None:
        return q
    if q is None:
        return p
    return p if p <= q else q


def _add_prec(p: Exponent | None, e: Exponent | None) -> Exponent | None:
    if p is None or e is None:
        return None
    return p + e


class PuiseuxSeries:
    """Immutable truncated series over a coefficient domain."""

    __slots__ = ("dom", "terms", "precision")

    def __init__(self, dom: CoeffDomain, terms, precision: Exponent | None):
        clean = [(e, c) for e, c in terms if not c.is_zero()]
        clean.sort(key=lambda t: t[0])
        for i in range(1, len(clean)):
            if not clean[i - 1][0] < clean[i][0]:
                raise ValueError("duplicate or unordered exponents")
        if precision is not None:
            clean = [(e, c) for e, c in clean if e < precision]
        self.dom = dom
        self.terms = tuple(clean)
        self.precision = precision

    # -- constructors --------------------------------------------------------
    @staticmethod
    def zero(dom: CoeffDomain, precision: Exponent | None = None) -> PuiseuxSeries:
        return PuiseuxSeries(dom, (), precision)

    @staticmethod
    def one(dom: CoeffDomain) -> PuiseuxSeries:
        return PuiseuxSeries(dom, ((EXP_ZERO, dom.one()),), None)

    @staticmethod
    def monomial(dom: CoeffDomain, e, coeff=None, precision: Exponent | None = None) -> PuiseuxSeries:
        c = coeff if coeff is not None else dom.one()
        return PuiseuxSeries(dom, ((exp(e), c),), precision)

    @staticmethod
    def constant(dom: CoeffDomain, c) -> PuiseuxSeries:
        return PuiseuxSeries(dom, ((EXP_ZERO, c),), None)

    def _check(self, other: PuiseuxSeries):
        if self.dom != other.dom:
            raise FieldMismatch(f"series domains differ: {self.dom} vs {other.dom}")

    # -- inspection ------------------------------------------------------------
    def is_zero(self) -> bool:
        """No known nonzero term (exact zero when also precision is None)."""
        return not self.terms

    def is_exact(self) -> bool:
        return self.precision is None

    def val_bound(self) -> Exponent | None:
        """Least known exponent; None means 'no term below precision',
        i.e. valuation at least the precision (infinite for exact zero)."""
        if self.terms:
            return self.terms[0][0]
        return self.precision

    def coefficient(self, e: Exponent):
        for ee, c in self.terms:
            if ee == e:
                return c
        return self.dom.zero()

    def ramification(self) -> int:
        """LCM of rational-exponent denominators (1 for the zero series)."""
        r = 1
        for e, _ in self.terms:
            if e.is_rational():
                q = e.as_fraction().denominator
                r = r * q // _gcd(r, q)
        return r

    def has_irrational_exponent(self) -> bool:
        return any(not e.is_rational() for e, _ in self.terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: PuiseuxSeries) -> PuiseuxSeries:
        self._check(other)
        prec = _min_prec(self.precision, other.precision)
        acc: dict = {}
        for e, c in self.terms + other.terms:
            key = (e.a, e.b, e.d)
            if key in acc:
                acc[key] = (e, acc[key][1] + c)
            else:
                acc[key] = (e, c)
        return PuiseuxSeries(self.dom, list(acc.values()), prec)

    def __neg__(self) -> PuiseuxSeries:
        return PuiseuxSeries(self.dom, [(e, -c) for e, c in self.terms], self.precision)

    def __sub__(self, other: PuiseuxSeries) -> PuiseuxSeries:
        return self + (-other)

    def __mul__(self, other: PuiseuxSeries) -> PuiseuxSeries:
        self._check(other)
        prec = _min_prec(
            _add_prec(self.precision, other.val_bound()),
            _add_prec(other.precision, self.val_bound()),
        )
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if prec is not None and not e < prec:
                    continue
                key = (e.a, e.b, e.d)
                c = c1 * c2
                if key in acc:
                    acc[key] = (e, acc[key][1] + c)
                else:
                    acc[key] = (e, c)
        return PuiseuxSeries(self.dom, list(acc.values()), prec)

    def scale(self, c) -> PuiseuxSeries:
        if c.is_zero():
            return PuiseuxSeries.zero(self.dom, self.precision)
        return PuiseuxSeries(self.dom, [(e, co * c) for e, co in self.terms], self.precision)

    def shift(self, e) -> PuiseuxSeries:
        """Multiply by t^e."""
        e = exp(e)
        return PuiseuxSeries(
            self.dom,
            [(ee + e, c) for ee, c in self.terms],
            _add_prec(self.precision, e),
        )

    def truncate(self, prec: Exponent) -> PuiseuxSeries:
        return PuiseuxSeries(self.dom, self.terms, _min_prec(self.precision, prec))

    def __pow__(self, k: int) -> PuiseuxSeries:
        if k < 0:
            return self.inv() ** (-k)
        result = PuiseuxSeries.one(self.dom)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inv(self, prec: Exponent | None = None) -> PuiseuxSeries:
        """Inverse via geometric series; leading exponent becomes -val."""
        if not self.terms:
            raise ZeroLeadingTerm("cannot invert a series with no known nonzero term")
        v, c = self.terms[0]
        cinv = self.dom.inv(c)
        lead_inv = PuiseuxSeries.monomial(self.dom, -v, cinv)
        # w = self / (c t^v) - 1 has positive valuation
        w = (self.shift(-v)).scale(cinv) - PuiseuxSeries.one(self.dom)
        if self.precision is not None:
            tail_prec = self.precision - v  # w known below this
        else:
            tail_prec = None
        if w.is_zero() and w.is_exact():
            return lead_inv
        target = prec
        if target is None:
            target = _add_prec(tail_prec, EXP_ZERO)
        if target is None:
            target = DEFAULT_PRECISION
        geo = _geometric_alternating(w, target)
        out = lead_inv * geo
        return out

    # -- valuation data ----------------------------------------------------
    def val(self) -> Exponent:
        if not self.terms:
            raise PrecisionInsufficient("series has no known nonzero term")
        return self.terms[0][0]

    def res(self):
        """Residue: coefficient at exponent 0; requires valuation >= 0."""
        v = self.val_bound()
        if self.terms:
            if self.terms[0][0].sign() < 0:
                raise NegativeValuation(f"residue undefined at valuation {self.terms[0][0]}")
            return self.coefficient(EXP_ZERO)
        if v is not None and not EXP_ZERO < v:
            raise PrecisionInsufficient("coefficient at exponent 0 is below the precision bound")
        return self.dom.zero()

    def val_res(self):
        return self.val(), self.res()

    # -- io -------------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.terms:
                cs = str(c)
                if e.is_zero():
                    parts.append(cs)
                else:
                    es = str(e)
                    tpow = "t" if es == "1" else f"t^({es})" if ("/" in es or "-" in es or "+" in es or "sqrt" in es) else f"t^{es}"
                    if cs == "1":
                        parts.append(tpow)
                    elif cs == "-1":
                        parts.append(f"-{tpow}")
                    else:
                        coeff = cs if ("+" not in cs[1:] and "-" not in cs[1:] and " " not in cs) else f"({cs})"
                        parts.append(f"{coeff}*{tpow}")
            body = parts[0]
            for p in parts[1:]:
                body += " - " + p[1:] if p.startswith("-") else " + " + p
        if self.precision is not None:
            body += f" + O(t^({self.precision}))"
        return body

    def __repr__(self):
        return f"PuiseuxSeries({self})"

    def __eq__(self, other):
        return (
            isinstance(other, PuiseuxSeries)
            and self.dom == other.dom
            and self.terms == other.terms
            and self.precision == other.precision
        )

    def __hash__(self):
        return hash((self.dom, self.terms, self.precision))

    def agrees_with(self, other: PuiseuxSeries) -> bool:
        """Equal on the common known window."""
        cut = _min_prec(self.precision, other.precision)
        diff = self - other
        if cut is None:
            return diff.is_zero()
        return all(not e < cut for e, _ in diff.terms)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _rational_lower_bound(e: Exponent) -> Fraction:
    """A rational q <= e, used for conservative precision scaling."""
    if e.b == 0:
        return e.a
    root_ceil = 1
    while root_ceil * root_ceil < e.d:
        root_ceil += 1
    return e.a + e.b * (root_ceil if e.b < 0 else 0)


def _geometric_alternating(w: PuiseuxSeries, target: Exponent) -> PuiseuxSeries:
    """1 - w + w^2 - ... up to exponent target; w must have positive
    valuation."""
    vb = w.val_bound()
    if vb is None or not EXP_ZERO < vb:
        if w.terms and not EXP_ZERO < w.terms[0][0]:
            raise ValueError("geometric expansion requires positive valuation")
        if vb is None:
            return PuiseuxSeries.one(w.dom)
        raise PrecisionInsufficient("tail precision too low for inversion")
    acc = PuiseuxSeries.one(w.dom).truncate(target)
    power = PuiseuxSeries.one(w.dom)
    sign = -1
    bound = EXP_ZERO
    while bound < target:
        power = (power * w).truncate(target)
        if power.is_zero() and power.is_exact():
            break
        term = power if sign > 0 else -power
        acc = acc + term
        acc = PuiseuxSeries(acc.dom, acc.terms, target)
        sign = -sign
        bound = bound + vb
    return PuiseuxSeries(acc.dom, acc.terms, _min_prec(acc.precision, target))


def ser_subst(
    f: PuiseuxSeries,
    s: PuiseuxSeries,
    prec: Exponent | None = None,
    lead_root=None,
    parts: tuple | None = None,
) -> PuiseuxSeries:
    """Compose f(s) for val(s) > 0 using generalized binomial expansion.

    All exponents of f must be rational; in characteristic p their
    denominators (and every binomial denominator met along the way) must be
    coprime to p.  `lead_root` optionally supplies c^gamma for the leading
    coefficient c of s when fractional powers of it are needed.  `parts`
    optionally supplies the decomposition (val, tail) with
    s = lead * t^val * (1 + tail), for coefficient rings where the lead is
    only invertible modulo relations; it requires lead_root.
    """
    if f.has_irrational_exponent():
        raise IrrationalExponentInSubstitution(f"cannot substitute into {f}")
    char = f.dom.char
    if char:
        for e, _ in f.terms:
            if e.as_fraction().denominator % char == 0:
                raise WildRamification(f"exponent denominator divisible by characteristic {char}")
    if parts is not None:
        if lead_root is None:
            raise ValueError("parts requires lead_root")
        v, w = parts
        if not EXP_ZERO < v:
            raise ValueError(f"substitution requires positive valuation, got val = {v}")
        c_lead = None
        cinv = None
        w_prec = w.precision
    else:
        if not s.terms:
            raise ZeroLeadingTerm("substitution by a series with no known term")
        v = s.val()
        if not EXP_ZERO < v:
            raise ValueError(f"substitution requires positive valuation, got val = {v}")
        c_lead = s.terms[0][1]
        cinv = f.dom.inv(c_lead)
        w = s.shift(-v).scale(cinv) - PuiseuxSeries.one(f.dom)
        w_prec = None if s.precision is None else s.precision - v

    def lead_pow(gamma: Fraction):
        if lead_root is not None:
            return lead_root(gamma)
        num, den = gamma.numerator, gamma.denominator
        if den == 1:
            return c_lead**num if num >= 0 else cinv ** (-num)
        if isinstance(c_lead, Scalar):
            root = c_lead.kth_root(den)
            return root**num if num >= 0 else f.dom.inv(root) ** (-num)
        raise ValueError("fractional power of a non-scalar leading coefficient needs lead_root")

    needs_truncation = False
    for e, _ in f.terms:
        g = e.as_fraction()
        if (g.denominator != 1 or g < 0) and not (w.is_zero() and w.is_exact()):
            needs_truncation = True
    # precision budget
    bounds: list[Exponent | None] = []
    if f.precision is not None:
        bounds.append(v.scale(_rational_lower_bound(f.precision)))
    if w_prec is not None and f.terms:
        bounds.append(v.scale(f.terms[0][0].as_fraction()) + w_prec)
    target: Exponent | None = prec
    for b in bounds:
        target = _min_prec(target, b)
    if needs_truncation and target is None:
        target = DEFAULT_PRECISION
    out = PuiseuxSeries.zero(f.dom, target)
    for e, coeff in f.terms:
        gamma = e.as_fraction()
        lead = coeff * lead_pow(gamma)
        local = None if target is None else target - v.scale(gamma)
        body = _binomial_power(w, gamma, local, f.dom)
        term = body.shift(v.scale(gamma)).scale(lead)
        out = out + term
    return out if target is None else out.truncate(target)


def _binomial_power(w: PuiseuxSeries, gamma: Fraction, local_prec: Exponent | None, dom: CoeffDomain) -> PuiseuxSeries:
    """(1 + w)^gamma as a series; finite for integer gamma >= 0."""
    if w.is_zero() and w.is_exact():
        return PuiseuxSeries.one(dom)
    vb = w.val_bound()
    if vb is None or (w.terms and not EXP_ZERO < w.terms[0][0]):
        if w.terms:
            raise ValueError("binomial expansion requires positive valuation")
        raise PrecisionInsufficient("tail precision too low for binomial expansion")
    if gamma.denominator == 1 and gamma >= 0:
        base = PuiseuxSeries.one(dom) + w
        out = base ** int(gamma)
        return out if local_prec is None else out.truncate(local_prec)
    if local_prec is None:
        raise PrecisionInsufficient("infinite binomial expansion needs a precision target")
    acc = PuiseuxSeries.one(dom).truncate(local_prec)
    power = PuiseuxSeries.one(dom)
    bc = Fraction(1)
    k = 0
    bound = EXP_ZERO
    while bound < local_prec:
        bc = bc * (gamma - k) / (k + 1)
        k += 1
        power = (power * w).truncate(local_prec)
        if bc == 0 or (power.is_zero() and power.is_exact()):
            break
        acc = acc + power.scale(dom.from_fraction(bc))
        acc = PuiseuxSeries(acc.dom, acc.terms, local_prec)
        bound = bound + vb
    return acc


def parse_series(data: dict | list, field: FieldSpec, d: int | None = None) -> PuiseuxSeries:
    """JSON literal: {"terms": [[exponent, coefficient], ...], "prec": e}
    with exponents "a/b" or "a/b+c/e*sqrt(d)" and scalar coefficient
    strings; a bare list is shorthand for exact terms."""
    from .poly import parse_scalar

    dom = ScalarDomain(field)
    if isinstance(data, list):
        items, prec = data, None
    else:
        items = data.get("terms", [])
        prec = data.get("prec")
    terms = []
    for e_str, c_str in items:
        e = Exponent.parse(str(e_str), d)
        c = parse_scalar(str(c_str), field)
        terms.append((e, c))
    precision = None if prec is None else Exponent.parse(str(prec), d)
    return PuiseuxSeries(dom, terms, precision)


def series_to_json(s: PuiseuxSeries) -> dict:
    out = {"terms": [[str(e), str(c)] for e, c in s.terms]}
    if s.precision is not None:
        out["prec"] = str(s.precision)
    return out
