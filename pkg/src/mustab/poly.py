"""Sparse multivariate polynomials over an exact field.

Monomials are exponent tuples aligned with the ring's variable list.
Orders: lex, grevlex, and block orders for elimination.  Polynomials
parse from and print to the ASCII grammar `c*x^e*y^f` with terms joined
by `+`/`-` and scalars written `a/b`, `a+b*sqrt(d)` or integers mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatch
from .fields import FieldSpec, Scalar

Monomial = tuple[int, ...]


class MonomialOrder:
    """Total order on monomials, exposed as a sort key (bigger = leading)."""

    name = "?"

    def key(self, m: Monomial):
        raise NotImplementedError

    def cmp_leading(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


class Lex(MonomialOrder):
    name = "lex"

    def key(self, m: Monomial):
        return m


class GrevLex(MonomialOrder):
    name = "grevlex"

    def key(self, m: Monomial):
        return (sum(m), tuple(-e for e in reversed(m)))


class BlockOrder(MonomialOrder):
    """Block order: compare on `first` indices (grevlex), then the rest.

    Standard elimination order: monomials touching the first block dominate,
    so a Groebner basis element free of the first block is first-block free
    in every term.
    """

    name = "block"

    def __init__(self, first: tuple[int, ...], second: tuple[int, ...]):
        self.first = first
        self.second = second

    def key(self, m: Monomial):
        a = tuple(m[i] for i in self.first)
        b = tuple(m[i] for i in self.second)
        return (sum(a), tuple(-e for e in reversed(a)), sum(b), tuple(-e for e in reversed(b)))


def order_by_name(name: str) -> MonomialOrder:
    if name == "lex":
        return Lex()
    if name == "grevlex":
        return GrevLex()
    raise ValueError(f"unknown monomial order {name!r}")


@dataclass(frozen=True)
class PolyRing:
    field: FieldSpec
    variables: tuple[str, ...]
    order_name: str = "grevlex"

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")

    @property
    def order(self) -> MonomialOrder:
        return order_by_name(self.order_name)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.from_scalar(self.field.one())

    def from_scalar(self, c: Scalar) -> Poly:
        if c.is_zero():
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def from_int(self, n: int) -> Poly:
        return self.from_scalar(self.field.from_int(n))

    def var(self, name: str) -> Poly:
        i = self.variables.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {mono: self.field.one()})

    def monomial(self, mono: Monomial, coeff: Scalar | None = None) -> Poly:
        c = coeff if coeff is not None else self.field.one()
        if c.is_zero():
            return self.zero()
        return Poly(self, {tuple(mono): c})

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self)

    def extend(self, extra: tuple[str, ...], order_name: str | None = None) -> PolyRing:
        return PolyRing(self.field, self.variables + tuple(extra), order_name or self.order_name)


class Poly:
    """Immutable sparse polynomial; terms maps exponent tuples to nonzero
    scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self._hash = None

    # -- basic structure -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_coefficient(self) -> Scalar:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero())

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def degree_in(self, var: str) -> int:
        i = self.ring.variables.index(var)
        return max((m[i] for m in self.terms), default=0)

    def variables_used(self) -> set[str]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.variables[i])
        return used

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: Poly):
        if self.ring != other.ring:
            raise FieldMismatch(f"polynomial rings differ: {self.ring} vs {other.ring}")

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Poly(self.ring, out)

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                if m in out:
                    s = out[m] + c
                    if s.is_zero():
                        del out[m]
                    else:
                        out[m] = s
                elif not c.is_zero():
                    out[m] = c
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: Scalar) -> Poly:
        if c.is_zero():
            return self.ring.zero()
        return Poly(self.ring, {m: co * c for m, co in self.terms.items()})

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, Scalar):
            return self.ring.from_scalar(other)
        if isinstance(other, int):
            return self.ring.from_int(other)
        raise TypeError(f"cannot coerce {other!r} into {self.ring}")

    # -- leading data ----------------------------------------------------
    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Scalar:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.leading_coefficient(order).inv())

    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- evaluation / substitution ----------------------------------------
    def eval_scalars(self, values: dict[str, Scalar]) -> Scalar:
        acc = self.ring.field.zero()
        idx = {v: i for i, v in enumerate(self.ring.variables)}
        for m, c in self.terms.items():
            term = c
            for v, i in idx.items():
                if m[i]:
                    term = term * (values[v] ** m[i])
            acc = acc + term
        return acc

    def eval_generic(self, values: dict[str, object], one, add, mul):
        """Evaluate with arbitrary ring elements (series, polynomials...).

        `one` is the multiplicative identity for coefficients lifted via
        `mul(coeff_image, power_product)`; the caller supplies coefficient
        images through values["__coeff__"](scalar).
        """
        lift = values["__coeff__"]
        acc = None
        for m, c in self.terms.items():
            term = lift(c)
            for i, e in enumerate(m):
                if e:
                    v = values[self.ring.variables[i]]
                    for _ in range(e):
                        term = mul(term, v)
            acc = term if acc is None else add(acc, term)
        return acc if acc is not None else mul(lift(self.ring.field.zero()), one)

    def subs_polys(self, values: dict[str, Poly], target: PolyRing) -> Poly:
        """Substitute polynomials (in `target`) for variables."""
        acc = target.zero()
        for m, c in self.terms.items():
            term = target.from_scalar(c)
            for i, e in enumerate(m):
                if e:
                    term = term * values[self.ring.variables[i]] ** e
            acc = acc + term
        return acc

    def rename(self, mapping: dict[str, str], target: PolyRing) -> Poly:
        """Transport into `target` by renaming variables."""
        out = {}
        for m, c in self.terms.items():
            mono = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    mono[target.variables.index(mapping.get(self.ring.variables[i], self.ring.variables[i]))] = e
            out[tuple(mono)] = c
        return Poly(target, out)

    def restrict(self, target: PolyRing) -> Poly:
        """Transport into a ring whose variables are a superset of those used."""
        return self.rename({}, target)

    # -- printing ----------------------------------------------------------
    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono_parts = []
            for i, e in enumerate(m):
                if e == 1:
                    mono_parts.append(self.ring.variables[i])
                elif e > 1:
                    mono_parts.append(f"{self.ring.variables[i]}^{e}")
            cs = str(c)
            negative = cs.startswith("-") and "+" not in cs[1:] and "-" not in cs[1:]
            if mono_parts:
                if c.is_one():
                    body = "*".join(mono_parts)
                elif (-c).is_one() and self.ring.field.char == 0:
                    body = "-" + "*".join(mono_parts)
                else:
                    coeff = cs if _scalar_is_atomic(cs) else f"({cs})"
                    body = coeff + "*" + "*".join(mono_parts)
            else:
                body = cs if _scalar_is_atomic(cs) else f"({cs})"
            parts.append(body)
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    def __repr__(self):
        return f"Poly({self})"


def _scalar_is_atomic(s: str) -> bool:
    core = s[1:] if s.startswith("-") else s
    return "+" not in core and "-" not in core


# ---------------------------------------------------------------------------
# parsing: small recursive-descent evaluator over the term grammar
# ---------------------------------------------------------------------------

class _Tokens:
    def __init__(self, text: str):
        self.toks: list[str] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch in "+-*/^()":
                self.toks.append(ch)
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in {text!r}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    toks = _Tokens(text)
    value = _parse_sum(toks, ring)
    if toks.peek() is not None:
        raise ValueError(f"trailing input {toks.peek()!r} in {text!r}")
    return value


def _parse_sum(toks: _Tokens, ring: PolyRing) -> Poly:
    sign = 1
    while toks.peek() in ("+", "-"):
        if toks.next() == "-":
            sign = -sign
    acc = _parse_product(toks, ring)
    if sign < 0:
        acc = -acc
    while toks.peek() in ("+", "-"):
        sign = 1
        while toks.peek() in ("+", "-"):
            if toks.next() == "-":
                sign = -sign
        term = _parse_product(toks, ring)
        acc = acc + (term if sign > 0 else -term)
    return acc


def _parse_product(toks: _Tokens, ring: PolyRing) -> Poly:
    acc = _parse_power(toks, ring)
    while toks.peek() in ("*", "/"):
        op = toks.next()
        rhs = _parse_power(toks, ring)
        if op == "*":
            acc = acc * rhs
        else:
            if not rhs.is_constant():
                raise ValueError("division only by constants")
            acc = acc.scale(rhs.constant_coefficient().inv())
    return acc


def _parse_power(toks: _Tokens, ring: PolyRing) -> Poly:
    base = _parse_atom(toks, ring)
    if toks.peek() == "^":
        toks.next()
        neg = False
        if toks.peek() == "-":
            toks.next()
            neg = True
        e = int(toks.next())
        if neg:
            raise ValueError("negative exponents are not polynomial")
        return base**e
    return base


def _parse_atom(toks: _Tokens, ring: PolyRing) -> Poly:
    tok = toks.next()
    if tok == "(":
        inner = _parse_sum(toks, ring)
        toks.expect(")")
        return inner
    if tok == "sqrt":
        toks.expect("(")
        d = int(toks.next())
        toks.expect(")")
        if ring.field.kind != "QSqrt" or ring.field.d != d:
            raise ValueError(f"sqrt({d}) does not live in {ring.field}")
        return ring.from_scalar(ring.field.sqrt_d())
    if tok == "w" and ring.field.kind == "Fq" and "w" not in ring.variables:
        return ring.from_scalar(ring.field.generator())
    if tok.isdigit():
        return ring.from_int(int(tok))
    if tok in ring.variables:
        return ring.var(tok)
    raise ValueError(f"unknown symbol {tok!r} for ring in {ring.variables}")


def parse_scalar(text: str, field: FieldSpec) -> Scalar:
    ring = PolyRing(field, ())
    p = parse_poly(text, ring)
    return p.constant_coefficient()


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.replace(" ", ""))
