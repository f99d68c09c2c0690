"""Exact coefficient fields: Q, Q(sqrt d), F_p and F_{p^n}.

A FieldSpec names the field; a Scalar pairs a spec with a canonical
representation (reduced Fraction, Fraction pair, residue in [0,p), or a
short coefficient tuple modulo an irreducible polynomial).  All arithmetic
is exact; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CoefficientFieldTooSmall, DivisionByZero, FieldMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = int(n**0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r * r == n


def _int_nth_root(n: int, k: int) -> int | None:
    """Exact k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = int(round(n ** (1.0 / k)))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


# dense univariate arithmetic over F_p (coefficient lists, low degree first),
# used for F_q modulus validation and element inversion
def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_add(a, b, p):
    n = max(len(a), len(b))
    return _fp_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_divmod(a, b, p):
    a = list(a)
    binv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = (a[-1] * binv) % p
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[d + i] = (a[d + i] - c * b[i]) % p
        _fp_trim(a)
    return _fp_trim(q), a


def _fp_powmod(a, e, mod, p):
    result = [1]
    base = _fp_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _fp_divmod(_fp_mul(result, base, p), mod, p)[1]
        base = _fp_divmod(_fp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _fp_irreducible(mod: list[int], p: int) -> bool:
    """Rabin's test: x^(p^n) == x mod f, and gcd(x^(p^(n/q)) - x, f) = 1."""
    n = len(mod) - 1
    if n < 1:
        return False
    x = [0, 1]
    xq = _fp_powmod(x, p**n, mod, p)
    if _fp_trim(_fp_add(xq, [0, p - 1], p)):
        return False
    q = 2
    nn = n
    primes = []
    while q * q <= nn:
        if nn % q == 0:
            primes.append(q)
            while nn % q == 0:
                nn //= q
        q += 1
    if nn > 1:
        primes.append(nn)
    for q in primes:
        xe = _fp_powmod(x, p ** (n // q), mod, p)
        g = _fp_gcd(_fp_add(xe, [0, p - 1], p), mod, p)
        if len(g) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of an exact field: Q, QSqrt(d), Fp(p) or Fq(p, modulus).

    modulus is a monic irreducible polynomial over F_p, coefficients listed
    from degree 0 upward.
    """

    kind: str
    d: int | None = None
    p: int | None = None
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "Q":
            pass
        elif self.kind == "QSqrt":
            if self.d is None or self.d <= 0 or _is_perfect_square(self.d):
                raise ValueError(f"QSqrt requires a positive nonsquare d, got {self.d}")
        elif self.kind == "Fp":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"Fp requires a prime, got {self.p}")
        elif self.kind == "Fq":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"Fq requires a prime, got {self.p}")
            m = list(self.modulus or ())
            if len(m) < 3 or m[-1] != 1 or any(c % self.p != c for c in m):
                raise ValueError("Fq modulus must be monic of degree >= 2 with reduced coefficients")
            if not _fp_irreducible(m, self.p):
                raise ValueError(f"Fq modulus {m} is reducible over F_{self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def char(self) -> int:
        return 0 if self.kind in ("Q", "QSqrt") else self.p

    @property
    def extension_degree(self) -> int:
        return len(self.modulus) - 1 if self.kind == "Fq" else 1

    @property
    def order(self) -> int | None:
        """Number of elements, None for infinite fields."""
        if self.kind == "Fp":
            return self.p
        if self.kind == "Fq":
            return self.p**self.extension_degree
        return None

    def zero(self) -> Scalar:
        return self.from_int(0)

    def one(self) -> Scalar:
        return self.from_int(1)

    def from_int(self, n: int) -> Scalar:
        if self.kind == "Q":
            return Scalar(self, Fraction(n))
        if self.kind == "QSqrt":
            return Scalar(self, (Fraction(n), Fraction(0)))
        if self.kind == "Fp":
            return Scalar(self, n % self.p)
        return Scalar(self, _fq_canon((n % self.p,)))

    def from_fraction(self, q: Fraction) -> Scalar:
        if self.kind == "Q":
            return Scalar(self, q)
        if self.kind == "QSqrt":
            return Scalar(self, (q, Fraction(0)))
        num = self.from_int(q.numerator)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator {q.denominator} vanishes in characteristic {self.p}")
        return num / self.from_int(q.denominator)

    def sqrt_d(self) -> Scalar:
        if self.kind != "QSqrt":
            raise ValueError("sqrt generator only exists in QSqrt fields")
        return Scalar(self, (Fraction(0), Fraction(1)))

    def generator(self) -> Scalar:
        if self.kind != "Fq":
            raise ValueError("generator only exists in Fq fields")
        return Scalar(self, (0, 1))

    def elements(self):
        """Iterate all elements (finite fields only)."""
        if self.kind == "Fp":
            for i in range(self.p):
                yield Scalar(self, i)
        elif self.kind == "Fq":
            n = self.extension_degree
            total = self.p**n
            for code in range(total):
                c, digits = code, []
                for _ in range(n):
                    digits.append(c % self.p)
                    c //= self.p
                yield Scalar(self, _fq_canon(tuple(digits)))
        else:
            raise ValueError("cannot enumerate an infinite field")

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"kind": "Q"}
        if self.kind == "QSqrt":
            return {"kind": "QSqrt", "d": self.d}
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Fq", "p": self.p, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(data: dict) -> FieldSpec:
        kind = data["kind"]
        if kind == "Q":
            return QQ
        if kind == "QSqrt":
            return FieldSpec("QSqrt", d=int(data["d"]))
        if kind == "Fp":
            return FieldSpec("Fp", p=int(data["p"]))
        if kind == "Fq":
            return FieldSpec("Fq", p=int(data["p"]), modulus=tuple(int(c) for c in data["modulus"]))
        raise ValueError(f"unknown field kind {kind!r}")

    def __str__(self):
        if self.kind == "Q":
            return "Q"
        if self.kind == "QSqrt":
            return f"Q(sqrt({self.d}))"
        if self.kind == "Fp":
            return f"F_{self.p}"
        return f"F_{self.p}^{self.extension_degree}"


def _fq_canon(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Scalar:
    """An element of a FieldSpec in canonical form.

    rep is a Fraction (Q), a (Fraction, Fraction) pair meaning a + b*sqrt(d)
    (QSqrt), an int in [0, p) (Fp), or a trimmed coefficient tuple (Fq).
    """

    field: FieldSpec
    rep: object

    def _check(self, other: Scalar):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def is_zero(self) -> bool:
        k = self.field.kind
        if k == "Q":
            return self.rep == 0
        if k == "QSqrt":
            return self.rep[0] == 0 and self.rep[1] == 0
        if k == "Fp":
            return self.rep == 0
        return not self.rep

    def is_one(self) -> bool:
        return self == self.field.one()

    def __add__(self, other: Scalar) -> Scalar:
        self._check(other)
        k = self.field.kind
        if k == "Q":
            return Scalar(self.field, self.rep + other.rep)
        if k == "QSqrt":
            return Scalar(self.field, (self.rep[0] + other.rep[0], self.rep[1] + other.rep[1]))
        if k == "Fp":
            return Scalar(self.field, (self.rep + other.rep) % self.field.p)
        p = self.field.p
        n = max(len(self.rep), len(other.rep))
        a, b = self.rep, other.rep
        return Scalar(
            self.field,
            _fq_canon([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]),
        )

    def __neg__(self) -> Scalar:
        k = self.field.kind
        if k == "Q":
            return Scalar(self.field, -self.rep)
        if k == "QSqrt":
            return Scalar(self.field, (-self.rep[0], -self.rep[1]))
        if k == "Fp":
            return Scalar(self.field, (-self.rep) % self.field.p)
        p = self.field.p
        return Scalar(self.field, _fq_canon([(-c) % p for c in self.rep]))

    def __sub__(self, other: Scalar) -> Scalar:
        return self + (-other)

    def __mul__(self, other: Scalar) -> Scalar:
        self._check(other)
        k = self.field.kind
        if k == "Q":
            return Scalar(self.field, self.rep * other.rep)
        if k == "QSqrt":
            a, b = self.rep
            c, e = other.rep
            return Scalar(self.field, (a * c + self.field.d * b * e, a * e + b * c))
        if k == "Fp":
            return Scalar(self.field, (self.rep * other.rep) % self.field.p)
        p = self.field.p
        prod = _fp_mul(list(self.rep), list(other.rep), p)
        return Scalar(self.field, _fq_canon(_fp_divmod(prod, list(self.field.modulus), p)[1]))

    def inv(self) -> Scalar:
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field}")
        k = self.field.kind
        if k == "Q":
            return Scalar(self.field, 1 / self.rep)
        if k == "QSqrt":
            a, b = self.rep
            norm = a * a - self.field.d * b * b
            return Scalar(self.field, (a / norm, -b / norm))
        if k == "Fp":
            return Scalar(self.field, pow(self.rep, -1, self.field.p))
        # extended Euclid in F_p[x] against the modulus
        p = self.field.p
        r0, r1 = list(self.field.modulus), list(self.rep)
        s0, s1 = [], [1]
        while r1:
            q, r = _fp_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _fp_add(s0, [(-c) % p for c in _fp_mul(q, s1, p)], p)
        lead_inv = pow(r0[-1], -1, p)
        s0 = [(c * lead_inv) % p for c in s0]
        return Scalar(self.field, _fq_canon(_fp_divmod(s0, list(self.field.modulus), p)[1]))

    def __truediv__(self, other: Scalar) -> Scalar:
        return self * other.inv()

    def __pow__(self, e: int) -> Scalar:
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_square(self) -> bool:
        return self.sqrt() is not None

    def sqrt(self) -> Scalar | None:
        """A square root in the same field, or None."""
        if self.is_zero():
            return self
        k = self.field.kind
        if k == "Q":
            r = _fraction_sqrt(self.rep)
            return None if r is None else Scalar(self.field, r)
        if k == "QSqrt":
            return self._qsqrt_sqrt()
        if k == "Fp":
            p = self.field.p
            if p == 2:
                return self
            if pow(self.rep, (p - 1) // 2, p) != 1:
                return None
            return Scalar(self.field, _tonelli_fp(self.rep, p))
        return self._fq_sqrt()

    def _qsqrt_sqrt(self) -> Scalar | None:
        a, b = self.rep
        d = self.field.d
        if b == 0:
            r = _fraction_sqrt(a)
            if r is not None:
                return Scalar(self.field, (r, Fraction(0)))
            r = _fraction_sqrt(a / d)
            if r is not None:
                return Scalar(self.field, (Fraction(0), r))
            return None
        # (x + y sqrt d)^2 = a + b sqrt d: x^2 + d y^2 = a, 2xy = b
        disc = _fraction_sqrt(a * a - d * b * b)
        if disc is None:
            return None
        for sign in (1, -1):
            x2 = (a + sign * disc) / 2
            x = _fraction_sqrt(x2)
            if x is not None and x != 0:
                y = b / (2 * x)
                return Scalar(self.field, (x, y))
        return None

    def _fq_sqrt(self) -> Scalar | None:
        q = self.field.order
        if self.field.p == 2:
            return self ** (q // 2)
        if (self ** ((q - 1) // 2)).is_one() is False:
            return None
        return _tonelli_generic(self, q)

    def kth_root(self, k: int) -> Scalar:
        """Exact k-th root; raises CoefficientFieldTooSmall if absent."""
        if k == 1 or self.is_zero() or self.is_one():
            return self
        if k == 2:
            r = self.sqrt()
            if r is None:
                raise CoefficientFieldTooSmall(f"{self} has no square root in {self.field}")
            return r
        fk = self.field.kind
        if fk == "Q":
            num = _int_nth_root(abs(self.rep.numerator), k)
            den = _int_nth_root(self.rep.denominator, k)
            if num is not None and den is not None:
                if self.rep >= 0:
                    return Scalar(self.field, Fraction(num, den))
                if k % 2 == 1:
                    return Scalar(self.field, Fraction(-num, den))
            raise CoefficientFieldTooSmall(f"{self} has no {k}-th root in Q")
        if fk in ("Fp", "Fq"):
            q = self.field.order
            for cand in self.field.elements():
                if (cand**k) == self:
                    return cand
            raise CoefficientFieldTooSmall(f"{self} has no {k}-th root in F_{q}")
        raise CoefficientFieldTooSmall(f"{k}-th roots only implemented for Q and finite fields")

    def embed(self, target: FieldSpec) -> Scalar:
        """Embed into a compatible bigger field (Q -> QSqrt, Fp -> Fq)."""
        if target == self.field:
            return self
        if self.field.kind == "Q" and target.kind == "QSqrt":
            return Scalar(target, (self.rep, Fraction(0)))
        if self.field.kind == "Fp" and target.kind == "Fq" and target.p == self.field.p:
            return Scalar(target, _fq_canon((self.rep,)))
        raise FieldMismatch(f"no embedding {self.field} -> {target}")

    def __str__(self):
        k = self.field.kind
        if k == "Q":
            return str(self.rep)
        if k == "QSqrt":
            a, b = self.rep
            if b == 0:
                return str(a)
            bs = f"sqrt({self.field.d})" if b == 1 else (f"-sqrt({self.field.d})" if b == -1 else f"{b}*sqrt({self.field.d})")
            if a == 0:
                return bs
            return f"{a}+{bs}" if not bs.startswith("-") else f"{a}{bs}"
        if k == "Fp":
            return str(self.rep)
        if not self.rep:
            return "0"
        parts = []
        for i in reversed(range(len(self.rep))):
            c = self.rep[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("w" if c == 1 else f"{c}*w")
            else:
                parts.append(f"w^{i}" if c == 1 else f"{c}*w^{i}")
        return "+".join(parts)

    def __repr__(self):
        return f"Scalar({self})"


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num = _int_nth_root(q.numerator, 2)
    den = _int_nth_root(q.denominator, 2)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _tonelli_fp(n: int, p: int) -> int:
    """Square root mod odd prime p; assumes n is a quadratic residue."""
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, (b * b) % p
        t, r = (t * c) % p, (r * b) % p
    return r


def _tonelli_generic(a: Scalar, q: int) -> Scalar | None:
    """Tonelli-Shanks in the unit group of a finite field of odd order q."""
    field = a.field
    s, m = q - 1, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = None
    for cand in field.elements():
        if not cand.is_zero() and not (cand ** ((q - 1) // 2)).is_one():
            z = cand
            break
    if z is None:
        return None
    c = z**s
    t = a**s
    r = a ** ((s + 1) // 2)
    while not t.is_one():
        i, t2 = 0, t
        while not t2.is_one():
            t2 = t2 * t2
            i += 1
        if i >= m:
            return None
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return r


QQ = FieldSpec("Q")
