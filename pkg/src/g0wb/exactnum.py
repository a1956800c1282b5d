"""Exact arithmetic in cyclotomic fields Q[xi_N].

Numbers are stored on the power basis 1, xi, ..., xi^(phi(N)-1) reduced
modulo the N-th cyclotomic polynomial, so equality is a plain coefficient
comparison.  Rationals are the conductor-1 case.  Mixed-conductor arithmetic
promotes both operands into the lcm conductor before combining.

The text form used in data files and CLI output writes a number as a
polynomial in ``z`` (the root of unity of the declared conductor) with
integer or rational coefficients, ascending powers, no whitespace:
``3+2z^5-z^7``.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction

from .errors import NotCoprime, ParseError

BigRational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(n: int) -> int:
    """Euler's totient, by trial-division factorization."""
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def _int_poly_divmod(num: tuple[int, ...], den: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exact division of integer polynomials (dense, ascending coefficients).

    Raises if a leading-coefficient division is inexact; only used with monic
    divisors here, where it never is.
    """
    num_l = list(num)
    q = [0] * max(len(num) - len(den) + 1, 0)
    dlead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        coeff, rem = divmod(num_l[shift + len(den) - 1], dlead)
        if rem:
            raise ArithmeticError("inexact integer polynomial division")
        q[shift] = coeff
        if coeff:
            for i, d in enumerate(den):
                num_l[shift + i] -= coeff * d
    r = num_l[: len(den) - 1]
    while r and r[-1] == 0:
        r.pop()
    return tuple(q), tuple(r)


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """The n-th cyclotomic polynomial, dense ascending integer coefficients.

    Computed as (x^n - 1) / prod_{d|n, d<n} Phi_d(x) by exact division.

    >>> cyclotomic_polynomial(1)
    (-1, 1)
    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    >>> cyclotomic_polynomial(12)
    (1, 0, -1, 0, 1)
    """
    if n < 1:
        raise ValueError("cyclotomic_polynomial needs n >= 1")
    poly: tuple[int, ...] = (-1,) + (0,) * (n - 1) + (1,)
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _int_poly_divmod(poly, cyclotomic_polynomial(d))
            if rem:
                raise ArithmeticError("cyclotomic division left a remainder")
    return poly


@functools.lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduction table: entry p is the basis vector of xi_n^p, 0 <= p < n."""
    phi = euler_phi(n)
    modulus = cyclotomic_polynomial(n)
    rows: list[tuple[int, ...]] = []
    current = [0] * phi
    current[0] = 1
    for _ in range(n):
        rows.append(tuple(current))
        # multiply by x, then reduce the overflow term by x^phi = -(lower part)
        overflow = current[-1]
        current = [0] + current[:-1]
        if overflow:
            for i in range(phi):
                current[i] -= overflow * modulus[i]
    return tuple(rows)


class CyclotomicNumber:
    """An element of Q[xi_N] on the power basis modulo Phi_N.

    Instances are immutable; ``conductor`` is N and ``coeffs`` has length
    phi(N).  Conductor 1 is a plain rational.  Two numbers compare equal when
    their promotions into the lcm conductor have identical coefficient
    vectors.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(conductor):
            raise ValueError(
                f"need phi({conductor}) = {euler_phi(conductor)} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(value) -> CyclotomicNumber:
        return CyclotomicNumber(1, (Fraction(value),))

    @staticmethod
    def zero() -> CyclotomicNumber:
        return CyclotomicNumber(1, (_ZERO,))

    @staticmethod
    def one() -> CyclotomicNumber:
        return CyclotomicNumber(1, (_ONE,))

    @staticmethod
    def root_of_unity(n: int, power: int = 1) -> CyclotomicNumber:
        """xi_n^power as a conductor-n number.

        >>> i = CyclotomicNumber.root_of_unity(4)
        >>> i * i == -1
        True
        >>> CyclotomicNumber.root_of_unity(24, 12).literal()
        '-1'
        """
        table = _power_table(n)
        return CyclotomicNumber(n, table[power % n])

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def promote(self, conductor: int) -> CyclotomicNumber:
        """Embed into Q[xi_M] for a multiple M of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor != 0:
            raise ValueError(f"cannot embed conductor {self.conductor} into {conductor}")
        step = conductor // self.conductor
        table = _power_table(conductor)
        acc = [_ZERO] * euler_phi(conductor)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(i * step) % conductor]
            for j, r in enumerate(row):
                if r:
                    acc[j] += c * r
        return CyclotomicNumber(conductor, acc)

    def _paired(self, other: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if self.conductor == other.conductor:
            return self, other
        n = math.lcm(self.conductor, other.conductor)
        return self.promote(n), other.promote(n)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> CyclotomicNumber:
        other = _coerce(other)
        if self.conductor == 1 and other.conductor == 1:
            return CyclotomicNumber(1, (self.coeffs[0] + other.coeffs[0],))
        a, b = self._paired(other)
        return CyclotomicNumber(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> CyclotomicNumber:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> CyclotomicNumber:
        return _coerce(other) - self

    def __mul__(self, other) -> CyclotomicNumber:
        other = _coerce(other)
        if self.conductor == 1 and other.conductor == 1:
            return CyclotomicNumber(1, (self.coeffs[0] * other.coeffs[0],))
        a, b = self._paired(other)
        n = a.conductor
        phi = len(a.coeffs)
        # polynomial product with exponents mod n (xi^n = 1), then the table
        # folds powers >= phi back onto the basis
        raw = [_ZERO] * n
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                if y == 0:
                    continue
                raw[(i + j) % n] += x * y
        table = _power_table(n)
        acc = list(raw[:phi])
        for p in range(phi, n):
            c = raw[p]
            if c == 0:
                continue
            row = table[p]
            for j, r in enumerate(row):
                if r:
                    acc[j] += c * r
        return CyclotomicNumber(n, acc)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        """Multiplicative inverse via the extended Euclidean algorithm
        against the cyclotomic polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.conductor == 1:
            return CyclotomicNumber(1, (1 / self.coeffs[0],))
        modulus = tuple(Fraction(c) for c in cyclotomic_polynomial(self.conductor))
        g, s = _half_ext_gcd(self.coeffs, modulus)
        # Phi_N is irreducible over Q, so the gcd is a nonzero constant
        if len(g) != 1:
            raise ArithmeticError("gcd with the cyclotomic polynomial was not constant")
        inv = [c / g[0] for c in s]
        inv += [_ZERO] * (len(self.coeffs) - len(inv))
        return CyclotomicNumber(self.conductor, inv[: len(self.coeffs)])

    def __truediv__(self, other) -> CyclotomicNumber:
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero cyclotomic number")
        if self.conductor == 1 and other.conductor == 1:
            return CyclotomicNumber(1, (self.coeffs[0] / other.coeffs[0],))
        return self * other.inverse()

    def __rtruediv__(self, other) -> CyclotomicNumber:
        return _coerce(other) / self

    def __pow__(self, exponent: int) -> CyclotomicNumber:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CyclotomicNumber.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def in_subfield(self, n: int) -> bool:
        """True when the value lies in Q[xi_n].

        Decided by Galois fixedness: promote into the compositum and check
        invariance under every automorphism fixing Q[xi_n].
        """
        if n % self.conductor == 0:
            return True
        if n == 1:
            return self.is_rational()
        compositum = math.lcm(self.conductor, n)
        lifted = self.promote(compositum)
        for t in range(2, compositum + 1):
            if t % n == 1 and math.gcd(t, compositum) == 1:
                if lifted.galois(t) != lifted:
                    return False
        return True

    def demote(self, n: int) -> CyclotomicNumber:
        """Rewrite on the conductor-n power basis.

        Requires the value to lie in Q[xi_n]; raises ValueError otherwise.
        """
        if n == self.conductor:
            return self
        if n % self.conductor == 0:
            return self.promote(n)
        if n == 1:
            return CyclotomicNumber(1, (self.rational_value(),))
        compositum = math.lcm(self.conductor, n)
        lifted = self.promote(compositum)
        # solve sum_i r_i * xi_compositum^(i * compositum/n) = value over Q
        table = _power_table(compositum)
        step = compositum // n
        columns = [table[(i * step) % compositum] for i in range(euler_phi(n))]
        rows = [[Fraction(col[j]) for col in columns] for j in range(euler_phi(compositum))]
        rhs = list(lifted.coeffs)
        solution = _solve_exact(rows, rhs)
        if solution is None:
            raise ValueError(f"{self} does not lie in Q[xi_{n}]")
        return CyclotomicNumber(n, solution)

    # -- Galois action -----------------------------------------------------

    def galois(self, m: int) -> CyclotomicNumber:
        """Apply sigma_m, the automorphism sending xi_N to xi_N^m.

        Requires gcd(m, N) = 1; fixes rationals.
        """
        n = self.conductor
        m %= n
        if math.gcd(m, n) != 1:
            raise NotCoprime(f"sigma_{m} is not defined on conductor {n}")
        if n == 1 or m == 1:
            return self
        table = _power_table(n)
        acc = [_ZERO] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(i * m) % n]
            for j, r in enumerate(row):
                if r:
                    acc[j] += c * r
        return CyclotomicNumber(n, acc)

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        elif not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._paired(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # canonical hashing across conductors is not worth the cost

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.conductor}, {self.literal()!r})"

    def __str__(self) -> str:
        return self.literal()

    def literal(self) -> str:
        """Canonical text form: ascending powers of z, no whitespace."""
        if self.is_rational():
            return format_rational(self.coeffs[0])
        parts: list[str] = []
        for power, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = format_rational(abs(c))
            if power == 0:
                body = mag
            else:
                zterm = "z" if power == 1 else f"z^{power}"
                body = zterm if mag == "1" else mag + zterm
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(sign + body)
        return "".join(parts) if parts else "0"


def _coerce(value) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CyclotomicNumber.from_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a cyclotomic number")


def galois_apply(m: int, a: CyclotomicNumber) -> CyclotomicNumber:
    """Module-level spelling of the sigma_m action."""
    return a.galois(m)


def cyc_arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str) -> CyclotomicNumber:
    """add / mul / div with automatic promotion into the lcm conductor."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown cyclotomic operation {op!r}")


def _half_ext_gcd(a, modulus):
    """gcd(a, modulus) together with s such that s*a = gcd (mod modulus).

    Dense Fraction polynomials, ascending coefficients.
    """
    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_poly(num, den):
        num = list(num)
        q = [_ZERO] * max(len(num) - len(den) + 1, 0)
        for shift in range(len(num) - len(den), -1, -1):
            c = num[shift + len(den) - 1] / den[-1]
            q[shift] = c
            if c:
                for i, d in enumerate(den):
                    num[shift + i] -= c * d
        return q, trim(num[: len(den) - 1])

    def mul_poly(p, q):
        if not p or not q:
            return []
        out = [_ZERO] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if x:
                for j, y in enumerate(q):
                    out[i + j] += x * y
        return trim(out)

    def sub_poly(p, q):
        out = list(p) + [_ZERO] * (len(q) - len(p))
        for i, y in enumerate(q):
            out[i] -= y
        return trim(out)

    r0, r1 = trim(a), trim(modulus)
    s0, s1 = [_ONE], []
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_poly(s0, mul_poly(q, s1))
    return r0, s0


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Solve an overdetermined rational linear system by elimination.

    Returns the unique solution as a list, or None when inconsistent.
    """
    height = len(rows)
    width = len(rows[0]) if rows else 0
    aug = [list(rows[i]) + [Fraction(rhs[i])] for i in range(height)]
    pivot_cols: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, height) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        scale = aug[r][col]
        aug[r] = [x / scale for x in aug[r]]
        for i in range(height):
            if i != r and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivot_cols.append(col)
        r += 1
        if r == height:
            break
    for i in range(r, height):
        if aug[i][width] != 0:
            return None
    solution = [Fraction(0)] * width
    for row_idx, col in enumerate(pivot_cols):
        solution[col] = aug[row_idx][width]
    return solution


# -- literals ---------------------------------------------------------------

def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}") from exc


_TERM_RE = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?(?P<z>z(?:\^(?P<pow>\d+))?)?$"
)


def parse_cyclotomic(text: str, conductor: int) -> CyclotomicNumber:
    """Parse a coefficient literal: integer, ``a/b``, or polynomial in z.

    The z powers are interpreted as xi_conductor; out-of-range powers reduce
    via the cyclotomic relation.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty coefficient literal")
    if "z" not in text:
        return CyclotomicNumber.from_rational(parse_rational(text))
    result = CyclotomicNumber.root_of_unity(conductor, 0) * 0
    pos = 0
    sign = 1
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        pos = 1
    while pos <= len(text):
        nxt = len(text)
        for i in range(pos, len(text)):
            if text[i] in "+-":
                nxt = i
                break
        term = text[pos:nxt]
        m = _TERM_RE.match(term)
        if not m or (m.group("coef") is None and m.group("z") is None):
            raise ParseError(f"bad term {term!r} in cyclotomic literal {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else _ONE
        if m.group("z"):
            power = int(m.group("pow")) if m.group("pow") else 1
            value = CyclotomicNumber.root_of_unity(conductor, power)
        else:
            value = CyclotomicNumber.one().promote(conductor)
        result = result + value * (sign * coef)
        if nxt == len(text):
            break
        sign = -1 if text[nxt] == "-" else 1
        pos = nxt + 1
    return result
