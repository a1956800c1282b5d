"""Modular equations for formal q-series.

Given a normalized series h = q^-1 + a_1 q + a_2 q^2 + ..., the order-m
machinery substitutes h along the primitive coset set A_m, expands the
product of (root - Y) factors through elementary symmetric functions,
expresses each Y-coefficient as an exact polynomial in h, and verifies the
resulting bivariate relation coefficient-by-coefficient.

The coset set uses the primitive pairs (d, k) with d | m, 0 <= k < d and
gcd(m/d, k, d) = 1, which is exactly what makes |A_m| = psi(m) and the
polynomial degree psi(m) work out for non-squarefree m.

Sign convention: the stored polynomial is the product form, whose leading
coefficient in y is (-1)^psi(m); ``monic()`` rescales when a monic
normalization is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    ExpressFailure,
    InsufficientTruncation,
    NonIntegralInput,
    NotInvariant,
    ParseError,
    ShapeError,
)
from .exactnum import CyclotomicNumber, parse_cyclotomic
from .qseries import PuiseuxSeries, substitute_coset

Coeff = CyclotomicNumber

# Determination bound used for series that are exactly known everywhere
# (constants, monomial fictions); large enough never to be the binding
# constraint against real data.
_KNOWN = 10**9


def _constant_series(c, conductor: int = 1) -> PuiseuxSeries:
    value = c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.from_rational(c)
    coeffs = {} if value.is_zero() else {0: value}
    return PuiseuxSeries.make(coeffs, trunc=_KNOWN, denom=1, conductor=conductor)


def psi(m: int) -> int:
    """The coset index m * prod_{p | m} (1 + 1/p).

    >>> [psi(m) for m in (2, 3, 4, 6, 12)]
    [3, 4, 6, 12, 24]
    """
    if m < 1:
        raise ValueError("psi needs m >= 1")
    result = m
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            result = result // p * (p + 1)
            while rest % p == 0:
                rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        result = result // rest * (rest + 1)
    return result


@dataclass(frozen=True)
class CosetSet:
    """The primitive pairs (d, k) indexing the order-m substitutions."""

    m: int
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)


def coset_set(m: int) -> CosetSet:
    """All (d, k) with d | m, 0 <= k < d, gcd(m/d, k, d) = 1, sorted.

    >>> coset_set(4).pairs
    ((1, 0), (2, 1), (4, 0), (4, 1), (4, 2), (4, 3))
    """
    if m < 2:
        raise ValueError("coset sets are defined for m >= 2")
    pairs = [
        (d, k)
        for d in range(1, m + 1)
        if m % d == 0
        for k in range(d)
        if math.gcd(math.gcd(m // d, k), d) == 1
    ]
    pairs.sort()
    if len(pairs) != psi(m):
        raise AssertionError(f"coset set size {len(pairs)} != psi({m}) = {psi(m)}")
    return CosetSet(m, tuple(pairs))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1 if i == 2 else 2
    return True


def average_sum(f: PuiseuxSeries, p: int) -> PuiseuxSeries:
    """The prime averaging f(p*tau) + sum_{k<p} f((tau+k)/p).

    Root-of-unity cancellation guarantees integral exponents on the result.
    """
    if not _is_prime(p):
        raise ValueError(f"averaging order {p} is not prime")
    if f.denom != 1:
        raise NonIntegralInput("averaging needs a series with integral exponents")
    total = substitute_coset(f, p, 1, 0)
    for k in range(p):
        total = total + substitute_coset(f, p, p, k)
    if total.denom != 1:
        raise NotInvariant("fractional exponents survived the averaging sum")
    return total


@dataclass(frozen=True)
class UnivariatePoly:
    """Dense polynomial with exact cyclotomic coefficients, ascending powers."""

    coeffs: tuple[Coeff, ...]

    @staticmethod
    def from_list(values) -> UnivariatePoly:
        coeffs = [v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.from_rational(v)
                  for v in values]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return UnivariatePoly(tuple(coeffs))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> Coeff:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return CyclotomicNumber.zero()

    def __call__(self, x: PuiseuxSeries) -> PuiseuxSeries:
        """Evaluate at a series (Horner)."""
        result = _constant_series(0, x.conductor)
        for c in reversed(self.coeffs):
            result = result * x + _constant_series(c, x.conductor)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for j in range(self.degree(), -1, -1):
            c = self.coefficient(j)
            if c.is_zero():
                continue
            lit = c.literal()
            if j == 0:
                body = lit
            else:
                xpow = "x" if j == 1 else f"x^{j}"
                if lit == "1":
                    body = xpow
                elif lit == "-1":
                    body = "-" + xpow
                elif any(ch in lit[1:] for ch in "+-") or "z" in lit:
                    body = f"({lit}){xpow}"
                else:
                    body = lit + xpow
            if parts and not body.startswith("-"):
                parts.append("+" + body)
            else:
                parts.append(body)
        return "".join(parts)


def express_in_generator(f: PuiseuxSeries, h: PuiseuxSeries) -> UnivariatePoly:
    """Write f as an exact polynomial in h by greedy pole-killing.

    Repeatedly cancels the most negative surviving exponent of the residual
    with a multiple of the matching power of h; succeeds when the residual
    vanishes identically on its determined range.
    """
    if not h.is_moonshine_shape():
        raise ShapeError("generator must be q^-1 + O(q) with zero constant term")
    if f.denom != 1:
        raise NonIntegralInput("cannot express a series with fractional exponents")
    degree = f.pole_order()
    powers: list[PuiseuxSeries] = [_constant_series(1, h.conductor)]
    for _ in range(degree):
        powers.append(powers[-1] * h)
    coeffs: dict[int, Coeff] = {}
    residual = f
    while True:
        v = residual.min_nonzero_exponent()
        if v is None or v > 0:
            break
        j = int(-v)
        c = residual.coefficient(v)
        coeffs[j] = c
        residual = residual - powers[j].scale(c)
    if residual.trunc_exponent() < 0:
        raise InsufficientTruncation(
            "residual not determined through the constant term", required=0)
    if not residual.is_zero():
        raise ExpressFailure(
            f"series is not a polynomial in the generator; residual {residual!r}",
            residual=residual,
        )
    return UnivariatePoly.from_list(
        [coeffs.get(j, CyclotomicNumber.zero()) for j in range(degree + 1)])


@dataclass(frozen=True)
class ModularPolynomial:
    """Exact bivariate polynomial in the product-form normalization.

    ``coeffs`` maps (i, j) -> coefficient of x^i y^j; the coefficient of
    y^degy is (-1)^degy by construction.
    """

    m: int
    conductor: int
    coeffs: Mapping[tuple[int, int], Coeff]
    degx: int
    degy: int

    def coefficient(self, i: int, j: int) -> Coeff:
        return self.coeffs.get((i, j), CyclotomicNumber.zero())

    def monic(self) -> ModularPolynomial:
        """Rescaled so the leading y coefficient is +1."""
        if self.degy % 2 == 0:
            return self
        return self.scale(-1)

    def scale(self, factor) -> ModularPolynomial:
        return ModularPolynomial(
            self.m, self.conductor,
            {key: c * factor for key, c in self.coeffs.items()},
            self.degx, self.degy)

    def apply_galois(self, t: int) -> ModularPolynomial:
        return ModularPolynomial(
            self.m, self.conductor,
            {key: c.galois(t) for key, c in self.coeffs.items()},
            self.degx, self.degy)

    def transpose(self) -> ModularPolynomial:
        return ModularPolynomial(
            self.m, self.conductor,
            {(j, i): c for (i, j), c in self.coeffs.items()},
            self.degy, self.degx)

    def y_slices(self) -> list[dict[int, Coeff]]:
        """For each power of y, the map i -> coefficient of x^i."""
        slices: list[dict[int, Coeff]] = [{} for _ in range(self.degy + 1)]
        for (i, j), c in self.coeffs.items():
            slices[j][i] = c
        return slices

    def evaluate(self, x: PuiseuxSeries, y: PuiseuxSeries) -> PuiseuxSeries:
        """F(x, y) for series arguments, Horner in y over precomputed x powers."""
        xpangle = _power_ladder(x, self.degx)
        slices = self.y_slices()
        result = _combine_slice(slices[self.degy], xpangle, x)
        for j in range(self.degy - 1, -1, -1):
            result = result * y + _combine_slice(slices[j], xpangle, x)
        return result

    def derivative(self, variable: str) -> ModularPolynomial:
        out: dict[tuple[int, int], Coeff] = {}
        for (i, j), c in self.coeffs.items():
            if variable == "x" and i > 0:
                out[(i - 1, j)] = out.get((i - 1, j), CyclotomicNumber.zero()) + c * i
            elif variable == "y" and j > 0:
                out[(i, j - 1)] = out.get((i, j - 1), CyclotomicNumber.zero()) + c * j
        out = {k: v for k, v in out.items() if not v.is_zero()}
        dx = self.degx - (1 if variable == "x" else 0)
        dy = self.degy - (1 if variable == "y" else 0)
        return ModularPolynomial(self.m, self.conductor, out, max(dx, 0), max(dy, 0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModularPolynomial):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(*k) == other.coefficient(*k) for k in keys)

    __hash__ = None


def _power_ladder(x: PuiseuxSeries, top: int) -> list[PuiseuxSeries]:
    powers = [_constant_series(1, x.conductor)]
    for _ in range(top):
        powers.append(powers[-1] * x)
    return powers


def _combine_slice(slice_map: dict[int, Coeff], xpowers: list[PuiseuxSeries],
                   x: PuiseuxSeries) -> PuiseuxSeries:
    acc = _constant_series(0, x.conductor)
    for i, c in sorted(slice_map.items()):
        acc = acc + xpowers[i].scale(c)
    return acc


def required_truncation(m: int) -> int:
    """Input depth needed to build the order-m polynomial, with guard terms."""
    return psi(m) * m + psi(m) + 8


def build_modular_polynomial(h: PuiseuxSeries, m: int, generalised: bool = False,
                             conductor: int | None = None) -> ModularPolynomial:
    """Construct the order-m modular polynomial satisfied by h, or fail.

    Expands prod_{(d,k)} (h(m*tau/d^2 + k/d) - Y) via elementary symmetric
    functions; each Y-coefficient must collapse to integral exponents and
    coefficients in the declared field, and must be expressible as a
    polynomial in h (in sigma_m(h) for the Galois-twisted variant).
    """
    if not h.is_moonshine_shape():
        raise ShapeError("modular polynomial construction needs q^-1 + O(q) input")
    field = conductor if conductor is not None else h.conductor
    if generalised and math.gcd(m, field) != 1:
        raise ValueError(f"twisted construction needs gcd(m, {field}) = 1")
    need = required_truncation(m)
    if h.trunc < need:
        raise InsufficientTruncation(
            f"order-{m} construction needs the input determined through q^{need}, "
            f"have q^{h.trunc}",
            required=need,
        )
    cosets = coset_set(m)
    degree = len(cosets)
    roots = [substitute_coset(h, m, d, k) for d, k in cosets.pairs]
    elementary = _elementary_symmetric(roots)
    generator = h if not generalised else h.map_coefficients(lambda c: c.galois(m))
    slices: dict[tuple[int, int], Coeff] = {}
    for j in range(degree + 1):
        e_j = elementary[j]
        if e_j.denom != 1:
            bad = e_j.min_nonzero_exponent()
            raise NotInvariant(
                f"coset-symmetric function e_{j} kept the fractional exponent {bad}",
                exponent=bad, coefficient=e_j.coefficient(bad))
        e_j = _project_coefficients(e_j, field, j)
        try:
            poly = express_in_generator(e_j, generator)
        except ExpressFailure as exc:
            raise ExpressFailure(
                f"e_{j} is not a polynomial in the generator (order {m})",
                residual=exc.residual,
            ) from exc
        sign = -1 if (degree - j) % 2 else 1
        for i, c in enumerate(poly.coeffs):
            if c.is_zero():
                continue
            slices[(i, degree - j)] = c * sign
    built = ModularPolynomial(m, field, slices, degree, degree)
    if max((i for i, _ in slices), default=0) != degree:
        raise NotInvariant(f"built polynomial has x-degree != psi({m})")
    return built


def _elementary_symmetric(roots: list[PuiseuxSeries]) -> list[PuiseuxSeries]:
    """e_0..e_n of the given series, by the one-root-at-a-time recurrence."""
    es: list[PuiseuxSeries] = [_constant_series(1)]
    for r in roots:
        nxt = [es[0]]
        for j in range(1, len(es)):
            nxt.append(es[j] + r * es[j - 1])
        nxt.append(r * es[-1])
        es = nxt
    return es


def _project_coefficients(series: PuiseuxSeries, field: int, which: int) -> PuiseuxSeries:
    """Check every coefficient lies in Q[xi_field] and rewrite it there."""
    out: dict[int, Coeff] = {}
    for n, c in series.coeffs.items():
        if not c.in_subfield(field):
            raise NotInvariant(
                f"coefficient of q^{n} in e_{which} leaves Q[xi_{field}]: {c}",
                exponent=Fraction(n, series.denom), coefficient=c)
        out[n] = c.demote(field)
    return PuiseuxSeries(field, series.denom, series.lo, series.trunc, out)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a modular equation against a series."""

    order: int
    verified_to: Fraction
    status: str  # consistent | inconsistent | insufficient-data
    first_failure: tuple[Fraction, Coeff, Coeff] | None = None

    def __post_init__(self):
        if self.status == "inconsistent" and self.first_failure is None:
            raise ValueError("inconsistent report must carry its first failure")


def verify_modular_equation(h: PuiseuxSeries, poly: ModularPolynomial, m: int,
                            generalised: bool = False) -> VerificationReport:
    """Check that the product over coset substitutions equals F(h(tau), Y).

    Both sides are expanded as polynomials in Y with exact q-series
    coefficients and compared to the largest order the input truncation
    supports.  Failures are reported in-band, never raised.
    """
    if poly.degx != psi(m) or poly.degy != psi(m):
        raise ValueError(
            f"polynomial degrees ({poly.degx}, {poly.degy}) != psi({m}) = {psi(m)}")
    if not h.is_moonshine_shape():
        raise ShapeError("verification needs q^-1 + O(q) input")
    cosets = coset_set(m)
    roots = [substitute_coset(h, m, d, k) for d, k in cosets.pairs]
    product_side = _product_in_y(roots)
    generator = h if not generalised else h.map_coefficients(lambda c: c.galois(m))
    xpangle = _power_ladder(generator, poly.degx)
    slices = poly.y_slices()
    verified_to: Fraction | None = None
    for t in range(len(slices)):
        lhs = product_side[t]
        rhs = _combine_slice(slices[t], xpangle, generator)
        bound = min(lhs.trunc_exponent(), rhs.trunc_exponent())
        verified_to = bound if verified_to is None else min(verified_to, bound)
        if bound < 0:
            return VerificationReport(m, bound, "insufficient-data")
        denom = math.lcm(lhs.denom, rhs.denom)
        la, _, _ = lhs._scaled(denom)
        rb, _, _ = rhs._scaled(denom)
        top = math.floor(bound * denom)
        for n in sorted(set(la) | set(rb)):
            if n > top:
                break
            expected = la.get(n, CyclotomicNumber.zero())
            actual = rb.get(n, CyclotomicNumber.zero())
            if expected != actual:
                return VerificationReport(
                    m, verified_to, "inconsistent",
                    first_failure=(Fraction(n, denom), expected, actual))
    return VerificationReport(m, verified_to, "consistent")


def _product_in_y(roots: list[PuiseuxSeries]) -> list[PuiseuxSeries]:
    """Coefficients in Y of prod (root - Y), ascending powers of Y."""
    coeffs: list[PuiseuxSeries] = [_constant_series(1)]
    for r in roots:
        shifted = [c * r for c in coeffs]           # r * old coefficients
        nxt = [shifted[0]]
        for t in range(1, len(coeffs)):
            nxt.append(shifted[t] - coeffs[t - 1])  # minus Y * old
        nxt.append(-coeffs[-1])
        coeffs = nxt
    return coeffs


def symmetry_check(poly: ModularPolynomial, generalised: bool = False) -> bool:
    """F(x, y) == F(y, x), or its sigma_m twist in the generalised case."""
    keys = set(poly.coeffs)
    keys |= {(j, i) for i, j in keys}
    for i, j in keys:
        left = poly.coefficient(i, j)
        right = poly.coefficient(j, i)
        if generalised:
            right = right.galois(poly.m)
        if left != right:
            return False
    return True


# -- mpoly v1 text format -----------------------------------------------------

def emit_mpoly(poly: ModularPolynomial) -> str:
    lines = [
        "# mpoly v1",
        f"order: {poly.m}",
        f"conductor: {poly.conductor}",
        f"degx: {poly.degx}",
        f"degy: {poly.degy}",
    ]
    for (i, j) in sorted(poly.coeffs):
        c = poly.coeffs[(i, j)]
        if c.is_zero():
            continue
        lines.append(f"{i} {j} {c.promote(poly.conductor).literal()}")
    return "\n".join(lines) + "\n"


def parse_mpoly(text: str) -> ModularPolynomial:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "# mpoly v1":
        raise ParseError("missing '# mpoly v1' magic line", line=1)
    headers = {}
    for i, key in enumerate(["order", "conductor", "degx", "degy"], start=1):
        if i >= len(lines) or not lines[i].startswith(key + ":"):
            raise ParseError(f"expected '{key}:' header", line=i + 1)
        try:
            headers[key] = int(lines[i][len(key) + 1:].strip())
        except ValueError as exc:
            raise ParseError(f"bad integer in '{key}' header", line=i + 1) from exc
    coeffs: dict[tuple[int, int], Coeff] = {}
    last: tuple[int, int] | None = None
    for idx, line in enumerate(lines[5:], start=6):
        parts = line.split(" ", 2)
        if len(parts) != 3:
            raise ParseError("expected '<i> <j> <coefficient>'", line=idx)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError("bad monomial exponents", line=idx) from exc
        if last is not None and (i, j) <= last:
            raise ParseError("monomials out of order or duplicated", line=idx)
        last = (i, j)
        if i < 0 or j < 0 or i > headers["degx"] or j > headers["degy"]:
            raise ParseError(f"monomial ({i},{j}) outside declared degrees", line=idx)
        c = parse_cyclotomic(parts[2], headers["conductor"])
        if c.is_zero():
            raise ParseError("explicit zero coefficient is not canonical", line=idx)
        coeffs[(i, j)] = c
    return ModularPolynomial(headers["order"], headers["conductor"], coeffs,
                             headers["degx"], headers["degy"])
