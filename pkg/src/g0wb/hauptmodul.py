"""Screening of formal series: degenerate (fiction) patterns, multi-order
modular-equation testing, coefficient bootstrap from a known modular
polynomial, replication recursions, and congruence-subgroup membership.

The classifier deliberately never asserts "is a Hauptmodul": the invariance
group of a truncated series is not computable, so the strongest positive
verdict is "candidate to the tested depth".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    BootstrapStalled,
    ExpressFailure,
    Inconsistent,
    InsufficientSeed,
    InsufficientTruncation,
    NotInvariant,
    ShapeError,
)
from .exactnum import CyclotomicNumber
from .matrices import IntMatrix
from .modeq import (
    ModularPolynomial,
    VerificationReport,
    build_modular_polynomial,
    psi,
    verify_modular_equation,
)
from .qseries import PuiseuxSeries, substitute_coset

_KNOWN = 10**9


@dataclass(frozen=True)
class Classification:
    """Verdict of the degenerate-vs-candidate screen.

    ``fiction_xi`` is present exactly for the fiction verdict, and is then
    zero or a root of unity; ``orders_tested`` pairs each tested order with
    its verification report.
    """

    verdict: str  # fiction | hauptmodul-candidate | inconsistent | undetermined
    fiction_xi: CyclotomicNumber | None = None
    orders_tested: tuple[tuple[int, VerificationReport], ...] = ()
    notes: str = ""


def detect_fiction(h: PuiseuxSeries) -> CyclotomicNumber | None:
    """The q-coefficient xi when h is exactly q^-1 + xi*q on its determined
    range (all other coefficients zero); None otherwise.

    Root-of-unity status of the returned value is the caller's business:
    the degenerate solutions have xi = 0 or xi a 24th root of unity.
    """
    if not h.is_moonshine_shape():
        raise ShapeError("fiction detection needs q^-1 + O(q) input")
    if h.trunc < 2:
        raise InsufficientTruncation(
            "fiction detection needs the series determined through q^2", required=2)
    if set(h.coeffs) - {-1, 1}:
        return None
    return h.coefficient(1)


def _is_admissible_xi(xi: CyclotomicNumber) -> bool:
    return xi.is_zero() or (xi ** 24) == CyclotomicNumber.one()


def classify(h: PuiseuxSeries, orders: Iterable[int]) -> Classification:
    """Screen h: degenerate pattern first, then one modular-equation
    construction and verification per requested order.

    All orders consistent -> candidate (to the tested depth); any failed
    construction or verification -> inconsistent; not enough coefficients
    for some order -> undetermined, with the required depth in the notes.
    """
    if not h.is_moonshine_shape():
        raise ShapeError("classification needs q^-1 + O(q) input")
    xi = detect_fiction(h)
    if xi is not None and _is_admissible_xi(xi):
        return Classification(
            verdict="fiction", fiction_xi=xi,
            notes=f"series is exactly q^-1 + ({xi.literal()})q on its determined range")
    notes: list[str] = []
    if xi is not None:
        notes.append(
            f"two-term series with xi = {xi.literal()}: xi^24 != 1, not a degenerate solution")
    reports: list[tuple[int, VerificationReport]] = []
    order_list = sorted(set(int(m) for m in orders))
    for m in order_list:
        reports.append((m, _test_order(h, m, notes)))
    statuses = [r.status for _, r in reports]
    if any(s == "inconsistent" for s in statuses):
        verdict = "inconsistent"
    elif any(s == "insufficient-data" for s in statuses):
        verdict = "undetermined"
    elif statuses:
        verdict = "hauptmodul-candidate"
        notes.append(
            f"consistent at orders {order_list} to the tested depth; "
            "no claim beyond that depth")
    else:
        verdict = "undetermined"
        notes.append("no orders requested")
    return Classification(verdict=verdict, fiction_xi=None,
                          orders_tested=tuple(reports), notes="; ".join(notes))


def _test_order(h: PuiseuxSeries, m: int, notes: list[str]) -> VerificationReport:
    try:
        poly = build_modular_polynomial(h, m)
    except InsufficientTruncation as exc:
        notes.append(f"order {m}: need input determined through q^{exc.required}")
        return VerificationReport(m, h.trunc_exponent(), "insufficient-data")
    except NotInvariant as exc:
        e = exc.exponent if exc.exponent is not None else Fraction(0)
        c = exc.coefficient if exc.coefficient is not None else CyclotomicNumber.zero()
        notes.append(f"order {m}: {exc}")
        return VerificationReport(
            m, h.trunc_exponent(), "inconsistent",
            first_failure=(Fraction(e), CyclotomicNumber.zero(), c))
    except ExpressFailure as exc:
        residual = exc.residual
        e = residual.min_nonzero_exponent() if residual is not None else Fraction(0)
        c = (residual.coefficient(e) if residual is not None and e is not None
             else CyclotomicNumber.zero())
        notes.append(f"order {m}: {exc}")
        return VerificationReport(
            m, h.trunc_exponent(), "inconsistent",
            first_failure=(Fraction(e), CyclotomicNumber.zero(), c))
    return verify_modular_equation(h, poly, m)


def bootstrap_extend(h_prefix: PuiseuxSeries, poly: ModularPolynomial, m: int,
                     target: int) -> PuiseuxSeries:
    """Extend a series prefix to q^target using its order-m polynomial.

    Writes G = F(h(tau), h(m*tau)) and solves G = 0 exponent by exponent:
    with coefficients a_1..a_(n-1) fixed, a_n enters G linearly through
    q^n * dF/dx + q^(mn) * dF/dy, and the lowest exponent where that linear
    form is nonzero pins a_n.  Every already-determined coefficient of G
    below that exponent must vanish, else no extension exists.  The result
    is re-verified against the polynomial in full before being returned.
    """
    if not h_prefix.is_moonshine_shape():
        raise ShapeError("bootstrap needs a q^-1 + O(q) seed")
    if poly.degx != psi(m) or poly.degy != psi(m):
        raise ValueError(f"polynomial degrees != psi({m})")
    if target <= h_prefix.trunc:
        return h_prefix.truncate(target)
    d_dx = poly.derivative("x")
    d_dy = poly.derivative("y")
    known: dict[int, CyclotomicNumber] = dict(h_prefix.coeffs)
    start = h_prefix.trunc + 1
    checked_below: Fraction | None = None
    for n in range(start, target + 1):
        h0 = PuiseuxSeries.make(known, trunc=n, conductor=h_prefix.conductor)
        y0 = substitute_coset(h0, m, 1, 0)
        linear = (_shift(d_dx.evaluate(h0, y0), n)
                  + _shift(d_dy.evaluate(h0, y0), m * n))
        pivot = linear.min_nonzero_exponent()
        if pivot is None:
            raise BootstrapStalled(
                f"linear coefficient of a_{n} vanishes on the determined range")
        value = poly.evaluate(h0, y0)
        if value.trunc_exponent() < pivot:
            raise InsufficientSeed(
                f"seed determines the relation only through q^{value.trunc_exponent()}, "
                f"need q^{pivot} to solve for a_{n}")
        for e_num, c in sorted(value.coeffs.items()):
            e = Fraction(e_num, value.denom)
            if e >= pivot:
                break
            if checked_below is not None and e < checked_below:
                continue
            if not c.is_zero():
                raise Inconsistent(
                    f"relation already fails at q^{e} (coefficient {c}) "
                    f"before a_{n} can act")
        checked_below = pivot
        c1 = linear.coefficient(pivot)
        c0 = value.coefficient(pivot)
        a_n = -(c0 / c1)
        if not a_n.is_zero():
            known[n] = a_n
    result = PuiseuxSeries.make(known, trunc=target, conductor=h_prefix.conductor)
    report = verify_modular_equation(result, poly, m)
    if report.status != "consistent":
        raise Inconsistent(
            f"extended series fails re-verification: {report.status} "
            f"at {report.first_failure}")
    return result


def _shift(series: PuiseuxSeries, by: int) -> PuiseuxSeries:
    return series * PuiseuxSeries.monomial(by, _KNOWN)


def check_replication(a: PuiseuxSeries, b: PuiseuxSeries, k: int) -> bool:
    """The coefficient recursion tying a series to its square-image series:

        c_{4k+2}(a) = c_{2k+2}(b) + sum_{j=1}^{k} c_j(b) * c_{2k+1-j}(b)

    checked exactly in the coefficient ring.
    """
    if k < 1:
        raise ValueError("replication index k must be >= 1")
    if a.trunc_exponent() < 4 * k + 2:
        raise InsufficientTruncation(
            f"left series needs depth {4*k + 2}", required=4 * k + 2)
    if b.trunc_exponent() < 2 * k + 2:
        raise InsufficientTruncation(
            f"square-image series needs depth {2*k + 2}", required=2 * k + 2)
    rhs = b.coefficient(2 * k + 2)
    for j in range(1, k + 1):
        rhs = rhs + b.coefficient(j) * b.coefficient(2 * k + 1 - j)
    return a.coefficient(4 * k + 2) == rhs


def congruence_membership(mat: IntMatrix, level: int, flavor: str) -> bool:
    """Membership in the principal congruence group or its two standard
    relatives at the given level.

    full:   A = +-I mod N.
    gamma0: N | c.
    gamma1: the group generated by the full level-N group and the unit
            translation; decided by the closed congruence N | c with
            a = d = +-1 mod N (matching signs).
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    mat.require_unimodular()
    a, b, c, d = mat.entries()
    if flavor == "full":
        plus = (a - 1) % level == 0 and (d - 1) % level == 0
        minus = (a + 1) % level == 0 and (d + 1) % level == 0
        offdiag = b % level == 0 and c % level == 0
        return offdiag and (plus or minus)
    if flavor == "gamma0":
        return c % level == 0
    if flavor == "gamma1":
        if c % level != 0:
            return False
        plus = (a - 1) % level == 0 and (d - 1) % level == 0
        minus = (a + 1) % level == 0 and (d + 1) % level == 0
        return plus or minus
    raise ValueError(f"unknown flavor {flavor!r} (full, gamma0, gamma1)")
