"""Words in the two-generator braid group, their degree and projection to
SL2(Z), the multiplier character, the integral extended group of pairs
(matrix, n) with the Maslov-corrected law, and the quilt action on G x G.

Conventions fixed here:

  * the projection sends the first generator to ((1,1),(0,1)) and the
    second to ((1,0),(-1,1));
  * sigma_class encodes the four boundary cases (c = 0 and a > 0; c < 0;
    c = 0 and a < 0; c > 0) as 0, 1, 2, 3, and every extended element
    carries n with n = sigma_class (mod 4);
  * generator lifts take the minimal nonnegative n of their class: the
    first generator lifts with n = 0, the second with n = 1.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MaslovUndefined, ParseError, RequiresPositiveC
from .exactnum import CyclotomicNumber
from .matrices import IDENTITY, IntMatrix

# Fixed by the numeric multiplier-law selection: of the two candidate
# constants 1/2 and 1/4 in the closed eta-multiplier formula, only 1/4
# satisfies the weight-1/2 transformation law numerically.
DEFAULT_ETA_KAPPA = Fraction(1, 4)

BURAU_S1 = IntMatrix(1, 1, 0, 1)
BURAU_S2 = IntMatrix(1, 0, -1, 1)

_TOKEN_RE = re.compile(r"^s([12])(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    """Word in the two braid generators, stored freely reduced: adjacent
    letters use distinct generators and no exponent is zero."""

    letters: tuple[tuple[int, int], ...]

    @staticmethod
    def from_letters(letters: Iterable[tuple[int, int]]) -> BraidWord:
        reduced: list[tuple[int, int]] = []
        for gen, exp in letters:
            if gen not in (1, 2):
                raise ValueError(f"generator index {gen} not in {{1, 2}}")
            if exp == 0:
                continue
            if reduced and reduced[-1][0] == gen:
                merged = reduced[-1][1] + exp
                reduced.pop()
                if merged:
                    reduced.append((gen, merged))
            else:
                reduced.append((gen, exp))
        return BraidWord(tuple(reduced))

    @staticmethod
    def parse(text: str) -> BraidWord:
        """Whitespace-separated tokens ``s1``, ``s2``, ``s1^-3``, ``s2^2``.

        >>> BraidWord.parse("s1 s2^-3 s1^2").letters
        ((1, 1), (2, -3), (1, 2))
        >>> BraidWord.parse("s1 s1^-1").letters
        ()
        """
        letters = []
        for token in text.split():
            m = _TOKEN_RE.match(token)
            if not m:
                raise ParseError(f"bad braid token {token!r}")
            letters.append((int(m.group(1)), int(m.group(2)) if m.group(2) else 1))
        return BraidWord.from_letters(letters)

    @staticmethod
    def identity() -> BraidWord:
        return BraidWord(())

    def __mul__(self, other: BraidWord) -> BraidWord:
        return BraidWord.from_letters(self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> BraidWord:
        base = self if n >= 0 else self.inverse()
        out = BraidWord.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __str__(self) -> str:
        if not self.letters:
            return "<empty>"
        return " ".join(f"s{g}" if e == 1 else f"s{g}^{e}" for g, e in self.letters)


def degree(word: BraidWord) -> int:
    """Exponent sum; the homomorphism onto the integers."""
    return sum(e for _, e in word.letters)


def burau(word: BraidWord) -> IntMatrix:
    """Projection to SL2(Z) through the reduced, specialised generator images."""
    out = IDENTITY
    for gen, exp in word.letters:
        base = BURAU_S1 if gen == 1 else BURAU_S2
        out = out * base ** exp
    return out


def braid_multiplier(word: BraidWord) -> CyclotomicNumber:
    """The degree character evaluated at the primitive 24th root of unity."""
    return CyclotomicNumber.root_of_unity(24, degree(word) % 24)


def sigma_class(mat: IntMatrix) -> int:
    """Branch index of a unimodular matrix: 0, 1, 2, 3 according to
    c = 0 and a > 0; c < 0; c = 0 and a < 0; c > 0."""
    mat.require_unimodular()
    if mat.c == 0:
        return 0 if mat.a > 0 else 2
    return 1 if mat.c < 0 else 3


@dataclass(frozen=True)
class ExtendedElement:
    """Integral point (matrix, n) of the extended group; n tracks the branch
    winding and satisfies n = sigma_class(matrix) (mod 4)."""

    matrix: IntMatrix
    n: int

    def __post_init__(self):
        if self.n % 4 != sigma_class(self.matrix):
            raise ValueError(
                f"n = {self.n} incompatible with class {sigma_class(self.matrix)} "
                f"of {self.matrix}")


EXTENDED_IDENTITY = ExtendedElement(IDENTITY, 0)
LIFT_S1 = ExtendedElement(BURAU_S1, 0)
LIFT_S2 = ExtendedElement(BURAU_S2, 1)


def _maslov_correction(residue: int) -> int:
    residue %= 4
    if residue == 0:
        return 0
    if residue == 1:
        return 1
    if residue == 3:
        return -1
    raise MaslovUndefined("branch-count residue 2: no correction in {0, +-1} exists")


def extended_mul(x: ExtendedElement, y: ExtendedElement) -> ExtendedElement:
    """(A, m)(B, n) = (AB, m + n + tau) with tau in {0, +-1} fixed by the
    class congruence mod 4."""
    product = x.matrix * y.matrix
    residue = sigma_class(product) - sigma_class(x.matrix) - sigma_class(y.matrix)
    return ExtendedElement(product, x.n + y.n + _maslov_correction(residue))


def extended_inverse(x: ExtendedElement) -> ExtendedElement:
    inv = x.matrix.inverse()
    residue = -sigma_class(x.matrix) - sigma_class(inv)
    return ExtendedElement(inv, -x.n - _maslov_correction(residue))


def extended_pow(x: ExtendedElement, n: int) -> ExtendedElement:
    base = x if n >= 0 else extended_inverse(x)
    out = EXTENDED_IDENTITY
    for _ in range(abs(n)):
        out = extended_mul(out, base)
    return out


def lift_braid(word: BraidWord) -> ExtendedElement:
    """Lift of a braid word: generators go to their minimal-class pairs,
    inverses through the extended inverse, letters composed left to right.
    The matrix component always equals the plain projection."""
    out = EXTENDED_IDENTITY
    for gen, exp in word.letters:
        base = LIFT_S1 if gen == 1 else LIFT_S2
        out = extended_mul(out, extended_pow(base, exp))
    return out


# -- eta multiplier in closed form -------------------------------------------

def dedekind_sum(d: int, c: int) -> Fraction:
    """sum_{i=1}^{c-1} (i/c) * (d*i/c - floor(d*i/c) - 1/2), exactly."""
    total = Fraction(0)
    for i in range(1, c):
        frac = Fraction(d * i, c) - (d * i) // c
        total += Fraction(i, c) * (frac - Fraction(1, 2))
    return total


def eta_multiplier_phase(mat: IntMatrix, kappa: Fraction = DEFAULT_ETA_KAPPA) -> Fraction:
    """The rational r with multiplier exp(pi*i*r), reduced mod 2.

    Only defined for lower-left entry c > 0; ``kappa`` is the additive
    constant of the closed formula (1/4 passes the numeric law; the often
    quoted 1/2 does not)."""
    mat.require_unimodular()
    if mat.c <= 0:
        raise RequiresPositiveC("closed multiplier formula needs c > 0")
    r = (Fraction(mat.a + mat.d, 12 * mat.c) - Fraction(kappa)
         - dedekind_sum(mat.d, mat.c))
    return r % 2


def eta_multiplier_matrix(mat: IntMatrix, kappa: Fraction = DEFAULT_ETA_KAPPA) -> complex:
    """Unit-modulus multiplier exp(pi*i*((a+d)/12c - kappa - s(d, c)))."""
    return cmath.exp(1j * cmath.pi * float(eta_multiplier_phase(mat, kappa)))


# -- finite group tables and the quilt action ---------------------------------

@dataclass(frozen=True)
class GroupTable:
    """Finite group as a Cayley table.

    ``labels`` fixes the element order with the identity first; ``mul``
    holds index products mul[i][j] = index of (element i) * (element j).
    The constructor checks the table is a group (identity, inverses,
    associativity), so anything downstream may trust it.
    """

    labels: tuple[str, ...]
    mul: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("duplicate element labels")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise ValueError("multiplication table is not square")
        for i in range(n):
            if self.mul[0][i] != i or self.mul[i][0] != i:
                raise ValueError("element 0 is not a two-sided identity")
        for i in range(n):
            if 0 not in self.mul[i]:
                raise ValueError(f"element {self.labels[i]} has no inverse")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mul[self.mul[i][j]][k] != self.mul[i][self.mul[j][k]]:
                        raise ValueError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise KeyError(f"no element labelled {label!r}") from exc

    def product(self, i: int, j: int) -> int:
        return self.mul[i][j]

    def inverse(self, i: int) -> int:
        return self.mul[i].index(0)


def group_from_elements(elements: Sequence, compose, label_of) -> GroupTable:
    """Tabulate a group given abstract elements with element 0 the identity."""
    index = {e: i for i, e in enumerate(elements)}
    mul = tuple(
        tuple(index[compose(a, b)] for b in elements) for a in elements
    )
    return GroupTable(tuple(label_of(e) for e in elements), mul)


def cyclic_group(n: int) -> GroupTable:
    return group_from_elements(
        list(range(n)), lambda a, b: (a + b) % n,
        lambda k: "e" if k == 0 else f"g{k}" if k > 1 else "g")


def symmetric_group_3() -> GroupTable:
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    names = {(0, 1, 2): "e", (1, 0, 2): "(12)", (2, 1, 0): "(13)",
             (0, 2, 1): "(23)", (1, 2, 0): "(123)", (2, 0, 1): "(132)"}

    def compose(p, q):  # p after q
        return tuple(p[q[i]] for i in range(3))

    return group_from_elements(perms, compose, names.__getitem__)


def dihedral_group(n: int) -> GroupTable:
    """Dihedral group of order 2n: pairs (rotation, flip)."""
    elements = [(r, s) for s in (0, 1) for r in range(n)]

    def compose(x, y):
        r1, s1 = x
        r2, s2 = y
        return ((r1 + (r2 if s1 == 0 else -r2)) % n, s1 ^ s2)

    def label(e):
        r, s = e
        if s == 0:
            return "e" if r == 0 else f"r{r}"
        return "f" if r == 0 else f"r{r}f"

    return group_from_elements(elements, compose, label)


def parse_group_table(text: str) -> GroupTable:
    """Text Cayley table: ``order: n`` then n rows of n labels; the first
    row must be the identity row (it defines the element order)."""
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].startswith("order:"):
        raise ParseError("missing 'order: n' header", line=1)
    try:
        n = int(lines[0][len("order:"):].strip())
    except ValueError as exc:
        raise ParseError("bad order header") from exc
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} table rows, found {len(lines) - 1}")
    rows = [ln.split() for ln in lines[1:]]
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", line=i + 2)
    labels = tuple(rows[0])
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != n:
        raise ParseError("identity row does not list distinct elements", line=2)
    try:
        mul = tuple(tuple(index[entry] for entry in row) for row in rows)
    except KeyError as exc:
        raise ParseError(f"unknown label {exc.args[0]!r} in table") from exc
    try:
        return GroupTable(labels, mul)
    except ValueError as exc:
        raise ParseError(f"not a group table: {exc}") from exc


def emit_group_table(table: GroupTable) -> str:
    lines = [f"order: {table.order}"]
    for i in range(table.order):
        lines.append(" ".join(table.labels[table.mul[i][j]] for j in range(table.order)))
    return "\n".join(lines) + "\n"


_QUILT_GENERATORS = ("s1", "s2", "s1^-1", "s2^-1")


def quilt_step(pair: tuple[int, int], generator: str, table: GroupTable) -> tuple[int, int]:
    """One step of the right action on G x G:

        (g, h).s1 = (g, g h)        (g, h).s2 = (g h^-1, h)

    with the inverse generators inverting those bijections."""
    g, h = pair
    if generator == "s1":
        return (g, table.product(g, h))
    if generator == "s2":
        return (table.product(g, table.inverse(h)), h)
    if generator == "s1^-1":
        return (g, table.product(table.inverse(g), h))
    if generator == "s2^-1":
        return (table.product(g, h), h)
    raise ValueError(f"unknown quilt generator {generator!r}")


def quilt_orbit(pair: tuple[int, int], table: GroupTable) -> frozenset[tuple[int, int]]:
    """Closure of a pair under both generators and their inverses."""
    seen = {pair}
    frontier = [pair]
    while frontier:
        current = frontier.pop()
        for gen in _QUILT_GENERATORS:
            nxt = quilt_step(current, gen, table)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def quilt_orbits(table: GroupTable) -> list[frozenset[tuple[int, int]]]:
    """All orbits; a partition of G x G."""
    remaining = {(g, h) for g in range(table.order) for h in range(table.order)}
    orbits = []
    while remaining:
        orbit = quilt_orbit(next(iter(sorted(remaining))), table)
        orbits.append(orbit)
        remaining -= orbit
    return orbits
