"""Reference polynomials frozen from independent derivations.

GOLDEN_ORDER2 is the order-2 modular polynomial of the normalized j-series
q^-1 + 196884q + ..., in the product-form normalization (leading y^3
coefficient -1).  Its coefficients were derived three independent ways
(direct coset-product expansion, the classical order-2 polynomial of the
j-invariant shifted to zero constant term, and a rational linear solve
against the q-expansion) and agree exactly.
"""

from __future__ import annotations

from .exactnum import CyclotomicNumber
from .modeq import ModularPolynomial

_R = CyclotomicNumber.from_rational

GOLDEN_ORDER2 = ModularPolynomial(
    m=2,
    conductor=1,
    coeffs={
        (2, 2): _R(1),
        (3, 0): _R(-1),
        (0, 3): _R(-1),
        (1, 1): _R(-42987519),
        (2, 0): _R(-393768),
        (0, 2): _R(-393768),
        (1, 0): _R(-40491318744),
        (0, 1): _R(-40491318744),
        (0, 0): _R(121136760788544),
    },
    degx=3,
    degy=3,
)
