"""The Airy kernel A, its derivative, cumulative integral and Mellin data.

The kernel is normalized by

    A(x) = (1/2pi) \int e^{i x xi} e^{i xi^3} dxi,

which differs from the classical Airy function: substituting
xi -> 3^(-1/3) xi in the integral gives the rescaling identity

    A(x) = 3^(-1/3) Ai(3^(-1/3) x).

All evaluations route through this identity, so the nonstandard
normalization lives in exactly one place.  Closed-form anchors:
A(0) = 1/(3 Gamma(2/3)), A'(0) = -1/(3 Gamma(1/3)), int_0^inf A = 1/3,
and A'' (x) = (x/3) A(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

#: 3^(-1/3), the argument/value scaling between A and the classical Ai.
_SCALE = 3.0 ** (-1.0 / 3.0)

#: A(0) = 1/(3 Gamma(2/3))
A0 = 1.0 / (3.0 * special.gamma(2.0 / 3.0))

#: A'(0) = -1/(3 Gamma(1/3))
AP0 = -1.0 / (3.0 * special.gamma(1.0 / 3.0))

#: Largest |x| accepted; far beyond, A underflows or oscillates below interest.
XMAX = 1.0e4


@dataclass(frozen=True)
class AiryValue:
    """Value and derivative of the kernel at one abscissa."""

    a: float
    ap: float
    x: float


def airy(x: float) -> AiryValue:
    """Evaluate A(x) and A'(x)."""
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("airy: x must be finite")
    if abs(x) > XMAX:
        raise ValueError(f"airy: |x| <= {XMAX} required, got {x}")
    ai, aip, _, _ = special.airy(_SCALE * x)
    return AiryValue(a=_SCALE * ai, ap=_SCALE**2 * aip, x=x)


def airy_values(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (A, A') for kernel quadratures."""
    z = _SCALE * np.asarray(x, dtype=float)
    ai, aip, _, _ = special.airy(z)
    return _SCALE * ai, _SCALE**2 * aip


def airy_integral_tail(x: float) -> float:
    """int_x^inf A(y) dy; the x = 0 branch reproduces 1/3 exactly.

    Change of variable z = 3^(-1/3) y turns the tail into a tail of the
    classical Ai, whose cumulative integral scipy provides (itairy).
    """
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("airy_integral_tail: x must be finite")
    z = _SCALE * x
    if z >= 0:
        apt, _, _, _ = special.itairy(z)
        return 1.0 / 3.0 - float(apt)
    ant = float(special.itairy(-z)[2])  # int_0^{|z|} Ai(-s) ds
    return 1.0 / 3.0 + ant


def airy_mellin_left(lam: float) -> float:
    """int_0^inf x^(lam-1) A(-x) dx for 0 < lam < 1/4, in closed form.

    The Gamma(1/3 - lam/3) cos(2pi lam/3 - pi/6) product is rewritten via
    the reflection formula as 2pi cos(pi(1-lam)/3)/Gamma((2+lam)/3), which
    has no poles in the strip.
    """
    lam = float(lam)
    if not (0.0 < lam < 0.25):
        raise ValueError("airy_mellin_left: need 0 < lam < 1/4")
    return (2.0 / 3.0) * special.gamma(lam) * np.cos(np.pi * (1.0 - lam) / 3.0) \
        / special.gamma((2.0 + lam) / 3.0)


def airy_mellin_right(lam: float) -> float:
    """int_0^inf x^(lam-1) A(x) dx for lam > 0, in closed form.

    Equal to Gamma(lam) / (3 Gamma((lam+2)/3)); the rewriting removes the
    removable singularities at lam = 1, 4, 7, ... where the Gamma pole of
    the raw product is cancelled by the cosine zero.  At lam = 1 the value
    is 1/3, consistent with the cumulative integral.
    """
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("airy_mellin_right: need lam > 0")
    return special.gamma(lam) / (3.0 * special.gamma((lam + 2.0) / 3.0))
