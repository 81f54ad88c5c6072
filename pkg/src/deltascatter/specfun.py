"""Special functions backing the exact channel solutions.

Self-contained double-precision implementations of

* real-argument Airy functions ``Ai, Bi, Ai', Bi'``,
* the Gamma function for complex argument (Lanczos approximation),
* modified Bessel functions of purely imaginary order ``I_{i mu}(x)`` and
  ``K_{i mu}(x)``.

The Airy pair is computed from the Maclaurin series in compensated
(double-double) arithmetic for |x| <= 9, which keeps the exponentially
small member of the pair at full relative accuracy through the
cancellation-heavy midrange, and from the standard asymptotic expansions
beyond.  ``I_{i mu}`` comes from its defining power series with the
complex Gamma recurrence; ``K_{i mu}`` from the reality-preserving
combination ``-pi * Im I_{i mu} / sinh(pi mu)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "AiryPair",
    "SpecfunRangeError",
    "GammaPoleError",
    "BranchPointError",
    "airy",
    "gamma_complex",
    "bessel_i_imag_order",
    "bessel_i_imag_order_prime",
    "bessel_k_imag_order",
    "bessel_k_imag_order_prime",
]


class SpecfunRangeError(ValueError):
    """Argument outside the validated range of an implementation."""


class GammaPoleError(ZeroDivisionError):
    """Gamma evaluated at a nonpositive integer."""


class BranchPointError(ValueError):
    """Bessel argument at or across the x = 0 branch point."""


@dataclass(frozen=True)
class AiryPair:
    """Values of Ai, Bi and their derivatives at a common real argument."""

    ai: float
    bi: float
    ai_prime: float
    bi_prime: float


# ----------------------------------------------------------------------
# double-double helpers (pairs (hi, lo) with value hi + lo)
# ----------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    t = _SPLITTER * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLITTER * b
    bhi = t - (t - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    return _quick_two_sum(s, e)


def _dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return _quick_two_sum(p, e)


def _dd_div_d(x: tuple[float, float], d: float) -> tuple[float, float]:
    q1 = x[0] / d
    p, e = _two_prod(q1, d)
    r = ((x[0] - p) - e) + x[1]
    return _quick_two_sum(q1, r / d)


def _dd_scale(x: tuple[float, float], d: float) -> tuple[float, float]:
    p, e = _two_prod(x[0], d)
    e += x[1] * d
    return _quick_two_sum(p, e)


# Ai(0), -Ai'(0) and sqrt(3) to double-double precision.
_AI0 = (0.3550280538878172, 2.05233632436212e-17)
_NEG_AIP0 = (0.2588194037928068, -2.522243111610832e-17)
_SQRT3 = (1.7320508075688772, 1.0035084221806903e-16)

_AIRY_SERIES_CUT = 9.0
_AIRY_MAX_ARG = 100.0


def _airy_series(x: float) -> AiryPair:
    """Maclaurin series for all four Airy values, double-double accumulation.

    f  = sum 3^k (1/3)_k x^{3k} / (3k)!     g  = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
    with Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g).
    """
    xdd = (x, 0.0)
    x2 = _dd_mul(xdd, xdd)
    x3 = _dd_mul(x2, xdd)

    f = (1.0, 0.0)
    g = xdd
    fp = (0.0, 0.0)            # f'
    gp = (1.0, 0.0)            # g'

    tf = (1.0, 0.0)            # term of f,  a_k x^{3k}
    tg = xdd                   # term of g,  b_k x^{3k+1}
    tfp = _dd_div_d(x2, 2.0)   # term of f', 3k a_k x^{3k-1}, k = 1
    tgp = (1.0, 0.0)           # term of g', (3k+1) b_k x^{3k}

    fp = _dd_add(fp, tfp)
    for k in range(80):
        tf = _dd_div_d(_dd_mul(tf, x3), (3 * k + 2) * (3 * k + 3))
        tg = _dd_div_d(_dd_mul(tg, x3), (3 * k + 3) * (3 * k + 4))
        # ratio (k+2)/(k+1) kept exact: scale by the integer, divide by the rest
        tfp = _dd_div_d(_dd_scale(_dd_mul(tfp, x3), float(k + 2)),
                        float((k + 1) * (3 * k + 5) * (3 * k + 6)))
        tgp = _dd_div_d(_dd_mul(tgp, x3), (3 * k + 1) * (3 * k + 3))
        f = _dd_add(f, tf)
        g = _dd_add(g, tg)
        fp = _dd_add(fp, tfp)
        gp = _dd_add(gp, tgp)
        if (abs(tf[0]) < 1e-35 * abs(f[0]) and abs(tg[0]) < 1e-35 * (abs(g[0]) + 1e-300)
                and abs(tfp[0]) < 1e-35 * (abs(fp[0]) + 1e-300)
                and abs(tgp[0]) < 1e-35 * abs(gp[0])):
            break

    c1f = _dd_mul(_AI0, f)
    c2g = _dd_mul(_NEG_AIP0, g)
    c1fp = _dd_mul(_AI0, fp)
    c2gp = _dd_mul(_NEG_AIP0, gp)

    ai = _dd_add(c1f, _dd_scale(c2g, -1.0))
    aip = _dd_add(c1fp, _dd_scale(c2gp, -1.0))
    bi = _dd_mul(_SQRT3, _dd_add(c1f, c2g))
    bip = _dd_mul(_SQRT3, _dd_add(c1fp, c2gp))
    return AiryPair(ai[0] + ai[1], bi[0] + bi[1], aip[0] + aip[1], bip[0] + bip[1])


def _asymptotic_coefficients(n: int) -> tuple[list[float], list[float]]:
    u = [1.0]
    v = [1.0]
    for k in range(n - 1):
        r = ((3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5)
             / (54.0 * (k + 1) * (k + 0.5)))
        u.append(u[-1] * r)
        v.append(u[-1] * (6 * (k + 1) + 1) / (1 - 6 * (k + 1)))
    return u, v


_U_COEF, _V_COEF = _asymptotic_coefficients(56)


def _asym_sum(coef: list[float], zeta: float, sign: int) -> float:
    """sum coef[k] * sign^k / zeta^k, truncated at the smallest term."""
    total = coef[0]
    term_prev = abs(coef[0])
    p = 1.0
    for k in range(1, len(coef)):
        p /= zeta
        term = coef[k] * p
        if abs(term) > term_prev:
            break
        total += term if sign > 0 or k % 2 == 0 else -term
        term_prev = abs(term)
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _asym_sum_pair(coef: list[float], zeta: float) -> tuple[float, float]:
    """Even/odd split sums P = sum (-1)^k c_{2k} z^{-2k}, Q = sum (-1)^k c_{2k+1} z^{-2k-1}."""
    p_tot, q_tot = 0.0, 0.0
    zp = 1.0
    best = math.inf
    for k in range(len(coef)):
        term = coef[k] * zp
        if abs(term) > best:
            break
        best = abs(term)
        sgn = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p_tot += sgn * term
        else:
            q_tot += sgn * term
        zp /= zeta
        if abs(term) < 1e-18:
            break
    return p_tot, q_tot


def _airy_asymptotic(x: float) -> AiryPair:
    sqrt_pi = math.sqrt(math.pi)
    if x > 0:
        zeta = (2.0 / 3.0) * x ** 1.5
        xq = x ** 0.25
        e_neg = math.exp(-zeta)
        e_pos = math.exp(zeta)
        ai = e_neg / (2.0 * sqrt_pi * xq) * _asym_sum(_U_COEF, zeta, -1)
        aip = -e_neg * xq / (2.0 * sqrt_pi) * _asym_sum(_V_COEF, zeta, -1)
        bi = e_pos / (sqrt_pi * xq) * _asym_sum(_U_COEF, zeta, +1)
        bip = e_pos * xq / sqrt_pi * _asym_sum(_V_COEF, zeta, +1)
        return AiryPair(ai, bi, aip, bip)
    y = -x
    zeta = (2.0 / 3.0) * y ** 1.5
    yq = y ** 0.25
    theta = zeta - 0.25 * math.pi
    c, s = math.cos(theta), math.sin(theta)
    pu, qu = _asym_sum_pair(_U_COEF, zeta)
    pv, qv = _asym_sum_pair(_V_COEF, zeta)
    ai = (c * pu + s * qu) / (sqrt_pi * yq)
    bi = (-s * pu + c * qu) / (sqrt_pi * yq)
    aip = (s * pv - c * qv) * yq / sqrt_pi
    bip = (c * pv + s * qv) * yq / sqrt_pi
    return AiryPair(ai, bi, aip, bip)


def airy(x: float) -> AiryPair:
    """Ai, Bi, Ai', Bi' at real x, validated on |x| <= 100.

    Raises
    ------
    SpecfunRangeError
        If |x| > 100 (Bi overflows well beyond; range pinned by validation).
    """
    if not math.isfinite(x):
        raise SpecfunRangeError("out of validated range: argument not finite")
    if abs(x) > _AIRY_MAX_ARG:
        raise SpecfunRangeError(f"out of validated range: |x| = {abs(x)} > {_AIRY_MAX_ARG}")
    if abs(x) <= _AIRY_SERIES_CUT:
        return _airy_series(x)
    return _airy_asymptotic(x)


# ----------------------------------------------------------------------
# complex Gamma
# ----------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_complex(z: complex) -> complex:
    """Gamma(z) for complex z via a Lanczos approximation (g = 7, 9 terms).

    Accurate to ~1e-13 relative on the tested domain |z| <= 10; the
    reflection formula covers Re z < 1/2.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real == math.floor(z.real) and z.real <= 0.0:
        raise GammaPoleError(f"gamma pole at z = {z.real:g}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = complex(_LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


# ----------------------------------------------------------------------
# modified Bessel functions of imaginary order
# ----------------------------------------------------------------------

_BESSEL_MAX_ORDER = 50.0
_BESSEL_MAX_ARG = 60.0
_K_ORDER_FLOOR = 1e-5  # mu -> 0 limit taken by evaluating at this order

# 40-point Gauss-Legendre rule on [-1, 1], generated once.
_GL_NODES, _GL_WEIGHTS = None, None


def _gauss_legendre() -> tuple:
    global _GL_NODES, _GL_WEIGHTS
    if _GL_NODES is None:
        import numpy as np

        _GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)
    return _GL_NODES, _GL_WEIGHTS


def _k_integral(mu: float, x: float, derivative: bool) -> float:
    """K_{i mu}(x) = int_0^inf exp(-x cosh t) cos(mu t) dt by panelled quadrature.

    The derivative picks up a -cosh(t) factor.  Panel widths keep at most
    ~0.5 radian of the cos(mu t) oscillation per 40-point panel.
    """
    import numpy as np

    nodes, weights = _gauss_legendre()
    t_max = math.acosh(1.0 + 48.0 / x)
    n_panels = max(4, int(math.ceil(t_max * max(abs(mu), 1.0) / 3.0)))
    edges = np.linspace(0.0, t_max, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    ch = np.cosh(t)
    f = np.exp(-x * ch) * np.cos(mu * t)
    if derivative:
        f = -f * ch
    return float(np.dot(w, f))


def _check_bessel_domain(mu: float, x: float) -> None:
    if x <= 0.0:
        raise BranchPointError(f"branch point: x = {x:g} <= 0")
    if abs(mu) > _BESSEL_MAX_ORDER or x > _BESSEL_MAX_ARG:
        raise SpecfunRangeError(
            f"out of validated range: need |mu| <= {_BESSEL_MAX_ORDER:g}"
            f" and x <= {_BESSEL_MAX_ARG:g}, got mu = {mu:g}, x = {x:g}")


def _bessel_i_series(nu: complex, x: float, max_terms: int = 400) -> complex:
    """I_nu(x) = sum_j (x/2)^{2j+nu} / (j! Gamma(j+1+nu)) for complex order."""
    half = 0.5 * x
    gam = gamma_complex(1.0 + nu)
    term = 1.0 / gam
    total = term
    h2 = half * half
    for j in range(1, max_terms):
        term *= h2 / (j * (j + nu))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total * cmath.exp(nu * math.log(half))


def bessel_i_imag_order(mu: float, x: float) -> complex:
    """I_{i mu}(x) for real mu and x > 0.

    Validated for |mu| <= 50, 0 < x <= 60.  Conjugation symmetry
    I_{-i mu}(x) = conj(I_{i mu}(x)) holds to machine precision.
    """
    _check_bessel_domain(mu, x)
    return _bessel_i_series(complex(0.0, mu), x)


def bessel_i_imag_order_prime(mu: float, x: float) -> complex:
    """d/dx I_{i mu}(x), from I'_nu = I_{nu+1} + (nu/x) I_nu."""
    _check_bessel_domain(mu, x)
    nu = complex(0.0, mu)
    return _bessel_i_series(nu + 1.0, x) + (nu / x) * _bessel_i_series(nu, x)


def _bessel_k(mu: float, x: float, derivative: bool) -> float:
    """Route K_{i mu} between its two computations by estimated error.

    The combination route -pi Im I_{i mu} / sinh(pi mu) loses e^{2x} digits
    at large argument (Im I is exponentially small against |I|); the
    integral route loses e^{pi mu / 2} digits at large order (oscillatory
    cancellation).  Each error scale is cheap to bound, so pick per call.
    K is even in mu; the mu -> 0 limit of the combination is taken at the
    fixed small order 1e-5 (the integral route has no limit issue at all).
    """
    mu_eff = max(abs(mu), _K_ORDER_FLOOR)
    w = _bessel_i_series(complex(0.0, mu_eff), x)
    sh = math.sinh(math.pi * mu_eff)
    t_max = math.acosh(1.0 + 48.0 / x)
    err_combination = math.pi * abs(w) / sh
    err_integral = 2.0 * t_max * math.exp(-x)
    if err_combination < err_integral:
        if derivative:
            nu = complex(0.0, mu_eff)
            w = _bessel_i_series(nu + 1.0, x) + (nu / x) * w
        return -math.pi * w.imag / sh
    return _k_integral(abs(mu), x, derivative)


def bessel_k_imag_order(mu: float, x: float) -> float:
    """K_{i mu}(x), real for real mu and x > 0.

    Validated for |mu| <= 50, 0 < x <= 60; full double accuracy for
    |mu| <~ 12, degrading smoothly near x ~ pi mu / 4 for larger orders.
    """
    _check_bessel_domain(mu, x)
    return _bessel_k(mu, x, derivative=False)


def bessel_k_imag_order_prime(mu: float, x: float) -> float:
    """d/dx K_{i mu}(x) on the same two routes as the value."""
    _check_bessel_domain(mu, x)
    return _bessel_k(mu, x, derivative=True)
