"""Exact two-state solutions for the three solvable channel pairs.

Each solver eliminates the four matching conditions at the coupling point
x_c = 0 by hand, returning the five amplitudes (incident normalized to
A = 1) and flux-normalized probabilities.  The linear case additionally
exposes the published transition-probability expression built from Airy
values, which the amplitude route must reproduce.

Amplitude roles follow the region solutions: A incident, B reflected in
channel 1, C channel-1 amplitude beyond the coupling point, D channel-2
amplitude on the incident side, F channel-2 amplitude on the far side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import specfun
from .model import (
    Constant,
    ProblemValidationError,
    ThresholdEnergyError,
    UseGenericMatcherError,
    classify_channel,
)

__all__ = [
    "TwoStateAmplitudes",
    "TransitionResult",
    "solve_constant_pair",
    "solve_linear_pair",
    "solve_exponential_pair",
    "linear_transition_printed",
]


@dataclass(frozen=True)
class TwoStateAmplitudes:
    a: complex
    b: complex
    c: complex
    d: complex
    f: complex


@dataclass(frozen=True)
class TransitionResult:
    """Flux-normalized probabilities; t_same is None for wall pairs."""

    t_cross: float
    r_back: float
    t_same: float | None
    flux_residual: float


def solve_constant_pair(v1: float, v2: float, coupling: float,
                        mass: float = 1.0, hbar: float = 1.0,
                        energy: float = 0.0):
    """Two constant channels coupled at x_c = 0.

    Channel 2 may be closed (v1 < E < v2), in which case the cross
    transition vanishes and the channel-2 amplitudes decay.
    """
    if coupling < 0.0:
        raise ProblemValidationError("coupling strength must be >= 0")
    st1 = classify_channel(Constant(v1), energy, mass, hbar, "left")
    if not st1.is_open:
        raise ProblemValidationError(
            f"no propagating incident wave: E = {energy:g} <= V1 = {v1:g}")
    st2 = classify_channel(Constant(v2), energy, mass, hbar, "left")
    k1 = st1.wavenumber
    K = coupling

    if st2.is_open:
        k2 = st2.wavenumber
        gamma = mass**2 * K**2 / (hbar**4 * k1 * k2)
        b = -gamma / (1.0 + gamma)
        c = 1.0 / (1.0 + gamma)
        d = -1j * K * mass / (hbar**2 * k2) * c
        f = d
        t_cross = 2.0 * (k2 / k1) * abs(d) ** 2
        r_back = abs(b) ** 2
        t_same = abs(c) ** 2
        resid = abs(1.0 - (r_back + t_same + t_cross))
        amps = TwoStateAmplitudes(1.0, complex(b), complex(c), d, f)
        return amps, TransitionResult(t_cross, r_back, t_same, resid)

    kappa2 = st2.decay
    gamma = K**2 * mass**2 / (hbar**4 * k1 * kappa2)
    c = 1.0 / (1.0 - 1j * gamma)
    b = 1j * gamma * c
    d = -K * mass / (hbar**2 * kappa2) * c
    f = d
    r_back = abs(b) ** 2
    t_same = abs(c) ** 2
    resid = abs(1.0 - (r_back + t_same))
    amps = TwoStateAmplitudes(1.0, b, c, d, f)
    return amps, TransitionResult(0.0, r_back, t_same, resid)


_CBRT2 = 2.0 ** (1.0 / 3.0)


def solve_linear_pair(p1: float, p2: float, coupling: float,
                      mass: float = 1.0, hbar: float = 1.0,
                      energy: float = 0.0):
    """V-shaped crossing +p1 x / -p2 x, closed forms for p1 = p2 = 1, m = hbar = 1.

    Other parameters have no published closed form; they raise
    UseGenericMatcherError and go through matcher.solve_star.
    """
    if coupling < 0.0:
        raise ProblemValidationError("coupling strength must be >= 0")
    if not (p1 == 1.0 and p2 == 1.0 and mass == 1.0 and hbar == 1.0):
        raise UseGenericMatcherError(
            "use generic matcher: closed linear-pair formulas assume "
            "p1 = p2 = 1, m = 1, hbar = 1")
    if energy <= 0.0:
        # crossing sits at V = 0; scans below it are not part of the model
        raise ProblemValidationError(f"energy must be > 0, got {energy:g}")

    alpha = _CBRT2
    pair = specfun.airy(-alpha * energy)
    a, b_ = pair.ai, pair.bi
    u = complex(a, b_)
    v = complex(a, -b_)
    K = coupling
    den = alpha**2 + 4.0 * math.pi**2 * K**2 * a**2 * v * v
    f = -4j * math.pi * a**2 * K * alpha / den
    c = 2.0 * alpha**2 / den
    d = -4j * math.pi * a * K * alpha * v / den
    b = (c * a - u) / v
    t_cross = abs(f) ** 2
    r_back = abs(b) ** 2
    resid = abs(1.0 - (r_back + t_cross))
    amps = TwoStateAmplitudes(1.0, b, c, d, f)
    return amps, TransitionResult(t_cross, r_back, None, resid)


def linear_transition_printed(energy: float) -> float:
    """Published transition probability for the linear pair at K = 1.

    T = 16 * 2^(2/3) |N/D|^2 with N, D the printed Airy combinations at
    argument -2^(1/3) E; anchors both the Airy implementation and the
    corrected region-1 solution (which must span Ai and Bi to carry flux).
    """
    s = -_CBRT2 * energy
    p = specfun.airy(s)
    a, b = p.ai, p.bi
    ap, bp = p.ai_prime, p.bi_prime
    c23 = 2.0 ** (2.0 / 3.0)
    num = a**2 * (-ap * b + a * bp)
    den = (-8j * a**3 * b + c23 * ap**2 * b**2 + 4.0 * a**4
           - 2.0 * c23 * a * ap * b * bp
           + a**2 * (-4.0 * b**2 + c23 * bp**2))
    return 16.0 * c23 * abs(num / den) ** 2


def solve_exponential_pair(v0: float, rate: float, coupling: float,
                           mass: float = 1.0, hbar: float = 1.0,
                           energy: float = 0.0):
    """Mirrored exponential walls V0 e^{ax} / V0 e^{-ax} coupled at x_c = 0.

    Region solutions are I_{+-i mu}(xi) and K_{i mu}(xi) with order
    mu = 2 sqrt(2mE)/(a hbar) and xi(0) = 2 sqrt(2 m V0)/(a hbar); the
    transition probability is flux-normalized via the exact I/K Wronskians.
    """
    if coupling < 0.0:
        raise ProblemValidationError("coupling strength must be >= 0")
    if v0 <= 0.0:
        raise ProblemValidationError(f"V0 must be > 0, got {v0:g}")
    if rate <= 0.0:
        raise UseGenericMatcherError(
            "use generic matcher: closed exponential-pair formulas assume "
            "rate a > 0 with the mirrored partner")
    if energy <= 0.0:
        raise ThresholdEnergyError(f"threshold energy: E = {energy:g} <= 0")

    a = rate
    mu = 2.0 * math.sqrt(2.0 * mass * energy) / (a * hbar)
    c_arg = 2.0 * math.sqrt(2.0 * mass * v0) / (a * hbar)
    ip = specfun.bessel_i_imag_order(mu, c_arg)
    im = ip.conjugate()                      # I_{-i mu}
    kv = specfun.bessel_k_imag_order(mu, c_arg)
    sh = math.sinh(math.pi * mu)
    g = 4.0 * mass * coupling / (hbar**2 * a)

    den = g**2 * im * im * kv**2 - 1.0
    f = -2j * sh * g * kv**2 / (math.pi * den)
    c = 2j * sh / (math.pi * den)
    d = -2j * sh * g * kv * im / (math.pi * den)
    b = (c * kv - ip) / im
    t_cross = abs(f) ** 2
    r_back = abs(b) ** 2
    resid = abs(1.0 - (r_back + t_cross))
    amps = TwoStateAmplitudes(1.0, b, c, d, f)
    return amps, TransitionResult(t_cross, r_back, None, resid)
