"""Green's-function route: bare kernels, point-coupling composition, extraction.

A bare kernel for one uncoupled channel is G(x, x') =
(2m/hbar^2) u_<(x_<) u_>(x_>) / W[u_<, u_>], with u_< the physically
acceptable solution toward -inf (outgoing or decaying), u_> toward +inf,
and W their (constant) Wronskian.  A spoke at x_n with strength K dresses
the hub kernel as

    G -> G + K^2 G(., x_n) G_n(x_n, x_n) G(x_n, .) / (1 - K^2 G(x_n, x_n) G_n(x_n, x_n)),

folded once per spoke; the result is independent of the folding order.
Wavefunctions follow from psi_1 = psi_0 + G U psi_0 with the energy-dependent
contact potential U = sum_n K_n^2 G_n(x_n, x_n) delta(x - x_n), and spoke
waves from psi_n(x) = K_n G_n(x, x_n) psi_1(x_n).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .matcher import BasisSolution, build_basis
from .model import (
    Constant,
    DefectiveBasisError,
    GreensPoleError,
    ProblemValidationError,
    ScatteringSolution,
    StarProblem,
    classify_channel,
    validate_problem,
)

__all__ = ["GreenFn", "bare_green", "compose_two_state", "compose_chain",
           "solve_composed", "extract_solution"]


class GreenFn:
    """Evaluable two-point kernel G(x, x'; E) with construction metadata."""

    construction = "abstract"

    def evaluate(self, x: float, xp: float) -> complex:
        raise NotImplementedError


class _BareGreen(GreenFn):
    construction = "bare"

    def __init__(self, spec, energy, mass, hbar, u_minus: BasisSolution,
                 u_plus: BasisSolution, wronskian: complex):
        if abs(wronskian) < 1e-300:
            raise DefectiveBasisError("defective basis: zero Wronskian")
        self.spec = spec
        self.energy = energy
        self.mass = mass
        self.hbar = hbar
        self.u_minus = u_minus
        self.u_plus = u_plus
        self.wronskian = wronskian
        self.strength = (2.0 * mass / hbar**2) / wronskian

    def evaluate(self, x: float, xp: float) -> complex:
        lo, hi = (x, xp) if x <= xp else (xp, x)
        return self.strength * self.u_minus.value_at(lo) * self.u_plus.value_at(hi)


class _DressedGreen(GreenFn):
    def __init__(self, base: GreenFn, spoke_cc: complex, strength: float,
                 position: float, construction: str):
        self.base = base
        self.spoke_cc = spoke_cc
        self.coupling = strength
        self.position = position
        self.construction = construction
        gxx = base.evaluate(position, position)
        self.denominator = 1.0 - strength**2 * gxx * spoke_cc
        self.level = getattr(base, "level", 1) + 1

    def evaluate(self, x: float, xp: float) -> complex:
        g = self.base.evaluate
        xn = self.position
        corr = (self.coupling**2 * g(x, xn) * self.spoke_cc * g(xn, xp)
                / self.denominator)
        return g(x, xp) + corr


def _acceptable(spec, energy, mass, hbar, side) -> BasisSolution:
    """The physically acceptable basis on one side: outgoing if open."""
    bases = build_basis(spec, energy, mass, hbar, side)
    if len(bases) == 1:
        return bases[0]
    for b in bases:
        if b.role == "outgoing":
            return b
    raise DefectiveBasisError("defective basis: no acceptable solution")


def _analytic_wronskian(spec, energy, mass, hbar) -> complex:
    """W[u_minus, u_plus], exact per potential kind (position independent)."""
    if isinstance(spec, Constant):
        st = classify_channel(spec, energy, mass, hbar, "left")
        if st.is_open:
            return 2j * st.wavenumber
        return complex(-2.0 * st.decay)
    kind = spec.kind
    if kind == "linear":
        alpha = (2.0 * mass * abs(spec.slope) / hbar**2) ** (1.0 / 3.0)
        return 1j * alpha / math.pi
    if kind == "exponential":
        return complex(-abs(spec.rate) / 2.0)
    raise ProblemValidationError(f"unknown potential kind: {spec!r}")


def bare_green(spec, energy: float, mass: float = 1.0,
               hbar: float = 1.0) -> GreenFn:
    """Outgoing-wave Green's function of one uncoupled channel.

    Constant open channels give -i m/(hbar^2 k) e^{i k |x - x'|}; walls use
    the Airy / Bessel acceptable pairs with their exact Wronskians.
    """
    u_minus = _acceptable(spec, energy, mass, hbar, "left")
    u_plus = _acceptable(spec, energy, mass, hbar, "right")
    w = _analytic_wronskian(spec, energy, mass, hbar)
    return _BareGreen(spec, energy, mass, hbar, u_minus, u_plus, w)


def compose_two_state(g1: GreenFn, g2: GreenFn, coupling: float,
                      position: float) -> GreenFn:
    """Dress the channel-1 kernel with a single spoke (two-state closure)."""
    g2cc = g2.evaluate(position, position)
    dressed = _DressedGreen(g1, g2cc, coupling, position, "two_state_composed")
    if abs(dressed.denominator) <= 1e-12:
        raise GreensPoleError(
            f"pole of composed Green's function at x_c = {position:g}")
    return dressed


def compose_chain(hub: GreenFn, spokes) -> GreenFn:
    """Fold spokes [(green, K, x), ...] into the hub kernel one at a time."""
    g = hub
    for stage, (spoke, strength, position) in enumerate(spokes, start=2):
        scc = spoke.evaluate(position, position)
        g = _DressedGreen(g, scc, strength, position, "chain_composed")
        if abs(g.denominator) <= 1e-12:
            raise GreensPoleError(f"pole at stage {stage}")
    return g


# ----------------------------------------------------------------------
# wavefunction and probability extraction
# ----------------------------------------------------------------------


def _free_solution(spec, energy, mass, hbar, incident_side):
    """Unit-incident solution of the uncoupled hub channel.

    Returns (psi0 callable, r0 reflected coefficient, t0 far outgoing
    coefficient or None, far_open flag).
    """
    far_side = "right" if incident_side == "left" else "left"
    far = classify_channel(spec, energy, mass, hbar, far_side)
    inc_bases = build_basis(spec, energy, mass, hbar, incident_side)
    u_in = next(b for b in inc_bases if b.role == "incoming")
    u_out = next(b for b in inc_bases if b.role == "outgoing")

    if far.is_open:
        if not isinstance(spec, Constant):
            raise ProblemValidationError(
                "hub open on both sides must be a constant channel")
        return u_in.value_at, 0.0, 1.0, True, u_in, u_out

    u_reg = build_basis(spec, energy, mass, hbar, far_side)[0]
    x1, x2 = _probe_points(spec, energy, mass, hbar, incident_side, 0.0)
    m = np.array([[u_in.value_at(x1), u_out.value_at(x1)],
                  [u_in.value_at(x2), u_out.value_at(x2)]], dtype=complex)
    rhs = np.array([u_reg.value_at(x1), u_reg.value_at(x2)], dtype=complex)
    alpha, beta = np.linalg.solve(m, rhs)

    def psi0(x: float) -> complex:
        return u_reg.value_at(x) / alpha

    return psi0, complex(beta / alpha), None, False, u_in, u_out


def _probe_points(spec, energy, mass, hbar, side, edge):
    """Two sample points in the outer open region, a quarter wavelength apart."""
    step = -1.0 if side == "left" else 1.0
    x1 = edge + step
    for _ in range(200):
        if energy - spec.value(x1) > 0.1 * max(1.0, abs(energy)):
            break
        x1 += step
    k_loc = math.sqrt(2.0 * mass * (energy - spec.value(x1))) / hbar
    x2 = x1 + step * 0.5 * math.pi / k_loc
    return x1, x2


def _outgoing_coefficient(f, u_out, u_in, x1, x2):
    """Coefficients (beta on u_out, gamma on u_in) of f in the outer region."""
    m = np.array([[u_out.value_at(x1), u_in.value_at(x1)],
                  [u_out.value_at(x2), u_in.value_at(x2)]], dtype=complex)
    rhs = np.array([f(x1), f(x2)], dtype=complex)
    beta, gamma = np.linalg.solve(m, rhs)
    return complex(beta), complex(gamma)


def extract_solution(g: GreenFn, problem: StarProblem) -> ScatteringSolution:
    """Wavefunction and flux-normalized probabilities from a composed kernel.

    psi_1 = psi_0 + sum_n c_n G(., x_n) psi_0(x_n) with
    c_n = K_n^2 G_n(x_n, x_n); spoke waves psi_n = K_n G_n(., x_n) psi_1(x_n).
    Requires incidence in the hub channel.
    """
    validate_problem(problem)
    if problem.incident.channel != 1:
        raise ProblemValidationError(
            "greens extraction requires incidence in the hub channel")
    E, m, hb = problem.energy, problem.mass, problem.hbar
    hub_spec = problem.channels[0]
    side = problem.incident.side
    far_side = "right" if side == "left" else "left"

    spoke_greens = [bare_green(spec, E, m, hb) for spec in problem.channels[1:]]
    positions = [cp.position for cp in problem.couplings]
    strengths = [cp.strength for cp in problem.couplings]
    weights = [K**2 * sg.evaluate(x, x)
               for sg, K, x in zip(spoke_greens, strengths, positions)]

    psi0, r0, t0, far_open, u_in, u_out = _free_solution(hub_spec, E, m, hb, side)
    psi0_at = [psi0(x) for x in positions]

    def scattered(x: float) -> complex:
        return sum(w * g.evaluate(x, xn) * p0
                   for w, xn, p0 in zip(weights, positions, psi0_at))

    def psi1(x: float) -> complex:
        return psi0(x) + scattered(x)

    edge_left = min(positions)
    edge_right = max(positions)
    amplitudes = {}

    # reflected amplitude on the incident side
    inc_edge = edge_left if side == "left" else edge_right
    x1, x2 = _probe_points(hub_spec, E, m, hb, side, inc_edge)
    beta, _ = _outgoing_coefficient(scattered, u_out, u_in, x1, x2)
    b_amp = r0 + beta
    amplitudes[f"ch1:{side}:outgoing"] = b_amp
    j_in = abs(u_in.flux)
    r_back = abs(b_amp) ** 2 * abs(u_out.flux) / j_in

    t_same = None
    if far_open:
        far_bases = build_basis(hub_spec, E, m, hb, far_side)
        fu_in = next(b for b in far_bases if b.role == "incoming")
        fu_out = next(b for b in far_bases if b.role == "outgoing")
        far_edge = edge_right if far_side == "right" else edge_left
        y1, y2 = _probe_points(hub_spec, E, m, hb, far_side, far_edge)
        fbeta, _ = _outgoing_coefficient(scattered, fu_out, fu_in, y1, y2)
        c_amp = t0 + fbeta
        amplitudes[f"ch1:{far_side}:outgoing"] = c_amp
        t_same = abs(c_amp) ** 2 * abs(fu_out.flux) / j_in

    t_cross = {}
    for idx, (sg, K, xn) in enumerate(zip(spoke_greens, strengths, positions)):
        chan = idx + 2
        psi1_xn = psi1(xn)
        f_amp = K * psi1_xn * sg.strength * sg.u_minus.value_at(xn)
        d_amp = K * psi1_xn * sg.strength * sg.u_plus.value_at(xn)
        amplitudes[f"ch{chan}:right:{sg.u_plus.role}"] = f_amp
        amplitudes[f"ch{chan}:left:{sg.u_minus.role}"] = d_amp
        t_cross[chan] = (abs(f_amp) ** 2 * abs(sg.u_plus.flux)
                         + abs(d_amp) ** 2 * abs(sg.u_minus.flux)) / j_in

    total = r_back + (t_same or 0.0) + sum(t_cross.values())
    return ScatteringSolution(
        amplitudes=amplitudes,
        r_back=r_back,
        t_same=t_same,
        t_cross=t_cross,
        flux_residual=abs(1.0 - total),
        route="greens",
    )


def solve_composed(problem: StarProblem) -> ScatteringSolution:
    """Compose the full kernel for a star problem and extract probabilities."""
    validate_problem(problem)
    E, m, hb = problem.energy, problem.mass, problem.hbar
    hub = bare_green(problem.channels[0], E, m, hb)
    spokes = [(bare_green(spec, E, m, hb), cp.strength, cp.position)
              for spec, cp in zip(problem.channels[1:], problem.couplings)]
    g = compose_chain(hub, spokes)
    return extract_solution(g, problem)
