"""Generic star boundary-condition matcher.

Builds the linear system expressing continuity of every channel
wavefunction at its coupling points together with the delta-induced
derivative jumps

    -(hbar^2 / 2m) [psi_1'] + sum_n K_n psi_n(x_n) = 0      (hub)
    -(hbar^2 / 2m) [psi_n'] + K_n psi_1(x_n)      = 0      (spoke n)

over exact analytic region bases (plane waves, Airy pairs, imaginary-order
Bessel functions), and solves it by dense LU.  Works for any mix of
potential kinds, any N >= 2, and distinct coupling points (the hub then
acquires interior regions).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import specfun
from .model import (
    ChannelStatus,
    Constant,
    CouplingPoint,
    Exponential,
    Incident,
    Linear,
    PotentialSpec,
    ProblemValidationError,
    ScatteringSolution,
    SingularSystemError,
    StarProblem,
    classify_channel,
    validate_problem,
)

__all__ = ["BasisSolution", "MatchSystem", "build_basis", "assemble",
           "assemble_homogeneous", "solve_star"]

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class BasisSolution:
    """One exact solution of an uncoupled channel on one region.

    ``flux`` is the probability current (hbar/m) Im(psi* psi') carried by
    the unit-amplitude basis, signed positive rightward; it comes from the
    exact Wronskian of the underlying special-function pair, so it is
    position independent.  Zero for decaying / zero-flux-regular roles.
    """

    role: str             # incoming | outgoing | decaying | zero_flux_regular | interior
    side: str             # left | right | interior
    flux: float
    _value: Callable[[float], complex]
    _derivative: Callable[[float], complex]

    def value_at(self, x: float) -> complex:
        return self._value(x)

    def derivative_at(self, x: float) -> complex:
        return self._derivative(x)


def _plane_wave(k: float, sign: int) -> tuple[Callable, Callable]:
    def val(x: float) -> complex:
        return cmath.exp(1j * sign * k * x)

    def der(x: float) -> complex:
        return 1j * sign * k * cmath.exp(1j * sign * k * x)

    return val, der


def _real_exp(kappa: float, sign: int) -> tuple[Callable, Callable]:
    def val(x: float) -> complex:
        return complex(math.exp(sign * kappa * x))

    def der(x: float) -> complex:
        return complex(sign * kappa * math.exp(sign * kappa * x))

    return val, der


def _airy_combo(alpha: float, shift: float, mirror: bool, coef_bi: complex):
    """u(x) = Ai(z) + coef_bi * Bi(z), z = alpha*(x - shift) or alpha*(-x - shift)."""
    sgn = -1.0 if mirror else 1.0

    def z_of(x: float) -> float:
        return alpha * (sgn * x - shift)

    def val(x: float) -> complex:
        p = specfun.airy(z_of(x))
        return p.ai + coef_bi * p.bi

    def der(x: float) -> complex:
        p = specfun.airy(z_of(x))
        return sgn * alpha * (p.ai_prime + coef_bi * p.bi_prime)

    return val, der


def _bessel_i_basis(mu: float, c: float, half_rate: float):
    """u(x) = I_{i mu}(xi), xi = c exp(half_rate * x); mu signed selects the order."""

    def val(x: float) -> complex:
        return specfun.bessel_i_imag_order(mu, c * math.exp(half_rate * x))

    def der(x: float) -> complex:
        xi = c * math.exp(half_rate * x)
        return half_rate * xi * specfun.bessel_i_imag_order_prime(mu, xi)

    return val, der


def _bessel_k_basis(mu: float, c: float, half_rate: float):
    def val(x: float) -> complex:
        return complex(specfun.bessel_k_imag_order(mu, c * math.exp(half_rate * x)))

    def der(x: float) -> complex:
        xi = c * math.exp(half_rate * x)
        return complex(half_rate * xi * specfun.bessel_k_imag_order_prime(mu, xi))

    return val, der


def _airy_scales(spec: Linear, energy: float, mass: float, hbar: float):
    p = abs(spec.slope)
    alpha = (2.0 * mass * p / hbar**2) ** (1.0 / 3.0)
    shift = energy / p
    mirror = spec.slope < 0
    flux_quantum = hbar * alpha / (math.pi * mass)
    return alpha, shift, mirror, flux_quantum


def _bessel_scales(spec: Exponential, energy: float, mass: float, hbar: float):
    a = abs(spec.rate)
    mu = 2.0 * math.sqrt(2.0 * mass * energy) / (a * hbar)
    c = 2.0 * math.sqrt(2.0 * mass * spec.amplitude) / (a * hbar)
    half_rate = 0.5 * spec.rate
    flux_quantum = hbar * a * math.sinh(math.pi * mu) / (2.0 * math.pi * mass)
    return mu, c, half_rate, flux_quantum


def build_basis(spec: PotentialSpec, energy: float, mass: float, hbar: float,
                side: str) -> list[BasisSolution]:
    """Exact basis solutions for one channel on one outer region.

    Open side: an (incoming, outgoing) pair.  Closed or forbidden side: the
    single physically acceptable solution (decaying exponential, Ai in a
    rising linear ramp, K_{i mu} inside an exponential wall).
    """
    status = classify_channel(spec, energy, mass, hbar, side)

    if isinstance(spec, Constant):
        if status.is_open:
            k = status.wavenumber
            inc_sign = +1 if side == "left" else -1
            vi, di = _plane_wave(k, inc_sign)
            vo, do = _plane_wave(k, -inc_sign)
            j = hbar * k / mass
            return [
                BasisSolution("incoming", side, inc_sign * j, vi, di),
                BasisSolution("outgoing", side, -inc_sign * j, vo, do),
            ]
        sign = +1 if side == "left" else -1
        v, d = _real_exp(status.decay, sign)
        return [BasisSolution("decaying", side, 0.0, v, d)]

    if isinstance(spec, Linear):
        alpha, shift, mirror, jq = _airy_scales(spec, energy, mass, hbar)
        if status.kind == "forbidden":
            v, d = _airy_combo(alpha, shift, mirror, 0.0)
            return [BasisSolution("zero_flux_regular", side, 0.0, v, d)]
        # open side: Ai + iBi moves away from the wall, Ai - iBi toward it
        toward = -1 if side == "left" else +1  # sign of motion toward the scatterer
        vi, di = _airy_combo(alpha, shift, mirror, 1j)
        vo, do = _airy_combo(alpha, shift, mirror, -1j)
        if side == "left":
            return [BasisSolution("incoming", side, jq, vi, di),
                    BasisSolution("outgoing", side, -jq, vo, do)]
        return [BasisSolution("incoming", side, -jq, vi, di),
                BasisSolution("outgoing", side, jq, vo, do)]

    if isinstance(spec, Exponential):
        if status.kind == "closed":
            raise ProblemValidationError(
                "exponential channel with E < 0 is outside the validated range")
        mu, c, half_rate, jq = _bessel_scales(spec, energy, mass, hbar)
        if status.kind == "forbidden":
            v, d = _bessel_k_basis(mu, c, half_rate)
            return [BasisSolution("zero_flux_regular", side, 0.0, v, d)]
        # I_{+i mu}(xi) tracks exp(+i mu a x / 2) = exp(i k x sign(a))
        vi, di = _bessel_i_basis(mu, c, half_rate)
        vo, do = _bessel_i_basis(-mu, c, half_rate)
        if side == "left":
            return [BasisSolution("incoming", side, jq, vi, di),
                    BasisSolution("outgoing", side, -jq, vo, do)]
        return [BasisSolution("incoming", side, -jq, vi, di),
                BasisSolution("outgoing", side, jq, vo, do)]

    raise ProblemValidationError(f"unknown potential kind: {spec!r}")


def _interior_basis(spec: PotentialSpec, energy: float, mass: float,
                    hbar: float) -> list[BasisSolution]:
    """Unrestricted solution pair for a hub region between coupling points."""
    if isinstance(spec, Constant):
        if energy > spec.offset:
            k = math.sqrt(2.0 * mass * (energy - spec.offset)) / hbar
            vp, dp = _plane_wave(k, +1)
            vm, dm = _plane_wave(k, -1)
            j = hbar * k / mass
            return [BasisSolution("interior", "interior", j, vp, dp),
                    BasisSolution("interior", "interior", -j, vm, dm)]
        if energy == spec.offset:
            raise ProblemValidationError("threshold energy in interior region")
        kappa = math.sqrt(2.0 * mass * (spec.offset - energy)) / hbar
        vp, dp = _real_exp(kappa, +1)
        vm, dm = _real_exp(kappa, -1)
        return [BasisSolution("interior", "interior", 0.0, vp, dp),
                BasisSolution("interior", "interior", 0.0, vm, dm)]
    if isinstance(spec, Linear):
        alpha, shift, mirror, jq = _airy_scales(spec, energy, mass, hbar)
        vp, dp = _airy_combo(alpha, shift, mirror, 1j)
        vm, dm = _airy_combo(alpha, shift, mirror, -1j)
        return [BasisSolution("interior", "interior", jq, vp, dp),
                BasisSolution("interior", "interior", -jq, vm, dm)]
    if isinstance(spec, Exponential):
        if energy <= 0.0:
            raise ProblemValidationError(
                "exponential channel with E <= 0 is outside the validated range")
        mu, c, half_rate, jq = _bessel_scales(spec, energy, mass, hbar)
        vp, dp = _bessel_i_basis(mu, c, half_rate)
        vm, dm = _bessel_i_basis(-mu, c, half_rate)
        return [BasisSolution("interior", "interior", jq, vp, dp),
                BasisSolution("interior", "interior", -jq, vm, dm)]
    raise ProblemValidationError(f"unknown potential kind: {spec!r}")


@dataclass
class MatchSystem:
    """Assembled boundary-condition system M a = b with amplitude labels."""

    matrix: np.ndarray
    rhs: np.ndarray
    labels: list
    row_labels: list
    incident_label: str | None

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def residual(self, amplitudes: np.ndarray) -> float:
        r = self.matrix @ amplitudes - self.rhs
        return float(np.max(np.abs(r)))


class _Slot:
    """One basis with its amplitude either unknown (index) or pinned."""

    __slots__ = ("basis", "channel", "region_name", "index", "fixed")

    def __init__(self, basis, channel, region_name):
        self.basis = basis
        self.channel = channel          # 1-based
        self.region_name = region_name  # 'left' | 'right' | 'mid<k>'
        self.index = None
        self.fixed = None

    @property
    def label(self) -> str:
        return f"ch{self.channel}:{self.region_name}:{self.basis.role}"


def _build_slots(channels, couplings, energy, mass, hbar, incident):
    """Region layout: slots[channel][region] -> list of _Slot."""
    layout = []
    for ci, spec in enumerate(channels):
        if ci == 0:
            pts = sorted({cp.position for cp in couplings})
        else:
            pts = [couplings[ci - 1].position]
        regions = []
        left = build_basis(spec, energy, mass, hbar, "left")
        regions.append([_Slot(b, ci + 1, "left") for b in left])
        for r in range(1, len(pts)):
            mid = _interior_basis(spec, energy, mass, hbar)
            regions.append([_Slot(b, ci + 1, f"mid{r}") for b in mid])
        right = build_basis(spec, energy, mass, hbar, "right")
        regions.append([_Slot(b, ci + 1, "right") for b in right])
        layout.append((pts, regions))

    nidx = 0
    incident_label = None
    for ci, (pts, regions) in enumerate(layout):
        for region in regions:
            for slot in region:
                b = slot.basis
                if b.role == "incoming":
                    is_incident = (incident is not None
                                   and incident.channel == ci + 1
                                   and b.side == incident.side)
                    slot.fixed = 1.0 if is_incident else 0.0
                    if is_incident:
                        incident_label = slot.label
                else:
                    slot.index = nidx
                    nidx += 1
    return layout, nidx, incident_label


def _assemble(channels, couplings, energy, mass, hbar, incident):
    layout, nunk, incident_label = _build_slots(
        channels, couplings, energy, mass, hbar, incident)

    rows = []
    row_labels = []
    jump_scale = -hbar**2 / (2.0 * mass)

    def add_row(entries, rhs_label):
        rows.append(entries)
        row_labels.append(rhs_label)

    for ci, (pts, regions) in enumerate(layout):
        for pi, xp in enumerate(pts):
            left_region = regions[pi]
            right_region = regions[pi + 1]
            # continuity: psi(xp-) - psi(xp+) = 0
            entries = []
            for slot in left_region:
                entries.append((slot, slot.basis.value_at(xp)))
            for slot in right_region:
                entries.append((slot, -slot.basis.value_at(xp)))
            add_row(entries, f"ch{ci + 1}:continuity@{xp:g}")

            # jump: -(hbar^2/2m)(psi'(xp+) - psi'(xp-)) + coupling terms = 0
            entries = []
            for slot in right_region:
                entries.append((slot, jump_scale * slot.basis.derivative_at(xp)))
            for slot in left_region:
                entries.append((slot, -jump_scale * slot.basis.derivative_at(xp)))
            if ci == 0:
                for sj, cp in enumerate(couplings):
                    if cp.position == xp:
                        spts, sregions = layout[sj + 1]
                        for slot in sregions[0]:
                            entries.append((slot, cp.strength * slot.basis.value_at(xp)))
            else:
                cp = couplings[ci - 1]
                hpts, hregions = layout[0]
                hub_left = hregions[hpts.index(xp)]
                for slot in hub_left:
                    entries.append((slot, cp.strength * slot.basis.value_at(xp)))
            add_row(entries, f"ch{ci + 1}:jump@{xp:g}")

    nrows = len(rows)
    matrix = np.zeros((nrows, nunk), dtype=complex)
    rhs = np.zeros(nrows, dtype=complex)
    labels = [None] * nunk
    for ri, entries in enumerate(rows):
        for slot, coef in entries:
            if slot.index is None:
                rhs[ri] -= coef * slot.fixed
            else:
                matrix[ri, slot.index] += coef
                labels[slot.index] = slot.label
    return MatchSystem(matrix, rhs, labels, row_labels, incident_label), layout


def assemble(problem: StarProblem) -> MatchSystem:
    """Build the 2N x 2N (or larger, for distinct points) matching system."""
    validate_problem(problem)
    system, _ = _assemble(problem.channels, problem.couplings, problem.energy,
                          problem.mass, problem.hbar, problem.incident)
    return system


def assemble_homogeneous(channels: Sequence[PotentialSpec],
                         couplings: Sequence[CouplingPoint],
                         energy: float, mass: float = 1.0,
                         hbar: float = 1.0) -> MatchSystem:
    """Matching matrix with no incident drive (diagnostics: bound states
    of the coupled system appear as singularities of this matrix)."""
    system, _ = _assemble(tuple(channels), tuple(couplings), energy, mass,
                          hbar, None)
    return system


def solve_star(problem: StarProblem) -> ScatteringSolution:
    """Solve the star problem; amplitudes and flux-normalized probabilities.

    Raises SingularSystemError when the matching matrix has condition
    number above 1e12 (near-threshold or degenerate system).
    """
    validate_problem(problem)
    system, layout = _assemble(problem.channels, problem.couplings,
                               problem.energy, problem.mass, problem.hbar,
                               problem.incident)
    cond = system.condition_number
    if not math.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularSystemError(
            f"near-threshold or degenerate system (condition number {cond:.3g})")
    solution = np.linalg.solve(system.matrix, system.rhs)

    amplitudes = {}
    for pts, regions in layout:
        for region in regions:
            for slot in region:
                amp = slot.fixed if slot.index is None else complex(solution[slot.index])
                amplitudes[slot.label] = complex(amp)

    inc = problem.incident
    j_in = None
    r_back = 0.0
    t_same = None
    t_cross: dict[int, float] = {}
    for ci, (pts, regions) in enumerate(layout):
        chan = ci + 1
        for region in (regions[0], regions[-1]):
            for slot in region:
                b = slot.basis
                if b.role == "incoming" and slot.fixed == 1.0:
                    j_in = abs(b.flux)
    if j_in is None or j_in == 0.0:
        raise ProblemValidationError("no propagating incident wave")

    for ci, (pts, regions) in enumerate(layout):
        chan = ci + 1
        for region in (regions[0], regions[-1]):
            for slot in region:
                b = slot.basis
                if b.role != "outgoing":
                    continue
                amp = slot.fixed if slot.index is None else complex(solution[slot.index])
                prob = abs(amp) ** 2 * abs(b.flux) / j_in
                if chan == inc.channel and b.side == inc.side:
                    r_back = prob
                elif chan == inc.channel:
                    t_same = prob
                else:
                    t_cross[chan] = t_cross.get(chan, 0.0) + prob
    for ci in range(len(layout)):
        chan = ci + 1
        if chan != inc.channel:
            t_cross.setdefault(chan, 0.0)

    total_out = r_back + (t_same or 0.0) + sum(t_cross.values())
    return ScatteringSolution(
        amplitudes=amplitudes,
        r_back=r_back,
        t_same=t_same,
        t_cross=t_cross,
        flux_residual=abs(1.0 - total_out),
        route="matcher",
        condition_number=cond,
    )
