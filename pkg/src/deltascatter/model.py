"""Domain types and channel classification for delta-coupled scattering.

A problem is a "star" of N one-dimensional channels: channel 1 (the hub)
is coupled to each of channels 2..N by a point interaction of strength
K_n located at x_n; the spokes are mutually uncoupled.  All quantities
carry explicit mass and hbar; the defaults are atomic units (m = hbar = 1).

Channel indices are 1-based throughout the public API, matching the
conventional hub/spoke numbering used in results (``t_cross_ch2`` etc.).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "ScatteringError",
    "ThresholdEnergyError",
    "ProblemValidationError",
    "SingularSystemError",
    "GreensPoleError",
    "DefectiveBasisError",
    "GridResolutionError",
    "UseGenericMatcherError",
    "Constant",
    "Linear",
    "Exponential",
    "PotentialSpec",
    "CouplingPoint",
    "Incident",
    "ChannelStatus",
    "StarProblem",
    "ScatteringSolution",
    "classify_channel",
    "validate_problem",
]


class ScatteringError(Exception):
    """Base class for scattering-domain failures."""


class ThresholdEnergyError(ScatteringError):
    """Energy exactly at a channel threshold (flux normalization singular)."""


class ProblemValidationError(ScatteringError):
    """A StarProblem invariant does not hold."""


class SingularSystemError(ScatteringError):
    """Boundary-condition matrix is numerically singular."""


class GreensPoleError(ScatteringError):
    """Vanishing denominator in a Green's-function composition."""


class DefectiveBasisError(ScatteringError):
    """Degenerate basis pair (zero Wronskian) in a Green's-function build."""


class GridResolutionError(ScatteringError):
    """Oracle grid cannot resolve the requested problem."""


class UseGenericMatcherError(ScatteringError):
    """Parameters outside a closed-form regime; use the generic matcher."""


# ----------------------------------------------------------------------
# potentials
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Flat diabatic curve V(x) = offset."""

    offset: float

    kind = "constant"

    def value(self, x: float) -> float:
        return self.offset


@dataclass(frozen=True)
class Linear:
    """Linear ramp V(x) = slope * x; slope > 0 rises to the right."""

    slope: float

    kind = "linear"

    def __post_init__(self):
        if self.slope == 0.0:
            raise ProblemValidationError("Linear.slope must be nonzero")

    def value(self, x: float) -> float:
        return self.slope * x


@dataclass(frozen=True)
class Exponential:
    """Exponential wall V(x) = amplitude * exp(rate * x); rate > 0 rises right."""

    amplitude: float
    rate: float

    kind = "exponential"

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ProblemValidationError("Exponential.amplitude must be > 0")
        if self.rate == 0.0:
            raise ProblemValidationError("Exponential.rate must be nonzero")

    def value(self, x: float) -> float:
        return self.amplitude * math.exp(self.rate * x)


PotentialSpec = Union[Constant, Linear, Exponential]


@dataclass(frozen=True)
class CouplingPoint:
    """Point coupling K * delta(x - position) between hub and one spoke."""

    position: float
    strength: float

    def __post_init__(self):
        if self.strength < 0.0:
            raise ProblemValidationError(
                "CouplingPoint.strength must be >= 0 (probabilities depend on K^2 only)")


@dataclass(frozen=True)
class Incident:
    """Which channel carries the unit-amplitude incoming wave, and from where."""

    channel: int = 1
    side: str = "left"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ProblemValidationError("Incident.side must be 'left' or 'right'")


@dataclass(frozen=True)
class ChannelStatus:
    """Asymptotic classification of one channel on one side at energy E."""

    side: str
    kind: str  # 'open' | 'closed' | 'forbidden'
    wavenumber: float | None = None  # k > 0 when open (None for linear ramps)
    decay: float | None = None       # kappa > 0 when closed

    @property
    def is_open(self) -> bool:
        return self.kind == "open"


def classify_channel(spec: PotentialSpec, energy: float, mass: float,
                     hbar: float, side: str) -> ChannelStatus:
    """Classify one channel side as open, closed or forbidden at energy E.

    Raises ThresholdEnergyError when E sits exactly at a constant offset
    (or at E = 0 for an exponential wall), where k = 0 makes the flux
    normalization singular.
    """
    if side not in ("left", "right"):
        raise ProblemValidationError("side must be 'left' or 'right'")
    if not math.isfinite(energy):
        raise ProblemValidationError("energy must be finite")

    if isinstance(spec, Constant):
        if energy == spec.offset:
            raise ThresholdEnergyError(
                f"threshold energy: E = V = {energy:g} in a constant channel")
        if energy > spec.offset:
            k = math.sqrt(2.0 * mass * (energy - spec.offset)) / hbar
            return ChannelStatus(side, "open", wavenumber=k)
        kappa = math.sqrt(2.0 * mass * (spec.offset - energy)) / hbar
        return ChannelStatus(side, "closed", decay=kappa)

    if isinstance(spec, Linear):
        rising = "right" if spec.slope > 0 else "left"
        if side == rising:
            return ChannelStatus(side, "forbidden")
        # oscillatory Airy side; no asymptotic plane-wave wavenumber exists,
        # flux bookkeeping uses the exact Airy Wronskian instead
        return ChannelStatus(side, "open", wavenumber=None)

    if isinstance(spec, Exponential):
        rising = "right" if spec.rate > 0 else "left"
        if side == rising:
            return ChannelStatus(side, "forbidden")
        if energy == 0.0:
            raise ThresholdEnergyError("threshold energy: E = 0 for exponential channel")
        if energy > 0.0:
            k = math.sqrt(2.0 * mass * energy) / hbar
            return ChannelStatus(side, "open", wavenumber=k)
        kappa = math.sqrt(-2.0 * mass * energy) / hbar
        return ChannelStatus(side, "closed", decay=kappa)

    raise ProblemValidationError(f"unknown potential kind: {spec!r}")


# ----------------------------------------------------------------------
# problems and solutions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StarProblem:
    """N channels with channel 1 coupled to channels 2..N at points x_n."""

    channels: tuple[PotentialSpec, ...]
    couplings: tuple[CouplingPoint, ...]
    energy: float
    mass: float = 1.0
    hbar: float = 1.0
    incident: Incident = field(default_factory=Incident)

    def __init__(self, channels, couplings, energy, mass=1.0, hbar=1.0,
                 incident=None):
        object.__setattr__(self, "channels", tuple(channels))
        object.__setattr__(self, "couplings", tuple(couplings))
        object.__setattr__(self, "energy", float(energy))
        object.__setattr__(self, "mass", float(mass))
        object.__setattr__(self, "hbar", float(hbar))
        object.__setattr__(self, "incident", incident or Incident())

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def incident_spec(self) -> PotentialSpec:
        return self.channels[self.incident.channel - 1]


def validate_problem(problem: StarProblem) -> StarProblem:
    """Check all StarProblem invariants; returns the problem unchanged.

    Raises ProblemValidationError naming the violated field, or, for an
    incident channel that is not open on the incident side, the message
    "no propagating incident wave".
    """
    n = problem.n_channels
    if n < 2:
        raise ProblemValidationError(f"channels: need N >= 2, got {n}")
    if len(problem.couplings) != n - 1:
        raise ProblemValidationError(
            f"couplings must number N-1 = {n - 1}, got {len(problem.couplings)}")
    if problem.mass <= 0.0:
        raise ProblemValidationError(f"mass must be > 0, got {problem.mass:g}")
    if problem.hbar <= 0.0:
        raise ProblemValidationError(f"hbar must be > 0, got {problem.hbar:g}")
    if not (1 <= problem.incident.channel <= n):
        raise ProblemValidationError(
            f"incident.channel must be in 1..{n}, got {problem.incident.channel}")
    status = classify_channel(problem.incident_spec(), problem.energy,
                              problem.mass, problem.hbar, problem.incident.side)
    if not status.is_open:
        raise ProblemValidationError(
            f"no propagating incident wave: channel {problem.incident.channel} is "
            f"{status.kind} on the {problem.incident.side} at E = {problem.energy:g}")
    return problem


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes and flux-normalized probabilities for one solve.

    ``amplitudes`` maps labels like ``"ch2:right:outgoing"`` to complex
    amplitudes relative to the unit incident wave.  ``t_same`` is None when
    the incident channel has no open far side (walls), mirrored by ``r_back``
    for completeness although the incident side is always open.
    """

    amplitudes: dict
    r_back: float | None
    t_same: float | None
    t_cross: dict
    flux_residual: float
    route: str
    condition_number: float | None = None

    @property
    def t_cross_total(self) -> float:
        return sum(self.t_cross.values())

    def probability_summary(self) -> dict:
        out = {"r_back": self.r_back, "t_same": self.t_same,
               "t_cross_total": self.t_cross_total}
        out.update({f"t_cross_ch{n}": v for n, v in sorted(self.t_cross.items())})
        return out
