"""Spin-selective reflection off a charged quantum dot in a pillar microcavity.

A single excess electron in the dot makes the cavity reflection depend on the
joint state of photon polarization and electron spin.  Circularly polarized
light that addresses the trion transition sees a coupled ("hot") cavity and
reflects with amplitude ``r_h``; the orthogonal combination sees an empty
("cold") cavity and reflects with amplitude ``r_0``.  Which combination is
which follows the selection rules: R with spin up and L with spin down scatter
cold, R with spin down and L with spin up scatter hot.

All rates are quoted in units of the cavity decay kappa.  The idealized model
replaces the two amplitudes by their lossless phases, exp(-i pi/2) for cold
and exp(i 0) for hot, which is the regime the analyzer is designed around.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .register import Kind, QuantumRegister

IDEAL_COLD = complex(np.exp(-0.5j * np.pi))
IDEAL_HOT = 1.0 + 0.0j


@dataclass(frozen=True)
class CavityParams:
    """Physical parameters of the dot-cavity system, in units of kappa.

    g is the dot-cavity coupling, kappa the output-coupler decay, kappa_s the
    side-leakage rate, gamma the exciton dipole decay, and delta_c / delta_x
    the detunings of the probe from the cavity and exciton resonances.
    """

    g: float
    kappa: float = 1.0
    kappa_s: float = 0.0
    gamma: float = 0.1
    delta_c: float = 0.5
    delta_x: float = 0.5

    def __post_init__(self):
        if not (self.g >= 0.0):
            raise ValueError("g must be nonnegative")
        if not (self.kappa > 0.0):
            raise ValueError("kappa must be positive")
        if not (self.kappa_s >= 0.0):
            raise ValueError("kappa_s must be nonnegative")
        if not (self.gamma >= 0.0):
            raise ValueError("gamma must be nonnegative")

    @property
    def g_over_ktot(self) -> float:
        return self.g / (self.kappa + self.kappa_s)

    @property
    def ks_over_k(self) -> float:
        return self.kappa_s / self.kappa


def operating_point(
    g_over_ktot: float,
    ks_over_k: float = 0.0,
    gamma: float = 0.1,
    detuning: float = 0.5,
) -> CavityParams:
    """Build CavityParams from the normalized coupling and side leakage.

    The coupling is specified relative to the total decay kappa + kappa_s and
    the probe sits at the stated detuning from both resonances, with kappa as
    the unit rate.
    """
    kappa_s = ks_over_k
    return CavityParams(
        g=g_over_ktot * (1.0 + kappa_s),
        kappa=1.0,
        kappa_s=kappa_s,
        gamma=gamma,
        delta_c=detuning,
        delta_x=detuning,
    )


def reflection(params: CavityParams, coupled: bool = True) -> complex:
    """Steady-state reflection amplitude of the one-sided cavity.

    With ``coupled`` true the dot dresses the cavity (hot response); false
    gives the empty-cavity (cold) response.  Input-output theory for a weak
    coherent probe yields

        r_hot  = 1 - kappa * D_x / (D_x * D_c + g^2)
        r_cold = (kappa_s/2 - kappa/2 - i delta_c) / D_c

    with D_x = gamma/2 - i delta_x and D_c = (kappa + kappa_s)/2 - i delta_c.
    """
    d_exciton = 0.5 * params.gamma - 1j * params.delta_x
    d_cavity = 0.5 * (params.kappa + params.kappa_s) - 1j * params.delta_c
    if not coupled:
        return (0.5 * params.kappa_s - 0.5 * params.kappa - 1j * params.delta_c) / d_cavity
    denom = d_exciton * d_cavity + params.g * params.g
    if denom == 0.0:
        raise ValueError("degenerate parameters: hot-cavity response is undefined")
    return 1.0 - params.kappa * d_exciton / denom


@dataclass(frozen=True)
class PhaseShifts:
    """Reflection phases of the two responses and the angles built from them."""

    phi_cold: float
    phi_hot: float

    @property
    def delta_phi(self) -> float:
        """Relative phase picked up between hot and cold reflection."""
        return self.phi_hot - self.phi_cold

    @property
    def faraday_angle(self) -> float:
        """Polarization rotation angle for spin up; spin down gets the negative."""
        return -0.5 * self.delta_phi


def phase_shifts(params: CavityParams) -> PhaseShifts:
    """Phases of the cold and hot reflection amplitudes, each in (-pi, pi]."""
    return PhaseShifts(
        phi_cold=float(np.angle(reflection(params, coupled=False))),
        phi_hot=float(np.angle(reflection(params, coupled=True))),
    )


def reflection_pair(params: CavityParams | None, ideal: bool) -> tuple[complex, complex]:
    """(cold, hot) amplitudes, either idealized phases or the lossy values."""
    if ideal:
        return IDEAL_COLD, IDEAL_HOT
    if params is None:
        raise ValueError("lossy reflection needs CavityParams")
    return reflection(params, coupled=False), reflection(params, coupled=True)


def scatter_factors(
    params: CavityParams | None, ideal: bool = True, passes: int = 1
) -> np.ndarray:
    """Diagonal factors over (polarization, spin) for one photon-cavity pass.

    Order is big-endian over (polarization, spin): (R,up), (R,down), (L,up),
    (L,down).  The selection rules put the cold amplitude on (R,up) and
    (L,down) and the hot amplitude on the other two.  ``passes`` repeats the
    bounce, which for these diagonal factors is a plain power.
    """
    if passes not in (1, 2):
        raise ValueError("passes must be 1 or 2")
    cold, hot = reflection_pair(params, ideal)
    return np.array([cold, hot, hot, cold], dtype=complex) ** passes


def scatter_photon(
    reg: QuantumRegister,
    pol_name: str,
    spin_name: str,
    params: CavityParams | None = None,
    passes: int = 1,
    ideal: bool = True,
) -> QuantumRegister:
    """Bounce one photon off the cavity, entangling polarization with spin.

    In the ideal model the joint amplitudes only pick up phases, so the norm
    is preserved; with the lossy amplitudes the squared norm drops to the
    survival probability of the photon.
    """
    reg.require_kind(pol_name, Kind.POLARIZATION)
    reg.require_kind(spin_name, Kind.SPIN)
    return reg.apply_diagonal(
        [pol_name, spin_name], scatter_factors(params, ideal, passes)
    )
