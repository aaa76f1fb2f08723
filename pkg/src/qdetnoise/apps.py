"""Applications of the detector noise machinery.

Two workloads live here:

* dispersive qubit readout: measurement and dephasing rates extracted from
  the zero-frequency gain and force noise of a driven cavity detector, plus
  the homodyne angle that saturates the rate inequality;
* position sensing of a mechanical oscillator: back-action-modified
  mechanical response, thermal force noise, the total measurement-referred
  output spectrum, and motional sideband asymmetry.

All formulas follow the package conventions: response functions carry poles
in the lower half-plane, and symmetrized spectra are real.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cavity import (
    cavity_spectra,
    cavity_susceptibilities,
    normalize,
    response_denominator,
)
from .core import CavityParams, ComplexSpectrum, FrequencyGrid, MechOscillator
from .errors import (
    DegenerateReadoutError,
    GridMismatchError,
    OpticalSpringInstabilityError,
)

__all__ = [
    "QubitReadoutResult",
    "AsymmetryResult",
    "optimal_angle",
    "qubit_rates",
    "modified_mech_susceptibility",
    "thermal_force_spectrum",
    "closed_loop_poles",
    "total_output_spectrum",
    "sideband_asymmetry",
    "asymmetry_grid",
]


@dataclass(frozen=True)
class QubitReadoutResult:
    """Readout figures of merit for a dispersively coupled qubit.

    ``gamma_meas`` is the rate at which the output record distinguishes the
    two qubit states, ``gamma_phi`` the ensemble dephasing rate driven by
    force (photon number) fluctuations, ``ratio`` their quotient
    ``gamma_phi / gamma_meas`` (always >= 1), and ``theta_opt`` the homodyne
    angle that drives the ratio to 1 for the given cavity parameters.
    """

    gamma_meas: float
    gamma_phi: float
    ratio: float
    theta_opt: float


@dataclass(frozen=True)
class AsymmetryResult:
    """Output spectra and integrated sideband weights for a detuning pair.

    ``spectrum_red`` is the total output spectrum with the drive detuned to
    the red motional sideband (delta = -omega_m), ``spectrum_blue`` the same
    for delta = +omega_m.  The areas integrate each spectrum over the grid
    after subtracting the pointwise imprecision floor, so they measure only
    the motional peak.  ``ratio`` is ``area_blue / area_red``; it is
    ``math.inf`` when the oscillator sits in its ground state and the red
    peak cancels.
    """

    spectrum_red: ComplexSpectrum
    spectrum_blue: ComplexSpectrum
    area_red: float
    area_blue: float
    ratio: float


def optimal_angle(gamma: float, delta: float) -> float:
    """Homodyne angle at which readout reaches the quantum limit.

    Solves ``delta*sin(theta) + gamma*cos(theta) = 0`` for theta, which
    zeroes the excess-dephasing term in the rate ratio.  The answer is
    defined modulo pi; this returns the branch in (-pi/2, pi/2].
    """
    if gamma == 0.0 and delta == 0.0:
        raise ValueError("optimal angle undefined when gamma and delta both vanish")
    if delta == 0.0:
        return math.pi / 2
    return -math.atan(gamma / delta)


def qubit_rates(params: CavityParams) -> QubitReadoutResult:
    """Measurement and dephasing rates for dispersive qubit readout.

    Both rates come from the zero-frequency limits of the cavity detector:
    the measurement rate from the squared gain over the imprecision floor,
    the dephasing rate from the symmetrized force noise.  Raises
    :class:`DegenerateReadoutError` when the chosen homodyne angle has no
    zero-frequency gain (``delta*cos(theta) = gamma*sin(theta)``), since no
    information reaches the record there.
    """
    gamma, delta, theta, gbar = params.gamma, params.delta, params.theta, params.gbar
    gain = delta * math.cos(theta) - gamma * math.sin(theta)
    if abs(gain) <= 1e-12 * math.hypot(gamma, delta):
        raise DegenerateReadoutError(
            "zero-frequency readout gain vanishes at this homodyne angle "
            f"(gamma={gamma:g}, delta={delta:g}, theta={theta:g})"
        )
    denom = delta * delta + gamma * gamma
    gamma_meas = 4.0 * gbar * gbar * gamma * gain * gain / (denom * denom)
    gamma_phi = 4.0 * gbar * gbar * gamma / denom
    orthogonal = delta * math.sin(theta) + gamma * math.cos(theta)
    # Written as 1 + square so the bound ratio >= 1 holds in floating point.
    ratio = 1.0 + (orthogonal / gain) ** 2
    return QubitReadoutResult(
        gamma_meas=gamma_meas,
        gamma_phi=gamma_phi,
        ratio=ratio,
        theta_opt=optimal_angle(gamma, delta),
    )


def modified_mech_susceptibility(
    osc: MechOscillator, chi_ff: ComplexSpectrum
) -> ComplexSpectrum:
    """Mechanical response dressed by the detector's force-force response.

    Closes the feedback loop position -> force -> position:
    ``chi_qq = chi0 / (1 - chi0 * chi_ff)``.  The real part of the loop
    correction shifts the resonance (optical spring), the imaginary part
    adds or removes damping.  Raises
    :class:`OpticalSpringInstabilityError` when the denominator passes
    through zero on the grid, i.e. a closed-loop pole sits on the real
    axis.
    """
    chi0 = osc.bare_susceptibility(chi_ff.grid)
    loop = chi0.values * chi_ff.values
    den = 1.0 - loop
    blown = np.abs(den) < 1e-12 * np.abs(loop)
    if np.any(blown):
        omega_bad = chi_ff.grid.points[blown][0]
        raise OpticalSpringInstabilityError(
            f"dressed mechanical response diverges at omega={omega_bad:.9g}: "
            "closed-loop pole on the real axis"
        )
    return ComplexSpectrum(chi_ff.grid, chi0.values / den)


def thermal_force_spectrum(osc: MechOscillator, grid: FrequencyGrid) -> ComplexSpectrum:
    """Symmetrized spectrum of the thermal Langevin force on the oscillator.

    Fluctuation-dissipation form for Ohmic damping,
    ``hbar * m * gamma_m * omega * coth(hbar*omega / (2*kB*T))``, evaluated
    at the oscillator's effective temperature.  At T = 0 this degrades to
    the zero-point floor ``hbar * m * gamma_m * |omega|``.  The values are
    real and even in frequency.
    """
    hbar = osc.units.hbar
    k_b = osc.units.k_B
    omega = grid.points
    temp = osc.t_eff
    if temp == 0.0:
        weight = np.abs(omega)
    else:
        x = hbar * omega / (2.0 * k_b * temp)
        weight = np.empty_like(omega)
        small = np.abs(x) < 1e-8
        # omega*coth(x) -> (2 kB T / hbar) * (1 + x^2/3) as omega -> 0
        weight[small] = (2.0 * k_b * temp / hbar) * (1.0 + x[small] ** 2 / 3.0)
        weight[~small] = omega[~small] / np.tanh(x[~small])
    values = hbar * osc.mass * osc.gamma_m * weight
    return ComplexSpectrum(grid, values.astype(complex))


def closed_loop_poles(params: CavityParams, osc: MechOscillator) -> np.ndarray:
    """Complex frequencies of the coupled cavity-oscillator normal modes.

    Roots of the quartic obtained by clearing denominators in
    ``1 - chi0(omega) * chi_ff(omega) = 0``.  A stable system has every
    root in the lower half-plane.
    """
    mass, omega_m, gamma_m = osc.mass, osc.omega_m, osc.gamma_m
    mech = np.array([-mass, -1j * mass * gamma_m, mass * omega_m**2])
    cav = np.array(
        [1.0, 2j * params.gamma, -(params.gamma**2 + params.delta**2)],
        dtype=complex,
    )
    poly = np.polymul(mech.astype(complex), cav)
    poly[-1] -= 2.0 * params.units.hbar * params.gbar**2 * params.delta
    return np.roots(poly)


def _require_stable(params: CavityParams, osc: MechOscillator) -> None:
    poles = closed_loop_poles(params, osc)
    worst = poles[np.argmax(poles.imag)]
    if worst.imag >= 0.0:
        raise OpticalSpringInstabilityError(
            "coupled cavity-oscillator system is unstable: normal mode at "
            f"omega={worst:.9g} does not decay"
        )


def _total_and_floor(
    params: CavityParams, osc: MechOscillator, grid: FrequencyGrid
) -> tuple[ComplexSpectrum, np.ndarray]:
    """Total output spectrum plus the bare imprecision floor used inside it."""
    if params.units != osc.units:
        raise ValueError("cavity and oscillator carry different unit conventions")
    _require_stable(params, osc)
    susc = cavity_susceptibilities(params, grid)
    norm = normalize(cavity_spectra(params, grid), susc)
    chi_q = modified_mech_susceptibility(osc, susc.chi_ff)
    force = norm.force.values.real + thermal_force_spectrum(osc, grid).values.real
    floor = norm.imprecision.values.real
    total = (
        floor
        + 2.0 * (np.conj(chi_q.values) * norm.cross.values).real
        + np.abs(chi_q.values) ** 2 * force
    )
    return ComplexSpectrum(grid, total.astype(complex)), floor


def total_output_spectrum(
    params: CavityParams, osc: MechOscillator, grid: FrequencyGrid
) -> ComplexSpectrum:
    """Measurement-referred spectrum of a monitored mechanical oscillator.

    Sum of three pieces, all in displacement-referred (normalized) units:
    the imprecision floor, twice the real part of the cross correlation
    weighted by the dressed mechanical response, and the dressed response
    squared times the total force noise (detector back-action plus thermal
    Langevin force).  Raises :class:`OpticalSpringInstabilityError` if any
    coupled normal mode fails to decay.
    """
    total, _ = _total_and_floor(params, osc, grid)
    return total


def sideband_asymmetry(
    params_template: CavityParams, osc: MechOscillator, grid: FrequencyGrid
) -> AsymmetryResult:
    """Motional sideband weights for drive detunings at +/- omega_m.

    Evaluates the total output spectrum twice, with the template's detuning
    replaced by -omega_m (red) and +omega_m (blue), subtracts the pointwise
    imprecision floor, and integrates each motional peak over the grid with
    the trapezoid rule.  In thermal equilibrium the weights scale as n and
    n + 1, so their ratio reads out the occupation directly.

    The grid must cover at least ten effective linewidths on both sides of
    omega_m, else :class:`GridMismatchError` is raised.  A warning is
    emitted outside the resolved-sideband regime (gamma > 0.1 * omega_m),
    where the two sidebands overlap and the areas lose meaning.
    """
    omega_m = osc.omega_m
    if params_template.gamma > 0.1 * omega_m:
        warnings.warn(
            "cavity linewidth exceeds 0.1 * omega_m; sidebands overlap and "
            "integrated weights are unreliable",
            stacklevel=2,
        )
    red = params_template.replace(delta=-omega_m)
    blue = params_template.replace(delta=+omega_m)

    span = 0.0
    for p in (red, blue):
        d_res = response_denominator(omega_m, p.gamma, p.delta)
        chi_ff_res = 2.0 * p.units.hbar * p.gbar**2 * p.delta / d_res
        gamma_eff = osc.gamma_m + chi_ff_res.imag / (osc.mass * omega_m)
        span = max(span, 10.0 * abs(gamma_eff))
    points = grid.points
    if points[0] > omega_m - span or points[-1] < omega_m + span:
        raise GridMismatchError(
            "grid does not cover ten effective linewidths around omega_m; "
            f"need [{omega_m - span:.9g}, {omega_m + span:.9g}], have "
            f"[{points[0]:.9g}, {points[-1]:.9g}]"
        )

    total_red, floor_red = _total_and_floor(red, osc, grid)
    total_blue, floor_blue = _total_and_floor(blue, osc, grid)
    area_red = float(
        integrate.trapezoid(total_red.values.real - floor_red, points)
    )
    area_blue = float(
        integrate.trapezoid(total_blue.values.real - floor_blue, points)
    )
    if osc.n_mean == 0.0 or area_red <= 0.0:
        ratio = math.inf
    else:
        ratio = area_blue / area_red
    return AsymmetryResult(
        spectrum_red=total_red,
        spectrum_blue=total_blue,
        area_red=area_red,
        area_blue=area_blue,
        ratio=ratio,
    )


def asymmetry_grid(
    params: CavityParams,
    osc: MechOscillator,
    halfwidth_linewidths: float = 40.0,
    n_points: int = 4001,
) -> FrequencyGrid:
    """Frequency grid tailored to resolving one motional sideband.

    Centers the grid on omega_m with a half-width of
    ``halfwidth_linewidths`` times the worst-case effective mechanical
    linewidth (intrinsic plus back-action damping).  The default window of
    forty linewidths keeps the truncated Lorentzian tails below the 1e-4
    level in the integrated weight.
    """
    if halfwidth_linewidths <= 0.0:
        raise ValueError("halfwidth_linewidths must be positive")
    omega_m = osc.omega_m
    gamma_opt = params.units.hbar * params.gbar**2 / (
        params.gamma * osc.mass * omega_m
    )
    half = halfwidth_linewidths * (osc.gamma_m + gamma_opt)
    points = np.linspace(omega_m - half, omega_m + half, int(n_points))
    return FrequencyGrid(points)
