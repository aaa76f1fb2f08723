"""Residuals and margins for the general quantum measurement constraints.

Every check is scale-aware: a residual is compared against tol * scale with
scale the largest constituent term at that frequency, since the raw magnitudes
vary over many orders across parameter sweeps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .cavity import NormalizedSpectra, SpectraSet, SusceptibilitySet, normalize
from .core import ComplexSpectrum, FrequencyGrid, UnitConvention
from .errors import InvalidMatrixError, NotAValidDetectorError
from .netsolve import kubo_check, symmetrize


class Verdict(enum.Enum):
    quantum_limited = "quantum_limited"
    above_limit = "above_limit"
    violation = "violation"


@dataclass(frozen=True)
class ConstraintReport:
    """Per-frequency results of all constraint checks.

    uncertainty_gap:      left minus right side of the noise uncertainty
                          relation; zero at the quantum limit, positive above
    product_residual:     referred imprecision-times-back-action product minus
                          the hbar^2/4 floor (zero at the quantum limit)
    correlation_residual: phase condition tying the referred cross spectrum to
                          dynamical back action (zero at the quantum limit)
    kubo_residual:        fluctuation-dissipation residual of the force noise
    positivity_margin:    S_ff_sym - hbar |Im chi_ff|, the smaller of the two
                          single-sided force spectra; negative values are
                          unphysical
    """

    grid: FrequencyGrid
    uncertainty_gap: np.ndarray
    product_residual: np.ndarray
    correlation_residual: np.ndarray
    kubo_residual: np.ndarray
    positivity_margin: np.ndarray
    verdicts: tuple[Verdict, ...]

    @property
    def worst_verdict(self) -> Verdict:
        ranking = [Verdict.quantum_limited, Verdict.above_limit, Verdict.violation]
        return max(self.verdicts, key=ranking.index)


def _require_valid_detector(susc: SusceptibilitySet, tol: float) -> None:
    floor = tol * max(np.max(np.abs(susc.chi_zf.values)), 1e-300)
    worst = max(np.max(np.abs(susc.chi_zz.values)),
                np.max(np.abs(susc.chi_fz.values)))
    if worst > floor:
        raise NotAValidDetectorError(
            f"readout responds to itself or drives the force "
            f"(|chi_zz|, |chi_fz| up to {worst:.3g}); simultaneous "
            "measurability of the record requires both to vanish")


def uncertainty_gap(spectra: SpectraSet, susc: SusceptibilitySet,
                    units: UnitConvention = UnitConvention(),
                    detector_tol: float = 1e-9) -> np.ndarray:
    """Noise uncertainty relation, as (left - right) per frequency.

    gap = S_zz S_ff - |S_zf|^2 - (hbar^2/4)|chi_zf|^2
          - hbar |Im[S_zf^* chi_zf - chi_ff S_zz]|

    All spectra symmetrized. Nonzero chi_zz or chi_fz invalidates the
    premise and raises NotAValidDetectorError.
    """
    if not spectra.symmetrized:
        raise ValueError("uncertainty_gap expects symmetrized spectra")
    _require_valid_detector(susc, detector_tol)
    gap, _ = _gap_terms(spectra, susc, units)
    return gap


def uncertainty_gap_branches(spectra: SpectraSet, susc: SusceptibilitySet,
                             units: UnitConvention = UnitConvention()
                             ) -> tuple[np.ndarray, np.ndarray]:
    """The two signed branches whose pointwise minimum is the gap.

    The underlying positivity argument yields one inequality per sign of the
    auxiliary combination; the absolute value in uncertainty_gap is their
    tighter envelope.
    """
    hbar = units.hbar
    d0, im_term = _d0_and_imterm(spectra, susc, hbar)
    return d0 - hbar * im_term, d0 + hbar * im_term


def _d0_and_imterm(spectra: SpectraSet, susc: SusceptibilitySet,
                   hbar: float) -> tuple[np.ndarray, np.ndarray]:
    s_zz = spectra.s_zz.values.real
    s_ff = spectra.s_ff.values.real
    s_zf = spectra.s_zf.values
    chi_zf = susc.chi_zf.values
    chi_ff = susc.chi_ff.values
    d0 = s_zz * s_ff - np.abs(s_zf) ** 2 - 0.25 * hbar ** 2 * np.abs(chi_zf) ** 2
    im_term = np.imag(np.conj(s_zf) * chi_zf - chi_ff * s_zz)
    return d0, im_term


def _gap_terms(spectra: SpectraSet, susc: SusceptibilitySet,
               units: UnitConvention) -> tuple[np.ndarray, np.ndarray]:
    hbar = units.hbar
    s_zz = spectra.s_zz.values.real
    s_ff = spectra.s_ff.values.real
    s_zf = spectra.s_zf.values
    chi_zf = susc.chi_zf.values
    chi_ff = susc.chi_ff.values
    d0, im_term = _d0_and_imterm(spectra, susc, hbar)
    gap = d0 - hbar * np.abs(im_term)
    scale = np.maximum.reduce([
        np.abs(s_zz * s_ff),
        np.abs(s_zf) ** 2,
        0.25 * hbar ** 2 * np.abs(chi_zf) ** 2,
        hbar * np.abs(im_term),
    ])
    return gap, scale


def quantum_limit_residuals(norm: NormalizedSpectra, chi_ff: ComplexSpectrum,
                            units: UnitConvention = UnitConvention()
                            ) -> tuple[np.ndarray, np.ndarray]:
    """Quantum-limit equalities in referred form, as two real residuals.

    r1 = s_zz S_ff - |s_zf|^2 - hbar^2/4
    r2 = Im[s_zf] + Im[chi_ff] s_zz

    Both vanish pointwise for a pure (vacuum or squeezed) detector state.
    """
    hbar = units.hbar
    s_zz = norm.imprecision.values.real
    s_zf = norm.cross.values
    s_ff = norm.force.values.real
    r1 = s_zz * s_ff - np.abs(s_zf) ** 2 - 0.25 * hbar ** 2
    r2 = s_zf.imag + chi_ff.values.imag * s_zz
    return r1, r2


def positivity_margin(s_ff_sym: ComplexSpectrum, chi_ff: ComplexSpectrum,
                      units: UnitConvention = UnitConvention()) -> np.ndarray:
    """margin = S_ff_sym - hbar |Im chi_ff|, non-negative for physical spectra.

    Equals the smaller of S_ff(+omega) and S_ff(-omega); it nearly vanishes
    for a resolved-sideband cavity at the probed sideband, where one of the
    single-sided force spectra dies out.
    """
    return s_ff_sym.values.real - units.hbar * np.abs(chi_ff.values.imag)


def assemble_mimo_matrix(spectra_sets: "list[SpectraSet] | tuple[SpectraSet, ...]"
                         ) -> np.ndarray:
    """Block-diagonal spectral matrix for independent readout/force pairs.

    Returns an (n_omega, 2N, 2N) array with per-pair blocks
    [[S_zz, S_zf], [S_zf^*, S_ff]] from unsymmetrized spectra, ordered
    (z_1, f_1, z_2, f_2, ...).
    """
    sets = tuple(spectra_sets)
    if not sets:
        raise ValueError("need at least one spectra set")
    grid = sets[0].grid
    for s in sets:
        if s.symmetrized:
            raise ValueError("the spectral matrix is built from unsymmetrized spectra")
        if s.grid != grid:
            raise ValueError("all spectra sets must share one grid")
    n_pairs = len(sets)
    out = np.zeros((len(grid), 2 * n_pairs, 2 * n_pairs), dtype=complex)
    for i, s in enumerate(sets):
        k = 2 * i
        out[:, k, k] = s.s_zz.values
        out[:, k, k + 1] = s.s_zf.values
        out[:, k + 1, k] = np.conj(s.s_zf.values)
        out[:, k + 1, k + 1] = s.s_ff.values
    return out


def mimo_quantum_limit(spectral_matrix: np.ndarray,
                       hermiticity_tol: float = 1e-12) -> np.ndarray:
    """Determinant of the spectral matrix per frequency.

    Zero (within tolerance) certifies the multi-observable quantum limit;
    thermal admixtures push it strictly positive. The input must be Hermitian
    positive semidefinite at every frequency.
    """
    mat = np.asarray(spectral_matrix, dtype=complex)
    if mat.ndim == 2:
        mat = mat[None, :, :]
    if mat.ndim != 3 or mat.shape[1] != mat.shape[2] or mat.shape[1] % 2:
        raise InvalidMatrixError("expected an (n_omega, 2N, 2N) stack of matrices")
    scale = np.max(np.abs(mat), axis=(1, 2))
    herm_defect = np.max(np.abs(mat - np.conj(np.swapaxes(mat, 1, 2))), axis=(1, 2))
    bad = herm_defect > hermiticity_tol * np.maximum(scale, 1e-300)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise InvalidMatrixError(
            f"spectral matrix at grid index {idx} is not Hermitian "
            f"(defect {herm_defect[idx]:.3g} vs scale {scale[idx]:.3g})")
    eigs = np.linalg.eigvalsh(mat)
    if np.any(eigs < -1e-9 * np.maximum(scale, 1e-300)[:, None]):
        idx = int(np.argmax(np.min(eigs, axis=1) < 0))
        raise InvalidMatrixError(
            f"spectral matrix at grid index {idx} is not positive semidefinite")
    return np.prod(eigs, axis=1)


def constraint_report(spectra_unsym: SpectraSet, susc: SusceptibilitySet,
                      units: UnitConvention = UnitConvention(),
                      tol: float = 1e-9) -> ConstraintReport:
    """Run every per-frequency check on one detector's engine output.

    Takes unsymmetrized spectra (for the fluctuation-dissipation residual),
    symmetrizes internally for the rest, and classifies each frequency:
    quantum_limited when |gap| <= tol*scale, above_limit when gap > tol*scale,
    violation when gap < -tol*scale (inconsistent inputs, never valid physics).
    """
    if spectra_unsym.symmetrized:
        raise ValueError("constraint_report expects unsymmetrized spectra")
    _require_valid_detector(susc, tol)
    sym = symmetrize(spectra_unsym)
    gap, scale = _gap_terms(sym, susc, units)
    norm = normalize(sym, susc)
    r1, r2 = quantum_limit_residuals(norm, susc.chi_ff, units)
    kubo = kubo_check(spectra_unsym.s_ff, susc.chi_ff, units).values.real
    margin = positivity_margin(sym.s_ff, susc.chi_ff, units)
    thresh = tol * np.maximum(scale, 1e-300)
    verdicts = tuple(
        Verdict.violation if g < -t else
        (Verdict.above_limit if g > t else Verdict.quantum_limited)
        for g, t in zip(gap, thresh))
    return ConstraintReport(
        grid=spectra_unsym.grid,
        uncertainty_gap=gap,
        product_residual=r1,
        correlation_residual=r2,
        kubo_residual=kubo,
        positivity_margin=margin,
        verdicts=verdicts,
    )
