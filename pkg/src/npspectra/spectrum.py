"""Spectrum extraction, counting functions, power-law fits, classification.

The eigenvalues of the symmetrized double layer decay like
lambda_j ~ +/- C_pm j^(-1/2); the fits estimate the constants C and the
study utilities track how the number of negative eigenvalues behaves under
grid refinement (bounded for convex-like bodies, growing for surfaces with
a region of positive curvature form).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import ConfigError, DomainError, PoleError
from .functionals import WeylCoefficients
from .grids import build_grid
from .operators import assemble_operators, symmetrize, to_weighted_l2

BOUNDED = "BOUNDED"
GROWING = "GROWING"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class FitEstimate:
    """Result of a power-law coefficient fit.

    ``c_hat`` estimates C in lambda_j ~ C j^(-1/2); ``counting_check`` is
    the matching estimate of C^2 from the counting function (median of
    lambda_j^2 n(lambda_j) over the window), a consistency diagnostic.
    """

    c_hat: float
    window: tuple
    counting_check: float


@dataclass
class SpectrumReport:
    """Full spectral output of one pipeline run."""

    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    singular_values: np.ndarray
    clusters: list
    fit: dict
    predicted: WeylCoefficients
    plasmon: list
    diagnostics: dict


@dataclass
class StudyResult:
    """Negative-eigenvalue counts across refinements and their trend."""

    rows: list
    classification: str
    threshold: float


def split_spectrum(eigs, cutoff: float):
    """Split real eigenvalues into signed branches, discarding noise.

    Parameters
    ----------
    eigs : array-like
        Real eigenvalues in any order.
    cutoff : float
        Values with |lambda| < cutoff are treated as discretization noise
        and dropped; must be nonnegative.

    Returns
    -------
    (lambda_plus, lambda_minus)
        Positive eigenvalues sorted descending, and moduli of negative
        eigenvalues sorted descending.
    """
    if cutoff < 0:
        raise ConfigError("cutoff must be nonnegative")
    eigs = np.asarray(eigs, dtype=float)
    plus = np.sort(eigs[(eigs > 0) & (eigs >= cutoff)])[::-1]
    minus = np.sort(-eigs[(eigs < 0) & (eigs <= -cutoff)])[::-1]
    return plus, minus


def counting_function(seq, level: float) -> int:
    """Number of entries of a descending positive sequence above a level.

    Strict inequality: entries equal to ``level`` are not counted.

    Raises
    ------
    DomainError
        If ``level`` is not strictly positive.
    """
    if not level > 0:
        raise DomainError(f"counting level must be positive, got {level}")
    seq = np.asarray(seq, dtype=float)
    return int(np.searchsorted(-seq, -level, side="left"))


def cluster_multiplicities(seq, rel_tol: float):
    """Greedy clustering of adjacent values of a sorted sequence.

    Consecutive values are merged into the current cluster while they stay
    within ``rel_tol`` relative distance of the running cluster mean.

    Returns
    -------
    list of (value, multiplicity)
        Cluster means and sizes, in the order of the input.
    """
    seq = np.asarray(seq, dtype=float)
    clusters = []
    total = 0.0
    count = 0
    for x in seq:
        if count and abs(x - total / count) > rel_tol * abs(total / count):
            clusters.append((total / count, count))
            total, count = 0.0, 0
        total += x
        count += 1
    if count:
        clusters.append((total / count, count))
    return clusters


def default_fit_window(n: int):
    """Fit window [4, max(4, n // 8)] used when the config says "auto"."""
    return (4, max(4, n // 8))


def weyl_fit(seq, window) -> FitEstimate:
    """Estimate C in lambda_j ~ C j^(-1/2) from a descending sequence.

    Parameters
    ----------
    seq : array-like
        Descending positive sequence with trivial eigenvalues already
        removed (1-based indexing of the fit starts at seq[0]).
    window : (j_lo, j_hi) or "auto"
        Inclusive 1-based index window of the fit; "auto" selects
        ``default_fit_window`` clipped to the sequence length.

    Returns
    -------
    FitEstimate
        Median of lambda_j sqrt(j) over the window, and the counting-based
        estimate of C^2 as a consistency check.

    Raises
    ------
    ConfigError
        If the window is empty or outside [1, len(seq)].
    """
    seq = np.asarray(seq, dtype=float)
    n = seq.size
    if window == "auto":
        j_lo, j_hi = default_fit_window(n)
        j_hi = min(j_hi, n)
        j_lo = min(j_lo, j_hi)
    else:
        j_lo, j_hi = int(window[0]), int(window[1])
    if not (1 <= j_lo <= j_hi <= n):
        raise ConfigError(
            f"fit window ({j_lo}, {j_hi}) outside valid range [1, {n}]")
    j = np.arange(j_lo, j_hi + 1)
    vals = seq[j - 1]
    c_hat = float(np.median(vals * np.sqrt(j)))
    counts = np.array([counting_function(seq, v) for v in vals])
    counting_check = float(np.median(vals ** 2 * counts))
    return FitEstimate(c_hat=c_hat, window=(j_lo, j_hi),
                       counting_check=counting_check)


def plasmon_map(lam: float) -> float:
    """Material eigenvalue of the transmission problem for one NP eigenvalue.

    epsilon = 1 - 2 lambda / (lambda - 1/2); monotone increasing on
    (-1/2, 1/2) with limit 1 at lambda = 0.

    Raises
    ------
    PoleError
        If lambda is within 1e-12 of 1/2 (the constant eigenfunction has no
        transmission counterpart).
    """
    lam = float(lam)
    if abs(lam - 0.5) <= 1e-12:
        raise PoleError("lambda = 1/2 is a pole of the plasmonic map")
    return 1.0 - 2.0 * lam / (lam - 0.5)


def symmetrized_spectrum(grid):
    """Assemble, symmetrize, and return eigenvalues sorted descending."""
    k_op, s_op = assemble_operators(grid)
    sym = symmetrize(to_weighted_l2(k_op), to_weighted_l2(s_op))
    return sla.eigvalsh(sym.matrix)[::-1], sym


def negative_count_study(surface, resolutions: Sequence,
                         threshold: float = 1e-3) -> StudyResult:
    """Track the count of negative eigenvalues under grid refinement.

    Parameters
    ----------
    surface : ParametricSurface
        Surface under study.
    resolutions : sequence
        At least 3 strictly increasing resolutions; each entry is an int n
        (meaning n x n) or an (n_u, n_v) pair.
    threshold : float
        Eigenvalues below -threshold are counted as negative.

    Returns
    -------
    StudyResult
        Rows of (n_nodes, count) and a trend classification: BOUNDED when
        the count is the same at the top two resolutions, GROWING when
        strictly increasing throughout, INCONCLUSIVE otherwise.
    """
    if not threshold > 0:
        raise ConfigError("threshold must be positive")
    res = [(int(r), int(r)) if np.isscalar(r) else (int(r[0]), int(r[1]))
           for r in resolutions]
    if len(res) < 3:
        raise ConfigError("need at least 3 resolutions")
    sizes = [nu * nv for nu, nv in res]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("resolutions must be strictly increasing")
    rows = []
    for nu, nv in res:
        grid = build_grid(surface, nu, nv)
        eigs, _ = symmetrized_spectrum(grid)
        rows.append((grid.n_nodes, int(np.sum(eigs < -threshold))))
    counts = [c for _, c in rows]
    if all(b > a for a, b in zip(counts, counts[1:])):
        classification = GROWING
    elif counts[-1] == counts[-2]:
        classification = BOUNDED
    else:
        classification = INCONCLUSIVE
    return StudyResult(rows=rows, classification=classification,
                       threshold=float(threshold))
