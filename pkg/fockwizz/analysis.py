"""
Scalar diagnostics over states and operators.

This module turns kets into numbers and tables: number statistics, support
masses, fidelities, the truncation convergence diagnostic, the diagonal
reality scan of D_m(z), quadrature moments and phase-space grids.

Key features:
- NumberStatistics with the probability mass above the interior levels
- Fidelity and off-support mass for the multiples-of-m support theorem
- ConvergenceReport comparing |z_m> across increasing truncations
- Husimi and Wigner grids; the Wigner value is the expectation of B_1

Example:
    ```python
    from fockwizz.core import make_space
    from fockwizz.states import gcs
    from fockwizz.analysis import number_statistics, convergence_diagnostic

    stats = number_statistics(gcs(make_space(128), 2, 0.6))
    print(stats.mean_n)  # sinh(0.6)**2

    report = convergence_diagnostic(3, 0.2, [64, 128])
    print(report.verdict)
    ```
"""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from tqdm import tqdm

from .core import embed, inner, ladder_ops, make_space
from .operators import displacement, generalized_displacement, parity_cos
from .states import coherent_amplitudes, gcs

__all__ = [
    'NumberStatistics',
    'ConvergenceReport',
    'QuadratureMoments',
    'number_statistics',
    'off_support_mass',
    'fidelity',
    'convergence_diagnostic',
    'diagonal_reality_scan',
    'quadrature_moments',
    'quadrature_grid',
    'statistics_rows',
]

DEFAULT_THRESHOLD = 1e-8
GRID_KINDS = ('husimi', 'wigner')


@dataclass
class NumberStatistics:
    """
    Photon-number distribution of a ket.

    Attributes:
        probs (numpy.ndarray): p_n = |<n|psi>|^2 for n < dim.
        mean_n (float): sum_n n p_n.
        tail_mass_above_K (float): sum of p_n over n >= K.
    """
    probs: np.ndarray
    mean_n: float
    tail_mass_above_K: float

    @property
    def total(self):
        return float(np.sum(self.probs))


def number_statistics(ket):
    probs = np.abs(ket.amps) ** 2
    levels = np.arange(ket.space.dim)
    K = ket.space.interior_dim
    return NumberStatistics(
        probs=probs,
        mean_n=float(np.dot(levels, probs)),
        tail_mass_above_K=float(np.sum(probs[K:])),
    )


def statistics_rows(ket):
    """Rows (n, p_n) for the statistics table written next to a state document."""
    stats = number_statistics(ket)
    return [(n, float(p)) for n, p in enumerate(stats.probs)]


def off_support_mass(ket, m):
    """Probability carried by levels n with n mod m != 0."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    probs = np.abs(ket.amps) ** 2
    mask = (np.arange(ket.space.dim) % m) != 0
    return float(np.sum(probs[mask]))


def fidelity(k1, k2):
    """|<k1|k2>|^2; symmetric and blind to global phases."""
    return float(abs(inner(k1, k2)) ** 2)


# Convergence ----------------------------------------

@dataclass
class ConvergenceReport:
    """
    Outcome of comparing |z_m> across truncations.

    Attributes:
        m (int): Order.
        z (complex): Amplitude.
        dims (list[int]): Truncations tested, increasing.
        deltas (list[float]): 1 - fidelity between consecutive truncations.
        threshold (float): Largest admissible delta.
        verdict (str): 'converged' or 'not-converged'.
    """
    m: int
    z: complex
    dims: List[int]
    deltas: List[float]
    threshold: float = DEFAULT_THRESHOLD
    verdict: str = field(init=False)

    def __post_init__(self):
        self.verdict = 'converged' if max(self.deltas) <= self.threshold else 'not-converged'

    @property
    def converged(self):
        return self.verdict == 'converged'


def convergence_diagnostic(m, z, dims, threshold=None, progress=False, verbose=False):
    """
    Compare |z_m> computed at increasing truncations.

    Each state is built with the safe-radius guard overridden and no tail
    check, so the diagnostic can also explore the regime where the truncated
    construction fails to converge.

    Args:
        m (int): Order.
        z (complex): Amplitude.
        dims (list[int]): Strictly increasing truncations, at least two.
        threshold (float, optional): Verdict threshold on 1 - fidelity.
            Defaults to 1e-8.
        progress (bool, optional): Show a tqdm bar over dims. Defaults to False.
        verbose (bool, optional): Print the verdict. Defaults to False.

    Returns:
        ConvergenceReport: One delta per consecutive pair of dims.

    Raises:
        ValueError: If fewer than two dims are given or they do not increase.

    Examples:
        ```python
        convergence_diagnostic(1, 0.8, [64, 128]).verdict       # 'converged'
        convergence_diagnostic(3, 1.5, [64, 128, 256]).verdict  # 'not-converged'
        ```
    """
    dims = [int(d) for d in dims]
    if len(dims) < 2:
        raise ValueError(f"convergence_diagnostic needs at least two dims, got {dims}")
    if any(d2 <= d1 for d1, d2 in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing, got {dims}")
    if threshold is None:
        threshold = DEFAULT_THRESHOLD

    states = []
    for dim in tqdm(dims, desc=f"convergence m={m}", disable=not progress):
        states.append(gcs(make_space(dim), m, z, override=True, check_tail=False))

    deltas = []
    for smaller, larger in zip(states, states[1:]):
        lifted = embed(smaller, larger.space)
        deltas.append(max(0.0, 1.0 - fidelity(lifted, larger)))

    report = ConvergenceReport(int(m), complex(z), dims, deltas, float(threshold))
    if verbose:
        print(f"Convergence of |z_m> for m={m}, z={complex(z):g} over {dims}: "
              f"{report.verdict} (max delta {max(deltas):.3g})")
    return report


def diagonal_reality_scan(space, m, z, n_max, **kwargs):
    """max over n <= n_max of |Im <n|D_m(z)|n>|; kwargs go to generalized_displacement."""
    if not 0 <= n_max < space.interior_dim:
        raise ValueError(f"n_max={n_max} must lie below the interior dimension "
                         f"K={space.interior_dim}")
    D = generalized_displacement(space, m, z, **kwargs)
    diagonal = np.diag(D.mat)[:n_max + 1]
    return float(np.max(np.abs(diagonal.imag)))


# Phase space ----------------------------------------

@dataclass
class QuadratureMoments:
    """Means and variances of x = (a + a+)/sqrt2 and p = (a - a+)/(i sqrt2)."""
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float

    @property
    def uncertainty_product(self):
        return self.var_x * self.var_p


def quadrature_moments(ket):
    """
    Quadrature means and variances from the ladder operators.

    The vacuum gives var_x = var_p = 1/2; a squeezed vacuum D_2(r)|0> with
    real r > 0 gives var_x = exp(-2r)/2 and var_p = exp(2r)/2.
    """
    a, a_dag, _ = ladder_ops(ket.space)
    x = (a.mat + a_dag.mat) / math.sqrt(2)
    p = (a.mat - a_dag.mat) / (1j * math.sqrt(2))
    psi = ket.amps

    def expect(M):
        return float(np.vdot(psi, M @ psi).real)

    mean_x, mean_p = expect(x), expect(p)
    return QuadratureMoments(
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=expect(x @ x) - mean_x ** 2,
        var_p=expect(p @ p) - mean_p ** 2,
    )


def _husimi(ket, alpha):
    overlap = np.vdot(coherent_amplitudes(ket.space.dim, alpha), ket.amps)
    return float(abs(overlap) ** 2 / math.pi)


def _wigner(ket, alpha, parity):
    # W(alpha) = (2/pi) <psi| D(2 alpha) cos(pi a+a) |psi>
    D = displacement(ket.space, 2 * alpha)
    value = np.vdot(ket.amps, D.mat @ (parity.mat @ ket.amps))
    return float(2 / math.pi * value.real)


def quadrature_grid(ket, xs, ps, kind='husimi', progress=False):
    """
    Quasi-probability values on a phase-space grid.

    Args:
        ket (Ket): State to evaluate.
        xs (iterable of float): Position-quadrature grid values.
        ps (iterable of float): Momentum-quadrature grid values.
        kind (str, optional): 'husimi' (Q function) or 'wigner'. Defaults to 'husimi'.
        progress (bool, optional): Show a tqdm bar. Defaults to False.

    Returns:
        list[tuple]: Rows (x, p, value) ordered by x then p, with the point
            alpha = (x + i p)/sqrt2.

    Raises:
        ValueError: For an unknown kind.

    Examples:
        ```python
        rows = quadrature_grid(space.vacuum(), [0.0], [0.0], kind='wigner')
        rows[0][2]  # 2/pi
        ```
    """
    if kind not in GRID_KINDS:
        raise ValueError(f"Unknown grid kind '{kind}'. Must be one of {GRID_KINDS}.")
    points = [(float(x), float(p)) for x in xs for p in ps]
    parity = parity_cos(ket.space, 1)
    rows = []
    for x, p in tqdm(points, desc=f"{kind} grid", disable=not progress):
        alpha = complex(x, p) / math.sqrt(2)
        if kind == 'husimi':
            value = _husimi(ket, alpha)
        else:
            value = _wigner(ket, alpha, parity)
        rows.append((x, p, value))
    return rows
