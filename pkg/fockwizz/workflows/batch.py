"""
Parameter sweeps over the operator family.

A sweep varies one parameter (lambda, |z| or |u|) over a range with the other
parameters fixed, and evaluates observables at every point. Points run on a
thread pool and are merged back in range order, so the output table is the
same for any number of workers.

Example:
    ```python
    from fockwizz.core import make_space
    from fockwizz.workflows.batch import run_sweep

    header, rows = run_sweep(make_space(128), 'lambda', [0.0, 0.5, 1.0],
                             observables=['vacuum-probability'], m=1, z=0.8)
    ```
"""

import math
from concurrent.futures import ThreadPoolExecutor

from tqdm import tqdm

from ..analysis import number_statistics, off_support_mass
from ..core import ConvergenceError, RadiusError, TailMassError, edge_residual, hermiticity_residual
from ..operators import OperatorParams, parity_displacement, u_evolution
from ..states import gcs, require_convergence, superposition_state

__all__ = [
    'SWEEP_PARAMS',
    'OBSERVABLES',
    'STATE_OBSERVABLES',
    'sweep_points',
    'run_sweep',
    'map_ordered',
]

SWEEP_PARAMS = ('lambda', 'z', 'u')


def _vacuum_probability(space, p, safe_radius):
    U = u_evolution(space, p.m, p.z, p.lam, safe_radius=safe_radius)
    return abs(U.mat[0, 0]) ** 2


def _gcs_vacuum_amplitude(space, p, safe_radius):
    return float(gcs(space, p.m, p.z, safe_radius=safe_radius).amps[0].real)


def _off_support_mass(space, p, safe_radius):
    return off_support_mass(gcs(space, p.m, p.z, safe_radius=safe_radius), p.m)


def _mean_number(space, p, safe_radius):
    psi = superposition_state(space, p.m, p.z, p.lam, safe_radius=safe_radius)
    return number_statistics(psi).mean_n


def _method_residual(space, p, safe_radius):
    exact = u_evolution(space, p.m, p.z, p.lam, safe_radius=safe_radius)
    closed = u_evolution(space, p.m, p.z, p.lam, method='closed-form', safe_radius=safe_radius)
    return edge_residual(space, exact.mat - closed.mat)


def _hermiticity_residual(space, p, safe_radius):
    return hermiticity_residual(parity_displacement(space, p.m, p.z, safe_radius))


OBSERVABLES = {
    'vacuum-probability': _vacuum_probability,
    'gcs-vacuum-amplitude': _gcs_vacuum_amplitude,
    'off-support-mass': _off_support_mass,
    'mean-number': _mean_number,
    'method-residual': _method_residual,
    'hermiticity-residual': _hermiticity_residual,
}

# observables derived from D_m(z)|0>, gated by the convergence diagnostic for m >= 3
STATE_OBSERVABLES = frozenset({'vacuum-probability', 'gcs-vacuum-amplitude',
                               'off-support-mass', 'mean-number'})


def _along(direction, magnitude):
    direction = complex(direction)
    if direction == 0:
        return complex(magnitude)
    return magnitude * direction / abs(direction)


def sweep_points(param, values, m=1, z=0j, u=0j, lam=0.0):
    """
    OperatorParams for each swept value.

    'z' and 'u' sweep the magnitude along the direction of the fixed value
    (the real axis when it is zero); 'lambda' replaces lambda.
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"Unknown sweep parameter '{param}'. Must be one of {SWEEP_PARAMS}.")
    points = []
    for value in values:
        if param == 'lambda':
            points.append(OperatorParams(m, z, u, value))
        elif param == 'z':
            points.append(OperatorParams(m, _along(z, value), u, lam))
        else:
            points.append(OperatorParams(m, z, _along(u, value), lam))
    return points


def map_ordered(func, items, workers=None, progress=False, desc=None):
    """
    Apply func to every item, in parallel when workers > 1, keeping input order.

    Args:
        func (callable): Function of one item.
        items (list): Inputs.
        workers (int, optional): Thread count; None or 1 runs serially.
        progress (bool, optional): Show a tqdm bar.
        desc (str, optional): Progress bar label.

    Returns:
        list: func(item) for each item, in input order.
    """
    items = list(items)
    if not workers or workers <= 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=not progress)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(tqdm(executor.map(func, items), total=len(items), desc=desc,
                         disable=not progress))


def run_sweep(space, param, values, observables=('vacuum-probability',), m=1, z=0j, u=0j,
              lam=0.0, safe_radius=None, threshold=None, workers=None, progress=False,
              verbose=False):
    """
    Evaluate observables along a one-parameter sweep.

    Args:
        space (FockSpace): Truncation context.
        param (str): 'lambda', 'z' or 'u'.
        values (list[float]): Swept values, e.g. from parse_range.
        observables (list[str]): Keys of OBSERVABLES.
        m, z, u, lam: Fixed parameters.
        safe_radius (float, optional): Admissible |z| for m >= 3.
        threshold (float, optional): Convergence threshold for the m >= 3 gate
            on state observables. Defaults to 1e-8.
        workers (int, optional): Thread count for the fan-out.
        progress (bool, optional): Show a tqdm bar.
        verbose (bool, optional): Print a note for every point left as NaN.

    Returns:
        tuple: (header, rows). The header is [param, *observables]; each row
            holds the swept value and one float per observable. Points whose
            preconditions fail (tail mass, radius, convergence) yield NaN.

    Raises:
        ValueError: For an empty range, unknown parameter or observable.

    Examples:
        ```python
        header, rows = run_sweep(space, 'z', [0.3, 0.6], ['gcs-vacuum-amplitude'], m=2)
        # rows[i][1] == 1 / sqrt(cosh(rows[i][0]))
        ```
    """
    values = list(values)
    if not values:
        raise ValueError("Sweep range is empty")
    unknown = [name for name in observables if name not in OBSERVABLES]
    if unknown:
        raise ValueError(f"Unknown observable(s) {unknown}. Must be among {sorted(OBSERVABLES)}.")
    points = sweep_points(param, values, m=m, z=z, u=u, lam=lam)

    gated = any(name in STATE_OBSERVABLES for name in observables)

    def evaluate(point):
        gate_error = None
        if gated and point.m >= 3:
            try:
                require_convergence(space, point.m, point.z, threshold, safe_radius)
            except (RadiusError, ConvergenceError) as exc:
                gate_error = exc
        row = []
        for name in observables:
            try:
                if gate_error is not None and name in STATE_OBSERVABLES:
                    raise gate_error
                row.append(float(OBSERVABLES[name](space, point, safe_radius)))
            except (TailMassError, RadiusError, ConvergenceError) as exc:
                if verbose:
                    print(f"Note: {name} left as NaN at {point}: {exc}")
                row.append(math.nan)
        return row

    results = map_ordered(evaluate, points, workers=workers, progress=progress,
                          desc=f"sweep {param}")
    header = [param] + list(observables)
    rows = [tuple([value] + row) for value, row in zip(values, results)]
    return header, rows
