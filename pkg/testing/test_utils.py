"""
Utility functions for tests
"""

import math

import numpy as np


def interior_gap(k1, k2):
    """Interior-projected distance between two kets or amplitude arrays."""
    a1 = getattr(k1, 'amps', k1)
    a2 = getattr(k2, 'amps', k2)
    K = k1.space.interior_dim if hasattr(k1, 'space') else len(a1) // 2
    return float(np.linalg.norm(np.asarray(a1)[:K] - np.asarray(a2)[:K]))


def assert_kets_close(k1, k2, tol):
    gap = interior_gap(k1, k2)
    assert gap <= tol, f"kets differ by {gap:.3g} > {tol:g}"


def assert_unit_norm(ket, tol=1e-12):
    assert abs(ket.norm - 1.0) <= tol, f"norm {ket.norm!r} is not 1"


def poisson_probs(z, count):
    """Exact Poisson law of a coherent state |z> for n < count."""
    mean = abs(z) ** 2
    return np.array([math.exp(-mean) * mean ** n / math.factorial(n) for n in range(count)])


def squeezed_vacuum_overlap(r):
    """<0|S(r)|0> for squeeze parameter r."""
    return 1 / math.sqrt(math.cosh(r))


def read_csv_rows(path):
    """Header and float rows of a table written by fockwizz."""
    lines = [line for line in path.read_text().splitlines() if line]
    header = lines[0].split(',')
    rows = [[float(v) for v in line.split(',')] for line in lines[1:]]
    return header, rows
