"""
Operator constructors for the parity-displacement family.

Every constructor returns an Op over a FockSpace and is a deterministic pure
function of its arguments. The family is built from three ingredients: the
order-m displacement D_m(z) (an exponential of an anti-hermitian generator of
degree m), the generalized parity cos(pi/m a+a), and their product, the
hermitian parity-displacement operator B_m(z) = D_m(z) cos(pi/m a+a).

Key features:
- D(z), D_m(z) with a safe-radius guard for m >= 3
- cos/sin(pi/m a+a) with exact half-period antisymmetry
- B_m(z), its evolution U_m(lambda; z) by two independent paths
- V_m(lambda; z, u) and its closed expansions for m <= 2
- A thread-safe cache of D_m(z), observationally transparent

Example:
    ```python
    from fockwizz.core import make_space, hermiticity_residual
    from fockwizz.operators import parity_displacement, u_evolution

    space = make_space(128)
    B = parity_displacement(space, 2, 0.5)
    print(hermiticity_residual(B))  # ~1e-15

    U = u_evolution(space, 2, 0.5, 0.7, method='both')
    ```
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    Op,
    RadiusError,
    diag_fn_op,
    edge_residual,
    exp_i_hermitian,
    ladder_ops,
    mat_exp,
)

__all__ = [
    'SAFE_RADIUS',
    'OperatorParams',
    'displacement',
    'displacement_generator',
    'generalized_displacement',
    'parity_cos',
    'parity_sin',
    'parity_rotation',
    'parity_displacement',
    'u_evolution',
    'u_special_form',
    'v_operator',
    'v1_expanded',
    'v_expansion',
    'clear_operator_cache',
]

SAFE_RADIUS = 0.25
METHOD_TOL = 1e-8
_SNAP = 1e-15
U_METHODS = ('exponential', 'closed-form', 'both')


@dataclass(frozen=True)
class OperatorParams:
    """
    Parameters shared by the operator family.

    Attributes:
        m (int): Order of the generalized construction (>= 1).
        z (complex): Displacement amplitude.
        u (complex): Second amplitude used by V_m.
        lam (float): Real evolution parameter lambda.
    """
    m: int = 1
    z: complex = 0j
    u: complex = 0j
    lam: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, 'm', int(self.m))
        object.__setattr__(self, 'z', complex(self.z))
        object.__setattr__(self, 'u', complex(self.u))
        object.__setattr__(self, 'lam', float(self.lam))

    def within_radius(self, safe_radius=SAFE_RADIUS):
        """True when z and u/2 are admissible for this m without override."""
        if self.m < 3:
            return True
        return abs(self.z) <= safe_radius and abs(self.u) / 2 <= safe_radius


def _check_radius(m, z, safe_radius, override):
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if safe_radius is None:
        safe_radius = SAFE_RADIUS
    if m >= 3 and abs(z) > safe_radius and not override:
        raise RadiusError(
            f"|z| = {abs(z):.4g} exceeds the safe radius {safe_radius:g} for m = {m}; "
            f"the truncated D_m(z) may not converge (pass override=True to explore)"
        )


# Generalized parity ----------------------------------------

def _cos_pi_frac(n, m):
    # reduce on n mod 2m so that values at n and n + m are exact negatives
    r = n % (2 * m)
    sign = 1.0
    if r >= m:
        r -= m
        sign = -1.0
    value = sign * math.cos(math.pi * r / m)
    return 0.0 if abs(value) < _SNAP else value


def _sin_pi_frac(n, m):
    r = n % (2 * m)
    sign = 1.0
    if r >= m:
        r -= m
        sign = -1.0
    value = sign * math.sin(math.pi * r / m)
    return 0.0 if abs(value) < _SNAP else value


def parity_cos(space, m):
    """
    Generalized parity cos(pi/m a+a) = diag(cos(pi n / m)).

    Hermitian for every m; unitary only for m = 1, where it is the ordinary
    parity diag((-1)**n).
    """
    return diag_fn_op(space, lambda n: _cos_pi_frac(n, m), label=f"cos(pi/{m} a^+a)")


def parity_sin(space, m):
    """diag(sin(pi n / m)); vanishes exactly on multiples of m."""
    return diag_fn_op(space, lambda n: _sin_pi_frac(n, m), label=f"sin(pi/{m} a^+a)")


def parity_rotation(space, m, sign=1):
    """exp(sign * i pi/m a+a), computed with mat_exp on the number operator."""
    _, _, number = ladder_ops(space)
    return mat_exp(number * (sign * 1j * math.pi / m))


# Displacements ----------------------------------------

def displacement_generator(space, m, z):
    """
    Anti-hermitian generator ((-1)**m / m) (z* a**m - z (a+)**m).

    For m = 1 this is z a+ - z* a, the generator of D(z).
    """
    a, a_dag, _ = ladder_ops(space)
    a_m = np.linalg.matrix_power(a.mat, m)
    a_dag_m = np.linalg.matrix_power(a_dag.mat, m)
    coeff = (-1) ** m / m
    gen = coeff * (np.conj(z) * a_m - z * a_dag_m)
    return Op(space, gen, label=f"G_{m}({z:g})")


@lru_cache(maxsize=64)
def _displacement_cached(space, m, z):
    gen = displacement_generator(space, m, z)
    op = mat_exp(gen)
    return Op(space, op.mat, label=f"D_{m}({z:g})")


def displacement(space, z):
    """
    Glauber displacement D(z) = exp(z a+ - z* a).

    Examples:
        ```python
        D = displacement(space, 0.8)
        coherent_from_vacuum = D @ space.vacuum()
        ```
    """
    a, a_dag, _ = ladder_ops(space)
    z = complex(z)
    gen = Op(space, z * a_dag.mat - np.conj(z) * a.mat, label=f"G({z:g})")
    return Op(space, mat_exp(gen).mat, label=f"D({z:g})")


def generalized_displacement(space, m, z, safe_radius=None, override=False):
    """
    Order-m generalized displacement D_m(z).

    Args:
        space (FockSpace): Truncation context.
        m (int): Order (>= 1). D_1 is D(z), D_2 is the squeeze operator S(z).
        z (complex): Amplitude.
        safe_radius (float, optional): Admissible |z| for m >= 3. Defaults to 0.25.
        override (bool, optional): Allow |z| beyond the safe radius. Defaults to False.

    Returns:
        Op: The unitary D_m(z).

    Raises:
        RadiusError: For m >= 3 with |z| beyond the safe radius and no override.

    Note:
        Results are memoised per (space, m, z); the cache is thread safe and
        the returned arrays are read-only.
    """
    _check_radius(m, z, safe_radius, override)
    return _displacement_cached(space, int(m), complex(z))


def clear_operator_cache():
    _displacement_cached.cache_clear()


def parity_displacement(space, m, z, safe_radius=None, override=False):
    """
    Parity-displacement operator B_m(z) = D_m(z) cos(pi/m a+a).

    B_m(z) is hermitian for every m because cos(pi/m a+a) anticommutes with
    a**m; for m = 1 it is also unitary.
    """
    D = generalized_displacement(space, m, z, safe_radius, override)
    C = parity_cos(space, m)
    return Op(space, D.mat @ C.mat, label=f"B_m(z), m={m}, z={complex(z):g}")


# Evolution operators ----------------------------------------

def _closed_form_u(space, m, z, lam, safe_radius, override):
    D = generalized_displacement(space, m, z, safe_radius, override)
    cos_part = diag_fn_op(space, lambda n: math.cos(lam * _cos_pi_frac(n, m)))
    sin_part = diag_fn_op(space, lambda n: math.sin(lam * _cos_pi_frac(n, m)))
    return Op(space, cos_part.mat + 1j * (D.mat @ sin_part.mat),
              label=f"U_{m}({lam:g};{complex(z):g}) closed-form")


def u_evolution(space, m, z, lam, method='exponential', safe_radius=None, override=False,
                tol=METHOD_TOL):
    """
    Evolution operator U_m(lambda; z) = exp(i lambda B_m(z)).

    Args:
        space (FockSpace): Truncation context.
        m (int): Order.
        z (complex): Amplitude.
        lam (float): Real evolution parameter.
        method (str, optional): 'exponential' (eigendecomposition of B_m),
            'closed-form' (cos(lam C) + i D_m sin(lam C) with C = cos(pi/m a+a)),
            or 'both' (compute both and require agreement). Defaults to 'exponential'.
        safe_radius (float, optional): See generalized_displacement.
        override (bool, optional): See generalized_displacement.
        tol (float, optional): Edge-residual agreement required by 'both'.

    Returns:
        Op: The unitary U_m(lambda; z).

    Raises:
        ValueError: For an unknown method.
        RuntimeError: If method='both' and the paths disagree beyond tol.

    Examples:
        ```python
        U = u_evolution(space, 1, 0.8, 0.7)
        psi = U @ space.vacuum()   # cos(0.7)|0> + i sin(0.7)|0.8>
        ```
    """
    if method not in U_METHODS:
        raise ValueError(f"Unknown method '{method}'. Must be one of {U_METHODS}.")
    lam = float(lam)
    if method == 'closed-form':
        return _closed_form_u(space, m, z, lam, safe_radius, override)

    B = parity_displacement(space, m, z, safe_radius, override)
    U = exp_i_hermitian(B, lam)
    U = Op(space, U.mat, label=f"U_{m}({lam:g};{complex(z):g})")
    if method == 'both':
        closed = _closed_form_u(space, m, z, lam, safe_radius, override)
        mismatch = edge_residual(space, U.mat - closed.mat)
        if mismatch > tol:
            raise RuntimeError(
                f"U_{m} exponential and closed-form paths disagree: edge residual "
                f"{mismatch:.3g} > {tol:g} (m={m}, z={z}, lambda={lam})"
            )
    return U


def u_special_form(space, m, z, lam):
    """
    Explicit trigonometric forms of U_1 and U_2.

    U_1 = cos(lam) I + i sin(lam) D(z) cos(pi a+a)
    U_2 = sin^2(pi/2 a+a) + cos(lam) cos^2(pi/2 a+a) + i sin(lam) D_2(z) cos(pi/2 a+a)
    """
    lam = float(lam)
    if m == 1:
        P = parity_cos(space, 1)
        D = displacement(space, z)
        mat = math.cos(lam) * np.eye(space.dim) + 1j * math.sin(lam) * (D.mat @ P.mat)
    elif m == 2:
        C = parity_cos(space, 2).mat
        S = parity_sin(space, 2).mat
        D2 = generalized_displacement(space, 2, z).mat
        mat = S @ S + math.cos(lam) * (C @ C) + 1j * math.sin(lam) * (D2 @ C)
    else:
        raise ValueError(f"Explicit U_m forms exist for m in (1, 2) only, got m={m}")
    return Op(space, mat, label=f"U_{m}({lam:g};{complex(z):g}) explicit")


def v_operator(space, m, z, u, lam, safe_radius=None, override=False):
    """
    V_m(lambda; z, u) = D_m(u/2) U_m(lambda; z) D_m(u/2).

    Built strictly as the triple product; this is the only construction valid
    for every m.
    """
    half = generalized_displacement(space, m, complex(u) / 2, safe_radius, override)
    U = u_evolution(space, m, z, lam, safe_radius=safe_radius, override=override)
    return Op(space, half.mat @ U.mat @ half.mat,
              label=f"V_{m}({float(lam):g};{complex(z):g},{complex(u):g})")


def v1_expanded(space, z, u, lam):
    """cos(lam) D(u) + i sin(lam) exp(i Im(u z*)) B(z), the expanded m = 1 form."""
    z, u, lam = complex(z), complex(u), float(lam)
    phase = cmath.exp(1j * (u * z.conjugate()).imag)
    B = parity_displacement(space, 1, z)
    Du = displacement(space, u)
    mat = math.cos(lam) * Du.mat + 1j * math.sin(lam) * phase * B.mat
    return Op(space, mat, label=f"V_1({lam:g};{z:g},{u:g}) expanded")


def v_expansion(space, m, z, u, lam):
    """
    Expanded V_m for m <= 2.

    D_m(u/2)^2 [sin^2 + cos(lam) cos^2](pi/m a+a) + i sin(lam) D~_m(z) cos(pi/m a+a)
    with D~_m(z) = D_m(u/2) D_m(z) D_m(-u/2). The trigonometric collapse behind
    it needs cos(pi n/m) in {0, +1, -1}, so m >= 3 is rejected.
    """
    if m not in (1, 2):
        raise ValueError(f"The V_m expansion holds for m in (1, 2) only, got m={m}")
    z, u, lam = complex(z), complex(u), float(lam)
    half = generalized_displacement(space, m, u / 2).mat
    half_inv = generalized_displacement(space, m, -u / 2).mat
    Dz = generalized_displacement(space, m, z).mat
    C = parity_cos(space, m).mat
    S = parity_sin(space, m).mat
    dressed = half @ Dz @ half_inv
    mat = (half @ half @ (S @ S + math.cos(lam) * (C @ C))
           + 1j * math.sin(lam) * (dressed @ C))
    return Op(space, mat, label=f"V_{m}({lam:g};{z:g},{u:g}) expanded")
