"""
Tests for the parity-displacement operator family
"""

import cmath
import math

import numpy as np
import pytest

from fockwizz.core import (
    RadiusError,
    edge_residual,
    hermiticity_residual,
    ladder_ops,
    make_space,
    mat_exp,
    unitarity_residual,
)
from fockwizz.operators import (
    OperatorParams,
    clear_operator_cache,
    displacement,
    displacement_generator,
    generalized_displacement,
    parity_cos,
    parity_displacement,
    parity_rotation,
    parity_sin,
    u_evolution,
    u_special_form,
    v1_expanded,
    v_expansion,
    v_operator,
)
from fockwizz.states import coherent

from test_utils import assert_kets_close, squeezed_vacuum_overlap


def test_operator_params_validation():
    """Test m >= 1 and radius admissibility."""
    with pytest.raises(ValueError):
        OperatorParams(m=0)
    assert OperatorParams(m=3, z=0.2, u=0.4j).within_radius()
    assert not OperatorParams(m=3, z=0.5).within_radius()
    assert OperatorParams(m=2, z=5.0).within_radius()


def test_displacement_zero_is_identity(space64):
    """Test D(0) = I."""
    assert edge_residual(space64, displacement(space64, 0).mat - np.eye(64)) <= 1e-15


def test_displacement_of_vacuum(space64):
    """Test D(z)|0> = |z>."""
    D = displacement(space64, 0.8)
    assert_kets_close(D @ space64.vacuum(), coherent(space64, 0.8), 1e-10)


def test_displacement_composition(space64):
    """Test D(z) D(z') = exp(i Im(z z'*)) D(z + z')."""
    z, w = 0.5, 0.3j
    phase = cmath.exp(1j * (z * np.conj(w)).imag)
    lhs = displacement(space64, z).mat @ displacement(space64, w).mat
    rhs = phase * displacement(space64, z + w).mat
    assert edge_residual(space64, lhs - rhs) <= 1e-9


def test_d1_is_displacement(space64):
    """Test D_1(z) = D(z)."""
    z = 0.4 - 0.2j
    D1 = generalized_displacement(space64, 1, z)
    assert edge_residual(space64, D1.mat - displacement(space64, z).mat) <= 1e-12


@pytest.mark.parametrize("z", [0.6, 0.6j, 0.36 + 0.48j])
def test_d2_vacuum_overlap(space128, z):
    """Test <0|D_2(z)|0> = 1/sqrt(cosh|z|)."""
    D2 = generalized_displacement(space128, 2, z)
    assert abs(D2.mat[0, 0] - squeezed_vacuum_overlap(abs(z))) <= 1e-8


def test_d3_unitary():
    """Test the truncated D_3 is unitary on the interior."""
    space = make_space(128, interior_dim=48)
    D3 = generalized_displacement(space, 3, 0.2)
    assert unitarity_residual(D3) <= 1e-8


@pytest.mark.parametrize("dim", [64, 128])
@pytest.mark.parametrize("m,z", [(1, 1.0), (1, 0.7j), (2, 1.0), (2, 0.6j), (3, 0.2), (3, 0.25j)])
def test_generator_exponential_cross_check(dim, m, z):
    """Test that Pade and eigendecomposition exponentials of G_m(z) agree."""
    space = make_space(dim)
    gen = displacement_generator(space, m, z)
    # raises RuntimeError when the two paths disagree beyond 1e-10
    D = mat_exp(gen, anti_hermitian=True)
    assert unitarity_residual(D) <= 1e-8


def test_safe_radius_guard(space32):
    """Test that m >= 3 beyond the safe radius needs an override."""
    with pytest.raises(RadiusError):
        generalized_displacement(space32, 3, 0.5)
    D = generalized_displacement(space32, 3, 0.5, override=True)
    assert unitarity_residual(D) <= 1e-10
    # a wider radius admits the same amplitude
    generalized_displacement(space32, 3, 0.5, safe_radius=0.6)


def test_displacement_cache(space32):
    """Test the cache returns the same read-only operator until cleared."""
    first = generalized_displacement(space32, 2, 0.3)
    assert generalized_displacement(space32, 2, 0.3) is first
    assert not first.mat.flags.writeable
    clear_operator_cache()
    second = generalized_displacement(space32, 2, 0.3)
    assert second is not first
    np.testing.assert_array_equal(second.mat, first.mat)


def test_parity_cos_m1(space32):
    """Test cos(pi a+a) = diag((-1)^n)."""
    np.testing.assert_array_equal(np.diag(parity_cos(space32, 1).mat).real,
                                  [(-1.0) ** n for n in range(32)])


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_parity_anticommutation(space64, m):
    """Test {cos, a^m} = 0, [cos, a^2m] = 0 and {sin, a^m} = 0."""
    a, _, _ = ladder_ops(space64)
    a_m = np.linalg.matrix_power(a.mat, m)
    a_2m = a_m @ a_m
    C = parity_cos(space64, m).mat
    S = parity_sin(space64, m).mat
    assert edge_residual(space64, C @ a_m + a_m @ C) <= 1e-12
    assert edge_residual(space64, C @ a_2m - a_2m @ C) <= 1e-12
    assert edge_residual(space64, S @ a_m + a_m @ S) <= 1e-12


@pytest.mark.parametrize("m", [2, 3, 4])
def test_parity_sin_vanishes_on_multiples(space32, m):
    """Test sin(pi n/m) = 0 exactly when m divides n."""
    values = np.diag(parity_sin(space32, m).mat)
    assert not np.any(values[::m])


@pytest.mark.parametrize("m", [1, 2, 3])
def test_phase_rotation(space64, m):
    """Test exp(-i pi/m a+a) a exp(i pi/m a+a) = exp(i pi/m) a."""
    a, _, _ = ladder_ops(space64)
    E = parity_rotation(space64, m)
    rotated = E.mat.conj().T @ a.mat @ E.mat
    assert edge_residual(space64, rotated - cmath.exp(1j * math.pi / m) * a.mat) <= 1e-10


@pytest.mark.parametrize("m,z", [(1, 0.7), (2, 0.5), (3, 0.2)])
def test_parity_displacement_hermitian(space128, m, z):
    """Test B_m(z) is hermitian."""
    assert hermiticity_residual(parity_displacement(space128, m, z)) <= 1e-9


@pytest.mark.parametrize("m,z", [(1, 0.7), (2, 0.5 + 0.3j), (3, 0.2j)])
def test_parity_conjugation(space128, m, z):
    """Test cos(pi/m a+a) D_m(z) = D_m(-z) cos(pi/m a+a)."""
    C = parity_cos(space128, m).mat
    lhs = C @ generalized_displacement(space128, m, z).mat
    rhs = generalized_displacement(space128, m, -z).mat @ C
    assert edge_residual(space128, lhs - rhs) <= 1e-8


@pytest.mark.parametrize("m,z", [(1, 0.7), (2, 0.5), (3, 0.2)])
def test_parity_displacement_square(space128, m, z):
    """Test B_m(z)^2 = cos^2(pi/m a+a)."""
    B = parity_displacement(space128, m, z).mat
    C = parity_cos(space128, m).mat
    assert edge_residual(space128, B @ B - C @ C) <= 1e-8


def test_b1_unitary_and_returns_vacuum(space64):
    """Test B_1(z) is unitary and maps |z> to |0>."""
    B = parity_displacement(space64, 1, 0.8)
    assert unitarity_residual(B) <= 1e-10
    assert_kets_close(B @ coherent(space64, 0.8), space64.vacuum(), 1e-9)


def test_u_zero_is_identity(space64):
    """Test U_m(0; z) = I."""
    U = u_evolution(space64, 2, 0.5, 0.0)
    assert edge_residual(space64, U.mat - np.eye(64)) <= 1e-12


def test_u_unknown_method(space32):
    """Test method validation."""
    with pytest.raises(ValueError):
        u_evolution(space32, 1, 0.3, 0.5, method='taylor')


@pytest.mark.parametrize("m,z,lam", [(1, 0.8, 0.7), (2, 0.5 + 0.3j, math.pi / 4),
                                     (3, 0.2, math.pi / 2)])
def test_u_methods_agree(space128, m, z, lam):
    """Test exponential and closed-form U_m agree and are unitary."""
    U = u_evolution(space128, m, z, lam, method='both')
    closed = u_evolution(space128, m, z, lam, method='closed-form')
    assert edge_residual(space128, U.mat - closed.mat) <= 1e-8
    assert unitarity_residual(U) <= 1e-8
    assert unitarity_residual(closed) <= 1e-8


@pytest.mark.parametrize("m,z,lam", [(1, 0.8, 0.7), (2, 0.5, 0.9)])
def test_u_special_forms(space128, m, z, lam):
    """Test the explicit trigonometric forms of U_1 and U_2."""
    U = u_evolution(space128, m, z, lam)
    assert edge_residual(space128, U.mat - u_special_form(space128, m, z, lam).mat) <= 1e-10


def test_u_special_form_m3(space32):
    """Test that no explicit form is offered beyond m = 2."""
    with pytest.raises(ValueError):
        u_special_form(space32, 3, 0.2, 0.5)


@pytest.mark.parametrize("m,z", [(1, 0.8), (2, 0.5), (3, 0.2)])
def test_u_composition(space128, m, z):
    """Test U_m(lam) U_m(lam') = U_m(lam + lam')."""
    product = u_evolution(space128, m, z, 0.4).mat @ u_evolution(space128, m, z, 0.3).mat
    assert edge_residual(space128, product - u_evolution(space128, m, z, 0.7).mat) <= 1e-8


def test_v1_expanded_form(space128):
    """Test the triple product V_1 against its expanded form."""
    z, u, lam = 0.6, 0.4j, 0.9
    V = v_operator(space128, 1, z, u, lam)
    assert edge_residual(space128, V.mat - v1_expanded(space128, z, u, lam).mat) <= 1e-9


def test_v1_vacuum_action(space128):
    """Test V_1|0> = cos(lam)|u> + i sin(lam) exp(i Im(u z*))|z>."""
    z, u, lam = 0.6, 0.4j, 0.9
    psi = v_operator(space128, 1, z, u, lam) @ space128.vacuum()
    phase = cmath.exp(1j * (u * np.conj(z)).imag)
    expected = (math.cos(lam) * coherent(space128, u).amps
                + 1j * math.sin(lam) * phase * coherent(space128, z).amps)
    assert_kets_close(psi, expected, 1e-9)


def test_v_at_lambda_zero(space64):
    """Test V_m(0; z, u) = D_m(u/2)^2."""
    half = generalized_displacement(space64, 2, 0.2j).mat
    V = v_operator(space64, 2, 0.5, 0.4j, 0.0)
    assert edge_residual(space64, V.mat - half @ half) <= 1e-12


@pytest.mark.parametrize("m", [1, 2])
def test_v_expansion(space128, m):
    """Test the expanded V_m for m <= 2."""
    z, u, lam = 0.5 + 0.1j, 0.4j, 0.8
    V = v_operator(space128, m, z, u, lam)
    assert edge_residual(space128, V.mat - v_expansion(space128, m, z, u, lam).mat) <= 1e-9


def test_v_expansion_rejects_m3(space32):
    """Test that the expansion is refused for m >= 3."""
    with pytest.raises(ValueError):
        v_expansion(space32, 3, 0.2, 0.2, 0.5)


def test_v3_unitary(space128):
    """Test V_3 built as a triple product is unitary."""
    V = v_operator(space128, 3, 0.2, 0.4j, 0.6)
    assert unitarity_residual(V) <= 1e-8
