"""
Tests for the truncated Fock space, containers and matrix exponentials
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from fockwizz.core import (
    Ket,
    Op,
    adjoint,
    apply,
    diag_fn_op,
    edge_residual,
    embed,
    exp_i_hermitian,
    hermiticity_residual,
    inner,
    ladder_ops,
    make_space,
    mat_exp,
    mul,
    unitarity_residual,
)


def test_make_space_defaults():
    """Test default interior dimension and tail tolerance."""
    space = make_space(64)
    assert space.dim == 64
    assert space.interior_dim == 32
    assert space.tail_tol == 1e-10


def test_make_space_rejects_small_dim():
    """Test that dimensions below 4 are rejected."""
    with pytest.raises(ValueError):
        make_space(3)


def test_make_space_rejects_large_interior():
    """Test that K > N is rejected."""
    with pytest.raises(ValueError):
        make_space(16, interior_dim=20)


def test_basis_out_of_range(space32):
    """Test number state index validation."""
    with pytest.raises(ValueError):
        space32.basis(32)


def test_ket_is_read_only(space32):
    """Test that amplitudes cannot be modified in place."""
    ket = space32.vacuum()
    with pytest.raises(ValueError):
        ket.amps[0] = 2.0


def test_op_rejects_non_finite(space32):
    """Test that operators with NaN entries are rejected."""
    mat = np.eye(32)
    mat[3, 3] = np.nan
    with pytest.raises(ValueError):
        Op(space32, mat)


def test_op_rejects_wrong_shape(space32):
    """Test operator shape validation."""
    with pytest.raises(ValueError):
        Op(space32, np.eye(31))


def test_space_mismatch(space32, space64):
    """Test that mixing spaces raises."""
    with pytest.raises(ValueError):
        inner(space32.vacuum(), space64.vacuum())
    with pytest.raises(ValueError):
        apply(space32.identity(), space64.vacuum())


def test_ladder_commutator(ladder, space64):
    """Test [a, a+] = I on the interior levels."""
    a, a_dag, _ = ladder
    defect = mul(a, a_dag) - mul(a_dag, a) - space64.identity()
    assert edge_residual(space64, defect) <= 1e-12
    # the defect lives at the top level only
    assert abs(defect.mat[63, 63]) > 1.0


def test_number_operator_is_exact(ladder):
    """Test the number operator is diag(0..N-1) and matches a+ a."""
    a, a_dag, number = ladder
    np.testing.assert_array_equal(np.diag(number.mat).real, np.arange(64))
    np.testing.assert_allclose((a_dag @ a).mat, number.mat, atol=1e-12)


def test_annihilation_action(ladder, space64):
    """Test a|n> = sqrt(n)|n-1>."""
    a, _, _ = ladder
    out = a @ space64.basis(5)
    assert abs(out.amps[4] - math.sqrt(5)) < 1e-15
    assert abs(out.norm - math.sqrt(5)) < 1e-14


def test_diag_fn_op(space32):
    """Test diagonal operators built from a level function."""
    parity = diag_fn_op(space32, lambda n: (-1) ** n)
    np.testing.assert_array_equal(np.diag(parity.mat).real, [(-1) ** n for n in range(32)])


def test_scalar_products(space32):
    """Test numpy and python scalars on both sides of operators and kets."""
    ident = space32.identity()
    assert np.allclose((np.float64(2.0) * ident).mat, 2 * np.eye(32))
    assert np.allclose((ident * 3j).mat, 3j * np.eye(32))
    ket = 2 * space32.vacuum()
    assert ket.norm == 2.0


def test_normalized_records_loss(space32):
    """Test renormalization records the norm deficit."""
    amps = np.zeros(32, dtype=complex)
    amps[0] = 0.6
    ket = Ket(space32, amps).normalized()
    assert abs(ket.norm - 1) < 1e-15
    assert abs(ket.meta['truncation_loss'] - 0.64) < 1e-15


def test_normalize_zero_vector(space32):
    """Test error handling for the zero vector."""
    with pytest.raises(ValueError):
        Ket(space32, np.zeros(32)).normalized()


def test_embed_zero_pads(space32, space64):
    """Test embedding a ket into a larger space."""
    ket = Ket(space32, np.arange(32, dtype=complex))
    lifted = embed(ket, space64)
    np.testing.assert_array_equal(lifted.amps[:32], ket.amps)
    assert not np.any(lifted.amps[32:])


def test_mat_exp_zero_is_identity(space32):
    """Test exp(0) = I."""
    np.testing.assert_allclose(mat_exp(space32.zeros()).mat, np.eye(32), atol=1e-15)


@pytest.mark.parametrize("scale", [0.01, 0.5, 3.0, 40.0])
def test_mat_exp_against_scipy(space32, scale):
    """Test the Pade exponential against scipy across scaling regimes."""
    rng = np.random.default_rng(7)
    M = scale * (rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))) / 32
    ours = mat_exp(Op(space32, M)).mat
    reference = expm(M)
    assert np.linalg.norm(ours - reference) <= 1e-10 * max(1.0, np.linalg.norm(reference))


def test_mat_exp_anti_hermitian_cross_check(space64, ladder):
    """Test the eigendecomposition cross-check on a displacement generator."""
    a, a_dag, _ = ladder
    z = 0.5 + 0.3j
    gen = Op(space64, z * a_dag.mat - np.conj(z) * a.mat)
    D = mat_exp(gen, anti_hermitian=True)
    assert unitarity_residual(D) <= 1e-12


def test_mat_exp_scaling_bound(space32):
    """Test the scaling exponent guard."""
    with pytest.raises(RuntimeError):
        mat_exp(Op(space32, 100 * np.eye(32)), max_squarings=0)


def test_exp_i_hermitian_parity(space32):
    """Test exp(i pi a+a) = diag((-1)^n)."""
    _, _, number = ladder_ops(space32)
    out = exp_i_hermitian(number, math.pi)
    np.testing.assert_allclose(out.mat, np.diag([(-1.0) ** n for n in range(32)]), atol=1e-12)


def test_exp_i_hermitian_rejects_non_hermitian(space32):
    """Test that a non-hermitian generator is refused."""
    a, _, _ = ladder_ops(space32)
    with pytest.raises(ValueError):
        exp_i_hermitian(a, 0.3)


def test_edge_residual_ignores_edge(space32):
    """Test that the residual only sees levels below K."""
    M = np.zeros((32, 32))
    M[31, 31] = 5.0
    assert edge_residual(space32, M) == 0.0
    M[0, 1] = 2.0
    assert edge_residual(space32, M) == pytest.approx(2.0)


def test_hermiticity_residual(space32):
    """Test hermiticity residual of the number and ladder operators."""
    _, _, number = ladder_ops(space32)
    assert hermiticity_residual(number) == 0.0
    a, _, _ = ladder_ops(space32)
    assert hermiticity_residual(a) > 1.0


_entries = st.lists(st.floats(min_value=-1, max_value=1), min_size=16, max_size=16)


@settings(max_examples=50, deadline=None)
@given(x_re=_entries, x_im=_entries, m_re=st.lists(_entries, min_size=16, max_size=16))
def test_adjoint_identity(x_re, x_im, m_re):
    """Test <A+ x, y> = <x, A y> for random operators and kets."""
    space = make_space(16)
    x = Ket(space, np.array(x_re) + 1j * np.array(x_im))
    y = Ket(space, np.array(x_im) - 0.5j * np.array(x_re))
    A = Op(space, np.array(m_re) + 0.25j * np.array(m_re).T)
    lhs = inner(apply(adjoint(A), x), y)
    rhs = inner(x, apply(A, y))
    assert abs(lhs - rhs) <= 1e-10


def test_package_info_lists_submodules():
    """Test that package_info names every submodule with its summary line."""
    import fockwizz

    info = fockwizz.package_info()
    assert [line.split(':')[0] for line in info] == [
        'core', 'operators', 'states', 'analysis', 'verify']
    assert all(line.split(': ', 1)[1] for line in info)
