"""
Truncated Fock space and dense complex linear algebra.

This module provides the numerical ground floor of fockwizz: the truncated
Fock space, state vectors (kets), dense operators, ladder operators, diagonal
function operators, matrix exponentials and the edge-safe residual used by
every identity check in the package.

Key features:
- FockSpace truncation context (dimension N, interior dimension K, tail tolerance)
- Immutable Ket and Op containers with numpy-backed complex data
- Scaling-and-squaring Pade matrix exponential with an eigendecomposition cross-check
- Edge residuals measured on the interior levels 0..K-1 only

Example:
    ```python
    from fockwizz.core import make_space, ladder_ops, edge_residual

    space = make_space(64)
    a, a_dag, number = ladder_ops(space)

    # [a, a+] - I is only corrupted at the top level of the truncation
    defect = a @ a_dag - a_dag @ a - space.identity()
    print(edge_residual(space, defect))  # ~0
    ```
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    'FockSpace',
    'Ket',
    'Op',
    'TailMassError',
    'ConvergenceError',
    'RadiusError',
    'make_space',
    'ladder_ops',
    'diag_fn_op',
    'mat_exp',
    'exp_i_hermitian',
    'edge_residual',
    'edge_distance',
    'hermiticity_residual',
    'unitarity_residual',
    'apply',
    'inner',
    'adjoint',
    'mul',
    'norm',
    'embed',
]

MIN_DIM = 4
DEFAULT_TAIL_TOL = 1e-10
MAX_SQUARINGS = 64
CROSS_CHECK_TOL = 1e-10
HERMITIAN_TOL = 1e-8


class TailMassError(ValueError):
    """Probability mass above the interior levels exceeds the space's tail_tol."""


class ConvergenceError(RuntimeError):
    """A truncation-defined state failed its convergence diagnostic."""


class RadiusError(ValueError):
    """An amplitude lies outside the safe radius for m >= 3 constructions."""


# Truncation context ----------------------------------------

@dataclass(frozen=True)
class FockSpace:
    """
    Truncated Fock space spanned by |0>, ..., |N-1>.

    Attributes:
        dim (int): Number of retained levels N.
        interior_dim (int): Levels 0..K-1 used for residual measurement.
        tail_tol (float): Maximum admissible probability mass above level K
            in any state under test.
    """
    dim: int
    interior_dim: int
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < MIN_DIM:
            raise ValueError(f"dim must be an integer >= {MIN_DIM}, got {self.dim}")
        if not 2 <= self.interior_dim <= self.dim:
            raise ValueError(
                f"interior_dim must satisfy 2 <= K <= dim={self.dim}, got {self.interior_dim}"
            )
        if not self.tail_tol > 0:
            raise ValueError(f"tail_tol must be positive, got {self.tail_tol}")

    def basis(self, n):
        """Return the number state |n> as a Ket."""
        if not 0 <= n < self.dim:
            raise ValueError(f"Number state index {n} outside 0..{self.dim - 1}")
        amps = np.zeros(self.dim, dtype=complex)
        amps[n] = 1.0
        return Ket(self, amps, meta={'kind': 'fock', 'n': int(n)})

    def vacuum(self):
        return self.basis(0)

    def identity(self):
        return Op(self, np.eye(self.dim, dtype=complex), label='I')

    def zeros(self):
        return Op(self, np.zeros((self.dim, self.dim), dtype=complex), label='0')


def make_space(dim, interior_dim=None, tail_tol=None):
    """
    Build a FockSpace with the package defaults.

    Args:
        dim (int): Number of retained levels, at least 4.
        interior_dim (int, optional): Interior levels for residuals. Defaults to dim // 2.
        tail_tol (float, optional): Tail-mass tolerance. Defaults to 1e-10.

    Returns:
        FockSpace: The truncation context.

    Raises:
        ValueError: If dim < 4 or interior_dim > dim.

    Examples:
        ```python
        make_space(64)              # FockSpace(dim=64, interior_dim=32, tail_tol=1e-10)
        make_space(128, 100, 1e-8)  # explicit construction
        ```
    """
    if dim is None or dim < MIN_DIM:
        raise ValueError(f"dim must be >= {MIN_DIM}, got {dim}")
    if interior_dim is None:
        interior_dim = dim // 2
    if interior_dim > dim:
        raise ValueError(f"interior_dim ({interior_dim}) cannot exceed dim ({dim})")
    if tail_tol is None:
        tail_tol = DEFAULT_TAIL_TOL
    return FockSpace(int(dim), int(interior_dim), float(tail_tol))


# Value containers ----------------------------------------

def _frozen_array(values, shape):
    arr = np.array(values, dtype=complex)
    if arr.shape != shape:
        raise ValueError(f"Expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    """
    Complex amplitude vector over number states.

    Amplitude of |n> lives at index n. The array is read-only; operations
    return new kets. `meta` carries provenance (kind, m, z, lambda, n,
    phase fix, truncation loss) and is what the state document serializes.
    """
    space: FockSpace
    amps: np.ndarray
    meta: dict = field(default_factory=dict)

    # numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __post_init__(self):
        object.__setattr__(self, 'amps', _frozen_array(self.amps, (self.space.dim,)))

    @property
    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalized(self):
        """Return a unit-norm copy with the pre-renormalization deficit recorded in meta."""
        nrm = self.norm
        if nrm == 0:
            raise ValueError("Cannot normalize the zero vector")
        meta = dict(self.meta)
        meta['truncation_loss'] = float(max(0.0, 1.0 - nrm ** 2))
        return Ket(self.space, self.amps / nrm, meta=meta)

    def with_meta(self, **updates):
        meta = dict(self.meta)
        meta.update(updates)
        return Ket(self.space, self.amps, meta=meta)

    def __add__(self, other):
        _check_same_space(self.space, other.space)
        return Ket(self.space, self.amps + other.amps)

    def __sub__(self, other):
        _check_same_space(self.space, other.space)
        return Ket(self.space, self.amps - other.amps)

    def __mul__(self, scalar):
        return Ket(self.space, self.amps * complex(scalar), meta=dict(self.meta))

    __rmul__ = __mul__

    def __repr__(self):
        kind = self.meta.get('kind', 'ket')
        return f"Ket({kind}, dim={self.space.dim}, norm={self.norm:.6g})"


@dataclass(frozen=True, eq=False)
class Op:
    """
    Dense complex N x N operator with a provenance label.

    Supports `op @ op`, `op @ ket`, `op + op`, `op - op` and scalar products.
    """
    space: FockSpace
    mat: np.ndarray
    label: str = ''

    __array_ufunc__ = None

    def __post_init__(self):
        dim = self.space.dim
        mat = _frozen_array(self.mat, (dim, dim))
        if not np.all(np.isfinite(mat)):
            raise ValueError(f"Operator '{self.label}' has non-finite entries")
        object.__setattr__(self, 'mat', mat)

    @property
    def dag(self):
        return adjoint(self)

    def __matmul__(self, other):
        if isinstance(other, Ket):
            return apply(self, other)
        return mul(self, other)

    def __add__(self, other):
        _check_same_space(self.space, other.space)
        return Op(self.space, self.mat + other.mat, label=f"({self.label} + {other.label})")

    def __sub__(self, other):
        _check_same_space(self.space, other.space)
        return Op(self.space, self.mat - other.mat, label=f"({self.label} - {other.label})")

    def __mul__(self, scalar):
        return Op(self.space, self.mat * complex(scalar), label=f"{scalar}*{self.label}")

    __rmul__ = __mul__

    def __neg__(self):
        return Op(self.space, -self.mat, label=f"-{self.label}")

    def __repr__(self):
        return f"Op('{self.label}', dim={self.space.dim})"


# Vector algebra ----------------------------------------

def _check_same_space(s1, s2):
    if s1 != s2:
        raise ValueError(f"FockSpace mismatch: dim {s1.dim} (K={s1.interior_dim}) "
                         f"vs dim {s2.dim} (K={s2.interior_dim})")


def apply(op, ket):
    """Apply an operator to a ket."""
    _check_same_space(op.space, ket.space)
    return Ket(ket.space, op.mat @ ket.amps)


def inner(k1, k2):
    """<k1|k2>, conjugate-linear in the first argument."""
    _check_same_space(k1.space, k2.space)
    return complex(np.vdot(k1.amps, k2.amps))


def adjoint(op):
    return Op(op.space, op.mat.conj().T, label=f"{op.label}^+")


def mul(op1, op2):
    _check_same_space(op1.space, op2.space)
    return Op(op1.space, op1.mat @ op2.mat, label=f"{op1.label}*{op2.label}")


def norm(ket):
    return ket.norm


def embed(ket, space):
    """
    Zero-pad (or cut) a ket into another space of a different dimension.

    Used to compare states computed at different truncations.
    """
    amps = np.zeros(space.dim, dtype=complex)
    keep = min(space.dim, ket.space.dim)
    amps[:keep] = ket.amps[:keep]
    return Ket(space, amps, meta=dict(ket.meta))


# Ladder and diagonal operators ----------------------------------------

def ladder_ops(space):
    """
    Build the annihilation, creation and number operators.

    Args:
        space (FockSpace): Truncation context.

    Returns:
        tuple: (a, a_dag, number) with <n-1|a|n> = sqrt(n), a_dag the adjoint
            of a, and number = diag(0, 1, ..., N-1).

    Note:
        The number operator is built directly on the diagonal so it is exact;
        a_dag @ a reproduces it to rounding (sqrt(n)**2 is not always n in
        floating point).
    """
    a = Op(space, np.diag(np.sqrt(np.arange(1, space.dim)), k=1), label='a')
    number = diag_fn_op(space, lambda n: n, label='a^+a')
    return a, adjoint(a), number


def diag_fn_op(space, f, label=None):
    """
    Diagonal operator diag(f(0), ..., f(N-1)).

    Args:
        space (FockSpace): Truncation context.
        f (callable): Real- or complex-valued function of the level index.
        label (str, optional): Provenance label.

    Returns:
        Op: The diagonal operator.

    Examples:
        ```python
        parity = diag_fn_op(space, lambda n: np.cos(np.pi * n))  # diag(1, -1, 1, ...)
        ```
    """
    values = np.array([f(n) for n in range(space.dim)], dtype=complex)
    return Op(space, np.diag(values), label=label or getattr(f, '__name__', 'f(n)'))


# Matrix exponential ----------------------------------------

# Pade coefficients b_k for orders 3, 5, 7, 9, 13 and the 1-norm thresholds
# below which each order is accurate to double precision.
_PADE_COEFFS = {
    3: (120, 60, 12, 1),
    5: (30240, 15120, 3360, 420, 30, 1),
    7: (17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1),
    9: (17643225600, 8821612800, 2075673600, 302702400, 30270240,
        2162160, 110880, 3960, 90, 1),
    13: (64764752532480000, 32382376266240000, 7771770303897600,
         1187353796428800, 129060195264000, 10559470521600, 670442572800,
         33522128640, 1323241920, 40840800, 960960, 16380, 182, 1),
}
_PADE_THETA = (
    (3, 0.01495585217958292),
    (5, 0.2539398330063230),
    (7, 0.9504178996162932),
    (9, 2.097847961257068),
    (13, 5.371920351148152),
)


def _pade_uv(A, order):
    b = _PADE_COEFFS[order]
    ident = np.eye(A.shape[0], dtype=A.dtype)
    A2 = A @ A
    if order == 13:
        A4 = A2 @ A2
        A6 = A2 @ A4
        U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
                 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
        V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
             + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
        return U, V
    U = b[1] * ident
    V = b[0] * ident
    A2n = ident
    for k in range(1, order // 2 + 1):
        A2n = A2n @ A2
        U = U + b[2 * k + 1] * A2n
        V = V + b[2 * k] * A2n
    return A @ U, V


def _pade_expm(A, max_squarings):
    norm1 = np.linalg.norm(A, 1)
    for order, theta in _PADE_THETA[:-1]:
        if norm1 <= theta:
            U, V = _pade_uv(A, order)
            return np.linalg.solve(V - U, V + U)

    theta13 = _PADE_THETA[-1][1]
    s = 0
    if norm1 > theta13:
        s = max(0, int(math.ceil(math.log2(norm1 / theta13))))
    if s > max_squarings:
        raise RuntimeError(
            f"mat_exp scaling exponent {s} exceeds bound {max_squarings} "
            f"(1-norm {norm1:.3g}); input norm is pathological"
        )
    U, V = _pade_uv(A / 2.0 ** s, 13)
    result = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        result = result @ result
    return result


def mat_exp(M, anti_hermitian=False, max_squarings=MAX_SQUARINGS, cross_check_tol=CROSS_CHECK_TOL):
    """
    Matrix exponential exp(M) by scaling and squaring with a Pade kernel.

    Args:
        M (Op): Operator to exponentiate (finite entries).
        anti_hermitian (bool, optional): If True, M is flagged anti-hermitian and
            exp(M) is additionally computed by unitary diagonalization of iM; the
            two paths must agree in max-norm. Defaults to False.
        max_squarings (int, optional): Bound on the scaling exponent. Defaults to 64.
        cross_check_tol (float, optional): Max-norm agreement required between
            the two paths. Defaults to 1e-10.

    Returns:
        Op: exp(M).

    Raises:
        RuntimeError: If the scaling exponent exceeds max_squarings, or the
            anti-hermitian cross-check disagrees beyond cross_check_tol.

    Examples:
        ```python
        mat_exp(space.zeros())  # identity
        phase = mat_exp(1j * np.pi * number)  # diag((-1)**n)
        ```
    """
    result = _pade_expm(np.asarray(M.mat), max_squarings)
    out = Op(M.space, result, label=f"exp({M.label})")
    if anti_hermitian:
        hermitian = Op(M.space, 1j * M.mat, label=f"i{M.label}")
        via_eig = exp_i_hermitian(hermitian, -1.0)
        disagreement = float(np.max(np.abs(via_eig.mat - result)))
        if disagreement > cross_check_tol:
            raise RuntimeError(
                f"mat_exp paths disagree for '{M.label}': max-norm {disagreement:.3g} "
                f"> {cross_check_tol:g}"
            )
    return out


def exp_i_hermitian(H, lam):
    """
    exp(i * lam * H) for a hermitian operator via its eigendecomposition.

    Args:
        H (Op): Hermitian operator (edge-safe hermiticity residual <= 1e-8).
        lam (float): Real evolution parameter.

    Returns:
        Op: The unitary exp(i lam H).

    Raises:
        ValueError: If H is not hermitian.
    """
    residual = hermiticity_residual(H)
    if residual > HERMITIAN_TOL:
        raise ValueError(
            f"exp_i_hermitian requires a hermitian operator; '{H.label}' has "
            f"hermiticity residual {residual:.3g}"
        )
    herm = 0.5 * (H.mat + H.mat.conj().T)
    evals, evecs = np.linalg.eigh(herm)
    phases = np.exp(1j * float(lam) * evals)
    return Op(H.space, (evecs * phases) @ evecs.conj().T, label=f"exp(i{lam:g}*{H.label})")


# Residuals ----------------------------------------

def _matrix(M):
    return M.mat if isinstance(M, Op) else np.asarray(M)


def edge_residual(space, M):
    """
    Spectral norm of P_K M P_K, the canonical identity-check residual.

    Finite truncation corrupts the top rows and columns of products of ladder
    operators, so identities are measured on levels 0..K-1 only.

    Args:
        space (FockSpace): Truncation context supplying K.
        M (Op or numpy.ndarray): Defect operator, e.g. lhs - rhs.

    Returns:
        float: Nonnegative residual.
    """
    K = space.interior_dim
    block = _matrix(M)[:K, :K]
    return float(np.linalg.norm(block, 2))


def edge_distance(space, k1, k2):
    """Norm of the interior-projected difference between two kets."""
    K = space.interior_dim
    return float(np.linalg.norm(k1.amps[:K] - k2.amps[:K]))


def hermiticity_residual(M):
    return edge_residual(M.space, M.mat - M.mat.conj().T)


def unitarity_residual(M):
    ident = np.eye(M.space.dim)
    return edge_residual(M.space, M.mat.conj().T @ M.mat - ident)
