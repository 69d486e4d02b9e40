"""
State families built on the parity-displacement operators.

Constructs every state the package works with, enforcing the phase
conventions and reporting truncation effects:

- number states |n> and Glauber coherent states |z>
- m multiple generalized coherent states |z_m> = D_m(z)|0>, phased so that
  <0|z_m> is real and nonnegative
- the B_m(z) eigenpair |b+-^(m)> in the plane spanned by |0> and |z_m>
- superpositions U_m(lambda; z)|0> and the cat state V_1(lambda; z, u)|0>
- the bases |z_m, n> = D_m(z)|n> and |(lambda; z_m), n> = U_m(lambda; z)|n>

The module also implements the state document (JSON with dim, amplitudes
and metadata) shared with the command-line front end.

Example:
    ```python
    from fockwizz.core import make_space
    from fockwizz.states import gcs, b_eigenstates, save_state

    space = make_space(128)
    squeezed = gcs(space, 2, 0.6)
    b_plus, b_minus = b_eigenstates(space, 2, 0.6)
    save_state(squeezed, 'squeezed.json')
    ```
"""

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .core import (
    ConvergenceError,
    Ket,
    TailMassError,
    apply,
    inner,
    make_space,
)
from .operators import (
    OperatorParams,
    _check_radius,
    _cos_pi_frac,
    generalized_displacement,
    u_evolution,
    v_operator,
)
from .utils.environ import is_verbose
from .utils.records import read_json, to_serializable, write_json

__all__ = [
    'StateKind',
    'StateFamily',
    'fock',
    'coherent',
    'coherent_amplitudes',
    'gcs',
    'b_normalization',
    'b_eigenstates',
    'superposition_state',
    'cat_state',
    'gdf_basis_state',
    'dressed_basis_state',
    'interior_tail_mass',
    'require_convergence',
    'state_to_dict',
    'state_from_dict',
    'save_state',
    'load_state',
]

UNPHASABLE_TOL = 1e-12
DEGENERATE_TOL = 1e-8


def _note(message, verbose):
    if verbose or is_verbose():
        print(message)


def interior_tail_mass(ket):
    """Probability mass carried by levels K..N-1."""
    K = ket.space.interior_dim
    return float(np.sum(np.abs(ket.amps[K:]) ** 2))


def _require_interior(ket, label):
    tail = interior_tail_mass(ket)
    if tail > ket.space.tail_tol:
        raise TailMassError(
            f"{label}: tail mass {tail:.3g} above level K={ket.space.interior_dim} exceeds "
            f"tail_tol {ket.space.tail_tol:g}; increase dim"
        )
    return tail


def _require_norm(ket, label):
    deficit = ket.meta['truncation_loss']
    if deficit > ket.space.tail_tol:
        raise TailMassError(
            f"{label}: norm deficit {deficit:.3g} exceeds tail_tol {ket.space.tail_tol:g}; "
            f"increase dim"
        )
    return deficit


def require_convergence(space, m, z, threshold=None, safe_radius=None, override=False,
                        verbose=False):
    """
    Guard for results built on D_m(z)|0> with m >= 3.

    Checks the safe radius, then runs the convergence diagnostic between dim
    and 2*dim. Orders m <= 2 and override=True pass without a diagnostic.

    Returns:
        ConvergenceReport or None: The report when the diagnostic ran.

    Raises:
        RadiusError: m >= 3 beyond the safe radius without override.
        ConvergenceError: The diagnostic did not converge.
    """
    from .analysis import convergence_diagnostic

    z = complex(z)
    _check_radius(m, z, safe_radius, override)
    if m < 3 or override:
        return None
    report = convergence_diagnostic(m, z, [space.dim, 2 * space.dim], threshold=threshold)
    _note(f"m={m}, z={z:g}: convergence {report.verdict}", verbose)
    if not report.converged:
        raise ConvergenceError(
            f"|z_m> for m={m}, z={z:g} did not converge between dims "
            f"{report.dims}: max infidelity {max(report.deltas):.3g}"
        )
    return report


# Basic families ----------------------------------------

def fock(space, n):
    return space.basis(n)


def coherent_amplitudes(dim, z):
    """Unnormalized-by-truncation amplitudes exp(-|z|^2/2) z^n / sqrt(n!), n < dim."""
    z = complex(z)
    amps = np.zeros(dim, dtype=complex)
    amps[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * z / math.sqrt(n)
    return amps


def coherent(space, z, verbose=False):
    """
    Glauber coherent state |z> = exp(-|z|^2/2) sum_n z^n / sqrt(n!) |n>.

    Args:
        space (FockSpace): Truncation context.
        z (complex): Amplitude; |z|^2 must sit well inside the truncation.
        verbose (bool, optional): Print the truncation loss. Defaults to False.

    Returns:
        Ket: The renormalized coherent state; meta records the truncation loss.

    Raises:
        TailMassError: If the Poisson mass above level K exceeds tail_tol.

    Examples:
        ```python
        psi = coherent(space, 0.8)
        inner(space.vacuum(), psi)   # exp(-0.32)
        ```
    """
    z = complex(z)
    mean = abs(z) ** 2
    # P(n >= K) for a Poisson law of mean |z|^2
    tail = float(gammainc(space.interior_dim, mean)) if mean > 0 else 0.0
    if tail > space.tail_tol:
        raise TailMassError(
            f"coherent({z:g}): tail mass {tail:.3g} above level K={space.interior_dim} "
            f"exceeds tail_tol {space.tail_tol:g}; increase dim"
        )
    ket = Ket(space, coherent_amplitudes(space.dim, z),
              meta={'kind': 'coherent', 'z': z}).normalized()
    _note(f"coherent({z:g}): truncation loss {ket.meta['truncation_loss']:.3g}", verbose)
    return ket.with_meta(tail_mass=tail)


def gcs(space, m, z, safe_radius=None, override=False, check_tail=True,
        check_convergence=False, threshold=None, verbose=False):
    """
    m multiple generalized coherent state |z_m> = D_m(z)|0>.

    The global phase is fixed so that <0|z_m> is real and nonnegative, and the
    state is renormalized to unit norm.

    Args:
        space (FockSpace): Truncation context.
        m (int): Order (1: coherent state, 2: squeezed vacuum).
        z (complex): Amplitude.
        safe_radius (float, optional): Admissible |z| for m >= 3. Defaults to 0.25.
        override (bool, optional): Skip the safe-radius and convergence guards.
        check_tail (bool, optional): Enforce the truncation precondition.
            For m <= 2 the mass above level K must stay within tail_tol. For
            m >= 3 that mass is only recorded and the pre-renormalization
            norm deficit must stay within tail_tol. Defaults to True.
        check_convergence (bool, optional): For m >= 3, run the convergence
            diagnostic between dim and 2*dim first. Defaults to False.
        threshold (float, optional): Convergence threshold. Defaults to 1e-8.
        verbose (bool, optional): Print phase-fix and truncation notes.

    Returns:
        Ket: The phased state. meta holds 'phase_fix' (bool), 'phase' (the
            global factor applied), 'truncation_loss' and 'tail_mass'.

    Raises:
        RadiusError: m >= 3 beyond the safe radius without override.
        ConvergenceError: Convergence diagnostic failed (check_convergence=True).
        TailMassError: The truncation precondition fails (check_tail=True).

    Note:
        A vanishing <0|z_m> leaves the phase convention inapplicable; the
        state is then returned as computed with phase_fix=False.
    """
    z = complex(z)
    _check_radius(m, z, safe_radius, override)
    if check_convergence:
        require_convergence(space, m, z, threshold, safe_radius, override, verbose)

    D = generalized_displacement(space, m, z, safe_radius, override)
    raw = apply(D, space.vacuum())
    c0 = raw.amps[0]
    meta = {'kind': 'gcs', 'm': int(m), 'z': z}
    if abs(c0) < UNPHASABLE_TOL:
        _note(f"gcs(m={m}, z={z:g}): <0|z_m> vanishes, state left unphased", verbose)
        meta.update(phase_fix=False, phase=1 + 0j)
        ket = Ket(space, raw.amps, meta=meta)
    else:
        phase = complex(np.conj(c0) / abs(c0))
        meta.update(phase_fix=True, phase=phase)
        ket = Ket(space, raw.amps * phase, meta=meta)
    ket = ket.normalized()
    _note(f"gcs(m={m}, z={z:g}): truncation loss {ket.meta['truncation_loss']:.3g}", verbose)
    label = f"gcs(m={m}, z={z:g})"
    if not check_tail:
        return ket.with_meta(tail_mass=interior_tail_mass(ket))
    if m < 3:
        return ket.with_meta(tail_mass=_require_interior(ket, label))
    # mass above K persists for m >= 3 at every dim; convergence decides those states
    return ket.with_meta(tail_mass=interior_tail_mass(ket), norm_deficit=_require_norm(ket, label))


def b_normalization(space, m, z, **kwargs):
    """N+-^(m) = sqrt(2 (1 +- <0|z_m>)), returned as (N_plus, N_minus)."""
    zm = gcs(space, m, z, **kwargs)
    overlap = inner(space.vacuum(), zm).real
    return math.sqrt(2 * (1 + overlap)), math.sqrt(max(0.0, 2 * (1 - overlap)))


def b_eigenstates(space, m, z, **kwargs):
    """
    Eigenvectors of B_m(z) in the plane spanned by |0> and |z_m>.

    |b+-^(m)> = (|0> +- |z_m>) / N+-^(m), with eigenvalues +1 and -1.

    Args:
        space (FockSpace): Truncation context.
        m (int): Order.
        z (complex): Amplitude.
        **kwargs: Forwarded to gcs (safe_radius, override, ...).

    Returns:
        tuple: (b_plus, b_minus) kets; each meta records its normalization
            constant under 'normalization'.

    Raises:
        ValueError: If <0|z_m> is +-1, which zeroes one normalization constant.
    """
    zm = gcs(space, m, z, **kwargs)
    vac = space.vacuum()
    overlap = inner(vac, zm).real
    n_plus = math.sqrt(max(0.0, 2 * (1 + overlap)))
    n_minus = math.sqrt(max(0.0, 2 * (1 - overlap)))
    if min(n_plus, n_minus) < DEGENERATE_TOL:
        raise ValueError(
            f"Degenerate eigenpair for m={m}, z={complex(z):g}: <0|z_m> = {overlap:.6g} "
            f"zeroes a normalization constant"
        )
    common = {'m': int(m), 'z': complex(z), 'vacuum_overlap': overlap}
    b_plus = Ket(space, (vac.amps + zm.amps) / n_plus,
                 meta=dict(common, kind='b_plus', normalization=n_plus))
    b_minus = Ket(space, (vac.amps - zm.amps) / n_minus,
                  meta=dict(common, kind='b_minus', normalization=n_minus))
    return b_plus, b_minus


# Superpositions ----------------------------------------

def superposition_state(space, m, z, lam, safe_radius=None, override=False):
    """
    U_m(lambda; z)|0> = cos(lambda)|0> + i sin(lambda)|z_m>.

    Computed by applying the evolution operator, not from the right-hand side.
    """
    U = u_evolution(space, m, z, lam, safe_radius=safe_radius, override=override)
    ket = apply(U, space.vacuum())
    ket = Ket(space, ket.amps, meta={'kind': 'superposition', 'm': int(m), 'z': complex(z),
                                     'lambda': float(lam)})
    return ket.normalized()


def cat_state(space, z, lam, u):
    """
    V_1(lambda; z, u)|0> = cos(lambda)|u> + i sin(lambda) exp(i Im(u z*))|z>.

    With u = -z and lambda = pi/4 this is the equally weighted cat state
    (|-z> + i|z>) / sqrt(2).
    """
    z, u = complex(z), complex(u)
    V = v_operator(space, 1, z, u, lam)
    ket = apply(V, space.vacuum())
    relative_phase = cmath.exp(1j * (u * z.conjugate()).imag)
    meta = {'kind': 'cat', 'm': 1, 'z': z, 'u': u, 'lambda': float(lam),
            'relative_phase': relative_phase}
    return Ket(space, ket.amps, meta=meta).normalized()


# New bases ----------------------------------------

def _check_basis_index(space, n):
    if not 0 <= n < space.interior_dim:
        raise ValueError(
            f"Basis index n={n} must lie below the interior dimension K={space.interior_dim}"
        )


def gdf_basis_state(space, m, z, n, phase_fix=True, safe_radius=None, override=False):
    """
    Generalized displaced Fock state |z_m, n> = D_m(z)|n>.

    Args:
        space (FockSpace): Truncation context.
        m (int): Order (1: displaced Fock states, 2: squeezed number states).
        z (complex): Amplitude.
        n (int): Basis index, below the interior dimension K.
        phase_fix (bool, optional): Apply the sign making <n|D_m(z)|n> nonnegative.
            The raw state is amps * meta['phase_sign']. Defaults to True.

    Returns:
        Ket: The basis state. meta records 'raw_diagonal' (<n|D_m(z)|n>) and
            'phase_sign' (+1 or -1).
    """
    _check_basis_index(space, n)
    D = generalized_displacement(space, m, z, safe_radius, override)
    amps = D.mat[:, n].copy()
    diagonal = complex(amps[n])
    sign = -1 if phase_fix and diagonal.real < 0 else 1
    meta = {'kind': 'gdf_basis', 'm': int(m), 'z': complex(z), 'n': int(n),
            'raw_diagonal': diagonal, 'phase_sign': sign, 'phase_fix': bool(phase_fix)}
    return Ket(space, amps * sign, meta=meta)


def dressed_basis_state(space, m, z, lam, n, safe_radius=None, override=False):
    """
    |(lambda; z_m), n> = cos[lam cos(n pi/m)]|n> + i sin[lam cos(n pi/m)] |z_m, n>.

    Uses the raw (unphased) |z_m, n>, so the result equals U_m(lambda; z)|n>.
    """
    _check_basis_index(space, n)
    lam = float(lam)
    angle = lam * _cos_pi_frac(n, m)
    basis = gdf_basis_state(space, m, z, n, phase_fix=False,
                            safe_radius=safe_radius, override=override)
    number_state = space.basis(n)
    amps = math.cos(angle) * number_state.amps + 1j * math.sin(angle) * basis.amps
    meta = {'kind': 'dressed_basis', 'm': int(m), 'z': complex(z), 'n': int(n),
            'lambda': lam, 'angle': angle}
    return Ket(space, amps, meta=meta)


# Declarative requests ----------------------------------------

class StateKind(str, enum.Enum):
    FOCK = 'fock'
    COHERENT = 'coherent'
    GCS = 'gcs'
    B_PLUS = 'b_plus'
    B_MINUS = 'b_minus'
    SUPERPOSITION = 'superposition'
    CAT = 'cat'
    GDF_BASIS = 'gdf_basis'
    DRESSED_BASIS = 'dressed_basis'


@dataclass(frozen=True)
class StateFamily:
    """
    Declarative description of a requested state.

    Attributes:
        kind (StateKind): Which family to build.
        params (OperatorParams): m, z, u and lambda.
        n (int): Basis index for fock, gdf_basis and dressed_basis.
    """
    kind: StateKind
    params: OperatorParams = OperatorParams()
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', StateKind(self.kind))
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")

    def build(self, space, safe_radius=None, override=False, check_convergence=False,
              threshold=None, verbose=False):
        """
        Construct the state in the given space.

        The guards apply to every kind built on D_m(z): the safe radius, and
        for m >= 3 with check_convergence the diagnostic between dim and 2*dim.
        """
        if self.n >= space.dim:
            raise ValueError(f"n={self.n} must be below dim={space.dim}")
        p = self.params
        kind = self.kind
        if kind is StateKind.FOCK:
            return fock(space, self.n)
        if kind is StateKind.COHERENT:
            return coherent(space, p.z, verbose=verbose)
        if kind is StateKind.CAT:
            return cat_state(space, p.z, p.lam, p.u)

        guards = {'safe_radius': safe_radius, 'override': override}
        if kind is StateKind.GCS:
            return gcs(space, p.m, p.z, check_convergence=check_convergence,
                       threshold=threshold, verbose=verbose, **guards)
        if kind in (StateKind.B_PLUS, StateKind.B_MINUS):
            b_plus, b_minus = b_eigenstates(space, p.m, p.z, check_convergence=check_convergence,
                                            threshold=threshold, verbose=verbose, **guards)
            return b_plus if kind is StateKind.B_PLUS else b_minus

        if check_convergence:
            require_convergence(space, p.m, p.z, threshold, safe_radius, override, verbose)
        if kind is StateKind.SUPERPOSITION:
            return superposition_state(space, p.m, p.z, p.lam, **guards)
        if kind is StateKind.GDF_BASIS:
            return gdf_basis_state(space, p.m, p.z, self.n, **guards)
        return dressed_basis_state(space, p.m, p.z, p.lam, self.n, **guards)


# State documents ----------------------------------------

def state_to_dict(ket):
    return {
        'dim': ket.space.dim,
        'interior_dim': ket.space.interior_dim,
        'tail_tol': ket.space.tail_tol,
        'amplitudes': [[float(c.real), float(c.imag)] for c in ket.amps],
        'metadata': to_serializable(ket.meta),
    }


def state_from_dict(doc):
    space = make_space(doc['dim'], doc.get('interior_dim'), doc.get('tail_tol'))
    pairs = np.asarray(doc['amplitudes'], dtype=float)
    if pairs.shape != (space.dim, 2):
        raise ValueError(f"Expected {space.dim} [real, imaginary] pairs, got shape {pairs.shape}")
    amps = pairs[:, 0] + 1j * pairs[:, 1]
    return Ket(space, amps, meta=dict(doc.get('metadata', {})))


def save_state(ket, path):
    """
    Write a ket as a state document.

    Fields: dim, interior_dim, tail_tol, amplitudes (ordered [real, imaginary]
    pairs) and metadata. Floats round-trip bit-exactly.
    """
    return write_json(state_to_dict(ket), path)


def load_state(path):
    return state_from_dict(read_json(path))
