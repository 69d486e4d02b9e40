"""
fockwizz: parity-displacement operators in a truncated Fock space.

fockwizz builds, checks and tabulates the operator family generated by
products of generalized displacements and generalized parities:
- Truncated Fock space with edge-safe residuals
- D(z), D_m(z), cos/sin(pi/m a+a), B_m(z), U_m(lambda; z), V_m(lambda; z, u)
- Coherent, generalized coherent, eigen-, superposition and cat states
- The bases D_m(z)|n> and U_m(lambda; z)|n>
- Number statistics, convergence diagnostics and phase-space grids
- An equation-indexed verification suite and a command-line front end

Quick Start:
    ```python
    import fockwizz

    space = fockwizz.make_space(128)
    B = fockwizz.parity_displacement(space, 2, 0.5)
    psi = fockwizz.superposition_state(space, 2, 0.5, 0.7)

    report = fockwizz.run_suite()
    print(report.summary)
    ```
"""

from . import core
from . import operators
from . import states
from . import analysis
from . import verify

from .core import (
    FockSpace,
    Ket,
    Op,
    TailMassError,
    ConvergenceError,
    RadiusError,
    make_space,
    ladder_ops,
    diag_fn_op,
    mat_exp,
    exp_i_hermitian,
    edge_residual,
    apply,
    inner,
    adjoint,
    embed,
)

from .operators import (
    OperatorParams,
    displacement,
    generalized_displacement,
    parity_cos,
    parity_sin,
    parity_displacement,
    u_evolution,
    v_operator,
    clear_operator_cache,
)

from .states import (
    StateKind,
    StateFamily,
    coherent,
    gcs,
    b_eigenstates,
    superposition_state,
    cat_state,
    gdf_basis_state,
    dressed_basis_state,
    save_state,
    load_state,
)

from .analysis import (
    number_statistics,
    off_support_mass,
    fidelity,
    convergence_diagnostic,
    quadrature_moments,
    quadrature_grid,
)

from .verify import (
    SuiteGrid,
    run_suite,
    registry_audit,
)

from .utils.environ import is_verbose

# Check FOCKWIZZ_VERBOSE env var to control verbosity
_verbose = is_verbose()
if _verbose:
    print(f"fockwizz: {len(verify.registered_checks())} checks registered")

__all__ = [
    # submodules
    "core",
    "operators",
    "states",
    "analysis",
    "verify",

    # truncated space
    "FockSpace",
    "Ket",
    "Op",
    "TailMassError",
    "ConvergenceError",
    "RadiusError",
    "make_space",
    "ladder_ops",
    "diag_fn_op",
    "mat_exp",
    "exp_i_hermitian",
    "edge_residual",
    "apply",
    "inner",
    "adjoint",
    "embed",

    # operators
    "OperatorParams",
    "displacement",
    "generalized_displacement",
    "parity_cos",
    "parity_sin",
    "parity_displacement",
    "u_evolution",
    "v_operator",
    "clear_operator_cache",

    # states
    "StateKind",
    "StateFamily",
    "coherent",
    "gcs",
    "b_eigenstates",
    "superposition_state",
    "cat_state",
    "gdf_basis_state",
    "dressed_basis_state",
    "save_state",
    "load_state",

    # analysis
    "number_statistics",
    "off_support_mass",
    "fidelity",
    "convergence_diagnostic",
    "quadrature_moments",
    "quadrature_grid",

    # verification
    "SuiteGrid",
    "run_suite",
    "registry_audit",
]

def package_info():
    """
    Return the import path and first line of the docstring for each submodule.
    """
    info = []
    for submodule in ('core', 'operators', 'states', 'analysis', 'verify'):
        module = globals()[submodule]
        docstring = module.__doc__.strip().split('\n')[0]
        info.append(f"{submodule}: {docstring}")
    return info
