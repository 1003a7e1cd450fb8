"""Even and odd nonlinear coherent states of a trapped, bichromatically driven ion."""

from ._kernels import backend
from .fock import (
    FockOperator,
    FockVector,
    VibronicDensityMatrix,
    annihilation,
    apply_operator,
    creation,
    expectation,
    fidelity,
    fock_state,
    number,
)
from .lindblad import (
    DriveParams,
    build_f_hat,
    dark_state_by_back_substitution,
    evolve_to_steady_state,
    lindblad_rhs,
    recoil_average,
    verify_steady_state,
)
from .nlcs import NlcsParams, build_ecs, build_even_nlcs, build_nlcs, build_ocs, build_odd_nlcs, eigen_residual
from .observables import ObservableReport, mandel_q, occupation_distribution, quadrature_variance_p
from .special_functions import (
    NonlinearityProfile,
    SingularNonlinearityError,
    f_even_product,
    f_odd_product,
    laguerre,
    trapped_ion_F,
)

__version__ = "0.1.0"
