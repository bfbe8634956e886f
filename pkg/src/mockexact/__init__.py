"""Coefficients of Ramanujan's mock theta functions by q-series and by exact Rademacher-type series."""

from ._accel import HAS_NUMBA, backend
from .arith import EpsCharacter, LevelData, QuadForm, atkin_lehner_b, gamma_infty_reps, heegner_point, psi, star, xi_of_b
from .engine import (
    EvaluationReport,
    NonConvergenceError,
    TruncationPolicy,
    alpha_exact,
    cancellation_report,
    growth_exponent,
    partition_pn,
    poincare_const_18,
)
from .kloosterman import A_general, A_partition, A_partition_whiteman, A_star, A_theta, classical_S, partial_sums
from .numeric import DomainError, dedekind_sum, sqrt_mod
from .qseries import MOCK_THETA_IDS, PowerSeries, mock_theta_series, oracle_coeff, partition_series, pochhammer
from .tables import FORMULA_IDS, formula_spec
from .weilrep import GammaElement, S_r_eps, S_weil, WeilLattice, rho_S, rho_shintani, rho_T

__version__ = "0.1.0"
