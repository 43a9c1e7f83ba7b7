# -*- coding: utf-8 -*-

"""
Corrected multi-block ADMM with adaptive step size, specialized to doubly
nonnegative SDP relaxations, with baselines, problem builders and a
benchmarking harness.
"""

from .cones import (ConePattern, FREE, NONNEG, ZERO, project_nonneg,
                    project_pattern, project_pattern_dual)
from .dnnsdp import (DnnSdpProblem, ResidualReport, SolverConfig, TuningPolicy,
                     cadmm_solve, dext_solve, residuals, to_multiblock)
from .engine import (BlockSpec, MultiBlockProblem, SolveResult, TheoryOperators,
                     build_theory_operators, kkt_residual, solve,
                     solve_direct_extended)
from .io import (RunRecord, emit_performance_profile, read_problem, read_result,
                 write_problem, write_result)
from .linalg import (LinearBlockMap, SparseSymList, gram_solve, lambda_max_gram,
                     project_psd)
from .problems import (BiqData, Graph, brute_force_biq, build_biq, build_ext_biq,
                       build_fap, build_qap, build_rcp, build_theta_plus,
                       family_objective)

__version__ = "0.1.0"
