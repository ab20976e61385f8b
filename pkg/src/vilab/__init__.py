"""Variational inequalities, orthogonality relations and operator cosines
on finite-dimensional weighted l^p spaces."""

from .spaces import Space, pairing, uniform_space
from .search import SearchConfig
from .operators import (BilinearForm, OperatorToDual, coercivity_constant,
                        hes_constant, ineq_constant, operator_norm,
                        positivity_report, symmetrized_inner)
from .vi import (AffineSubspace, Ball, Box, Simplex, VIProblem, WholeSpace,
                 project, solve_vi, subspace_galerkin_solve, verify_vi)
from .decomposition import (Subspace, annihilator, extension_projection,
                            pi_T_iso_constants, quotient_distance,
                            stampacchia_projection)
from .orthogonality import (BirkhoffJames, CustomPredicate, FormOrtho,
                            bj_orthogonal, boundedness_constant,
                            isom_condition_constant, orth_condition_check,
                            resolve, test_property)
from .cosine import (adjoint_cosine_inequality, angle, cosine,
                     identity_operator, zero_cosine_study)
from .quadratic import QuadraticForm, epsilon_witness, fd_check
from .gelfand import (EvolutionTriple, decay_study, ratio, spike_witness,
                      triple_operator)

__version__ = "0.1.0"
