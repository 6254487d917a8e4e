"""Exact computer algebra for comparing meromorphic-function modules of a
divisor with their logarithmic approximations, over the Weyl algebra."""

from ._engine import Budget, BudgetExceeded
from .annihilator import (AnnFsIdeal, BFunction, ann_fs, ann_power,
                          annihilates_fs, annihilates_inverse_power, bfunction)
from .compare import ComparisonReport, analyze, direct_compare, indirect_compare
from .groebner import (Basis, ModuleOrder, TermOrder, eliminate_weight,
                       groebner_basis, ideal_compare, is_member, normal_form)
from .logarithmic import (DivergenceRecord, EulerRecord, FreenessRecord,
                          HolonomicRecord, LogBasis, LogDerivation,
                          ProductRecord, SpencerData, SpencerRecord,
                          divergence_shortcut, euler_check, holonomic_check,
                          log_derivations, product_detection, saito_free_check,
                          spencer_check, squarefree_warning, tilde_ideal)
from .polyring import (CommMatrix, CommPoly, ParseError, Rational, determinant,
                       determinant_bareiss, determinant_cofactor, exact_divide,
                       gradient, parse_poly)
from .resolution import (FreeResolution, PresMatrix, SmcReport,
                         free_resolution, smc_scan, syzygies,
                         transpose_complex)
from .weyl import (OpVector, WeylContext, WeylOp, commutator, parse_op,
                   smc_predicates, weyl_apply, weyl_mul)

__version__ = "0.1.0"
