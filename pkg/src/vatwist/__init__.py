"""Exact construction and verification of vertex-algebra modules over C[s, 1/s]
and their twisted lifts to the cyclic extensions C[s, 1/s][t]/(t^n - s)."""

from .diffalgebra import (
    DerivationSpec,
    ExtElement,
    LaurentPoly,
    algebra_Y,
    d_apply,
    d_ext_apply,
    mode_product,
    tau_apply,
)
from .errors import (
    BranchOutOfRange,
    DivisionByZero,
    ExistenceFailed,
    IndexOutOfRange,
    NoRootInField,
    NotInvertible,
    OrderMismatch,
    TruncationTooSmall,
    VatwistError,
    WindowExceedsTruncation,
    ZeroSeries,
)
from .kernels import BACKEND
from .module_builder import (
    ModuleSpec,
    VAModule,
    build_full,
    build_semisimple,
    existence_check,
    is_ring_module,
    module_Y,
)
from .nilcoeff import NilScalar, nil_inv, nil_mul, to_matrix
from .scalars import CycRational, canonical_root, cyc_add, cyc_inv, cyc_mul, root_of_unity, zeta
from .series import PuiseuxSeries, graded_part, lc, ld, pth_root, s_add, s_deriv, s_inv, s_mul, semisimple_part
from .twist_lifter import TwistedStructure, conjugate, enumerate_structures, lift, twisted_Y
from .va_check import (
    BorcherdsWindow,
    CheckReport,
    check_borcherds,
    check_d_compat,
    check_distinct,
    check_grading,
    check_ode,
    check_orbit,
    check_root,
    check_vacuum,
)

__version__ = "0.1.0"
