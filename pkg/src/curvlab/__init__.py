"""Numerical curvature engine for left-invariant Hermitian structures on Lie algebras."""

from .algebra import HermitianLieAlgebra, RealLieData, abelian, from_real, new
from .curvature import (
    Curv4,
    HVerdict,
    LCBlocks,
    Predicates,
    RealCurv,
    TorsionTensor,
    chern_connection,
    chern_curvature,
    chern_torsion,
    constant_H_detect,
    hol_sect,
    levi_civita_from_chern,
    levi_civita_koszul,
    predicates,
    symmetrize,
)
from .errors import (
    ConstraintError,
    FrameError,
    IntegrabilityError,
    JacobiError,
    ParseError,
    StructureError,
)
from .families import (
    AlmostAbelianParams,
    Codim2Params,
    aa_classify,
    aa_closed_forms,
    admissible_normalize,
    build_almost_abelian,
    build_codim2,
    codim2_classify,
    codim2_closed_forms,
    constant_lc_curvature_example,
    sample_almost_abelian,
    sample_codim2,
    sample_unimodular_aa,
)
from .linalg import DEFAULT_TOL, takagi, unitary_check

__all__ = [
    "AlmostAbelianParams",
    "Codim2Params",
    "ConstraintError",
    "Curv4",
    "DEFAULT_TOL",
    "FrameError",
    "HVerdict",
    "HermitianLieAlgebra",
    "IntegrabilityError",
    "JacobiError",
    "LCBlocks",
    "ParseError",
    "Predicates",
    "RealCurv",
    "RealLieData",
    "StructureError",
    "TorsionTensor",
    "aa_classify",
    "aa_closed_forms",
    "abelian",
    "admissible_normalize",
    "build_almost_abelian",
    "build_codim2",
    "chern_connection",
    "chern_curvature",
    "chern_torsion",
    "codim2_classify",
    "codim2_closed_forms",
    "constant_H_detect",
    "constant_lc_curvature_example",
    "from_real",
    "hol_sect",
    "levi_civita_from_chern",
    "levi_civita_koszul",
    "new",
    "predicates",
    "sample_almost_abelian",
    "sample_codim2",
    "sample_unimodular_aa",
    "symmetrize",
    "takagi",
    "unitary_check",
]

__version__ = "0.1.0"
