"""Exact local A-infinity coalgebras, infinity dualities and string-topology checks on simplicial chains."""
from .simplicial import SimplicialComplex, load_complex, homology, default_fundamental_class
from .ainfty import construct_local_coalgebra, verify_square_zero
from .coinner import construct_chi, build_duality, verify_duality, compare_to_reference
from .minimal_model import Cobimodule, decompose_cobimodule, quasi_inverse
from .lie import construct_local_lie, bernoulli_report
from .hochschild import transported_structure, bv_check
from .estimators import (LocalCoalgebra, DualityStructure, CobimoduleDecomposition,
                         LocalLieModel, HochschildBV)
from .validation import InputError, fixture_path

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex", "load_complex", "homology", "default_fundamental_class",
    "construct_local_coalgebra", "verify_square_zero", "construct_chi", "build_duality",
    "verify_duality", "compare_to_reference", "Cobimodule", "decompose_cobimodule",
    "quasi_inverse", "construct_local_lie", "bernoulli_report", "transported_structure",
    "bv_check", "LocalCoalgebra", "DualityStructure", "CobimoduleDecomposition",
    "LocalLieModel", "HochschildBV", "InputError", "fixture_path",
]
