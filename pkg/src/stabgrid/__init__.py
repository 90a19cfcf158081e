"""Stabilizer models on hypercubic lattices and their renormalization flows.

The package builds commuting Pauli Hamiltonians labelled by a chain of cube
dimensions ``[d_n, d_s, d_l, D]`` on periodic or open grids, computes their
ground-state degeneracy over GF(2), grows one lattice axis with an explicit
CNOT layer that returns the model to its fixed-point form, and coarse-grains
the 2D ``[0,1,2,2]`` case by local spin transformations.

Hot kernels (GF(2) elimination, commutation tables, configuration
transforms) are JIT-compiled with numba when available; set
``STABGRID_BACKEND=numpy`` to force the pure-numpy implementations or
``STABGRID_BACKEND=numba`` to require the compiled ones.
"""

from __future__ import annotations

from .backend import active_backend, set_backend
from .coarsegrain import UsTable, refined_configs, verify_coarse_structure
from .erg import (
    ErgPlan,
    build_circuit,
    build_h1,
    check_mapping_claims,
    classify_term,
    gsd_recursion_check,
    validate_circuit_conditions,
    verify_fixed_point,
)
from .errors import (
    ConstructionError,
    DomainError,
    PhaseError,
    ResourceError,
    StabgridError,
)
from .gf2 import BitMatrix, rank, row_space_equal, rref
from .groundstate import config_group, enumerate_configs
from .lattice import LatticeSpec, QubitIndexMap, parse_lattice
from .models import (
    ModelSpec,
    StabilizerModel,
    build_model,
    dualize,
    gsd_scan_and_fit,
    log2_gsd,
    parse_model,
    parse_model_spec,
    verify_commutation,
)
from .pauli import CnotCircuit, PauliString, circuit_conjugate, cnot_conjugate, commutes, multiply

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "CnotCircuit",
    "ConstructionError",
    "DomainError",
    "ErgPlan",
    "LatticeSpec",
    "ModelSpec",
    "PauliString",
    "PhaseError",
    "QubitIndexMap",
    "ResourceError",
    "StabgridError",
    "StabilizerModel",
    "UsTable",
    "active_backend",
    "build_circuit",
    "build_h1",
    "build_model",
    "check_mapping_claims",
    "circuit_conjugate",
    "classify_term",
    "cnot_conjugate",
    "commutes",
    "config_group",
    "dualize",
    "enumerate_configs",
    "gsd_recursion_check",
    "gsd_scan_and_fit",
    "log2_gsd",
    "multiply",
    "parse_lattice",
    "parse_model",
    "parse_model_spec",
    "rank",
    "refined_configs",
    "row_space_equal",
    "rref",
    "set_backend",
    "verify_coarse_structure",
    "verify_commutation",
    "verify_fixed_point",
    "__version__",
]
