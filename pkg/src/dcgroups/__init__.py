"""Degree of commutativity and conjugacy ratio of groups: exact computation,
estimation and machine-checked verification."""

__version__ = "0.1.0"

from .catalog import build_catalog, catalog_group, catalog_names
from .conjugacy import conj_canonical, contained_vs_meeting, cr_lower_bound, cr_sequence, \
    verify_cr_eq_dc
from .dc import dc_montecarlo, dc_of_measure, dc_sequence, mass_of_small_centralizers
from .errors import (AperiodicityError, ConfigError, DcError, GenSetError, ModeError,
                     ResourceError, StructureError, VerificationError)
from .finite import neumann_decompose, verify_catalog_group, verify_neum_translates, verify_nvl
from .groups import (DirectProduct, FiniteGroup, FreeGroup, GenSet, Group, HeisenbergZ,
                     InfiniteDihedral, ZPowD, ball, ball_sizes)
from .index import index_measurement_curve, mixing_bound, schreier_cosets, \
    verify_uniform_measurement
from .measure import BallUniform, Explicit, Measure, WalkPower, convolve, lazy_step, walk_power

__all__ = ["__version__", "build_catalog", "catalog_group", "catalog_names", "conj_canonical",
           "contained_vs_meeting", "cr_lower_bound", "cr_sequence", "verify_cr_eq_dc",
           "dc_montecarlo", "dc_of_measure", "dc_sequence", "mass_of_small_centralizers",
           "AperiodicityError", "ConfigError", "DcError", "GenSetError", "ModeError",
           "ResourceError", "StructureError", "VerificationError", "neumann_decompose",
           "verify_catalog_group", "verify_neum_translates", "verify_nvl", "DirectProduct",
           "FiniteGroup", "FreeGroup", "GenSet", "Group", "HeisenbergZ", "InfiniteDihedral",
           "ZPowD", "ball", "ball_sizes", "index_measurement_curve", "mixing_bound",
           "schreier_cosets", "verify_uniform_measurement", "BallUniform", "Explicit", "Measure",
           "WalkPower", "convolve", "lazy_step", "walk_power"]
