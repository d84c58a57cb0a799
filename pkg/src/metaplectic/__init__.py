"""Lattice, symbol and Plancherel computations for metaplectic covers of split groups."""

__version__ = "0.1.0"

from .covertorus import (CoverTorusElement, CoverTorusModel, associated_linear_datum,
                         sharp_lattice, torus_center, torus_mul, verify_steinberg)
from .genchar import (DynkinDiagram, DynkinSubset, GenuineCharacter, admissible_subsets,
                      gamma_star, gl_pullback, tsharp_embed, weyl_invariance_check)
from .intlattice import LatticeBasis, dual_lattice, hermite_normal_form, kernel_mod, smith_normal_form
from .plancherel import (LaurentRational, ReducibilityReport, archimedean_mu, gk_coefficient,
                         plancherel_rank_one, reducibility_report, transfer_linear_to_cover)
from .rootdatum import RootDatum, SymmetricForm, build_root_datum, standard_form, weyl_orbit
from .symbols import LocalFieldModel, MuN, gamma_solutions, tame_symbol

__all__ = [
    "CoverTorusElement", "CoverTorusModel", "associated_linear_datum", "sharp_lattice",
    "torus_center", "torus_mul", "verify_steinberg",
    "DynkinDiagram", "DynkinSubset", "GenuineCharacter", "admissible_subsets", "gamma_star",
    "gl_pullback", "tsharp_embed", "weyl_invariance_check",
    "LatticeBasis", "dual_lattice", "hermite_normal_form", "kernel_mod", "smith_normal_form",
    "LaurentRational", "ReducibilityReport", "archimedean_mu", "gk_coefficient",
    "plancherel_rank_one", "reducibility_report", "transfer_linear_to_cover",
    "RootDatum", "SymmetricForm", "build_root_datum", "standard_form", "weyl_orbit",
    "LocalFieldModel", "MuN", "gamma_solutions", "tame_symbol",
]
