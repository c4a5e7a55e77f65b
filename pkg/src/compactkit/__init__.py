"""Constructive compactness certificates for finite families of sampled functions."""

from .bv import (BVFunction, SelectionResult, helly_select, jordan_decomposition, total_variation,
                 tv_translation_check, verify_selection)
from .certificate import CoverCertificate, greedy_net, pullback_cover
from .classical import (DiscreteMetricFamily, SequenceFamily, aa_certify, equicontinuity_modulus,
                        lp_truncation_certify)
from .errors import CompactKitError, NotCertifiableAtResolution, NotCertified, PrerequisitesUnmet
from .fourier import SpectralFunction, dft, idft, pego_certify, plancherel_defect, spectral_tail
from .grid import FunctionFamily, Grid, GridFunction, lp_distance, lp_norm, rescale, shift
from .io import load_family, load_grid_function, save_family, save_grid_function
from .kolmogorov import (CubeTiling, build_tiling, converse_bounds, covering_number, greedy_cover,
                         kr_certify, projection_defect, projection_P)
from .moduli import ModuliReport, family_moduli, sequence_condition, tail_mass, translation_defect
from .sobolev import (SobolevFamily, conjugate_sobolev_exponent, gradient, gradient_translation_bound,
                      rk_certify, wkp_certify, wkp_family_reduce)

__version__ = "0.1.0"
