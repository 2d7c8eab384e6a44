"""Numerical toolkit for theta constants, the genus-4 Schottky-Igusa form and its gradient."""

from .core import (SiegelPoint, SymplecticMatrix, as_siegel, is_siegel_point, is_symplectic, random_siegel_point,
                   random_symplectic, symplectic_action)
from .exceptions import *  # noqa: F401,F403
from .forms import (SymQuadric, chi_product, det_s4, klein_ratio, s4_matrix, schottky_gradient, schottky_igusa,
                    snapshot)
from .hyperelliptic import HyperellipticCurve, modular_lambda, period_matrix, vanishing_thetanulls
from .lattice import EvenLattice, d16_plus, e8, e8_e8, enumerate_vectors, siegel_theta, verify_difference
from .locus import (LocusPoint, SingularThetaPoint, find_theta_singularity, klein_survey, project_to_schottky,
                    rank_profile, sigma_matrix, verify_proportionality)
from .multilinear import SymIndex, check_wedge_det, dims, mumford_weights, rho_action, sym_power_matrix
from .theta import HalfCharacteristic, ThetaJet, enumerate_characteristics, theta_jet, thetanulls

__version__ = "0.1.0"
