"""Twisted Segre products of quadratic algebras, computed exactly over the rationals."""

from .clifford import CliffordAlgebra, StabilizationData, clifford_algebra, evaluate_t_elements, stabilize
from .findim import FinDimAlgebra, center, radical, verify_explicit_iso, wedderburn_type
from .linalg import Fraction, Matrix, Subspace, annihilator, kernel, rref, solve
from .normality import (
    NormalCertificate,
    extend_automorphism,
    regularity_window,
    search_normal_degree2,
    verify_normal,
)
from .quadratic import (
    QuadraticPresentation,
    add_relation,
    hilbert,
    koszul_series_check,
    multiply,
    normal_form,
    polynomial_ring,
    presentations_equal,
    quadratic_dual,
    relation_space,
)
from .segre import (
    cross_validate,
    density_window_check,
    segre_component_model,
    segre_presentation,
    smash_truncation,
    zhang_twist_check,
)
from .twisting import (
    Twist2x2,
    TwistData,
    TwistingSeed,
    flip_seed,
    invert_sigma,
    normalize_diagonal,
    sigma_of,
    validate_2x2,
    validate_descent,
)

__version__ = "0.1.0"
