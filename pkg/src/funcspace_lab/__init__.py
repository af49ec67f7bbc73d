"""Grid laboratory for Littlewood-Paley and dyadic martingale decompositions,
exponential Orlicz norms, Besov/LG classes and entropy-number estimates."""
from .grid import GridFunction, SpectralFunction, forward_transform, inverse_transform, lp_norm
from .dyadic import conditional_expectation, decompose, martingale_difference, square_function
from .multipliers import MultiplierOperator, apply, infty_operator_norm, littlewood_paley_pieces
from .norms import besov_norm, dyadic_besov_norm, lg_norm, lorentz_besov_norm, luxemburg_norm
from .corpus import generate_corpus
from .entropy import (ApproximationProfile, approx_error, entropy_upper_curve,
                      lorentz_cover_bound, packing_lower_bound)

__all__ = [
    "GridFunction", "SpectralFunction", "forward_transform", "inverse_transform", "lp_norm",
    "conditional_expectation", "decompose", "martingale_difference", "square_function",
    "MultiplierOperator", "apply", "infty_operator_norm", "littlewood_paley_pieces",
    "besov_norm", "dyadic_besov_norm", "lg_norm", "lorentz_besov_norm", "luxemburg_norm",
    "generate_corpus", "ApproximationProfile", "approx_error", "entropy_upper_curve",
    "lorentz_cover_bound", "packing_lower_bound",
]
