from .families import Family, NESTED, is_nested, log_normalizer, log_pmf
from .fitting import (ALL_FAMILIES, BestFitSet, ConvergenceError, FitError, FitResult,
                      InsufficientDataError, MIN_TAIL, TailSample, XminPolicy, choose_xmin, compare, fit,
                      fit_tail, loglikelihood_ratio, select_best)
from .sampling import sample

__all__ = [
    "Family", "NESTED", "is_nested", "log_normalizer", "log_pmf", "ALL_FAMILIES", "BestFitSet",
    "ConvergenceError", "FitError", "FitResult", "InsufficientDataError", "MIN_TAIL", "TailSample",
    "XminPolicy", "choose_xmin", "compare", "fit", "fit_tail", "loglikelihood_ratio",
    "select_best", "sample",
]
