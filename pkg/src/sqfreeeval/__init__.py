"""Exact real root isolation by subdivision with square-free evaluation predicates."""

from .amortize import (
    BoundReport,
    StoppingModel,
    VoronoiCell,
    bound_report,
    closed_form_bound,
    harmonic_mean,
    integral_bound_G,
    paper_constant_bound,
    sigma,
    stopping_G,
    voronoi_cells,
)
from .bench import BenchmarkRecord, family_generate, run_benchmark
from .dyadic import Dyadic, dyadic_add, dyadic_compare_abs, dyadic_mul, parse_dyadic
from .isolator import Interval, IsolationReport, condition_c0, condition_c1, isolate, isolate_benchmark
from .oracle import ConvergenceError, RootSet, complex_roots, sturm_count, sturm_isolate
from .polynomial import IntPolynomial, gcd, parse_polynomial, root_bound, square_free_part, taylor_expansion

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "StoppingModel",
    "VoronoiCell",
    "bound_report",
    "closed_form_bound",
    "harmonic_mean",
    "integral_bound_G",
    "paper_constant_bound",
    "sigma",
    "stopping_G",
    "voronoi_cells",
    "BenchmarkRecord",
    "family_generate",
    "run_benchmark",
    "Dyadic",
    "dyadic_add",
    "dyadic_compare_abs",
    "dyadic_mul",
    "parse_dyadic",
    "Interval",
    "IsolationReport",
    "condition_c0",
    "condition_c1",
    "isolate",
    "isolate_benchmark",
    "ConvergenceError",
    "RootSet",
    "complex_roots",
    "sturm_count",
    "sturm_isolate",
    "IntPolynomial",
    "gcd",
    "parse_polynomial",
    "root_bound",
    "square_free_part",
    "taylor_expansion",
]
