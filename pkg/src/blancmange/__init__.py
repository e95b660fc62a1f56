"""Generalized blancmange functions: exact evaluation, certificates, approximation, rendering."""

from .approximate import (
    ApproximationResult,
    SampledFunction,
    approximate_function,
    choose_c,
    interpolate,
    series_distance,
)
from .certify import (
    AffinePiece,
    GridInterval,
    NonAffineWitness,
    affine_pieces,
    locate_grid_interval,
    nonaffine_certificate,
    roughness_lower_bound,
)
from .errors import BlancmangeError, DomainError, InconsistencyError
from .generator import CLASSIC, Generator, eval_s, eval_s_k, make_generator, slope_on_piece, sup_norm
from .numeric import Enclosure, Rational, enclosure_contains, frac_mod1, rat_parse, rat_str
from .series import (
    BAdicPoint,
    BlancmangeSpec,
    SeriesValue,
    badic,
    eval_enclosure,
    eval_exact_badic,
    evaluate,
    functional_eq_residual,
    partial_sum,
    tail_bound,
)
from .zoom import DefectReport, ZoomFrame, chord_defect, divergence_scan, renormalize, zoom_frame

__version__ = "0.1.0"
