"""Isomorphic frames: arithmetic, calculus, means and convexity transported
through strictly monotone mappings."""

from .arith import iso_add, iso_div1, iso_div2, iso_mul, iso_sub
from .convexity import (
    ConvexityVerdict,
    build_inequality_check,
    classify_dvi_convexity,
    is_convex_set_1d,
    is_convex_set_2d,
    verify_dvi_inequality,
)
from .differential import (
    SINGULAR,
    axis_density,
    dual_derivative,
    elasticity,
    metrical_derivative,
    plane_density,
)
from .errors import *  # noqa: F401,F403
from .exprparse import parse_expr, parse_mapping, parse_predicate
from .integral import elastic_integral, geometric_integral, iso_integral_1, iso_integral_2
from .mappings import (
    CATALOG_NAMES,
    IDENTITY,
    Frame2D,
    Mapping,
    catalog,
    compose,
    dvi_function,
    function_mapping,
    h_scaleshift,
    v_scaleshift,
)
from .means import (
    EQ,
    GE,
    INDETERMINATE,
    LE,
    FunctionMean,
    MeanClassTag,
    Weights,
    cauchy_mean,
    compare_means,
    composite_mean_v,
    mean_class,
    mean_function,
    mean_function_oracle,
    mean_numbers,
    quasi_stolarsky,
)
from .numerics import (
    INF,
    Interval,
    QuadConfig,
    RealFn,
    fd_derivative,
    integrate,
    invert_monotone,
)
from .plotgen import (
    PlotSeries,
    axis_ticks,
    emit,
    fixed_proportion,
    graph_series,
    to_aux,
)

__version__ = "0.1.0"
