"""Hitting probabilities for convex bodies thrown onto a lattice of triangles."""

from .body import (
    ConvexBody,
    PlacedBody,
    ellipse_E,
    make_disc,
    make_ellipse,
    make_half_disc,
    make_needle,
    make_polygon,
    make_rectangle,
    read_polygon_file,
    rotate_translate,
)
from .closedform import (
    ellipse_distribution,
    half_disc_distribution,
    markov_p1,
    needle_distribution,
    rectangle_distribution,
    santalo_equilateral,
)
from .engine import (
    AutocorrelationIntegrals,
    HitDistribution,
    autocorrelation,
    c_star,
    check_fit,
    fit_check,
    hit_probabilities,
)
from .errors import BodyTooLarge, DegenerateTriangle, QuadratureFailure, TrilatError
from .lattice import CellIndex, TriangleLattice, cell_vertices, cells_near, lattice_from_sides
from .simulate import SimReport, ThrowSample, count_hits, draw_throws, run_simulation

__all__ = [
    "AutocorrelationIntegrals",
    "BodyTooLarge",
    "CellIndex",
    "ConvexBody",
    "DegenerateTriangle",
    "HitDistribution",
    "PlacedBody",
    "QuadratureFailure",
    "SimReport",
    "ThrowSample",
    "TriangleLattice",
    "TrilatError",
    "autocorrelation",
    "c_star",
    "cell_vertices",
    "cells_near",
    "check_fit",
    "count_hits",
    "draw_throws",
    "ellipse_E",
    "ellipse_distribution",
    "fit_check",
    "half_disc_distribution",
    "hit_probabilities",
    "lattice_from_sides",
    "make_disc",
    "make_ellipse",
    "make_half_disc",
    "make_needle",
    "make_polygon",
    "make_rectangle",
    "markov_p1",
    "needle_distribution",
    "read_polygon_file",
    "rectangle_distribution",
    "rotate_translate",
    "run_simulation",
    "santalo_equilateral",
]

__version__ = "0.1.0"
