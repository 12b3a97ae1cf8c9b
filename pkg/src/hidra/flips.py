"""Metric edge flips and the flip-to-weighted-Delaunay loop.

A metric flip exchanges the diagonal of a hinge combinatorially and
assigns the new diagonal the generalized Ptolemy value of the five
inversive distances around the hinge; radii and all other inversive
distances are untouched, so the discrete conformal class is preserved.
"""

import math
from dataclasses import dataclass

from .errors import NonCompactOrthocircle, SurgeryDiverged
from .geometry import (
    TOL_DELAUNAY,
    Packing,
    face_metrics,
    hinge_delaunay_margin,
)
from .ptolemy import (
    delta_identity_residuals,
    ptolemy_flip_value,
    ptolemy_residual,
    ptolemy_residual_scale,
)
from .surface import flip_combinatorial, hinge

__all__ = [
    "FlipEvent",
    "delta_identity_residuals",
    "flip_edge",
    "make_weighted_delaunay",
    "ptolemy_flip_value",
    "ptolemy_residual",
    "ptolemy_residual_scale",
    "surface_delaunay_margins",
]

DEFAULT_FLIP_BUDGET_FACTOR = 100


@dataclass(frozen=True)
class FlipEvent:
    """One executed flip: hinge labels before, diagonal value after."""

    edge: int
    labels: tuple       # (a, b, c, d, e) inversive distances pre-flip
    new_value: float    # inversive distance f of the new diagonal
    iteration: int
    margin_before: float

    def ptolemy_residual_relative(self):
        sextuple = (*self.labels, self.new_value)
        return ptolemy_residual(*sextuple) / ptolemy_residual_scale(*sextuple)


def flip_edge(surface, packing, edge, iteration=0):
    """Flip one edge, returning (surface', packing', FlipEvent).

    The edge keeps its id; its inversive distance becomes the Ptolemy
    value of the hinge labels.  The pre-flip Delaunay margin is recorded
    as NaN when an incident orthocircle is non-compact.
    """
    hv = hinge(surface, edge)
    labels = tuple(float(packing.inv[eid]) for eid in hv.boundary_edges) + (
        float(packing.inv[edge]),
    )
    try:
        margin = hinge_delaunay_margin(hv, packing)
    except NonCompactOrthocircle:
        margin = math.nan
    new_surface = flip_combinatorial(surface, edge)
    f = ptolemy_flip_value(*labels)
    new_inv = packing.inv.copy()
    new_inv[edge] = f
    return (
        new_surface,
        Packing(new_inv, packing.radii.copy()),
        FlipEvent(edge, labels, f, iteration, margin),
    )


def surface_delaunay_margins(surface, packing):
    """Delaunay margin of every edge (raises on non-compact faces)."""
    for fid in range(len(surface.faces)):
        fm = face_metrics(surface, packing, fid)
        if fm.xi <= 0.0:
            raise NonCompactOrthocircle(
                f"face {fid} has Xi = {fm.xi:.3e} <= 0", face=fid, xi=fm.xi
            )
    return [
        hinge_delaunay_margin(hinge(surface, eid), packing)
        for eid in range(len(surface.edges))
    ]


def make_weighted_delaunay(
    surface,
    packing,
    tol=TOL_DELAUNAY,
    flip_budget=None,
    iteration=0,
):
    """Flip until every edge is local weighted Delaunay.

    Scheduling is greedy worst-first: each round flips the edge with the
    most negative margin, ties broken by lowest edge id.  Edges within
    the tolerance band are treated as Delaunay and never flipped, which
    prevents two-cycles at degenerate hinges.  Returns the new surface,
    packing, and the ordered flip log.
    """
    if flip_budget is None:
        flip_budget = DEFAULT_FLIP_BUDGET_FACTOR * len(surface.edges)
    events = []
    while True:
        margins = surface_delaunay_margins(surface, packing)
        worst = min(range(len(margins)), key=lambda e: (margins[e], e))
        if margins[worst] >= -tol:
            return surface, packing, events
        if len(events) >= flip_budget:
            raise SurgeryDiverged(
                f"exceeded flip budget of {flip_budget} flips", state=events
            )
        surface, packing, event = flip_edge(surface, packing, worst, iteration)
        events.append(event)
