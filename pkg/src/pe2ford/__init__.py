"""Exact computation in projective elementary groups over imaginary quadratic orders."""

from .arrangement import enumerate_hemispheres, face_statuses, plane_split, svg_topview
from .errors import (
    CycleNotClosed,
    DegenerateChain,
    InvalidDiscriminant,
    NoHemisphere,
    OutOfScope,
    SearchExhausted,
    WitnessNotFound,
    WordSyntaxError,
)
from .ford import (
    FundPolygon,
    Presentation,
    amalgam_rectangle,
    edge_cycles,
    pe2_ford_faces,
    presentation,
    voronoi_cell,
)
from .moebius import Hemisphere, Mat, Side, gen_r, gen_s, isometric_hemisphere
from .orders import KElem, OInt, Order, dist_sq, lattice_points_within, make_order
from .subgroups import (
    AmalgamReport,
    CosetFamily,
    GapPoint,
    amalgam_report,
    collapse_hom_check,
    coset_family,
    gap_points,
    normalizer_witness,
)
from .words import (
    Inconclusive,
    Member,
    MembershipResult,
    NonMember,
    StandardForm,
    format_word,
    membership,
    normal_form,
    parse_word,
    word_to_matrix,
)

__all__ = [
    "AmalgamReport",
    "CosetFamily",
    "CycleNotClosed",
    "DegenerateChain",
    "FundPolygon",
    "GapPoint",
    "Hemisphere",
    "Inconclusive",
    "InvalidDiscriminant",
    "KElem",
    "Mat",
    "Member",
    "MembershipResult",
    "NoHemisphere",
    "NonMember",
    "OInt",
    "Order",
    "OutOfScope",
    "Presentation",
    "SearchExhausted",
    "Side",
    "StandardForm",
    "WitnessNotFound",
    "WordSyntaxError",
    "amalgam_rectangle",
    "amalgam_report",
    "collapse_hom_check",
    "coset_family",
    "dist_sq",
    "edge_cycles",
    "enumerate_hemispheres",
    "face_statuses",
    "format_word",
    "gap_points",
    "gen_r",
    "gen_s",
    "isometric_hemisphere",
    "lattice_points_within",
    "make_order",
    "membership",
    "normal_form",
    "normalizer_witness",
    "parse_word",
    "pe2_ford_faces",
    "plane_split",
    "presentation",
    "svg_topview",
    "voronoi_cell",
    "word_to_matrix",
]
