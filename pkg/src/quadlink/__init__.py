"""Exact intersection-lattice engine and elementary-link normalizer for
3-folds fibered over the projective line."""

from .chow import DivisorClass, GeneratorLabel, SurfacePairing, TrilinearForm, pair, triple
from .compactify import (
    Certificate,
    P2State,
    QuadricState,
    SquareReport,
    Verdict,
    boundary_coefficient,
    classify_quadric,
    commuting_square_check,
    decrease_degree,
    decrease_type,
    euler_number,
    euler_solver,
    hodge_diamond,
    normalize,
    normalize_p2,
    normalize_quadric_nonnormal,
    normalize_quadric_normal,
    p2_state,
    quadric_state,
    recognize_standard_quadric,
    singularity_label,
    type_from_label,
    type_of,
)
from .exprs import evaluate, evaluate_text, parse, unparse
from .links import (
    Check,
    CommuteReport,
    FiberType,
    LinkStep,
    commute_blowups_check,
    cube_from_genera,
    fiber_type,
    inverse_qp_link,
    p2_canonical_presentation,
    pp_link,
    qp_link,
    qq_link,
    twist_p2,
)
from .models import (
    CurveData,
    CurvePattern,
    FiberPattern,
    P2Bundle,
    PointData,
    PointPattern,
    QuadricFibration,
    SurfaceEmbedding,
    SurfaceModel,
    ThreefoldModel,
    anticanonical_cube,
    blow_up_curve,
    blow_up_point,
    blown_hirzebruch,
    contract,
    duval_boundary,
    elementary_transform,
    hirzebruch,
    normal_degree,
    p2_bundle,
    pushforward,
    quadric_cone,
    quadric_fibration,
    smooth_quadric_fiber,
    strict_transform,
)
from .verify import CorpusReport, EntryResult, load_corpus, run_corpus

__version__ = "0.1.0"
