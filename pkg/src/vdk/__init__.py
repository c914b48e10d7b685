"""Exact arithmetic for Higman-Thompson groups V_{d,k} and Brin-Thompson mV.

Cantor-set actions by prefix substitution, the clopen Boolean algebra,
Bernoulli measures and Radon-Nikodym cocycles, groupoid bisections,
tail equivalence, and the non-amenability inequality checker.
"""

from .cantor import (
    Alphabet,
    Clopen,
    Point,
    Word,
    clopen_normalize,
    empty_clopen,
    format_clopen,
    format_point,
    format_word,
    member,
    parse_clopen,
    parse_point,
    parse_word,
    point_from_stream,
    point_normalize,
    split,
    whole_space,
)
from .certificate import (
    CertificateReport,
    NormBound,
    PingPongCertificate,
    SymmetricSet,
    check_certificate,
    convolution_count,
    fixture,
    free_norm,
    pingpong_verify,
    symmetric_set,
)
from .errors import (
    ArityMismatch,
    CertificateInvalid,
    DisjointnessViolation,
    IncompleteBoxes,
    IncompleteDomain,
    IncompleteRange,
    InclusionViolation,
    InconclusiveParameters,
    MismatchedAlphabet,
    NotFull,
    NotRelated,
    NotSymmetric,
    OverlappingBoxes,
    OverlappingDomain,
    OverlappingRange,
    TransportImpossible,
    VdkError,
)
from .groupoid import (
    Bisection,
    BoxTable,
    DoubleCylinder,
    bisection_act,
    bisection_compose,
    bisection_inverse,
    format_bisection,
    from_table,
    germ_maps,
    is_full,
    make_bisection,
    mv_act,
    mv_compose,
    mv_embed_factor,
    mv_from_json,
    mv_identity,
    mv_inverse,
    mv_make,
    mv_to_json,
    parse_bisection,
    to_table,
)
from .measure import (
    QuadraticValue,
    cocycle_chain_check,
    cocycle_range,
    deficit,
    integral_sqrt_rn,
    mu,
    quad_compare,
    quadratic,
    rn_exponent,
    rn_profile,
    sqrt_int,
)
from .tables import (
    TableElement,
    act_clopen,
    act_point,
    compose,
    embed_supported,
    equals,
    format_table,
    identity,
    inverse,
    make_table,
    parse_table,
    probe_points,
    reduce,
    support,
    transporter,
)
from .tails import (
    TailWitness,
    finite_level_related,
    orbit_fragment,
    related,
    witness_cell,
    witness_holds,
)

__version__ = "0.1.0"
