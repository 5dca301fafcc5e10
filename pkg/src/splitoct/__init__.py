"""Split-octonion algebra, rotors, four-plane decompositions and G2 automorphisms."""

from .algebra import (
    Q,
    SIGNATURE,
    STRUCTURE_TABLE,
    UNIT_NAMES,
    BasisUnit,
    Octonion,
    associator,
    conj,
    generate_table,
    mul,
    norm,
)
from .automorphisms import (
    FAMILIES,
    AutomorphismSpec,
    G2Params,
    active_to_passive,
    finite_automorphism,
    g2_generator_matrices,
    infinitesimal_passive,
    match_generators,
    verify_automorphism,
)
from .kinematics import (
    Constants,
    RateState,
    Signal,
    classical_limit_sweep,
    from_octonion,
    lorentz_factor,
    to_octonion,
    uncertainty_check,
)
from .star import classify_triples, export_dot, lines, render_table, star_graph
from .transforms import (
    DecompositionError,
    InvalidAxisError,
    InvalidVelocityError,
    boost,
    decompose,
    decompose_circular,
    decompose_hyperbolic,
    left_mult_generators,
    left_transform,
    lie_closure_dim,
    passive_rotate,
    reconstruct,
    rotation_planes,
    rotor_exp,
)

__version__ = "0.1.0"
