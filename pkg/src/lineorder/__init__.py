"""Exact computation in groups of PL homeomorphisms of the line built from
labellings of the half-integer lattice.

Everything is exact: coordinates are dyadic rationals, maps are finite
piecewise-linear data, group elements are lazy words evaluated through the
labelling, and every reported number is an integer, a dyadic, or an exact
fraction.
"""

from .dyadic import Dyadic
from .plmap import Interval, PLMap, compose, interval_map, transporter
from .labelling import (
    Letter,
    LetterWord,
    PeriodicLabelling,
    RecursiveLabelling,
    axiom_report,
    mirror,
    parse_labelling_file,
    periodic_approximation,
)
from .linegroup import (
    Gen,
    GenWord,
    Translation,
    commuting_chain,
    embed_x,
    embed_z,
    free_pair,
    from_word,
    generators,
    is_trivial,
    move_to_zero,
    special_element,
    transition_points_on,
    window_check,
)
from .atoms import (
    atoms_on,
    cellular_decomposition,
    classify_atoms,
    periodic_stability,
    stability_constant,
)
from .markedspace import (
    MarkedGroup,
    convergence_table,
    nu_bound,
    quotient_circle,
    translation_number,
)
from .thompson import CircleMap, check_f_presentation, seed_triple

__version__ = "0.1.0"
