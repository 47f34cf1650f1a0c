"""Edge guards for plane graphs.

A plane graph is given as a rotation system: the clockwise cyclic order
of neighbors around every vertex.  Faces follow from tracing, guard
sets are sets of edges whose endpoints touch every face, and the
subpackages split the work: ``embedding`` owns the combinatorial map,
``reductions`` the peeling constructions, ``chromatic`` the coloring
constructions, ``oracle`` exact minima, ``corpus`` generators, and
``render`` diagram output.  ``cli`` ties them together.
"""

from .embedding import (
    BudgetExceeded,
    EdgeGuardError,
    Face,
    GraphStats,
    GuardSet,
    PlaneGraph,
    VerificationFailed,
    VerificationReport,
    allowance,
    build_from_rotation,
    guard_set_from_doc,
)
from .reductions import (
    Configuration,
    NoConfiguration,
    ReductionStep,
    classify_edge,
    find_borodin_configuration,
    find_lebesgue_configuration,
    find_low_degree_step,
    guard_three_eighths,
    guard_two_degenerate,
    guard_two_fifths,
    run_iterative,
    step_for_configuration,
)
from .chromatic import (
    GuardFamily,
    TwoColoring,
    VertexColoring,
    chromatic_guard,
    find_guard_coloring,
    four_color,
    guard_from_guard_coloring,
    guard_sets_from_coloring,
    three_hop_guard,
    triangulate,
)
from .oracle import Infeasible, is_guardable_with, minimum_guard_set
from .corpus import (
    FAMILIES,
    GenerationFailed,
    GeneratorSpec,
    figure_no_guard_coloring,
    generate,
)
from .render import LayoutFailed, compute_layout, render_svg, tutte_layout

__version__ = "0.1.0"
