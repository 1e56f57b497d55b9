"""Visualise answer-set interpretations, edit them graphically, recover them by abduction."""

from .abduction import (
    DEFAULT_INTEGRITY,
    AbductionProgram,
    AbductionResult,
    DomainTerms,
    PredicateSets,
    abducible_predicates,
    abduce,
    build_abduction_program,
    build_check,
    build_dom,
    build_guess,
    override_domain,
    verify_roundtrip,
)
from .backends import SolverConfig, run_external, solve_with_config
from .edits import (
    Connect,
    CreateElement,
    DeleteElement,
    Disconnect,
    EditOp,
    SetGridValue,
    SetProperty,
    apply_edit,
    apply_edits,
    invert_edit,
)
from .errors import (
    AffordanceError,
    ConstraintCycleError,
    DisjunctiveHeadError,
    EditError,
    GroundingError,
    InconsistentInterpretationError,
    KaraError,
    NameManglingError,
    ParseError,
    SolverBackendError,
    UnsafeRuleError,
    UnsatisfiableConstraintError,
    ValidationError,
)
from .grounding import ground
from .layout import LayoutResult, layout
from .parser import parse_atom_text, parse_interpretation, parse_program, parse_term_text
from .scene import Scene, build_scene, generic_scene, scene_to_json, scene_to_vis
from .solving import (
    Stratification,
    brute_force_answer_sets,
    is_answer_set,
    least_model,
    reduct,
    solve,
    stratify,
)
from .svg import render_svg
from .syntax import (
    Arith,
    Atom,
    Comparison,
    Func,
    IntConst,
    Interpretation,
    Interval,
    Program,
    Rule,
    StrConst,
    SymConst,
    Variable,
    format_atom,
    format_term,
)
from .vocabulary import CATALOG, Diagnostic, VisInterpretation, project_vis, validate

__version__ = "0.1.0"
