"""Workbench for an algebra of fuzzy device-environment contracts.

A fuzzy process grades every execution of a finite universe twice: how
strongly the device can drive it and how strongly the environment tolerates
it. This package provides the value types, the five composition operators,
a refinement order, an exhaustive/randomized law checker with
counterexample shrinking, a small script language, and a command line tool.
"""

from .algebra import join, meet, product, reflect, sum_
from .core import (
    BlockingPolicy,
    Classification,
    ConstantKind,
    EqualityMode,
    ExecutionClass,
    ExecutionFlags,
    FuzzyProcess,
    FuzzySubset,
    GRADE_ONE,
    GRADE_ZERO,
    ProcessFlags,
    Universe,
    as_grade,
    bottom,
    classify,
    constant,
    equal,
    execution_flags,
    first_refinement_violation,
    first_support_difference,
    first_value_difference,
    grades,
    make_process,
    omega,
    process_flags,
    refines,
    top,
)
from .errors import (
    BlockingViolation,
    BudgetExceeded,
    DuplicateDefinition,
    DuplicateLabel,
    FuzzProcError,
    GradeOutOfRange,
    MissingUniverse,
    ParseError,
    ScriptError,
    UniverseMismatch,
    UnknownIdentifier,
    UnknownLabel,
)
from .lang import (
    AssertionResult,
    EvalReport,
    Relation,
    Script,
    evaluate,
    evaluate_expression,
    format_expr,
    format_process,
    format_universe,
    parse_expression,
    parse_script,
)
from .laws import (
    Counterexample,
    DEFAULT_BUDGET,
    DEFAULT_GRID,
    Grid,
    Law,
    LAW_CATALOGUE,
    LawVerdict,
    Scope,
    SuiteReport,
    Verified,
    check_law,
    count_processes,
    default_universe,
    enumerate_processes,
    revalidate,
    run_suite,
    select_laws,
    shrink_counterexample,
)

__version__ = "0.1.0"

__all__ = [
    "AssertionResult",
    "BlockingPolicy",
    "BlockingViolation",
    "BudgetExceeded",
    "Classification",
    "ConstantKind",
    "Counterexample",
    "DEFAULT_BUDGET",
    "DEFAULT_GRID",
    "DuplicateDefinition",
    "DuplicateLabel",
    "EqualityMode",
    "EvalReport",
    "ExecutionClass",
    "ExecutionFlags",
    "FuzzProcError",
    "FuzzyProcess",
    "FuzzySubset",
    "GRADE_ONE",
    "GRADE_ZERO",
    "GradeOutOfRange",
    "Grid",
    "Law",
    "LAW_CATALOGUE",
    "LawVerdict",
    "MissingUniverse",
    "ParseError",
    "ProcessFlags",
    "Relation",
    "Scope",
    "Script",
    "ScriptError",
    "SuiteReport",
    "Universe",
    "UniverseMismatch",
    "UnknownIdentifier",
    "UnknownLabel",
    "Verified",
    "as_grade",
    "bottom",
    "check_law",
    "classify",
    "constant",
    "count_processes",
    "default_universe",
    "enumerate_processes",
    "equal",
    "evaluate",
    "evaluate_expression",
    "execution_flags",
    "first_refinement_violation",
    "first_support_difference",
    "first_value_difference",
    "format_expr",
    "format_process",
    "format_universe",
    "grades",
    "join",
    "make_process",
    "meet",
    "omega",
    "parse_expression",
    "parse_script",
    "process_flags",
    "product",
    "reflect",
    "refines",
    "revalidate",
    "run_suite",
    "select_laws",
    "shrink_counterexample",
    "sum_",
    "top",
]
