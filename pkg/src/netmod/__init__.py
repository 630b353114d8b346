"""Net modules with two-faced interfaces, their composition, and their runs."""

from .compose import CompositionError, compose, compose_all, compose_traced
from .interface import (
    InterfaceView,
    Kind,
    Label,
    MatchPair,
    degree,
    matches,
    matchfree,
    place_label,
    trans_label,
)
from .io import ModuleDocument, ModuleParseError, load_module, parse_module, serialize_module
from .iso import CanonicalForm, canonical_form, find_isomorphism, is_isomorphic
from .module import (
    Element,
    InvalidModule,
    NetModule,
    Violation,
    check,
    empty_module,
    is_valid,
    validate,
)
from .runs import (
    EMPTY_RUN,
    Run,
    RunClassSet,
    RunRejected,
    compose_run_sets,
    extend_run,
    is_basic_run,
    recognize_run,
    runs_upto,
)
from .steps import Step, basic_step, enumerate_steps, is_step_of, step_universe, step_violations
from .dot import to_dot

__all__ = [name for name in dir() if not name.startswith("_")]
