"""Finite Veltman semantics, explicit fixed points and bounded countermodel search
for interpretability logics between IL- and IL."""

from .fixpoint import (
    FixedPointResult,
    FixpointError,
    VariableConditionError,
    fixed_point,
    fp_primitive_box,
    fp_primitive_left,
    fp_primitive_rhd,
    ufp_check,
    ufp_formula,
    verify_fixed_point,
)
from .formula import (
    BOT,
    TOP,
    Bot,
    Box,
    Formula,
    Imp,
    ParseError,
    Rhd,
    Var,
    adequate_closure,
    is_modalized,
    parse,
    render,
    substitute,
    variables,
)
from .logics import LOGICS, Logic, axiom_instance, embed_il, extends, frame_class_check, lookup
from .paper_models import PaperFamily, build, no_fixed_point_scan, truncation_sound
from .search import Report, SearchBudget, Status, Witness, enumerate_frames, find_countermodel, search
from .semantics import (
    Frame,
    FrameError,
    FrameProperty,
    Model,
    check_frame_property,
    generated_submodel,
    holds,
    valid_in_frame,
    valid_in_model,
)

__all__ = [name for name in dir() if not name.startswith("_")]
