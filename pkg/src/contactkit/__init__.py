"""Numerical toolkit for contact forms, Jacobi brackets and integrable Reeb flows."""

from .config import BracketConfig, CheckConfig, IntegratorConfig, Tolerances
from .contact import (
    ContactForm,
    HamiltonianField,
    ONE,
    contact_check,
    flat,
    hamiltonian_vf,
    is_semibasic,
    lie_derivative_alpha,
    reeb,
    reeb_field,
    semibasic_part,
    sharp,
)
from .dynamics import Trajectory, flow, monitor_invariants, pullback_check, rotation_numbers
from .errors import (
    ChartExitError,
    ContactConditionError,
    ContactKitError,
    DomainError,
    ExprSyntaxError,
    FlowError,
    SolveError,
    SpecError,
    StepUnderflowError,
    UnknownIdentifierError,
)
from .geomcore import Chart, OneFormDef, ScalarField, VectorFieldDef, parse, to_text
from .integrability import (
    IntegrableSystemSpec,
    TorusCycle,
    action_integral,
    build_canonical_model,
    frequency_map_check,
    isotropy_integrability_check,
    reeb_frequency_constraints,
    verify_theorem5,
)
from .jacobi import bivector, check_derivation, check_isomorphism, jacobi_bracket, lemma1_equivalences
from .report import CheckReport, Condition
from .systems import BUILTINS, SystemDef, builtin, load

__all__ = [
    "BUILTINS",
    "BracketConfig",
    "Chart",
    "ChartExitError",
    "CheckConfig",
    "CheckReport",
    "Condition",
    "ContactConditionError",
    "ContactForm",
    "ContactKitError",
    "DomainError",
    "ExprSyntaxError",
    "FlowError",
    "HamiltonianField",
    "IntegrableSystemSpec",
    "IntegratorConfig",
    "ONE",
    "OneFormDef",
    "ScalarField",
    "SolveError",
    "SpecError",
    "StepUnderflowError",
    "SystemDef",
    "Tolerances",
    "TorusCycle",
    "Trajectory",
    "UnknownIdentifierError",
    "VectorFieldDef",
    "action_integral",
    "bivector",
    "build_canonical_model",
    "builtin",
    "check_derivation",
    "check_isomorphism",
    "contact_check",
    "flat",
    "flow",
    "frequency_map_check",
    "hamiltonian_vf",
    "is_semibasic",
    "isotropy_integrability_check",
    "jacobi_bracket",
    "lemma1_equivalences",
    "lie_derivative_alpha",
    "load",
    "monitor_invariants",
    "parse",
    "pullback_check",
    "reeb",
    "reeb_field",
    "reeb_frequency_constraints",
    "rotation_numbers",
    "semibasic_part",
    "sharp",
    "to_text",
    "verify_theorem5",
]
