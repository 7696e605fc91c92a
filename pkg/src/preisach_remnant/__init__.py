"""Preisach hysteresis operators, remnant curves and iterative remnant control."""
from .control import (
    ControllerConfig,
    DegenerateSlopeError,
    InfeasibleTargetError,
    IterationTrace,
    Newton,
    Proportional,
    Secant,
    StalledSecantError,
    admissible_range,
    choose_polarity,
    run_controller,
    step_newton,
    step_proportional,
    step_secant,
)
from .experiment import ExperimentConfig, ExperimentResult, emit_outputs, run_monte_carlo
from .interface import InterfaceLine, PlaneBounds, relay_update, wipe_update
from .operators import (
    DiscretePreisach,
    ExactPreisach,
    InputRangeError,
    RepresentabilityError,
    interface_from_states,
    output_from_interface,
)
from .remnant import (
    OmegaRegion,
    RemnantCurve,
    omega_region,
    remnant_by_wiping,
    remnant_derivative,
    remnant_value,
    sample_curve,
    write_curve_csv,
)
from .signals import (
    IterativeInputSchedule,
    PulseSignal,
    compose_schedule,
    make_asymmetric_pulse,
    make_half_sine_pulse,
    make_triangle_pulse,
    read_samples_csv,
    time_transform,
    validate_r1_r4,
    write_samples_csv,
)
from .weights import GaussianWeight, GridWeight, UniformWeight, WeightField, weight_from_spec, weight_to_spec

__version__ = "0.1.0"
