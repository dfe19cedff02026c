"""Preisach relay-field simulation with exact staircase memory and
recursive remnant set-point control."""

from .errors import (
    AdmissibilityError,
    ConfigurationError,
    DegenerateBoundsError,
    EmptyIntersectionError,
    OutOfRangeError,
)
from .interface import Box, MemoryInterface, PlanePoint, push_extremum, relay_state
from .weighting import (
    ButterflyParams,
    GaussianComponent,
    GaussianWeighting,
    GridWeighting,
    QRegion,
    SectorBounds,
    eval_mu,
    evaluate_output,
    integrate_staircase_region,
    make_butterfly,
    sector_bounds,
    uniform_field,
)
from .control import (
    ControllerConfig,
    ControlTrace,
    PulseRecord,
    apply_pulse,
    delta_remnant_explicit,
    dense_response,
    last_input_extrema,
    max_gain,
    pulse_value,
    remnant,
    remnant_extrema,
    render_signal,
    repair_initial_interface,
    run_controller,
    validate_initial_interface,
)
from .oracle import RelayGrid, oracle_pulse_remnants, oracle_simulate

__version__ = "0.1.0"
