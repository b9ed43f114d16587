"""Synchronous-frame current estimation errors in PMSM drives under
concurrent position-sensor and phase-current-sensor errors."""
from .control import (DegenerateGainError, PiGains, RegulatorState, ideal_closed_loop,
                      regulator_step, tune_bandwidth)
from .estimation import (GAIN_PULSATION_SCALE, ErrorDecomposition, PredictedLine,
                         error_constants, estimate_dq_analytic, estimate_dq_oracle, m_theta,
                         predicted_orders, resolve_gain_scale)
from .frames import (OrthogonalCurrents, PhaseCurrents, SynchronousCurrents, clarke,
                     inverse_park_abc, park, park_abc)
from .plant import (REFERENCE_MOTOR, MotorParams, PlantState, Voltages, back_emf, derivative,
                    steady_state, step, torque)
from .scenario import Scenario, ScenarioError, load_scenario, reference_scenarios
from .sensing import (CurrentErrorSpec, PositionErrorSpec, PositionHarmonic, measure_currents,
                      position_estimate)
from .simulate import DivergenceError, RunResult, run, run_closed_loop, run_open_loop
from .spectral import Spectrum, TimeSeries, harmonic_at, spectrum

__version__ = "0.1.0"
