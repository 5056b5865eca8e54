"""Simulation of 1-bit reconfigurable-surface beamforming with feedback-driven greedy configuration."""

from ._validation import ScenarioError
from .beamforming import (
    Codeword,
    apply_grouping,
    bias_state_listing,
    desired_factored,
    dft_codebook,
    nearest_codeword,
    optimal_continuous,
    quantize_1bit,
    quantize_1bit_optimal,
)
from .channel import (
    ChannelMatrix,
    PropagationPath,
    SubcarrierGrid,
    delay_response,
    end_to_end_gain,
    received_symbol,
    reciprocity_check,
    synthesize_channel,
)
from .config import ReflectionConfig
from .element_model import ElementResponseModel, reflection_coefficient
from .estimators import GreedyBeamformer, SteeringTransformer
from .experiments import (
    PatternResult,
    Scenario,
    brute_force_optimum,
    gain_vs_baseline,
    ideal_gain_budget,
    radiation_pattern,
    steering_codeword,
)
from .geometry import AngularPosition, RisGeometry, ula_response_y, ula_response_z, upa_response
from .greedy import FeedbackChannel, FeedbackError, GreedyTrace, greedy_beamform, track_continuously
from .scenario_file import ScenarioParseError, dump_scenario, load_scenario, parse_scenario

__version__ = "0.1.0"
