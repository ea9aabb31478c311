"""Deutsch's algorithm with OAM photon qubits and a four-wave-mixing U_f."""

__version__ = "0.1.0"

from .deutsch import DeutschOptions, DeutschResult, oracle_classify, run_deutsch, testing_state
from .fwm import FWMConfig, fwm_transform, signal_l
from .gates import GATE_KINDS, GateSetup, apply_gate, build_gate, truth_table, validate_setup
from .lgmode import BeamParams, GridSpec, ModeIndex, lg_amplitude, overlap, project_onto_lg, sample_field
from .oamstate import (LogicalConvention, OAMSuperposition, decode_l, encode_logical, fidelity,
                       hadamard, logical_amplitudes)
from .render import pattern_stats, render_state

__all__ = [
    "BeamParams", "DeutschOptions", "DeutschResult", "FWMConfig", "GATE_KINDS", "GateSetup",
    "GridSpec", "LogicalConvention", "ModeIndex", "OAMSuperposition", "apply_gate",
    "build_gate", "decode_l", "encode_logical", "fidelity", "fwm_transform", "hadamard",
    "lg_amplitude", "logical_amplitudes", "oracle_classify", "overlap", "pattern_stats",
    "project_onto_lg", "render_state", "run_deutsch", "sample_field", "signal_l",
    "testing_state", "truth_table", "validate_setup",
]
