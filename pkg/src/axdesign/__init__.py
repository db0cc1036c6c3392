"""Coupling analysis and information-content calculation for engineering
designs: classify design matrices (uncoupled / decoupled / coupled /
degenerate), measure how improbable it is that a realized design satisfies
its requirements (in bits), and propagate design-parameter uncertainty
forward through linear, black-box, or simulated process models.
"""

from .coupling import (Classification, Coupled, Decoupled, Degenerate,
                       DegenerateReason, DesignMatrix, Uncoupled,
                       affected_frs, binarize, classify, sequence)
from .distributions import (Empirical, Normal, Pdf, RngState, Triangular,
                            Uniform, draw_from, from_samples,
                            interval_probability, sample, sample_n)
from .errors import SimulationDivergence, SpecFormatError
from .info import (InfoResult, McConfig, McStats, Method, SystemInfoReport,
                   bits_from_probability, conditional_chain_information,
                   fr_information, system_information_from_samples,
                   system_information_independent, system_information_joint)
from .model import (DesignParameter, DesignRange, DesignSpec,
                    FunctionalRequirement, parse_spec, range_bounds,
                    render_spec, validate_spec)
from .propagation import (BlackBoxModel, LinearModel, SampleSet,
                          ScenarioModel, estimate_design_matrix, propagate,
                          simulate_tank)
from .report import (classification_doc, info_doc, render_json, render_text,
                     spec_echo)
from .tank import TankConfig, tank_response

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # distributions
    "Pdf", "Uniform", "Normal", "Triangular", "Empirical", "RngState",
    "from_samples", "sample", "sample_n", "draw_from", "interval_probability",
    # spec model
    "DesignRange", "FunctionalRequirement", "DesignParameter", "DesignSpec",
    "parse_spec", "render_spec", "validate_spec", "range_bounds",
    # coupling
    "DesignMatrix", "Classification", "Uncoupled", "Decoupled", "Coupled",
    "Degenerate", "DegenerateReason", "classify", "binarize", "sequence",
    "affected_frs",
    # information content
    "InfoResult", "Method", "McConfig", "McStats", "SystemInfoReport",
    "bits_from_probability", "fr_information",
    "system_information_independent", "system_information_joint",
    "system_information_from_samples", "conditional_chain_information",
    # propagation
    "SampleSet", "LinearModel", "BlackBoxModel", "ScenarioModel",
    "propagate", "estimate_design_matrix", "simulate_tank",
    "TankConfig", "tank_response",
    # reports
    "render_json", "render_text", "classification_doc", "info_doc",
    "spec_echo",
    # errors
    "SpecFormatError", "SimulationDivergence",
]
