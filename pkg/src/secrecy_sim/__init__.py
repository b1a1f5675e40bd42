"""Intercept-probability analysis for spectrum sharing under cooperative jamming.

Closed-form intercept probabilities for non-cooperation and for source
cooperation with random or optimal jammer selection, cross-validated by
adaptive-quadrature oracles and a reproducible Monte Carlo channel
simulator, plus an empirical secrecy-diversity estimator and a CSV
experiment harness.
"""

from .analytic import (
    InterceptValue,
    QuadratureError,
    SubsetIterator,
    intercept_noncoop,
    intercept_sc_ojs,
    intercept_sc_ojs_oracle,
    intercept_sc_rjs,
    intercept_sc_rjs_oracle,
    ojs_integral_oracle,
    phi_ojs,
    rjs_integral_oracle,
    scheme_intercept,
    varphi_rjs,
)
from .diversity import DiversityFit, fit_diversity, local_slopes
from .model import (
    NONCOOP,
    SC_OJS,
    SC_RJS,
    SCHEMES,
    PairParams,
    SnrSweep,
    SystemConfig,
    load_config,
    make_symmetric_config,
    parse_config_text,
    validate,
)
from .simulate import (
    ChannelDraw,
    InterceptEstimate,
    RngSpec,
    coupled_dominance_check,
    estimate_intercept,
    event_noncoop,
    event_sc,
    sample_draw,
    select_jammer_optimal,
    select_jammer_random,
)
from .special import E1Bounds, e1, e1_bounds, e1_scaled

__version__ = "0.1.0"
