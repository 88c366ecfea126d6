"""Exact and simulated rates of profit for capital-dependent Parrondo games."""

from .cycle_walk import (
    CycleWalk,
    StationaryDist,
    pi0_example2,
    pi0_example3,
    stationary_general,
    stationary_linear_solve,
)
from .games import GameParams, build_PA, build_PB, build_W, coin_probs, mix
from .montecarlo import (
    DoubledChain,
    SimulationTrace,
    build_doubled_chain,
    simulate_mixture,
    simulate_pattern,
    slln_check,
)
from .numerics import stable_power_ratio
from .patterns import Parity, Pattern, asymptotic_pattern_check, rate_ABsB, rate_pattern
from .rates import RateReport, asymptotic_gap_check, mean_profit, rate_mixture, rate_mixture_chain, rate_mixture_rho0
from .sweep import SweepResult, argmax_gamma, argmax_s, make_table1, make_table2

__version__ = "0.1.0"
