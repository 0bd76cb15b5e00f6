"""Demand correspondences and equilibrium existence for two-good exchange
economies in which one agent has a non-convex preference."""

from .demand import demand, demand_numeric, demand_quadlog
from .equilibrium import (
    analyze,
    classify_bd,
    classify_quadlog,
    interior_income_limit,
    scan_generic,
    z_cor,
    z_int,
)
from .model import (
    CRRA,
    Bundle,
    CaraA,
    CaraB,
    Classification,
    DemandSet,
    EconomyAB,
    Endowment,
    LinearGood2,
    Outcome,
    PowerB,
    QuadLog,
    WeightedLog,
    validate_economy,
)
from .oracle import brute_force_equilibria, verify_equilibrium
from .special import candidate_prices, g, x_star

__version__ = "0.1.0"
