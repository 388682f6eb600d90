"""Exact fair division of frosted cookies with few cuts."""
from .adversary import random_instance, tight_instance
from .bounds import (
    bounds_table,
    guarantee_conjecture,
    guarantee_main,
    guarantee_naive,
    guarantee_no_vz,
    guarantee_pow2,
    guarantee_two,
)
from .compose import solve, solve_board, solve_pow2, solve_product
from .core import (
    Allocation,
    Board,
    Instance,
    LabeledPartition,
    build_board,
    layout,
    load_allocation,
    load_instance,
    shares,
    to_allocation,
    verify,
)
from .errors import SplitError
from .geometry import gale_points, ham_sandwich_origin, validate_gale
from .oracle import oracle_optimal, probe_conjecture
from .solver_prime import LabelingScheme, enumerate_labelings, solve_prime, solve_prime_instance
from .solver_two import solve_two, solve_two_m2

__all__ = [name for name in dir() if not name.startswith("_")]
