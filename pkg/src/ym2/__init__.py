"""Desk-scale toolkit for two-dimensional Yang-Mills theory with U(N)/SU(N).

Exact character-expansion evaluation of partition functions, large-N
asymptotics, random-partition couplings, torus-covering combinatorics, and
Monte Carlo cross-validation of the lattice measure on combinatorial maps.
"""

from .partitions import Partition, QUniformSampler, enumerate_partitions
from .qseries import TruncatedValue, euler_phi, theta, theta_qdq, witten_zeta_su
from .reps import (
    HighestWeight,
    WeightTriple,
    casimir_from_triple,
    casimir_su,
    casimir_u,
    enumerate_highest_weights,
    partition_to_weight,
    schur_eval,
    triple_to_weight,
    weight_to_partition,
    weight_to_triple,
    weyl_dimension,
)
from .maps import (
    CombinatorialMap,
    MapError,
    build_map,
    fundamental_map,
    holonomy,
    reduce_word,
    remove_edge,
)
from .groups import SU2, U1, SU2Element, U1Element, SlowConvergenceError
from .hurwitz import (
    count_by_monodromy,
    covering_mass,
    euler_characteristic_of_covering,
    hurwitz_count,
    hurwitz_series,
)
from .partition_function import (
    GaussianHWMeasure,
    MigdalResult,
    NonConvergenceError,
    coupling_expectation,
    gaussian_expectation,
    limit_high_genus,
    limit_torus,
    log_energy_functional,
    migdal_z,
    sphere_free_energy,
    sphere_rewrite_check,
    torus_expansion,
)
from .montecarlo import McEstimate, estimate_wilson, estimate_z, verify_character_identities

__version__ = "0.1.0"
