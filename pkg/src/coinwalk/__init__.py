"""Discrete-time quantum walks on the line under a coin flip channel.

At decoherence probability p = 1/2 with flip phase phi3 = phi1 the position
distribution of the walk is exactly the binomial law of a fair classical
walk at every step. The package computes that walk by exact density-matrix
evolution, momentum-space superoperators and pure-state trajectories, and
cross-checks them against closed forms.
"""

from .analytic import (
    Statistic,
    binomial_distribution,
    binomial_pmf,
    nonlocal_distribution,
    nonlocal_pmf,
    quadrature_pmf,
    stats,
    tv_distance,
)
from .coinspace import (
    ChannelParams,
    CoinParams,
    KrausPair,
    PauliVec,
    apply_channel,
    coin_state,
    make_coin,
    make_flip_coin,
    make_kraus,
    pauli_decompose,
    pauli_expand,
    pauli_reconstruct,
)
from .distribution import AmplitudeList, Distribution
from .errors import (
    CoinwalkError,
    InvalidStateError,
    InvariantError,
    NormalizationError,
    RegimeError,
    UnsupportedError,
)
from .lattice_walk import (
    WalkDensity,
    evolve,
    init_local,
    init_nonlocal,
    position_coherence,
    position_marginal,
    step,
)
from .montecarlo import McConfig, McResult, classical_rw_mc, run_mc, sample_trajectory
from .superop import (
    SuperopMatrix,
    build_superop_direct,
    build_superop_general,
    build_superop_simplified,
    reconstruct_evolved,
    superop_power_closed,
    superop_trace,
)

__version__ = "0.1.0"
