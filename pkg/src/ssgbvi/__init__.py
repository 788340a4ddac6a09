"""Guaranteed-precision reachability values for simple stochastic games.

Bounded value iteration with deflation of end components, its simulation-based
variant (BRTDP), the unguaranteed baselines, and an exact brute-force oracle.
"""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    MAX,
    MIN,
    Action,
    Player,
    StochasticGame,
    Strategy,
    ValidationError,
    action_value,
    make_game,
    preprocess_merge_unreachable,
    validate_game,
)
from .modelfile import ParseError, parse_model, serialize_model  # noqa: E402
from .fixtures import builtin_game  # noqa: E402
from .generator import GeneratorParams, random_game  # noqa: E402
from .graph import (  # noqa: E402
    EndComponent,
    best_exit,
    find_msec,
    is_bec,
    mec_decomposition,
    restricted_game,
    scc_decomposition,
)
from .solve import (  # noqa: E402
    Bounds,
    SolveReport,
    bellman_update,
    bvi_update,
    collapse_sec,
    deflate,
    extract_strategies,
    solve_bvi,
    solve_naive_bvi,
    solve_vi_classic,
)
from .brtdp import best_actions, simulate_path, solve_brtdp, update_along_path  # noqa: E402
from .oracle import certify_sec, check_bounds, mc_reach_prob, solve_exact  # noqa: E402
