"""Social influence analysis of HPC job-submission traces."""

from ._core import (
    ConfigError,
    ContractError,
    Error,
    JobStream,
    OnlineState,
    SynthConfig,
    Thresholds,
    TraceError,
    __version__,
    compute_sim,
    compute_sim_naive,
    convergence_run,
    cosine_similarity,
    dominant_users,
    extract_followers,
    fit_power_law,
    fit_power_law_points,
    follower_counts,
    follower_distribution,
    fraction_within,
    generate,
    interarrival_cdf,
    min_gaps,
    normalize,
    parse_delimited,
    parse_swf,
    replay,
    run_cli,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
