"""rrt-lab: recursive trees grown in a random environment of vertex weights.

Vertices arrive one at a time and attach to an existing vertex with
probability proportional to that vertex's weight; the weights themselves may
be random (e.g. the exponential of a random-walk path).  The package provides

* exact conditional laws given the weights (depth and outdegree pmfs,
  conditional means, characteristic functions),
* fast simulation of the growth process (numba kernels with a pure-numpy
  fallback, selected via ``RRT_LAB_BACKEND``),
* random-walk functionals (minima, ladder epochs, positivity estimation),
* closed-form limit laws and scale-constant estimation, and
* a seeded, thread-deterministic experiment harness with a CLI (``rrt-lab``).
"""

__version__ = "0.1.0"

from .conditional_laws import (Pmf, char_fn, cond_mean_depth,
                               cond_mean_outdegree, cond_mean_outdegree_many,
                               eta_sum_statistic, exact_depth_pmf,
                               exact_outdeg_pmf, texpect_statistic)
from .env import (EnvModel, Environment, WeightDist, attach_prob,
                  build_environment, self_prob_seq, zeta)
from .errors import ConfigurationError, DomainError, ResourceLimitError
from .harness import (ExperimentConfig, ResultTable, load_config,
                      run_experiment)
from .limits import (arcsine_cdf, arcsine_density, constant_weight_profile,
                     estimate_sigma_m, max_bm_cdf, max_bm_quantile,
                     max_bm_tail, outdeg_profile, sigma_m_from_zeta)
from .rng import stream
from .treegrow import (EdgeLenSpec, RecursiveTree, TreeStats,
                       depth_sample_fast, grow, outdeg_sample_fast,
                       tree_stats)
from .walk import (IncrementSpec, WalkPath, argmin_leftmost, estimate_phi,
                   estimate_rho, ladder_epochs, running_max_variants,
                   running_min, sample_path)

__all__ = [
    "__version__",
    # conditional laws
    "Pmf", "char_fn", "cond_mean_depth", "cond_mean_outdegree",
    "cond_mean_outdegree_many", "eta_sum_statistic", "exact_depth_pmf",
    "exact_outdeg_pmf", "texpect_statistic",
    # environments
    "EnvModel", "Environment", "WeightDist", "attach_prob",
    "build_environment", "self_prob_seq", "zeta",
    # errors
    "ConfigurationError", "DomainError", "ResourceLimitError",
    # harness
    "ExperimentConfig", "ResultTable", "load_config", "run_experiment",
    # limit laws
    "arcsine_cdf", "arcsine_density", "constant_weight_profile",
    "estimate_sigma_m", "max_bm_cdf", "max_bm_quantile", "max_bm_tail",
    "outdeg_profile", "sigma_m_from_zeta",
    # rng
    "stream",
    # growth
    "EdgeLenSpec", "RecursiveTree", "TreeStats", "depth_sample_fast", "grow",
    "outdeg_sample_fast", "tree_stats",
    # walks
    "IncrementSpec", "WalkPath", "argmin_leftmost", "estimate_phi",
    "estimate_rho", "ladder_epochs", "running_max_variants", "running_min",
    "sample_path",
]
