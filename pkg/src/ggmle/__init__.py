"""Maximum likelihood estimation in Gaussian graphical models."""
from ._accel import backend
from .completion import (PartialMatrix, buhl_two_sample, cycle_completable, maxdet_completion,
                         pd3_angle_test)
from .errors import (DegenerateConfiguration, DimensionMismatch, EmptyData, GGMError,
                     InsufficientSamples, InvalidIndexSet, IterationCapExceeded, NotChordal,
                     NotCompletable, NotConverged, NotPositiveDefinite, OutOfRange, TooLarge)
from .gaussian import GaussianParams, SampleStats, log_likelihood, sample, sufficient_stats
from .graphs import (CliqueDecomposition, Graph, chordal_cover, clique_decomposition,
                     is_chordal, maximal_cliques, mlt_bounds, perfect_elimination_ordering)
from .mle import (MleResult, Status, check_duality, fit, fit_chordal_closed_form,
                  fit_coordinate_k, fit_coordinate_sigma, mle_exists, mlt_monte_carlo)
from .rcon import ColoredGraph, rcon_dual_check, rcon_fit
from .select import (ci_test_full, fisher_z, glasso_fit, stepwise_select,
                     threshold_select)

__version__ = "0.1.0"
