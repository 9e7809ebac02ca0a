from .alpha import StateSpace, alpha_hat, epsilon_density, min_max_inner
from .embedding import Embedding, embed_gram, gram_embed, gram_matrix
from .sampling import (
    SampleSet,
    grid_sample_set,
    sobol_points,
    sobol_sample_set,
    user_sample_set,
)
from .volume import exceeds_diameter, lower_bound, lower_bound_from_volume, volume

__all__ = [
    "Embedding",
    "SampleSet",
    "StateSpace",
    "alpha_hat",
    "embed_gram",
    "epsilon_density",
    "exceeds_diameter",
    "gram_embed",
    "gram_matrix",
    "grid_sample_set",
    "lower_bound",
    "lower_bound_from_volume",
    "min_max_inner",
    "sobol_points",
    "sobol_sample_set",
    "user_sample_set",
    "volume",
]
