"""Random streams and probability distributions."""
from .rng import RngStream
from .distributions import PolicyDistribution, softmax, sample_categorical, bernoulli
