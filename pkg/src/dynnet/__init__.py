"""Bayesian dynamic latent space modeling of binary relational matrices."""

__version__ = "0.1.0"
