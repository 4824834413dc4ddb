"""
Discrete analogues of continuous laws on the non-negative lattice.

P(s) = phi(1 - s) turns a Laplace transform into a probability generating
function; this package builds the resulting laws, extracts their pmfs
through truncated power series, samples from them and checks the
distributional identities they satisfy.
"""

__version__ = "0.1.0"
