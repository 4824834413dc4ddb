"""Configuration package: environment-backed numeric defaults."""

from config.lattice_config import LatticeConfig, lattice_config  # noqa: F401
