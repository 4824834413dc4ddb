"""Command-line front end for the lattice library."""
