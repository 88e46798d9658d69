"""Isotropic projections, transversality certificates and Heisenberg projections."""
