"""Exact integer kernels: polynomials, normal forms, lattice reduction, p-adic numbers."""
