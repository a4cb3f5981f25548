"""Exact tensor calculus and curvature-hierarchy classification."""
