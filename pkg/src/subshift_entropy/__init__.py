"""Certified topological entropy of one-dimensional decidable subshifts."""
