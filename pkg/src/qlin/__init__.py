"""Linearization toolkit for zero-one quadratic programs and protein threading."""
