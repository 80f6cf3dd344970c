"""Exact computations with fractional ideals of curve singularities R ⊆ k[[t]]."""
