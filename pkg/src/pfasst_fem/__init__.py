"""
pfasst_fem

Spectral deferred corrections and two-level PFASST for finite-element
semidiscretizations M u' = -A u + M g(u), with mass-matrix-aware sweeps,
FAS corrections and FE transfer operators, plus a convergence-study harness.
"""
