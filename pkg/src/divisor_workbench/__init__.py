"""Exact intersection theory on rational surfaces and twistor-type threefolds.

Submodules:
    exact       integer and rational linear algebra
    lattice     divisor classes, Gram matrices, relations, conjugation
    surface     surface models, Riemann-Roch, Zariski decomposition
    threefold   twistor cohomology rings and blowups along curves
    cohomledger cohomology dimension bookkeeping
    workbench   scenario files, the built-in battery, reports and CLI
"""

__version__ = "0.1.0"
