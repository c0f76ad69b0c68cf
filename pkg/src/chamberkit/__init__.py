"""Exact chamber geometry for weighted point configurations.

Subpackages cover exact rational linear programming, the chamber complex of
the second hypersimplex, stability of weighted configurations and the weight
domain, boundary strata censuses for the standard compactified moduli of
pointed rational curves, and strata-driven power series inversion.
"""

__version__ = "0.1.0"
