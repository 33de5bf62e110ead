"""Proper elements of finite Coxeter groups.

Exact element arithmetic in the geometric representation, layered
enumeration with on-disk persistence, the properness and sphericality
predicates, permutation models for the infinite families, and Monte Carlo
estimation of the vanishing proportion of proper elements.
"""

__version__ = "0.1.0"
