"""
almansi-core - Almansi decompositions of quaternionic slice functions of several variables

Stems, slice functions, their spherical derivatives and Almansi components, polynomial closed forms,
Cauchy-Riemann-Fueter calculus and Monte Carlo mean-value and Poisson formulas.
"""

__version__ = "0.1.0"

from .logging import get_logger, setup_logging

__all__ = ['__version__', 'get_logger', 'setup_logging']
