"""Numerical spectral laboratory for the magnetic Laplace and Steklov
operators in the exterior of the unit disk.

Layered design: a generic 1D Sturm-Liouville eigensolver (:mod:`.sturm1d`),
special functions (:mod:`.specfun`), the half-line Robin oscillator constants
(:mod:`.degennes`), the angular-momentum fibers of the exterior problem
(:mod:`.fiber`), closed-form asymptotic predictors (:mod:`.asym`), the Steklov
root-finder and verification campaigns (:mod:`.steklov`), and a CLI
(:mod:`.cli`).
"""

from . import asym, degennes, errors, fiber, specfun, steklov, sturm1d

__all__ = ["asym", "degennes", "errors", "fiber", "specfun", "steklov", "sturm1d"]
__version__ = "0.1.0"
