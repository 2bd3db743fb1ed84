"""Spectra and eigenfunctions of harmonic oscillators with deformed commutators.

Submodules:
    qcalc       q-numbers, q-binomials, q-exponentials, q-derivative on series
    deform1d    1-D oscillator in a uniform field: parameters, hierarchy, spectrum
    bargmann    1-D eigenvectors in the q-deformed Bargmann representation
    fockoracle  brute-force truncated q-boson diagonalization
    radial      D-dimensional oscillator with minimal length (radial problem)
    harness     drivers that turn library calls into result records
    cli         command line driver
"""

from .errors import BranchError, ConvergenceError, DomainError, TruncationWarning

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "ConvergenceError",
    "DomainError",
    "TruncationWarning",
    "__version__",
]
