"""Toolkit for communication and parameter estimation through two-mode-squeezing
(Unruh) channels between an inertial sender and uniformly accelerated receivers.

Submodules
----------
numerics    convergence-tested series evaluation and special functions
fock        truncated Fock-space density matrices and linear algebra
channel     construction of the transmitted field states
infotheory  entropies, Holevo/coherent information, fidelities
estimation  quantum Fisher information and the Cramer-Rao bound
optimize    parameter sweeps, capacity optimization, adaptive truncation
cli         batch command-line front end
report      figure rendering for the reproduction sweeps
"""

from . import numerics, fock, channel, infotheory, estimation, optimize

__all__ = ["numerics", "fock", "channel", "infotheory", "estimation", "optimize"]

__version__ = "0.1.0"
