"""Exact computations with real forms of tori, Cayley transforms and packet index sets."""

from .exact_lattice import FinAbGroup, RationalLattice, RationalVector
from .packet_param import DualParameter, compare_packets
from .root_datum import BasedRootDatum, InvolutionState
from .torus_forms import TorusWithInvolution

__all__ = [
    "BasedRootDatum",
    "DualParameter",
    "FinAbGroup",
    "InvolutionState",
    "RationalLattice",
    "RationalVector",
    "TorusWithInvolution",
    "compare_packets",
]
__version__ = "0.1.0"
