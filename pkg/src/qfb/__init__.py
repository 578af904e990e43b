"""Decision-diagram construction of quantum circuit functionality."""

from qfb.ddcore import TERMINAL, ZERO_EDGE, Edge, Node
from qfb.ddops import Package
from qfb.numerics import ComplexTable

__all__ = ["TERMINAL", "ZERO_EDGE", "ComplexTable", "Edge", "Node", "Package"]
__version__ = "0.1.0"
