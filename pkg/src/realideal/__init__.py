"""realideal: vanishing-ideal equality testing, CAD-based ideal repair, and
duality-gap-free SDP relaxations for polynomial optimization."""

__version__ = "0.1.0"
