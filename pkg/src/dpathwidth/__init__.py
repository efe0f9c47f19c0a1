"""d-pathwidth covers, two-OBDD compilation and monotone branching-program lower bounds."""

__version__ = "0.1.0"
