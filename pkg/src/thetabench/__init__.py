"""ThetaBench: exact verification of theta correspondence claims for finite dual pairs."""

__version__ = "0.1.0"
