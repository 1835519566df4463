"""Superimposed-pilot massive MIMO uplink with 1-bit receivers: simulator and closed forms."""

__version__ = "0.1.0"
