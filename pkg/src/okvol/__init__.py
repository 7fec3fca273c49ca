"""Okounkov cones, volume functions of linear series, and log-concave realisations."""

__version__ = "0.1.0"
