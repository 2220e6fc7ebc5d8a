"""Parabolic cohomology of local systems on the punctured sphere."""

__version__ = "0.1.0"
