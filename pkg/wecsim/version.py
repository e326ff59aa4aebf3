"""Version information for wecsim."""

__version__ = "0.3.0"
