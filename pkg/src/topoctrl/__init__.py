"""Energy-aware topology control for wireless networks with irregular path loss."""

__version__ = "0.1.0"
