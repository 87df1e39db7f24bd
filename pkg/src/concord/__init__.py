"""Concord - finite-time consensus simulation and analysis toolkit"""

__version__ = "0.1.0"
