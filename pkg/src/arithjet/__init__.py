"""Exact-arithmetic toolkit for p-adic Witt vectors, delta-polynomial jets
and elliptic-curve delta-characters."""

from .padic import PadicInt, PrimeCfg, hensel_root

__all__ = ["PadicInt", "PrimeCfg", "hensel_root"]

__version__ = "0.1.0"
