"""Octonionic linear algebra, Hessian calculus, syzygies and a torus Monge-Ampere solver."""

from octoma.octonion import Octonion, E, ONE, ZERO

__all__ = ["Octonion", "E", "ONE", "ZERO"]
__version__ = "0.1.0"
