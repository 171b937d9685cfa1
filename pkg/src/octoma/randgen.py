"""Seeded random instances.

Every stream is a numpy ``PCG64`` generator seeded from ``(seed, crc32(name))``
through ``SeedSequence``, so a suite's draws depend only on the global seed and
the suite name.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

from octoma.herm2 import HermMatrix2, OctMatrix2, OctVector2
from octoma.octonion import Octonion
from octoma.poly import NVARS, Poly

DEFAULT_SEED = 0xC0FFEE


def stream(seed: int, name: str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(zlib.crc32(name.encode()),))
    return np.random.Generator(np.random.PCG64(ss))


def rational(rng: np.random.Generator, bound: int = 100) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def octonion(rng: np.random.Generator, bound: int = 20) -> Octonion:
    return Octonion([rational(rng, bound) for _ in range(8)])


def float_octonion(rng: np.random.Generator, scale: float = 1.0) -> Octonion:
    return Octonion([float(v) for v in rng.normal(0.0, scale, 8)], backend="float")


def herm(rng: np.random.Generator, bound: int = 20) -> HermMatrix2:
    return HermMatrix2(rational(rng, bound), rational(rng, bound), octonion(rng, bound))


def pd_herm(rng: np.random.Generator, bound: int = 20) -> HermMatrix2:
    """Positive definite: ``a > 0`` and ``b = (|q|^2 + s) / a`` with ``s > 0``."""
    q = octonion(rng, bound)
    a = Fraction(int(rng.integers(1, bound + 1)), int(rng.integers(1, bound + 1)))
    s = Fraction(int(rng.integers(1, bound + 1)), int(rng.integers(1, bound + 1)))
    return HermMatrix2(a, (sum(c * c for c in q.c) + s) / a, q)


def float_herm(rng: np.random.Generator, scale: float = 1.0) -> HermMatrix2:
    a, b = (float(v) for v in rng.normal(0.0, scale, 2))
    return HermMatrix2(a, b, float_octonion(rng, scale))


def float_pd_herm(rng: np.random.Generator, scale: float = 1.0) -> HermMatrix2:
    q = float_octonion(rng, scale)
    a = float(rng.uniform(0.1, 2.0)) * scale
    s = float(rng.uniform(0.05, 2.0)) * scale * scale
    return HermMatrix2(a, (sum(c * c for c in q.c) + s) / a, q)


def vector(rng: np.random.Generator, bound: int = 20) -> OctVector2:
    return OctVector2(octonion(rng, bound), octonion(rng, bound))


def nonzero_vector(rng: np.random.Generator, bound: int = 20) -> OctVector2:
    while True:
        v = vector(rng, bound)
        if not v.is_zero():
            return v


def traceless(rng: np.random.Generator, bound: int = 20) -> OctMatrix2:
    a = octonion(rng, bound)
    return OctMatrix2(a, octonion(rng, bound), octonion(rng, bound), -a)


def poly16(rng: np.random.Generator, max_degree: int = 5, max_terms: int = 40, bound: int = 100) -> Poly:
    """Random polynomial: ``<= max_terms`` monomials of degree ``<= max_degree``."""
    terms: dict[tuple, Fraction] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        m = [0] * NVARS
        for _ in range(int(rng.integers(0, max_degree + 1))):
            m[int(rng.integers(0, NVARS))] += 1
        c = rational(rng, bound)
        m = tuple(m)
        terms[m] = terms.get(m, 0) + c
    return Poly(terms)


def quadratic_form(rng: np.random.Generator, bound: int = 20) -> list[list[Fraction]]:
    B = [[Fraction(0)] * NVARS for _ in range(NVARS)]
    for i in range(NVARS):
        for j in range(i, NVARS):
            v = rational(rng, bound)
            B[i][j] = B[j][i] = v
    return B
