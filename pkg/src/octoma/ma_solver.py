"""Newton solver for ``det(G0 + Hess_O phi) = e^f det G0`` on the torus R^16 / Z^16.

Unknowns are real trigonometric polynomials on a declared subset of the 16
coordinates. Residuals are sampled on a tensor grid ``x = j/n`` that is exact
for every product appearing in the Galerkin system; the mean-zero Newton
system is assembled densely and solved with LAPACK.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from octoma.herm2 import HermMatrix2, NotPositiveDefinite
from octoma.octonion import Octonion, conj, mul
from octoma.poly import NVARS, VAR_NAMES

TWO_PI = 2.0 * math.pi


class SingularNewtonSystem(ArithmeticError):
    def __init__(self, msg: str, condition: float):
        super().__init__(f"{msg} (condition estimate {condition:.3e})")
        self.condition = condition


class MaxIterations(RuntimeError):
    pass


class NewtonStalled(MaxIterations):
    """Damping exhausted without reducing the residual."""


# --- trigonometric polynomials -------------------------------------------

Freq = tuple  # 16 ints


def _canonical(k: Sequence[int]) -> tuple[Freq, int]:
    """Representative of ``{k, -k}`` (first nonzero entry positive) and the sign used."""
    k = tuple(int(v) for v in k)
    if len(k) != NVARS:
        raise ValueError(f"frequency vectors have {NVARS} entries")
    for v in k:
        if v:
            return (k, 1) if v > 0 else (tuple(-x for x in k), -1)
    return k, 1


ZERO_FREQ: Freq = (0,) * NVARS


class TrigPoly:
    """``sum c_k cos(2 pi k.x) + s_k sin(2 pi k.x)`` over one representative per ``+-k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Sequence[int], tuple[float, float]] | None = None):
        out: dict[Freq, list[float]] = {}
        for k, (c, s) in (coeffs or {}).items():
            rep, sign = _canonical(k)
            slot = out.setdefault(rep, [0.0, 0.0])
            slot[0] += float(c)
            if rep != ZERO_FREQ:
                slot[1] += sign * float(s)
            elif s:
                raise ValueError("the zero frequency has no sine slot")
        self.coeffs = {k: (v[0], v[1]) for k, v in out.items() if v[0] or v[1]}

    @classmethod
    def constant(cls, c: float) -> "TrigPoly":
        return cls({ZERO_FREQ: (c, 0.0)})

    @classmethod
    def mode(cls, k: Sequence[int], cos: float = 0.0, sin: float = 0.0) -> "TrigPoly":
        return cls({tuple(k): (cos, sin)})

    @classmethod
    def cos_along(cls, amplitude: float, **coords: int) -> "TrigPoly":
        """``amplitude * cos(2 pi sum k_v x_v)`` with keyword coordinates such as ``x1_0=1``."""
        k = [0] * NVARS
        for name, v in coords.items():
            k[VAR_NAMES.index(name)] = v
        return cls.mode(k, cos=amplitude)

    @property
    def mean(self) -> float:
        return self.coeffs.get(ZERO_FREQ, (0.0, 0.0))[0]

    def max_freq(self) -> int:
        return max((max(abs(v) for v in k) for k in self.coeffs), default=0)

    def support(self) -> set[int]:
        return {i for k in self.coeffs for i, v in enumerate(k) if v}

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        d = dict(self.coeffs)
        for k, (c, s) in other.coeffs.items():
            c0, s0 = d.get(k, (0.0, 0.0))
            d[k] = (c0 + c, s0 + s)
        return TrigPoly(d)

    def __neg__(self) -> "TrigPoly":
        return self.scale(-1.0)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def scale(self, t: float) -> "TrigPoly":
        return TrigPoly({k: (t * c, t * s) for k, (c, s) in self.coeffs.items()})

    def _complex(self) -> dict[Freq, complex]:
        z: dict[Freq, complex] = {}
        for k, (c, s) in self.coeffs.items():
            if k == ZERO_FREQ:
                z[k] = z.get(k, 0) + c
                continue
            nk = tuple(-v for v in k)
            z[k] = z.get(k, 0) + complex(c, -s) / 2
            z[nk] = z.get(nk, 0) + complex(c, s) / 2
        return z

    @classmethod
    def _from_complex(cls, z: Mapping[Freq, complex]) -> "TrigPoly":
        out = {}
        for k, v in z.items():
            rep, sign = _canonical(k)
            if sign < 0:
                continue
            if rep == ZERO_FREQ:
                out[rep] = (v.real, 0.0)
            else:
                out[rep] = (2 * v.real, -2 * v.imag)
        return cls(out)

    def __mul__(self, other: "TrigPoly") -> "TrigPoly":
        za, zb = self._complex(), other._complex()
        out: dict[Freq, complex] = {}
        for ka, va in za.items():
            for kb, vb in zb.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return TrigPoly._from_complex(out)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values at an ``(N, 16)`` array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0])
        for k, (c, s) in self.coeffs.items():
            ph = TWO_PI * (pts @ np.asarray(k, dtype=float))
            if c:
                out += c * np.cos(ph)
            if s:
                out += s * np.sin(ph)
        return out

    def to_json(self) -> list[dict]:
        return [{"k": list(k), "cos": c, "sin": s} for k, (c, s) in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, items: Iterable[Mapping]) -> "TrigPoly":
        d: dict[Freq, tuple[float, float]] = {}
        for it in items:
            k = tuple(it["k"])
            c0, s0 = d.get(k, (0.0, 0.0))
            d[k] = (c0 + float(it.get("cos", 0.0)), s0 + float(it.get("sin", 0.0)))
        return cls(d)

    def __eq__(self, other) -> bool:
        return isinstance(other, TrigPoly) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"TrigPoly({len(self.coeffs)} modes)"


# --- Hessians of Fourier modes --------------------------------------------

def _block_octonion(k: Freq, i: int) -> Octonion:
    off = 8 * (i - 1)
    return Octonion([float(v) for v in k[off:off + 8]], backend="float")


def mode_hessian(k: Freq) -> tuple[float, float, np.ndarray]:
    """``Hess_O`` of ``exp(2 pi i k.x)`` divided by ``-4 pi^2`` times the mode.

    With ``kappa_i = sum_p k_i^p e_p`` this is ``[[|kappa_1|^2, kappa_1 conj(kappa_2)], [., |kappa_2|^2]]``.
    """
    k1, k2 = _block_octonion(k, 1), _block_octonion(k, 2)
    q = mul(k1, conj(k2))
    return (sum(v * v for v in k1.c), sum(v * v for v in k2.c), np.array(q.c, dtype=float))


@dataclass(frozen=True)
class HermTrig:
    """Hermitian matrix whose entries are trigonometric polynomials."""

    a: TrigPoly
    b: TrigPoly
    q: tuple  # 8 TrigPoly

    def evaluate(self, points: np.ndarray) -> "NodalHerm":
        return NodalHerm(self.a.evaluate(points), self.b.evaluate(points),
                         np.stack([p.evaluate(points) for p in self.q], axis=1))


def hess_trig(phi: TrigPoly) -> HermTrig:
    """Entrywise ``sum_pq e_p d^2 phi / dx_i^p dx_j^q conj(e_q)``; each mode keeps its frequency."""
    scale = -TWO_PI ** 2
    a: dict = {}
    b: dict = {}
    q: list[dict] = [dict() for _ in range(8)]
    for k, (c, s) in phi.coeffs.items():
        ha, hb, hq = mode_hessian(k)
        if ha:
            a[k] = (scale * ha * c, scale * ha * s)
        if hb:
            b[k] = (scale * hb * c, scale * hb * s)
        for r in range(8):
            if hq[r]:
                q[r][k] = (scale * hq[r] * c, scale * hq[r] * s)
    return HermTrig(TrigPoly(a), TrigPoly(b), tuple(TrigPoly(d) for d in q))


# --- nodal Hermitian fields -----------------------------------------------

@dataclass
class NodalHerm:
    a: np.ndarray
    b: np.ndarray
    q: np.ndarray  # (N, 8)

    def __add__(self, other: "NodalHerm") -> "NodalHerm":
        return NodalHerm(self.a + other.a, self.b + other.b, self.q + other.q)

    def det(self) -> np.ndarray:
        return self.a * self.b - np.einsum("nr,nr->n", self.q, self.q)

    def mixed(self, other: "NodalHerm") -> np.ndarray:
        return 0.5 * (self.a * other.b + self.b * other.a) - np.einsum("nr,nr->n", self.q, other.q)

    def margin(self) -> np.ndarray:
        """Sylvester pivots ``min(a, det/a)`` (``a`` itself where ``a <= 0``)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            piv = np.where(self.a > 0, self.det() / np.where(self.a > 0, self.a, 1.0), self.a)
        return np.minimum(self.a, piv)

    def at(self, i: int) -> HermMatrix2:
        return HermMatrix2(float(self.a[i]), float(self.b[i]),
                           Octonion([float(v) for v in self.q[i]], backend="float"))


def _const_nodal(A: HermMatrix2, n: int) -> NodalHerm:
    A = A.to_float() if not A.is_float else A
    return NodalHerm(np.full(n, A.a), np.full(n, A.b), np.tile(np.array(A.q.c, dtype=float), (n, 1)))


@dataclass(frozen=True)
class TorusHermField:
    """``G0 = constant + Hess_O(potential)``, so the field is locally a Hessian by construction."""

    constant: HermMatrix2
    potential: TrigPoly = field(default_factory=TrigPoly)

    @classmethod
    def identity(cls) -> "TorusHermField":
        return cls(HermMatrix2.identity(backend="float"))

    def evaluate(self, points: np.ndarray) -> NodalHerm:
        pts = np.atleast_2d(points)
        out = _const_nodal(self.constant, pts.shape[0])
        if self.potential.coeffs:
            out = out + hess_trig(self.potential).evaluate(pts)
        return out

    def max_freq(self) -> int:
        return self.potential.max_freq()

    def support(self) -> set[int]:
        return self.potential.support()


# --- quadrature -----------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Tensor grid ``x_c = j/n`` on the active coordinates, zero elsewhere."""

    active: tuple
    n: int

    def __post_init__(self):
        if not self.active:
            raise ValueError("need at least one active coordinate")
        if self.n < 1:
            raise ValueError("need at least one node per dimension")

    @property
    def size(self) -> int:
        return self.n ** len(self.active)

    def points(self) -> np.ndarray:
        pts = np.zeros((self.size, NVARS))
        ticks = np.arange(self.n) / self.n
        for row, idx in enumerate(itertools.product(range(self.n), repeat=len(self.active))):
            for c, j in zip(self.active, idx):
                pts[row, c] = ticks[j]
        return pts

    def integrate(self, values: np.ndarray) -> float:
        """Mean over the nodes (the torus has unit volume); pairwise summation via numpy."""
        return float(np.sum(values) / self.size)


def _exact_grid(factors: Sequence, extra_coords: Iterable[int] = ()) -> Grid:
    coords = set(extra_coords)
    for f in factors:
        coords |= f.support()
    if not coords:
        coords = {0}
    band = sum(f.max_freq() for f in factors)
    return Grid(tuple(sorted(coords)), band + 1)


def integrate_torus(*factors) -> float:
    """``int prod f_i dx`` on a grid exact for the product's bandwidth."""
    if not factors:
        return 1.0
    g = _exact_grid(factors)
    pts = g.points()
    vals = np.ones(g.size)
    for f in factors:
        vals = vals * f.evaluate(pts)
    return g.integrate(vals)


def integrate_torus_fourier(*factors: TrigPoly) -> float:
    """The same integral as the constant Fourier coefficient of the expanded product."""
    prod = TrigPoly.constant(1.0)
    for f in factors:
        prod = prod * f
    return prod.mean


# --- configuration and reports --------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    active: tuple
    max_freq: int
    tol: float = 1e-10
    max_iter: int = 30
    max_halvings: int = 20
    nodes: int | None = None
    delta: float = 1e-8
    continuation: int = 1
    frequencies: tuple | None = None  # explicit list overrides the box

    def __post_init__(self):
        act = tuple(sorted(set(int(c) for c in self.active)))
        if not act or any(c < 0 or c >= NVARS for c in act):
            raise ValueError("active coordinates must be a nonempty subset of 0..15")
        object.__setattr__(self, "active", act)
        if self.max_freq < 1 and not self.frequencies:
            raise ValueError("frequency set is empty")
        if self.continuation < 1:
            raise ValueError("continuation needs at least one step")

    def modes(self) -> list[Freq]:
        """Nonzero representatives of the active frequency set."""
        if self.frequencies:
            reps = {_canonical(k)[0] for k in self.frequencies}
        else:
            reps = set()
            for vals in itertools.product(range(-self.max_freq, self.max_freq + 1), repeat=len(self.active)):
                k = [0] * NVARS
                for c, v in zip(self.active, vals):
                    k[c] = v
                reps.add(_canonical(k)[0])
        reps.discard(ZERO_FREQ)
        for k in reps:
            if any(v and i not in self.active for i, v in enumerate(k)):
                raise ValueError("frequency uses an inactive coordinate")
        if not reps:
            raise ValueError("frequency set is empty")
        return sorted(reps)

    def band(self) -> int:
        return max(max(abs(v) for v in k) for k in self.modes())

    def grid(self, g0: TorusHermField) -> Grid:
        if not g0.support() <= set(self.active):
            raise ValueError("G0 potential depends on inactive coordinates")
        K, Kg = self.band(), g0.max_freq()
        n = self.nodes or max(2 * K + 3, K + 2 * max(K, Kg) + 1)
        return Grid(self.active, n)


@dataclass
class SolveReport:
    solution: TrigPoly
    residual_sup: float
    nodal_residual_sup: float
    iterations: int
    normalization_constant: float
    sup_laplacian: float
    min_margin: float
    wall_time: float
    history: list = field(default_factory=list)
    projection_residual: float = 0.0
    normalization_integral: float = 0.0
    max_condition: float = 0.0
    galerkin_asymmetry: float = 0.0
    nodes: int = 0

    def to_json(self) -> dict:
        return {
            "solution": self.solution.to_json(),
            "residual_sup": self.residual_sup,
            "nodal_residual_sup": self.nodal_residual_sup,
            "iterations": self.iterations,
            "normalization_constant": self.normalization_constant,
            "sup_laplacian": self.sup_laplacian,
            "min_margin": self.min_margin,
            "history": self.history,
            "projection_residual": self.projection_residual,
            "normalization_integral": self.normalization_integral,
            "max_condition": self.max_condition,
            "galerkin_asymmetry": self.galerkin_asymmetry,
            "nodes": self.nodes,
        }


# --- discrete operators ---------------------------------------------------

class _Discretization:
    def __init__(self, config: SolverConfig, g0: TorusHermField, grid: Grid | None = None):
        self.config = config
        self.grid = grid or config.grid(g0)
        self.pts = self.grid.points()
        self.modes = config.modes()
        self.g0 = g0.evaluate(self.pts)
        self.det0 = self.g0.det()
        if np.min(self.g0.margin()) < config.delta:
            i = int(np.argmin(self.g0.margin()))
            raise NotPositiveDefinite(f"G0 is not positive definite at node {self.pts[i, list(self.grid.active)]}")
        cols, ha, hb, hq = [], [], [], []
        for k in self.modes:
            ph = TWO_PI * (self.pts @ np.asarray(k, dtype=float))
            a, b, q = mode_hessian(k)
            for vals in (np.cos(ph), np.sin(ph)):
                cols.append(vals)
                ha.append(a)
                hb.append(b)
                hq.append(q)
        self.Psi = np.stack(cols, axis=1)  # (N, M)
        s = -TWO_PI ** 2
        self.ha, self.hb, self.hq = s * np.array(ha), s * np.array(hb), s * np.array(hq)
        self.norms = np.mean(self.Psi ** 2, axis=0)

    @property
    def size(self) -> int:
        return self.Psi.shape[1]

    def hess(self, c: np.ndarray) -> NodalHerm:
        return NodalHerm(self.Psi @ (c * self.ha), self.Psi @ (c * self.hb), self.Psi @ (c[:, None] * self.hq))

    def field(self, c: np.ndarray) -> NodalHerm:
        return self.g0 + self.hess(c)

    def coefficients(self, phi: TrigPoly) -> np.ndarray:
        c = np.zeros(self.size)
        index = {k: 2 * j for j, k in enumerate(self.modes)}
        for k, (cc, ss) in phi.coeffs.items():
            if k == ZERO_FREQ:
                continue
            if k not in index:
                raise ValueError(f"mode {k} lies outside the active frequency set")
            c[index[k]], c[index[k] + 1] = cc, ss
        return c

    def trig(self, c: np.ndarray, mean: float = 0.0) -> TrigPoly:
        d = {ZERO_FREQ: (mean, 0.0)}
        for j, k in enumerate(self.modes):
            d[k] = (float(c[2 * j]), float(c[2 * j + 1]))
        return TrigPoly(d)

    def galerkin(self, U: NodalHerm) -> np.ndarray:
        """``J_ij = int psi_i 2 D(U, Hess psi_j)``."""
        W = np.outer(U.a, self.hb) + np.outer(U.b, self.ha) - 2.0 * (U.q @ self.hq.T)
        return self.Psi.T @ (W * self.Psi) / self.grid.size

    def project(self, values: np.ndarray) -> tuple[np.ndarray, float]:
        """Band coefficients and mean of the L2 projection of nodal values."""
        return self.Psi.T @ values / self.grid.size / self.norms, float(np.mean(values))

    def projected_nodal(self, values: np.ndarray) -> np.ndarray:
        c, m = self.project(values)
        return self.Psi @ c + m


def _nodal_f(f, disc: _Discretization) -> np.ndarray:
    if isinstance(f, TrigPoly):
        if not f.support() <= set(disc.grid.active):
            raise ValueError("f depends on inactive coordinates")
        return f.evaluate(disc.pts)
    arr = np.asarray(f, dtype=float)
    if arr.shape != (disc.grid.size,):
        raise ValueError(f"nodal f must have {disc.grid.size} values")
    return arr


def normalization_constant(f, g0: TorusHermField, grid: Grid | None = None, config: SolverConfig | None = None) -> float:
    """``A = int det G0 / int e^f det G0``; ``f + log A`` satisfies the normalization."""
    if grid is None:
        grid = _exact_grid([f] if isinstance(f, TrigPoly) else [], g0.support())
        grid = Grid(grid.active, max(grid.n, 2 * (f.max_freq() if isinstance(f, TrigPoly) else 0) + 2 * g0.max_freq() + 8))
    pts = grid.points()
    G = g0.evaluate(pts)
    if np.min(G.margin()) <= 0:
        raise NotPositiveDefinite("G0 is not positive definite at every node")
    fn = f.evaluate(pts) if isinstance(f, TrigPoly) else np.asarray(f, dtype=float)
    d0 = G.det()
    return grid.integrate(d0) / grid.integrate(np.exp(fn) * d0)


@dataclass
class Manufactured:
    f_nodes: np.ndarray
    f_projected: TrigPoly
    projection_residual: float
    grid: Grid


def manufacture(phi_star: TrigPoly, g0: TorusHermField, config: SolverConfig) -> Manufactured:
    """``f = log(det(G0 + Hess phi*) / det G0)`` at the nodes and its band projection."""
    disc = _Discretization(config, g0)
    c = disc.coefficients(phi_star)
    U = disc.field(c)
    marg = U.margin()
    if np.min(marg) < config.delta:
        i = int(np.argmin(marg))
        node = disc.pts[i, list(disc.grid.active)]
        raise NotPositiveDefinite(f"G0 + Hess phi* fails Sylvester at node {node.tolist()} (margin {marg[i]:.3e})")
    fn = np.log(U.det() / disc.det0)
    coef, mean = disc.project(fn)
    proj = disc.trig(coef, mean)
    resid = float(np.max(np.abs(disc.Psi @ coef + mean - fn)))
    return Manufactured(fn, proj, resid, disc.grid)


def linearized_apply(phi: TrigPoly, psi: TrigPoly, g0: TorusHermField, points: np.ndarray,
                     delta: float = 1e-8) -> np.ndarray:
    """``2 D(G0 + Hess phi, Hess psi) / det G0`` at the given points."""
    G = g0.evaluate(points)
    U = G + hess_trig(phi).evaluate(points)
    if np.min(U.margin()) < delta:
        raise NotPositiveDefinite("G0 + Hess phi is not positive definite")
    return 2.0 * U.mixed(hess_trig(psi).evaluate(points)) / G.det()


def galerkin_matrix(phi: TrigPoly, g0: TorusHermField, config: SolverConfig) -> np.ndarray:
    disc = _Discretization(config, g0)
    return disc.galerkin(disc.field(disc.coefficients(phi)))


def _laplacian_nodal(H: NodalHerm, g00: HermMatrix2) -> np.ndarray:
    """``Re tr(G00^-1 H)`` for a constant ``G00``."""
    g = g00.to_float() if not g00.is_float else g00
    d = g.a * g.b - sum(v * v for v in g.q.c)
    # G00^-1 = adj/det with adj = [[b, -q], [-conj q, a]]
    return (g.b * H.a + g.a * H.b - 2.0 * (H.q @ np.array(g.q.c, dtype=float))) / d


def newton_solve(f, g0: TorusHermField, config: SolverConfig, initial: TrigPoly | None = None) -> SolveReport:
    """Damped Newton iteration with the mean-zero Galerkin system.

    ``f`` is a :class:`TrigPoly` or an array of node values on ``config.grid(g0)``.
    Every accepted iterate keeps the Sylvester margin of ``G0 + Hess phi`` at
    least ``config.delta`` on every node and strictly lowers the merit
    ``sup |P R|``, ``P`` being the projection onto the active band (mean
    included) and ``R = det(G0 + Hess phi) - e^f det G0``.
    """
    t0 = time.perf_counter()
    disc = _Discretization(config, g0)
    f_raw = _nodal_f(f, disc)
    proj_resid = 0.0
    if not isinstance(f, TrigPoly):
        proj_resid = float(np.max(np.abs(disc.projected_nodal(f_raw) - f_raw)))
    A_total = disc.grid.integrate(disc.det0) / disc.grid.integrate(np.exp(f_raw) * disc.det0)
    c = disc.coefficients(initial) if initial is not None else np.zeros(disc.size)
    if np.min(disc.field(c).margin()) < config.delta:
        raise NotPositiveDefinite("initial guess leaves the positive cone")
    history: list[float] = []
    iterations = 0
    max_cond = 0.0
    asym = 0.0

    def merit_of(cv: np.ndarray, fn: np.ndarray) -> tuple[float, np.ndarray, NodalHerm]:
        U = disc.field(cv)
        R = U.det() - np.exp(fn) * disc.det0
        return float(np.max(np.abs(disc.projected_nodal(R)))), R, U

    steps = config.continuation
    for stage in range(1, steps + 1):
        fs = f_raw * (stage / steps)
        fs = fs + math.log(disc.grid.integrate(disc.det0) / disc.grid.integrate(np.exp(fs) * disc.det0))
        merit, R, U = merit_of(c, fs)
        history.append(merit)
        while merit >= config.tol:
            if iterations >= config.max_iter:
                raise MaxIterations(f"no convergence after {iterations} iterations (residual {merit:.3e})")
            iterations += 1
            J = disc.galerkin(U)
            asym = max(asym, float(np.max(np.abs(J - J.T)) / max(np.max(np.abs(J)), 1e-300)))
            r = disc.Psi.T @ R / disc.grid.size
            cond = float(np.linalg.cond(J))
            max_cond = max(max_cond, cond)
            if not np.isfinite(cond) or cond > 1e13:
                raise SingularNewtonSystem("Galerkin matrix is singular", cond)
            step = np.linalg.solve(J, -r)
            t = 1.0
            for _ in range(config.max_halvings + 1):
                trial = c + t * step
                m_new, R_new, U_new = merit_of(trial, fs)
                if np.min(U_new.margin()) >= config.delta and m_new < merit:
                    break
                t *= 0.5
            else:
                if np.min(disc.field(c + 2 * t * step).margin()) < config.delta:
                    raise NotPositiveDefinite("every damped step leaves the positive cone")
                raise NewtonStalled(f"damping exhausted at residual {merit:.3e}")
            c, merit, R, U = trial, m_new, R_new, U_new
            history.append(merit)
    # mean normalization: int phi det G0 = 0
    phi_nc = disc.Psi @ c
    mean = -disc.grid.integrate(phi_nc * disc.det0) / disc.grid.integrate(disc.det0)
    sol = disc.trig(c, mean)
    nodal = float(np.max(np.abs(U.det() / disc.det0 - np.exp(f_raw + math.log(A_total)))))
    lap = _laplacian_nodal(disc.hess(c), g0.constant)
    return SolveReport(
        solution=sol,
        residual_sup=merit,
        nodal_residual_sup=nodal,
        iterations=iterations,
        normalization_constant=float(A_total),
        sup_laplacian=float(np.max(np.abs(lap))),
        min_margin=float(np.min(U.margin())),
        wall_time=time.perf_counter() - t0,
        history=history,
        projection_residual=proj_resid,
        normalization_integral=disc.grid.integrate((phi_nc + mean) * disc.det0),
        max_condition=max_cond,
        galerkin_asymmetry=asym,
        nodes=disc.grid.size,
    )


def sup_difference(p: TrigPoly, q: TrigPoly, n: int | None = None) -> float:
    """Sup of ``|p - q|`` on a grid fine enough to resolve both (an upper bound is the l1 norm)."""
    d = p - q
    g = _exact_grid([d])
    g = Grid(g.active, n or 4 * d.max_freq() + 8)
    return float(np.max(np.abs(d.evaluate(g.points())))) if d.coeffs else 0.0


# --- integration by parts and diagnostics ---------------------------------

def ibp_defect(f: TrigPoly, v: TrigPoly, g0: TorusHermField) -> tuple[float, float, float]:
    """``(int f D(Hess v, G0), int v D(Hess f, G0), relative difference)``."""
    g = _exact_grid([f, v, g0.potential])
    g = Grid(g.active, f.max_freq() + v.max_freq() + 2 * g0.max_freq() + 1)
    pts = g.points()
    G = g0.evaluate(pts)
    lhs = g.integrate(f.evaluate(pts) * hess_trig(v).evaluate(pts).mixed(G))
    rhs = g.integrate(v.evaluate(pts) * hess_trig(f).evaluate(pts).mixed(G))
    scale = max(abs(lhs), abs(rhs), 1.0)
    return lhs, rhs, abs(lhs - rhs) / scale


@dataclass
class Diagnostics:
    sup_phi: float
    sup_laplacian: float
    min_margin: float


def diagnostics(phi: TrigPoly, g0: TorusHermField, g00: HermMatrix2, n: int | None = None) -> Diagnostics:
    """Observed ``sup|phi|``, ``sup|Delta phi|`` with ``Delta = tr(G00^-1 Hess)``, and the margin."""
    coords = phi.support() | g0.support() or {0}
    K = max(phi.max_freq(), g0.max_freq(), 1)
    g = Grid(tuple(sorted(coords)), n or 8 * K + 8)
    pts = g.points()
    H = hess_trig(phi).evaluate(pts)
    U = g0.evaluate(pts) + H
    return Diagnostics(float(np.max(np.abs(phi.evaluate(pts)))),
                       float(np.max(np.abs(_laplacian_nodal(H, g00)))),
                       float(np.min(U.margin())))


# --- JSON configuration ---------------------------------------------------

def _herm_from_json(obj) -> HermMatrix2:
    from octoma.herm2 import parse_herm

    if isinstance(obj, str):
        return parse_herm(obj).to_float()
    if isinstance(obj, Mapping):
        q = obj.get("q", [0.0] * 8)
        return HermMatrix2(float(obj["a"]), float(obj["b"]), Octonion([float(v) for v in q], backend="float"))
    raise ValueError("G0 constant must be a matrix string or an {a, b, q} object")


def _coord_index(name) -> int:
    if isinstance(name, int):
        return name
    try:
        return VAR_NAMES.index(name)
    except ValueError:
        raise ValueError(f"unknown coordinate {name!r}") from None


@dataclass
class Problem:
    config: SolverConfig
    g0: TorusHermField
    f: object = None  # TrigPoly, nodal array or None
    phi_star: TrigPoly | None = None
    phi: TrigPoly | None = None
    initial: TrigPoly | None = None


def problem_from_json(doc: Mapping, base_dir: str = ".") -> Problem:
    import os

    active = [_coord_index(c) for c in doc["active_coords"]]
    damping = doc.get("damping", {})
    cont = doc.get("continuation", 1)
    if isinstance(cont, Mapping):
        cont = cont.get("steps", 1)
    cfg = SolverConfig(
        active=tuple(active),
        max_freq=int(doc.get("max_freq", 3)),
        tol=float(doc.get("tol", 1e-10)),
        max_iter=int(doc.get("max_iter", 30)),
        max_halvings=int(damping.get("max_halvings", 20)) if isinstance(damping, Mapping) else int(damping),
        nodes=doc.get("nodes"),
        delta=float(doc.get("delta", 1e-8)),
        continuation=int(cont),
    )
    g0doc = doc.get("g0", {})
    const = _herm_from_json(g0doc["constant"]) if "constant" in g0doc else HermMatrix2.identity(backend="float")
    pot = TrigPoly.from_json(g0doc["potential"]) if g0doc.get("potential") else TrigPoly()
    g0 = TorusHermField(const, pot)
    f = None
    fdoc = doc.get("f")
    if isinstance(fdoc, Mapping):
        if "trigpoly" in fdoc:
            f = TrigPoly.from_json(fdoc["trigpoly"])
        elif "nodal_file" in fdoc:
            path = os.path.join(base_dir, fdoc["nodal_file"])
            with open(path) as fh:
                f = np.array(json.load(fh), dtype=float)
        else:
            raise ValueError("f needs a 'trigpoly' or 'nodal_file' entry")
    elif isinstance(fdoc, list):
        f = TrigPoly.from_json(fdoc)
    star = TrigPoly.from_json(doc["phi_star"]) if "phi_star" in doc else None
    phi = TrigPoly.from_json(doc["phi"]) if "phi" in doc else None
    init = TrigPoly.from_json(doc["initial"]) if "initial" in doc else None
    return Problem(cfg, g0, f, star, phi, init)
