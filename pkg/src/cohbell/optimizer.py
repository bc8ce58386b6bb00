"""Derivative-free search over local measurement bases.

Each of the four settings is parameterized by a Bloch pair ``(theta, phi)``,
so a quartet is a point in R^8.  Column phases of a basis do not change any
functional, which is why two angles per setting suffice.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from . import kernels
from .bell import BOUND_CHSH, BOUND_L1, BOUND_REL_ENT, quartet_from_bloch
from .errors import InvalidDimension, InvalidParameter
from .linalg import von_neumann_entropy
from .states import QState, product, qubit_from_bloch

TWO_PI = 2.0 * math.pi

NM_EDGE = 0.3
NM_XATOL = 1e-9
NM_MAXFEV = 2000
DEFAULT_RESTARTS = 64


class Functional(enum.Enum):
    L1 = 0
    REL_ENT = 1
    CHSH = 2

    @classmethod
    def parse(cls, name) -> "Functional":
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("_", "-")
        aliases = {"l1": cls.L1, "rel-ent": cls.REL_ENT, "relent": cls.REL_ENT, "chsh": cls.CHSH}
        if key not in aliases:
            raise InvalidParameter(f"unknown functional {name!r}")
        return aliases[key]

    @property
    def product_bound(self) -> float:
        return {Functional.L1: BOUND_L1, Functional.REL_ENT: BOUND_REL_ENT, Functional.CHSH: BOUND_CHSH}[self]


@dataclass(frozen=True)
class BasisParams:
    """Eight Bloch angles ``(theta, phi)`` for Q, R, S, T, inside the box."""

    values: tuple

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        if len(v) != 8:
            raise InvalidParameter("BasisParams needs 8 angles")
        for k in range(4):
            th, ph = v[2 * k], v[2 * k + 1]
            if not (0.0 <= th <= math.pi and 0.0 <= ph < TWO_PI):
                raise InvalidParameter(f"angles ({th}, {ph}) outside the box")
        object.__setattr__(self, "values", v)

    def array(self) -> np.ndarray:
        return np.array(self.values)

    def quartet(self):
        return quartet_from_bloch(self.values)


@dataclass
class OptResult:
    best_params: BasisParams
    best_value: float
    functional: Functional
    restarts_used: int
    evaluations: int
    history: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "functional": self.functional.name,
            "best_value": self.best_value,
            "best_params": list(self.best_params.values),
            "restarts_used": self.restarts_used,
            "evaluations": self.evaluations,
        }


def canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Box representative of the basis generated by arbitrary real angles.

    The returned pair generates the same basis up to column phases.
    """
    c0, c1 = kernels.bloch_basis(theta, phi)[:, 0]
    th = 2.0 * math.atan2(abs(c1), abs(c0))
    if abs(c0) < 1e-300 or abs(c1) < 1e-300:
        ph = 0.0
    else:
        ph = (np.angle(c1) - np.angle(c0)) % TWO_PI
    if ph >= TWO_PI:
        ph = 0.0
    return min(max(th, 0.0), math.pi), float(ph)


def canonical_params(x) -> BasisParams:
    out = []
    for k in range(4):
        out.extend(canonical_angles(float(x[2 * k]), float(x[2 * k + 1])))
    return BasisParams(tuple(out))


def evaluate_params(rho: QState, params, functional) -> float:
    """Functional value at the given angles, computed from scratch."""
    functional = Functional.parse(functional)
    _check_rho(rho)
    x = params.array() if isinstance(params, BasisParams) else np.asarray(params, dtype=float)
    s_rho = von_neumann_entropy(rho.mat) if functional is Functional.REL_ENT else 0.0
    return float(kernels.objective(rho.mat, np.ascontiguousarray(x, dtype=float), functional.value, s_rho))


def _check_rho(rho: QState) -> None:
    if not isinstance(rho, QState) or rho.dim != 4:
        raise InvalidDimension("optimizer needs a two-qubit QState")


def thread_count(threads: int | None = None) -> int:
    """Worker count; ``None`` reads ``COHBELL_THREADS`` (0 or unset means all cores)."""
    if threads is None:
        raw = os.environ.get("COHBELL_THREADS", "0").strip() or "0"
        try:
            threads = int(raw)
        except ValueError:
            raise InvalidParameter(f"COHBELL_THREADS={raw!r} is not an integer") from None
    if threads < 0:
        raise InvalidParameter("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def nelder_mead(f, x0: np.ndarray, edge: float = NM_EDGE, xatol: float = NM_XATOL,
                maxfev: int = NM_MAXFEV):
    """Maximize ``f`` from ``x0``; returns scipy's result for ``-f``."""
    n = x0.size
    simplex = np.vstack([x0, x0 + edge * np.eye(n)])
    return minimize(lambda x: -f(x), x0, method="Nelder-Mead",
                    options={"initial_simplex": simplex, "xatol": xatol, "fatol": np.inf,
                             "maxfev": maxfev, "adaptive": False})


def _start_points(seed: int, restarts: int, dim: int) -> list[np.ndarray]:
    seqs = np.random.SeedSequence(seed).spawn(restarts)
    out = []
    for s in seqs:
        g = np.random.default_rng(s)
        x = np.empty(dim)
        x[0::2] = g.uniform(0.0, math.pi, dim // 2)
        x[1::2] = g.uniform(0.0, TWO_PI, dim // 2)
        out.append(x)
    return out


def _run_restarts(f, starts, threads):
    def one(x0):
        res = nelder_mead(f, x0)
        return res.x, -float(res.fun), int(res.nfev)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, starts))
    return [one(x0) for x0 in starts]


def _reduce(runs):
    """Best run; ties go to the lowest restart index."""
    best_k = 0
    for k, (_, val, _) in enumerate(runs):
        if val > runs[best_k][1]:
            best_k = k
    return best_k


def maximize(rho: QState, functional, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
             threads: int | None = 1) -> OptResult:
    """Multi-start Nelder-Mead over the eight basis angles.

    The best value found is a lower bound on the true maximum.  Output is
    identical for a fixed seed whatever the thread count.
    """
    functional = Functional.parse(functional)
    _check_rho(rho)
    if restarts < 1:
        raise InvalidParameter("restarts must be >= 1")
    s_rho = von_neumann_entropy(rho.mat) if functional is Functional.REL_ENT else 0.0
    mat = np.ascontiguousarray(rho.mat)
    mode = functional.value

    def f(x):
        return kernels.objective(mat, x, mode, s_rho)

    runs = _run_restarts(f, _start_points(seed, restarts, 8), thread_count(threads))
    k = _reduce(runs)
    params = canonical_params(runs[k][0])
    return OptResult(params, evaluate_params(rho, params, functional), functional, restarts,
                     sum(r[2] for r in runs), [r[1] for r in runs])


def grid_refine(rho: QState, functional, best: OptResult, half_width: float = 0.05,
                points_per_axis: int = 11) -> OptResult:
    """Coordinate-wise grid search in a box around ``best.best_params``.

    Each axis is scanned once over ``points_per_axis`` points (the current
    point always included) and the best point is kept before moving on, so
    the value never decreases.
    """
    functional = Functional.parse(functional)
    if half_width < 0 or points_per_axis < 1:
        raise InvalidParameter("half_width must be >= 0 and points_per_axis >= 1")
    if half_width == 0:
        return best
    x = best.best_params.array()
    val = evaluate_params(rho, x, functional)
    evals = 1
    offsets = np.linspace(-half_width, half_width, points_per_axis)
    for axis in range(8):
        for off in offsets:
            if off == 0.0:
                continue
            y = x.copy()
            y[axis] += off
            v = evaluate_params(rho, y, functional)
            evals += 1
            if v > val:
                x, val = y, v
    params = canonical_params(x)
    new_val = evaluate_params(rho, params, functional)
    if new_val < best.best_value:
        return best
    return OptResult(params, new_val, functional, best.restarts_used, best.evaluations + evals,
                     best.history)


# --------------------------------------------------------------------------- product states


def _product_from(x: np.ndarray) -> QState:
    """Product state from 6 unconstrained reals: (radius, polar, azimuth) per qubit."""
    def bloch(r, t, p):
        rad = abs(math.sin(r))
        return rad * np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])

    return product(qubit_from_bloch(bloch(*x[0:3])), qubit_from_bloch(bloch(*x[3:6])))


@dataclass
class ProductOptResult:
    best_value: float
    best_state: QState
    best_params: BasisParams
    functional: Functional
    bound: float

    @property
    def exceeds_bound(self) -> bool:
        return self.best_value > self.bound + 1e-6


def maximize_product(functional, restarts: int = 16, seed: int = 0,
                     threads: int | None = 1) -> ProductOptResult:
    """Jointly search product states and bases; should never beat the product bound."""
    functional = Functional.parse(functional)
    mode = functional.value

    def f(x):
        rho = _product_from(x[8:])
        s_rho = von_neumann_entropy(rho.mat) if mode == 1 else 0.0
        return kernels.objective(np.ascontiguousarray(rho.mat), np.ascontiguousarray(x[:8]), mode, s_rho)

    starts = []
    for x in _start_points(seed, restarts, 14):
        starts.append(x)
    runs = _run_restarts(f, starts, thread_count(threads))
    k = _reduce(runs)
    x = runs[k][0]
    rho = _product_from(x[8:])
    params = canonical_params(x[:8])
    return ProductOptResult(evaluate_params(rho, params, functional), rho, params, functional,
                            functional.product_bound)


# --------------------------------------------------------------------------- global vs local


def l1_of_vector(v: np.ndarray) -> float:
    """``C_l1`` of a pure state in the computational basis, from its amplitudes."""
    a = np.abs(v)
    return float(np.sum(a) ** 2 - np.sum(a ** 2))


def _hermitian(x: np.ndarray, n: int) -> np.ndarray:
    h = np.zeros((n, n), dtype=complex)
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    h[np.diag_indices(n)] = x[:n]
    h[iu] = x[n:n + m] + 1j * x[n + m:n + 2 * m]
    return h + np.triu(h, 1).conj().T


def global_l1(x: np.ndarray) -> float:
    u = expm(1j * _hermitian(x, 4))
    return l1_of_vector(u[:, 0])


def local_l1(x: np.ndarray) -> float:
    v1 = expm(1j * _hermitian(x[:4], 2))
    v2 = expm(1j * _hermitian(x[4:], 2))
    return l1_of_vector(np.kron(v1, v2)[:, 0])


@dataclass
class LocalGlobalReport:
    global_max: float
    local_max: float
    sampled_global: list
    all_matchable: bool

    @property
    def gap(self) -> float:
        return abs(self.local_max - self.global_max)

    def to_dict(self) -> dict:
        return {"global_max": self.global_max, "local_max": self.local_max, "gap": self.gap,
                "samples": len(self.sampled_global), "all_matchable": self.all_matchable}


def local_vs_global_coherence_check(seed: int = 0, samples: int = 200,
                                    polish: int = 8) -> LocalGlobalReport:
    """Compare ``max C_l1(U|00>)`` over global 4x4 unitaries and over ``V1 (x) V2``.

    Unitaries are ``expm(iH)``.  ``samples`` random generators are drawn for
    each class; the ``polish`` best of each are then refined by Nelder-Mead.
    Every sampled global value is checked to be reachable by a local one,
    which holds when it does not exceed the local maximum (the local values
    sweep a connected range starting at 0).
    """
    if samples < 1:
        raise InvalidParameter("samples must be >= 1")
    rng = np.random.default_rng(seed)
    gx = rng.normal(scale=2.0, size=(samples, 16))
    lx = rng.normal(scale=2.0, size=(samples, 8))
    gvals = [global_l1(x) for x in gx]
    lvals = [local_l1(x) for x in lx]

    def polish_best(f, xs, vals):
        best = max(vals)
        for k in np.argsort(vals)[::-1][:polish]:
            res = nelder_mead(f, xs[k], edge=0.3, xatol=1e-10, maxfev=8000)
            res = nelder_mead(f, res.x, edge=0.05, xatol=1e-12, maxfev=8000)
            best = max(best, -float(res.fun))
        return best

    gmax = polish_best(global_l1, gx, gvals)
    lmax = polish_best(local_l1, lx, lvals)
    matchable = all(v <= lmax + 1e-6 for v in gvals)
    return LocalGlobalReport(gmax, lmax, gvals, matchable)
