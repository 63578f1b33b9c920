"""Conley-Zehnder indices of symplectic paths.

Two independent routes are provided:

* :func:`rs_index_blocks` adds up closed-form contributions of 2x2 blocks.
* :func:`rs_index_numeric` runs the Robbin-Salamon crossing-form algorithm on
  an arbitrary path (block or sampled) and knows nothing about blocks.

Coordinates are interleaved planes ``(x1, y1, x2, y2, ...)`` and the
symplectic form is ``omega(v, w) = v^T Omega w`` with ``Omega`` block-diagonal
in ``[[0, 1], [-1, 0]]``, so that ``Rotation(omega)`` with ``omega > 0`` turns
counterclockwise and has positive index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np
from scipy.linalg import expm, logm

from .errors import NonRegularCrossing, NotSymplectic

__all__ = [
    "PiMultiple",
    "Rotation",
    "Hyperbolic",
    "ConstantIdentity",
    "BlockPath",
    "SampledPath",
    "IndexValue",
    "ReturnMapClass",
    "parse_real",
    "standard_omega",
    "rs_index_numeric",
    "rs_index_blocks",
    "reduced_index",
    "classify_return_map",
    "is_good",
]


@dataclass(frozen=True)
class PiMultiple:
    """The real number ``coeff * pi``, kept exact."""

    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def __float__(self) -> float:
        return float(self.coeff) * math.pi

    def __str__(self) -> str:
        return f"{self.coeff}pi"


Real = Union[int, float, Fraction, PiMultiple]


def parse_real(text: str) -> Real:
    """Parse ``"4.0"``, ``"2/7"``, ``"pi"``, ``"3/2pi"`` or ``"3/2*pi"``.

    Decimal and fractional literals come back as exact ``Fraction``.
    """
    s = text.strip().replace(" ", "")
    if s.endswith("pi"):
        head = s[:-2].rstrip("*")
        if head in ("", "+"):
            head = "1"
        elif head == "-":
            head = "-1"
        return PiMultiple(Fraction(head))
    return Fraction(s)


def _is_exact(x: Real) -> bool:
    return isinstance(x, (int, Fraction))


def _turns(omega: Real, T: Real) -> Union[Fraction, float]:
    """omega*T / (2 pi), exactly when one factor is rational and the other a pi multiple."""
    if _is_exact(omega) and isinstance(T, PiMultiple):
        return Fraction(omega) * T.coeff / 2
    if isinstance(omega, PiMultiple) and _is_exact(T):
        return omega.coeff * Fraction(T) / 2
    return float(omega) * float(T) / (2 * math.pi)


# -- path representations ---------------------------------------------------


@dataclass(frozen=True)
class Rotation:
    """Planar path t -> rotation by angle omega*t."""

    omega: Real

    def __post_init__(self):
        if not float(self.omega) > 0:
            raise ValueError("rotation speed must be positive")

    def generator(self) -> np.ndarray:
        w = float(self.omega)
        return np.array([[0.0, -w], [w, 0.0]])

    def matrices(self, ts: np.ndarray) -> np.ndarray:
        th = float(self.omega) * ts
        c, s = np.cos(th), np.sin(th)
        return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


@dataclass(frozen=True)
class Hyperbolic:
    """Planar path t -> exp(t [[0, b], [a, 0]]) with a, b > 0."""

    a: Real
    b: Real

    def __post_init__(self):
        if not (float(self.a) > 0 and float(self.b) > 0):
            raise ValueError("hyperbolic parameters must be positive")

    def generator(self) -> np.ndarray:
        return np.array([[0.0, float(self.b)], [float(self.a), 0.0]])

    def matrices(self, ts: np.ndarray) -> np.ndarray:
        a, b = float(self.a), float(self.b)
        s = math.sqrt(a * b)
        ch, sh = np.cosh(s * ts), np.sinh(s * ts)
        return np.stack(
            [np.stack([ch, (b / s) * sh], -1), np.stack([(a / s) * sh, ch], -1)], -2
        )


@dataclass(frozen=True)
class ConstantIdentity:
    """The constant path at the 2x2 identity."""

    def generator(self) -> np.ndarray:
        return np.zeros((2, 2))

    def matrices(self, ts: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.eye(2), (len(ts), 2, 2)).copy()


BlockGenerator = Union[Rotation, Hyperbolic, ConstantIdentity]


@dataclass(frozen=True)
class BlockPath:
    """Direct sum of planar blocks run over ``[0, duration]``."""

    blocks: tuple
    duration: Real

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError("a block path needs at least one block")
        if float(self.duration) < 0:
            raise ValueError("duration must be non-negative")

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks)

    def __add__(self, other: "BlockPath") -> "BlockPath":
        """Direct sum of two block paths of equal duration."""
        if float(self.duration) != float(other.duration):
            raise ValueError("direct sum needs equal durations")
        return BlockPath(self.blocks + other.blocks, self.duration)

    def matrices(self, ts: Sequence[float]) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        out = np.zeros((len(ts), self.dim, self.dim))
        for i, blk in enumerate(self.blocks):
            out[:, 2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blk.matrices(ts)
        return out

    def generator(self) -> np.ndarray:
        A = np.zeros((self.dim, self.dim))
        for i, blk in enumerate(self.blocks):
            A[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blk.generator()
        return A

    def to_sampled(self, samples: int = 2049) -> "SampledPath":
        ts = np.linspace(0.0, float(self.duration), samples)
        return SampledPath(ts, self.matrices(ts))


def standard_omega(dim: int) -> np.ndarray:
    if dim % 2:
        raise ValueError("symplectic dimension must be even")
    return np.kron(np.eye(dim // 2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class SampledPath:
    """A path known only at sample times; interpolated piecewise by exponentials."""

    times: np.ndarray
    matrices: np.ndarray
    symplectic_tol: float = 1e-8

    def __post_init__(self):
        ts = np.asarray(self.times, dtype=float)
        ms = np.asarray(self.matrices, dtype=float)
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "matrices", ms)
        if ts.ndim != 1 or len(ts) < 2 or ts[0] != 0.0 or np.any(np.diff(ts) <= 0):
            raise ValueError("times must be increasing, start at 0, and have >= 2 entries")
        if ms.shape[0] != len(ts) or ms.shape[1] != ms.shape[2] or ms.shape[1] % 2:
            raise ValueError("matrices must be a stack of 2n x 2n arrays, one per time")
        Om = standard_omega(ms.shape[1])
        for k, M in enumerate(ms):
            scale = max(1.0, float(np.linalg.norm(M, 2)) ** 2)
            if np.linalg.norm(M.T @ Om @ M - Om, 2) > self.symplectic_tol * scale:
                raise NotSymplectic(f"sample {k} at t={ts[k]} is not symplectic")
        if np.linalg.norm(ms[0] - np.eye(ms.shape[1]), 2) > self.symplectic_tol:
            raise ValueError("a sampled path must start at the identity")

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def duration(self) -> float:
        return float(self.times[-1])


# -- index values -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class IndexValue:
    """An index stored as twice its value, so half-integers stay exact."""

    twice_value: int

    @classmethod
    def of(cls, value) -> "IndexValue":
        v = Fraction(value) * 2
        if v.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(v))

    @property
    def value(self) -> Union[int, Fraction]:
        if self.twice_value % 2 == 0:
            return self.twice_value // 2
        return Fraction(self.twice_value, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __add__(self, other):
        if isinstance(other, IndexValue):
            return IndexValue(self.twice_value + other.twice_value)
        if isinstance(other, int):
            return IndexValue(self.twice_value + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, IndexValue):
            return IndexValue(self.twice_value - other.twice_value)
        if isinstance(other, int):
            return IndexValue(self.twice_value - 2 * other)
        return NotImplemented

    def __int__(self) -> int:
        if not self.is_integer:
            raise ValueError(f"index {self.value} is not an integer")
        return self.twice_value // 2

    def __str__(self) -> str:
        return str(self.value)


# -- closed form --------------------------------------------------------------


def _integer_turns(t: Union[Fraction, float], tol: float) -> Union[int, None]:
    if isinstance(t, Fraction):
        return int(t) if t.denominator == 1 else None
    r = round(t)
    return int(r) if abs(t - r) < tol else None


def _rotation_twice(blk: Rotation, T: Real, tol: float) -> int:
    t = _turns(blk.omega, T)
    whole = _integer_turns(t, tol)
    if whole is not None:
        return 2 * (2 * whole)  # endpoint crossing: mu = omega T / pi
    return 2 * (2 * math.floor(t) + 1)


def rs_index_blocks(path: BlockPath, tol: float = 1e-9) -> IndexValue:
    """Closed-form index of a block path, by direct-sum additivity.

    Hyperbolic and constant blocks contribute nothing; a rotation through
    total angle ``theta`` contributes ``2*floor(theta/2pi) + 1`` off the
    eigenvalue-1 locus and ``theta/pi`` on it. ``tol`` only matters when
    ``omega*T`` cannot be decided exactly.
    """
    if float(path.duration) == 0:
        return IndexValue(0)
    twice = 0
    for blk in path.blocks:
        if isinstance(blk, Rotation):
            twice += _rotation_twice(blk, path.duration, tol)
    return IndexValue(twice)


def reduced_index(mu: IndexValue, n: int) -> IndexValue:
    if n < 2:
        raise ValueError("n must be at least 2")
    return mu + (n - 3)


# -- numeric crossing-form route ----------------------------------------------


@dataclass
class _Evaluator:
    duration: float
    dim: int
    grid_times: np.ndarray
    phi_many: Callable[[np.ndarray], np.ndarray]
    gen_at: Callable[[float], np.ndarray]
    # stack of matrices whose common kernel is the pointwise-fixed subspace
    probes: np.ndarray = field(repr=False, default=None)

    def phi(self, t: float) -> np.ndarray:
        return self.phi_many(np.array([t]))[0]


_POINTS_PER_TURN = 32


def _block_evaluator(path: BlockPath, grid: int) -> _Evaluator:
    T = float(path.duration)
    A = path.generator()
    # enough samples per revolution of the fastest rotating eigenvalue
    turns = float(np.max(np.abs(np.linalg.eigvals(A).imag), initial=0.0)) * T / (2 * math.pi)
    grid = max(grid, int(math.ceil(_POINTS_PER_TURN * turns)))
    return _Evaluator(
        duration=T,
        dim=path.dim,
        grid_times=np.linspace(0.0, T, grid + 1),
        phi_many=path.matrices,
        gen_at=lambda t: A,
        probes=A[None],
    )


def _sampled_evaluator(path: SampledPath) -> _Evaluator:
    ts, ms = path.times, path.matrices
    Om = standard_omega(path.dim)

    @lru_cache(maxsize=None)
    def generator(i: int) -> np.ndarray:
        inv = -Om @ ms[i].T @ Om  # symplectic inverse
        L = logm(ms[i + 1] @ inv)
        if np.max(np.abs(np.imag(L))) > 1e-8 * max(1.0, np.max(np.abs(L))):
            raise ValueError(
                f"samples {i} and {i + 1} are too far apart to interpolate; refine the sampling"
            )
        return np.real(L) / (ts[i + 1] - ts[i])

    def segment(t: float) -> int:
        return int(min(max(np.searchsorted(ts, t, side="right") - 1, 0), len(ts) - 2))

    def phi_many(q: np.ndarray) -> np.ndarray:
        if q is ts:
            return ms.copy()
        out = np.empty((len(q), path.dim, path.dim))
        for j, t in enumerate(q):
            i = segment(t)
            out[j] = expm((t - ts[i]) * generator(i)) @ ms[i]
        return out

    moved = ms - np.eye(path.dim)
    norms = np.maximum(1.0, np.linalg.norm(moved, axis=(1, 2)))
    return _Evaluator(
        duration=path.duration,
        dim=path.dim,
        grid_times=ts,
        phi_many=phi_many,
        gen_at=lambda t: generator(segment(t)),
        probes=moved / norms[:, None, None],
    )


def _null_basis(M: np.ndarray, rel_tol: float) -> np.ndarray:
    _, s, vt = np.linalg.svd(M)
    scale = max(1.0, s[0] if len(s) else 0.0)
    rank = int(np.sum(s > rel_tol * scale))
    return vt[rank:].T


def _components(mats: np.ndarray, gens: np.ndarray) -> list[np.ndarray]:
    """Coordinate groups that never interact: exact zeros in every sample and generator."""
    d = mats.shape[1]
    coupled = np.any(mats - np.eye(d) != 0, axis=0) | np.any(gens != 0, axis=0)
    coupled = coupled | coupled.T
    coupled[np.arange(d), np.arange(d) ^ 1] = True  # x_i and y_i share a plane
    label = list(range(d))

    def root(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i, j in zip(*np.nonzero(coupled)):
        label[root(i)] = root(j)
    groups: dict[int, list[int]] = {}
    for i in range(d):
        groups.setdefault(root(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def _moving_subspace(gens: np.ndarray, Om: np.ndarray) -> np.ndarray:
    """Basis of the symplectic complement of the subspace the path fixes pointwise.

    A vector fixed for all t is killed by every generator, and the path
    preserves the complement, so all crossings live there.
    """
    d = Om.shape[0]
    fixed = _null_basis(np.concatenate(list(gens), axis=0), 1e-10)
    if fixed.shape[1] == 0:
        return np.eye(d)
    gram = fixed.T @ Om @ fixed
    if fixed.shape[1] % 2 or np.linalg.svd(gram, compute_uv=False)[-1] < 1e-8:
        raise NonRegularCrossing("the path fixes a non-symplectic subspace pointwise")
    return _null_basis(fixed.T @ Om, 1e-10)


# Eigenvalues of a symplectic matrix pair up as (lam, 1/lam). Small ones are
# computed with absolute error ~ eps*|R| and may be garbage, but every
# eigenvalue near 1 has a partner of modulus >= 1, which is accurate.
_TRUST = 1.0 - 1e-6
_NORM_LIMIT = 1e14


def _eigvals(R: np.ndarray) -> np.ndarray:
    if R.shape[-1] != 2:
        return np.linalg.eigvals(R)
    # roots of the characteristic polynomial, much faster than LAPACK for 2x2 stacks
    half_tr = 0.5 * (R[..., 0, 0] + R[..., 1, 1])
    half_gap = 0.5 * (R[..., 0, 0] - R[..., 1, 1])
    root = np.sqrt((half_gap * half_gap + R[..., 0, 1] * R[..., 1, 0]).astype(complex))
    return np.stack([half_tr + root, half_tr - root], axis=-1)


def _distance_to_one(R: np.ndarray) -> np.ndarray:
    lam = _eigvals(R)
    gap = np.where(np.abs(lam) >= _TRUST, np.abs(lam - 1.0), np.inf)
    return np.min(gap, axis=-1)


def _det_sign(R: np.ndarray) -> np.ndarray:
    lam = _eigvals(R) - 1.0
    phases = lam / np.maximum(np.abs(lam), 1e-300)
    return np.sign(np.real(np.prod(phases, axis=-1)))


def _kernel(R: np.ndarray, tol: float) -> np.ndarray:
    lam, vec = np.linalg.eig(R)
    close = (np.abs(lam - 1.0) < tol) & (np.abs(lam) >= _TRUST)
    if not np.any(close):
        return np.zeros((R.shape[0], 0))
    V = vec[:, close]
    cand = np.concatenate([np.real(V), np.imag(V)], axis=1)
    u, s, _ = np.linalg.svd(cand, full_matrices=False)
    rank = int(np.sum(s > 1e-6 * s[0]))
    return u[:, :rank]


def _crossing_signature(K: np.ndarray, Om_r: np.ndarray, A_r: np.ndarray, t: float) -> int:
    S = Om_r @ A_r
    S = 0.5 * (S + S.T)
    Q = K.T @ S @ K
    eig = np.linalg.eigvalsh(0.5 * (Q + Q.T))
    if len(eig) == 0 or np.min(np.abs(eig)) <= 1e-8 * max(1.0, np.linalg.norm(S, 2)):
        raise NonRegularCrossing(f"degenerate crossing form at t={t:.12g}")
    return int(np.sum(eig > 0) - np.sum(eig < 0))


def _zoom_min(f_many: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray,
              xtol: float = 1e-13, points: int = 33) -> np.ndarray:
    """Minimize unimodal functions on many brackets at once by shrinking sampled grids."""
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)
    frac = np.linspace(0.0, 1.0, points)
    active = hi - lo > xtol
    while active.any():
        rows = np.flatnonzero(active)
        ts = lo[rows, None] + (hi[rows] - lo[rows])[:, None] * frac
        k = np.argmin(f_many(ts.ravel()).reshape(ts.shape), axis=1)
        r = np.arange(len(rows))
        new_lo = ts[r, np.maximum(k - 1, 0)]
        new_hi = ts[r, np.minimum(k + 1, points - 1)]
        stuck = (new_lo == lo[rows]) & (new_hi == hi[rows])
        lo[rows], hi[rows] = new_lo, new_hi
        active[rows] = ~stuck & (new_hi - new_lo > xtol)
    ts = np.stack([lo, (lo + hi) / 2, hi], axis=1)
    k = np.argmin(f_many(ts.ravel()).reshape(ts.shape), axis=1)
    return ts[np.arange(len(lo)), k]


def _component_twice(ev: _Evaluator, idx: np.ndarray, mats: np.ndarray, tol: float) -> int:
    Om = standard_omega(len(idx))
    gens = ev.probes[:, idx][:, :, idx]
    B = _moving_subspace(gens, Om)
    if B.shape[1] == 0:
        return 0
    Om_r = B.T @ Om @ B
    T = ev.duration
    sub = np.ix_(idx, idx)

    def reduced(t: float) -> np.ndarray:
        return B.T @ ev.phi(t)[sub] @ B

    def dist(t: float) -> float:
        return float(_distance_to_one(reduced(t)))

    def dist_many(q: np.ndarray) -> np.ndarray:
        return _distance_to_one(B.T @ ev.phi_many(q)[:, idx][:, :, idx] @ B)

    def gen_r(t: float) -> np.ndarray:
        return B.T @ ev.gen_at(t)[sub] @ B

    ts = ev.grid_times
    R_grid = B.T @ mats[:, idx][:, :, idx] @ B
    if np.max(np.abs(R_grid)) > _NORM_LIMIT:
        raise ValueError(
            "path entries exceed 1e14; eigenvalues near 1 cannot be resolved in double precision"
        )
    d = _distance_to_one(R_grid)
    sgn = _det_sign(R_grid)

    brackets = []
    for i in range(1, len(ts) - 1):
        if d[i] <= d[i - 1] and d[i] <= d[i + 1]:
            brackets.append((ts[i - 1], ts[i + 1]))
    # a crossing inside an edge cell is not an interior grid minimum
    brackets.append((ts[0], ts[min(2, len(ts) - 1)]))
    brackets.append((ts[max(len(ts) - 3, 0)], ts[-1]))
    for i in range(len(ts) - 1):
        if sgn[i] * sgn[i + 1] < 0:
            brackets.append((ts[max(i - 1, 0)], ts[min(i + 2, len(ts) - 1)]))

    end_eps = 1e-7 * max(1.0, T)
    at_end = dist(T) < tol
    found: list[float] = []
    if brackets:
        lo, hi = np.array(brackets).T
        cand = _zoom_min(dist_many, lo, hi)
        dc = dist_many(cand)
        for t, dt in sorted(zip(cand, dc)):
            if dt >= tol or t < end_eps or (at_end and T - t < end_eps):
                continue
            if found and abs(t - found[-1]) < 1e-9 * max(1.0, T):
                continue
            found.append(float(t))

    twice = _crossing_signature(np.eye(B.shape[1]), Om_r, gen_r(0.0), 0.0)
    if found:
        at = np.array(found)
        R_found = B.T @ ev.phi_many(at)[:, idx][:, :, idx] @ B
        for t, R, dt in zip(found, R_found, _distance_to_one(R_found)):
            K = _kernel(R, max(tol, 1e3 * dt))
            twice += 2 * _crossing_signature(K, Om_r, gen_r(t), t)
    if at_end:
        K = _kernel(reduced(T), max(tol, 1e3 * dist(T)))
        twice += _crossing_signature(K, Om_r, gen_r(T), T)
    return twice


def rs_index_numeric(
    path: Union[BlockPath, SampledPath], tol: float = 1e-9, grid: int = 2048
) -> IndexValue:
    """Robbin-Salamon index by locating crossings and summing crossing-form signatures.

    Crossings are where an eigenvalue of Phi(t) meets 1. Candidates come from
    grid minima of the distance to 1 and from sign changes of det(Phi - I);
    each is refined by an iterated grid zoom to about 1e-13 and accepted when
    the distance falls below ``tol``. The start and the end crossings carry
    weight one half. Coordinates that never interact are treated separately,
    which keeps large hyperbolic growth from polluting rotating planes.
    """
    if isinstance(path, BlockPath):
        ev = _block_evaluator(path, grid)
    elif isinstance(path, SampledPath):
        ev = _sampled_evaluator(path)
    else:
        raise TypeError(f"unsupported path type {type(path).__name__}")
    if ev.duration == 0:
        return IndexValue(0)
    mats = ev.phi_many(ev.grid_times)
    twice = sum(
        _component_twice(ev, idx, mats, tol)
        for idx in _components(mats, ev.probes)
    )
    return IndexValue(twice)


# -- return maps and goodness -------------------------------------------------


@dataclass(frozen=True)
class ReturnMapClass:
    eigenvalues: tuple
    n_gamma: int
    degenerate: bool


def classify_return_map(path: Union[BlockPath, SampledPath], tol: float = 1e-9) -> ReturnMapClass:
    """Spectrum of the end matrix, the count n(gamma) of eigenvalues in (-1, 0), and degeneracy.

    Block paths are decided block by block (exactly when ``omega*T`` is a
    rational multiple of 2 pi); sampled paths numerically with ``tol``.
    """
    if isinstance(path, SampledPath):
        lam = np.linalg.eigvals(path.matrices[-1])
        degenerate = bool(np.any(np.abs(lam - 1) < tol))
        eigenvalues = tuple(complex(x) for x in lam)
    else:
        T = path.duration
        eigenvalues = []
        degenerate = False
        for blk in path.blocks:
            if isinstance(blk, Rotation):
                t = _turns(blk.omega, T)
                th = 2 * math.pi * float(t)
                eigenvalues += [complex(math.cos(th), math.sin(th)),
                                complex(math.cos(th), -math.sin(th))]
                degenerate |= _integer_turns(t, tol) is not None
            elif isinstance(blk, Hyperbolic):
                s = math.sqrt(float(blk.a) * float(blk.b)) * float(T)
                eigenvalues += [complex(math.exp(s)), complex(math.exp(-s))]
                degenerate |= float(T) == 0
            else:
                eigenvalues += [1 + 0j, 1 + 0j]
                degenerate = True
        eigenvalues = tuple(eigenvalues)
    n_gamma = sum(1 for z in eigenvalues if abs(z.imag) < tol and -1 < z.real < 0)
    return ReturnMapClass(eigenvalues, n_gamma, degenerate)


def is_good(n_gamma_simple: int, multiplicity: int) -> bool:
    """False exactly for even multiples of an orbit with odd n(gamma)."""
    if multiplicity < 1:
        raise ValueError("multiplicity must be >= 1")
    return not (multiplicity % 2 == 0 and n_gamma_simple % 2 == 1)
