"""Reeb dynamics on the model contact k-handle.

The handle is the level set ``Sf = level`` of

    Sf(x, y, z) = b|x|^2 - b'|y|^2 + sum_l |z_l|^2 / c_l^2

in C^n = R^k x R^k x C^(n-k). The z-planes are numbered ``l = k+1, ..., n``
as in the usual convention; ``c_sq[l - k - 1]`` holds ``c_l^2``.

Exact data (b, b', c_l^2, level) are ``Fraction``s; orbit periods, actions,
degeneracy and indices are decided exactly, flows are floating point.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateLevel, DegenerateOrbit, OffLevelSet
from .symplectic_index import (
    BlockPath,
    Hyperbolic,
    IndexValue,
    PiMultiple,
    Real,
    Rotation,
    classify_return_map,
    is_good,
    reduced_index,
    rs_index_numeric,
)

LEVEL_TOL = 1e-10


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class ModelHandle:
    n: int
    k: int
    b: Fraction
    b_prime: Fraction
    c_sq: tuple
    level: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", _frac(self.b))
        object.__setattr__(self, "b_prime", _frac(self.b_prime))
        object.__setattr__(self, "c_sq", tuple(_frac(c) for c in self.c_sq))
        object.__setattr__(self, "level", _frac(self.level))
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 <= self.k < self.n:
            raise ValueError("handle index must satisfy 0 <= k < n (subcritical)")
        if not self.b > self.b_prime > 0:
            raise ValueError("need b > b' > 0")
        if len(self.c_sq) != self.n - self.k:
            raise ValueError(f"expected {self.n - self.k} values of c_l^2, got {len(self.c_sq)}")
        if any(c <= 0 for c in self.c_sq):
            raise ValueError("c_l^2 must be positive")

    @property
    def planes(self) -> range:
        """The z-plane labels l = k+1, ..., n."""
        return range(self.k + 1, self.n + 1)

    def c2(self, l: int) -> Fraction:
        if l not in self.planes:
            raise ValueError(f"plane {l} is not in {self.k + 1}..{self.n}")
        return self.c_sq[l - self.k - 1]

    def with_c_sq(self, c_sq: Sequence) -> "ModelHandle":
        return ModelHandle(self.n, self.k, self.b, self.b_prime, tuple(c_sq), self.level)


@dataclass(frozen=True)
class HandlePoint:
    """A point (or tangent vector) of C^n split as (x, y, z)."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(-1))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float).reshape(-1))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=complex).reshape(-1))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same length")

    def to_real(self) -> np.ndarray:
        return np.concatenate([self.x, self.y, self.z.real, self.z.imag])

    @classmethod
    def from_real(cls, v: np.ndarray, k: int) -> "HandlePoint":
        m = (len(v) - 2 * k) // 2
        return cls(v[:k], v[k : 2 * k], v[2 * k : 2 * k + m] + 1j * v[2 * k + m :])


def sf(h: ModelHandle, p: HandlePoint) -> float:
    c2 = np.array([float(c) for c in h.c_sq])
    return float(float(h.b) * p.x @ p.x - float(h.b_prime) * p.y @ p.y
                 + np.sum(np.abs(p.z) ** 2 / c2))


def _check_shape(h: ModelHandle, p: HandlePoint) -> None:
    if len(p.x) != h.k or len(p.z) != h.n - h.k:
        raise ValueError(f"point has shape ({len(p.x)}, {len(p.z)}), handle needs ({h.k}, {h.n - h.k})")


def _check_level(h: ModelHandle, p: HandlePoint) -> None:
    # relative to the size of the terms, so cancellation in Sf does not count
    scale = max(1.0, float(h.b) * p.x @ p.x + float(h.b_prime) * p.y @ p.y,
                abs(float(h.level)))
    if abs(sf(h, p) - float(h.level)) > LEVEL_TOL * scale:
        raise OffLevelSet(f"Sf(p) = {sf(h, p)!r} but level = {h.level}")


def hamiltonian_field(h: ModelHandle, p: HandlePoint) -> HandlePoint:
    """X_Sf at p, returned as a tangent vector in (x, y, z) form."""
    _check_shape(h, p)
    c2 = np.array([float(c) for c in h.c_sq])
    return HandlePoint(
        2 * float(h.b_prime) * p.y,
        2 * float(h.b) * p.x,
        -2j * p.z / c2,
    )


def reeb_rescale(h: ModelHandle, p: HandlePoint) -> float:
    """alpha_st(X_Sf) at a point of the level set.

    Both expressions ``4b|x|^2 + 2b'|y|^2 + sum |z_l|^2/c_l^2`` and
    ``3b|x|^2 + 3b'|y|^2 + level`` are evaluated and must agree. The value
    vanishes only at the origin, which lies on the level set ``level = 0``.
    """
    _check_shape(h, p)
    _check_level(h, p)
    c2 = np.array([float(c) for c in h.c_sq])
    bx2 = float(h.b) * p.x @ p.x
    by2 = float(h.b_prime) * p.y @ p.y
    direct = 4 * bx2 + 2 * by2 + float(np.sum(np.abs(p.z) ** 2 / c2))
    on_level = 3 * bx2 + 3 * by2 + float(h.level)
    if not math.isclose(direct, on_level, rel_tol=LEVEL_TOL, abs_tol=LEVEL_TOL):
        raise AssertionError(f"rescaling identity broken: {direct!r} != {on_level!r}")
    if direct == 0:
        warnings.warn("Reeb rescaling vanishes: the origin is not in the punctured level set",
                      stacklevel=2)
    return direct


def flow_closed_form(h: ModelHandle, p0: HandlePoint, t: float) -> HandlePoint:
    _check_shape(h, p0)
    b, bp = float(h.b), float(h.b_prime)
    s = 2 * math.sqrt(b * bp)
    ch, sh = math.cosh(s * t), math.sinh(s * t)
    x = p0.x * ch + p0.y * math.sqrt(bp / b) * sh
    y = p0.y * ch + p0.x * math.sqrt(b / bp) * sh
    angles = np.array([2 * t / float(c) for c in h.c_sq])
    z = p0.z * (np.cos(angles) - 1j * np.sin(angles))
    return HandlePoint(x, y, z)


def _field_matrix(h: ModelHandle) -> np.ndarray:
    """Matrix of the (linear) field in real coordinates, probed column by column."""
    dim = 2 * h.n
    cols = [hamiltonian_field(h, HandlePoint.from_real(e, h.k)).to_real() for e in np.eye(dim)]
    return np.array(cols).T


def flow_numeric(h: ModelHandle, p0: HandlePoint, t: float, steps: int = 100_000) -> HandlePoint:
    """Classical fourth-order Runge-Kutta for X_Sf with ``steps`` equal steps.

    The field is linear, so one RK4 step is a fixed matrix ``S`` and ``steps``
    steps are ``S**steps``, taken here by repeated squaring.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _check_shape(h, p0)
    A = _field_matrix(h)
    dt = t / steps
    Y = np.eye(A.shape[0])
    k1 = A @ Y
    k2 = A @ (Y + 0.5 * dt * k1)
    k3 = A @ (Y + 0.5 * dt * k2)
    k4 = A @ (Y + dt * k3)
    step = Y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    out = np.linalg.matrix_power(step, steps) @ p0.to_real()
    return HandlePoint.from_real(out, h.k)


# -- periodic orbits ----------------------------------------------------------


@dataclass(frozen=True)
class ReebOrbit:
    """The m-fold cover of sigma_l = {|z_l|^2 = c_l^2 level} on S_*.

    ``mu`` and ``reduced`` are ``None`` for degenerate orbits.
    """

    l: int
    m: int
    hamiltonian_period: PiMultiple
    action: PiMultiple
    mu: Optional[IndexValue]
    reduced: Optional[IndexValue]
    good: bool
    nondegenerate: bool


@dataclass(frozen=True)
class OrbitIndex:
    mu: IndexValue
    reduced: IndexValue


def orbit_nondegenerate(h: ModelHandle, l: int, m: int) -> bool:
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    own = h.c2(l)
    for other in h.planes:
        if other != l and (m * own / h.c2(other)).denominator == 1:
            return False
    return True


def orbit_block_path(h: ModelHandle, l: int, m: int) -> BlockPath:
    """Linearized flow along sigma_l^m in the standard trivialization of C^n.

    Hyperbolic blocks ``[[0, 2b'], [2b, 0]]`` for the x-y planes, rotations at
    speed ``2/c_l'^2`` for every z-plane, run for one Hamiltonian period
    ``m pi c_l^2`` (Hamiltonian time, so the speeds carry no factor of level).
    """
    blocks = [Hyperbolic(2 * h.b, 2 * h.b_prime) for _ in range(h.k)]
    blocks += [Rotation(2 / c) for c in h.c_sq]
    return BlockPath(blocks, PiMultiple(m * h.c2(l)))


def orbit_index(h: ModelHandle, l: int, m: int) -> OrbitIndex:
    """Closed-form mu and reduced index of sigma_l^m.

    mu = 2m + (n-k-1) + 2 * sum over l' != l of floor(m c_l^2 / c_l'^2).
    """
    if not orbit_nondegenerate(h, l, m):
        raise DegenerateOrbit(f"sigma_{l}^{m} is degenerate for c^2 = {list(map(str, h.c_sq))}")
    own = h.c2(l)
    floors = sum(math.floor(m * own / h.c2(o)) for o in h.planes if o != l)
    mu = IndexValue.of(2 * m + (h.n - h.k - 1) + 2 * floors)
    return OrbitIndex(mu, reduced_index(mu, h.n))


def _cutoff_allows(action_over_pi: Fraction, cutoff: Real) -> bool:
    if isinstance(cutoff, PiMultiple):
        return action_over_pi <= cutoff.coeff
    return float(action_over_pi) * math.pi <= float(cutoff)


def enumerate_orbits(h: ModelHandle, action_cutoff: Real) -> list[ReebOrbit]:
    """All sigma_l^m with action m pi c_l^2 level <= action_cutoff, sorted by action.

    ``action_cutoff`` may be a ``PiMultiple`` for exact comparison.
    """
    if h.level <= 0:
        raise DegenerateLevel(f"level {h.level} <= 0 carries no periodic Reeb orbits")
    orbits = []
    for l in h.planes:
        n_gamma = classify_return_map(orbit_block_path(h, l, 1)).n_gamma
        m = 1
        while _cutoff_allows(m * h.c2(l) * h.level, action_cutoff):
            nondeg = orbit_nondegenerate(h, l, m)
            idx = orbit_index(h, l, m) if nondeg else None
            orbits.append(ReebOrbit(
                l=l,
                m=m,
                hamiltonian_period=PiMultiple(m * h.c2(l)),
                action=PiMultiple(m * h.c2(l) * h.level),
                mu=idx.mu if idx else None,
                reduced=idx.reduced if idx else None,
                good=is_good(n_gamma, m),
                nondegenerate=nondeg,
            ))
            m += 1
    orbits.sort(key=lambda o: (o.action.coeff, o.l, o.m))
    return orbits


def _primes_above(lo: int):
    p = max(lo + 1, 2)
    while True:
        if all(p % d for d in range(2, int(math.isqrt(p)) + 1)):
            yield p
        p += 1


def _screened(h: ModelHandle, n_o: int) -> bool:
    return all(orbit_nondegenerate(h, l, m) for l in h.planes for m in range(1, n_o + 1))


def tune_principal(h: ModelHandle, n_o: int) -> ModelHandle:
    """Shrink c_n^2 so that sigma_n is principal up to multiplicity n_o.

    Afterwards ``n_o c_n^2 < c_l^2`` for every other plane and every orbit of
    multiplicity at most ``n_o`` is nondegenerate. The other c_l^2 are kept
    when they already pass that screening and replaced by distinct primes
    (scaled to the original size) otherwise.
    """
    if n_o < 1:
        raise ValueError("n_o must be >= 1")
    if h.n - h.k == 1:
        return h
    others = list(h.c_sq[:-1])
    probe = h.with_c_sq(others + [min(others) / (10 ** 6 * n_o)])
    if not _screened(probe, n_o):
        scale = max(others)
        primes = _primes_above(n_o)
        ps = [next(primes) for _ in others]
        others = [scale * p / ps[-1] for p in ps]
    c_min = min(others)
    numerators = [(c / c_min).numerator for c in others]
    for P in _primes_above(n_o):
        if any(num % P == 0 for num in numerators):
            continue
        R = next(q for q in _primes_above(n_o * P) if q != P)
        cand = h.with_c_sq(others + [c_min * P / R])
        if _screened(cand, n_o) and all(n_o * cand.c_sq[-1] < c for c in others):
            return cand
    raise AssertionError("unreachable: a screened choice always exists")


# -- wandering segments -------------------------------------------------------


@dataclass(frozen=True)
class SegmentIndex:
    mu_segment: IndexValue
    bound: float
    rate: float
    hamiltonian_time: float
    in_belt: bool

    @property
    def holds(self) -> bool:
        return self.mu_segment.value > self.bound


def action_along(h: ModelHandle, p0: HandlePoint, t: float) -> float:
    """Action of the Reeb trajectory through p0 over Hamiltonian time t, in closed form.

    Integrates ``3b|x|^2 + 3b'|y|^2 + level`` along the hyperbolic flow, where
    ``b x_j^2 + b' y_j^2 = E_j cosh(2st) + 2 sqrt(bb') x_j y_j sinh(2st)``.
    """
    b, bp = float(h.b), float(h.b_prime)
    s = 2 * math.sqrt(b * bp)
    energy = b * p0.x @ p0.x + bp * p0.y @ p0.y
    cross = 2 * math.sqrt(b * bp) * p0.x @ p0.y
    if s * t == 0:
        hyper = 0.0
    else:
        hyper = (energy * math.sinh(2 * s * t) + cross * (math.cosh(2 * s * t) - 1)) / (2 * s)
    return 3 * hyper + float(h.level) * t


def time_for_action(h: ModelHandle, p0: HandlePoint, action_T: float) -> float:
    """Hamiltonian time after which the trajectory through p0 has collected ``action_T``."""
    if action_T < 0:
        raise ValueError("action must be non-negative")
    if action_T == 0:
        return 0.0
    # the integrand is at least level, so the root lies below action_T / level
    return brentq(lambda t: action_along(h, p0, t) - action_T, 0.0,
                  action_T / float(h.level), xtol=1e-14, rtol=1e-14)


def belt_max(h: ModelHandle, p0: HandlePoint, t: float) -> float:
    """Largest b'|y|^2 along the trajectory through p0 up to Hamiltonian time t."""
    # each y_j is A e^{st} + B e^{-st}, so |y_j| peaks at an endpoint
    end = flow_closed_form(h, p0, t)
    bp = float(h.b_prime)
    return max(bp * p0.y @ p0.y, bp * end.y @ end.y)


def segment_index_growth(h: ModelHandle, p0: HandlePoint, action_T: float,
                         belt: float = 1.0) -> SegmentIndex:
    """Index of the linearized flow along a Reeb segment of action ``action_T``.

    The segment is converted to Hamiltonian time through :func:`action_along`
    and its linearized flow in the standard trivialization of C^n is indexed
    with the crossing-form algorithm. The reported bound is ``N action_T - 2n``
    with ``N = (sum_l 2/c_l^2) / (6 belt + 4 level)``. Rotations at speed
    ``2/c_l^2`` gain index at rate ``sum_l 2/(pi c_l^2)`` per Hamiltonian time,
    so this N is pi times that rate and gives the stronger bound. Inside the
    belt ``b'|y|^2 <= belt`` the action grows at most ``6 belt + 4 level``
    times faster than Hamiltonian time. ``in_belt`` records whether the whole
    segment stays in that region.
    """
    _check_shape(h, p0)
    _check_level(h, p0)
    if h.level <= 0:
        raise DegenerateLevel("segments are studied on positive levels")
    if float(h.b_prime) * p0.y @ p0.y > belt:
        raise ValueError(f"start has b'|y|^2 > {belt}: outside the belt neighborhood")
    t_h = time_for_action(h, p0, action_T)
    blocks = [Hyperbolic(2 * h.b, 2 * h.b_prime) for _ in range(h.k)]
    blocks += [Rotation(2 / c) for c in h.c_sq]
    mu = rs_index_numeric(BlockPath(blocks, t_h))
    rate = sum(2 / float(c) for c in h.c_sq) / (6 * belt + 4 * float(h.level))
    return SegmentIndex(
        mu_segment=mu,
        bound=rate * action_T - 2 * h.n,
        rate=rate,
        hamiltonian_time=t_h,
        in_belt=belt_max(h, p0, t_h) <= belt,
    )
