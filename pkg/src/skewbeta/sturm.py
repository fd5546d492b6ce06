"""Sturm-sequence eigenvalue counting, shooting vectors and Pruefer phases.

All computations run on the symmetric tridiagonal matrix with the same
characteristic polynomial as ``i*T`` (minus signs below the diagonal removed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import AntisymTridiagonal


class RefinementError(RuntimeError):
    """Branch tracking could not be resolved at the maximum grid refinement."""


@dataclass(frozen=True)
class SturmState:
    """Ratios ``r_i = -P_i(mu)/P_{i-1}(mu)``, i = 1..n, at one evaluation point."""

    mu: float
    r: np.ndarray


@dataclass(frozen=True)
class PruferPhases:
    """Continuous-branch phases ``theta_i``, i = 2..n, at one evaluation point."""

    mu: float
    theta: np.ndarray


_JITTER = 1e-12


def sturm_ratios(t: AntisymTridiagonal, mu: float) -> SturmState:
    """Evaluate the ratio recurrence ``r_1 = -mu``, ``r_{i+1} = -mu - b_i**2 / r_i``.

    A zero intermediate ratio (mu hits an eigenvalue of a trailing submatrix)
    is perturbed by a documented relative jitter and re-run.
    """
    b = t.b
    scale = max(1.0, float(np.max(b)))
    shift = 0.0
    for _ in range(50):
        x = mu + shift
        r = np.empty(t.n)
        r[0] = -x
        ok = True
        for i in range(1, t.n):
            if r[i - 1] == 0.0:
                ok = False
                break
            r[i] = -x - b[i - 1] ** 2 / r[i - 1]
        if ok and r[-1] != 0.0:
            return SturmState(mu=x, r=r)
        shift += _JITTER * scale
    raise RefinementError(f"could not evaluate Sturm sequence near mu={mu}")


def count_positive_leq(t: AntisymTridiagonal, mu: float) -> int:
    """Number of positive eigenvalues of ``i*T`` less than or equal to ``mu``:
    negative ratios at even index minus positive ratios at odd index."""
    st = sturm_ratios(t, mu)
    neg_even = int(np.sum(st.r[1::2] < 0))
    pos_odd = int(np.sum(st.r[0::2] > 0))
    return neg_even - pos_odd


def shooting_vector(t: AntisymTridiagonal, mu: float, x1: float = 1.0) -> np.ndarray:
    """Shooting solution of all but the first row of ``(T_s - mu I) x = 0``.

    Returns ``(x_1, ..., x_n, x_{n+1})`` where ``x_{n+1}`` is the first
    component of ``(T_s - mu I) x``; it vanishes iff ``mu`` is an eigenvalue.
    Components satisfy ``x_i = x_1 * P_{i-1}(mu) / (b_1 ... b_{i-1})``.
    """
    if x1 == 0.0:
        raise ValueError("x1 must be nonzero")
    b = t.b
    n = t.n
    x = np.empty(n + 1)
    x[0] = x1
    p_prev, p_cur = 1.0, mu  # P_0, P_1
    bprod = 1.0
    for i in range(1, n):
        bprod *= b[i - 1]
        x[i] = x1 * p_cur / bprod
        p_prev, p_cur = p_cur, mu * p_cur - b[i - 1] ** 2 * p_prev
    x[n] = -x1 * p_cur / bprod
    return x


def _principal_phase(num: float, den: float) -> float:
    """Phase in (0, pi] with ``cot(theta) = den / (num_scale)`` solved from
    ``tan(theta) = num/den`` via atan2."""
    th = math.atan2(num, den)
    if th <= 0.0:
        th += math.pi
    return th


def _raw_phases(t: AntisymTridiagonal, mu: float) -> np.ndarray:
    """Principal-branch phases in (0, pi] for i = 2..n from
    ``cot(theta_i) = P_{i-1}(mu) / (b_{i-1}**2 P_{i-2}(mu))``."""
    b = t.b
    n = t.n
    out = np.empty(n - 1)
    # scaled charpoly pair; only the ratio enters the phase
    p_prev, p_cur = 1.0, mu
    for i in range(2, n + 1):
        out[i - 2] = _principal_phase(b[i - 2] ** 2 * p_prev, p_cur)
        if i <= n - 1:
            p_prev, p_cur = p_cur, mu * p_cur - b[i - 2] ** 2 * p_prev
            mag = max(abs(p_prev), abs(p_cur))
            if mag > 1e140:
                p_prev /= mag
                p_cur /= mag
    return out


def _anchor_phases(n: int) -> np.ndarray:
    """Exact phases at mu = 0: pi/2 at even index, 0 at odd index."""
    idx = np.arange(2, n + 1)
    return np.where(idx % 2 == 0, math.pi / 2.0, 0.0)


def prufer_phases(t: AntisymTridiagonal, grid, max_refine: int = 40) -> list[PruferPhases]:
    """Continuous Pruefer phases along an ascending nonnegative grid.

    Branches are anchored at mu = 0 (exact values known) and tracked
    rightwards; whenever a step would move any phase by more than pi/2 the
    interval is bisected, up to ``max_refine`` extra subdivisions per step.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0) or grid[0] < 0:
        raise ValueError("grid must be strictly increasing and nonnegative")
    theta = _anchor_phases(t.n)
    mu_prev = 0.0
    out: list[PruferPhases] = []
    for mu in grid:
        if mu == 0.0:
            out.append(PruferPhases(mu=0.0, theta=theta.copy()))
            continue
        theta = _advance(t, mu_prev, theta, mu, max_refine)
        mu_prev = mu
        out.append(PruferPhases(mu=mu, theta=theta.copy()))
    return out


def _branch_select(raw: np.ndarray, prev: np.ndarray) -> np.ndarray:
    """Unique representative ``raw - k*pi`` in the interval (prev - pi, prev]."""
    k = np.ceil((raw - prev) / math.pi)
    return raw - k * math.pi


def _advance(t: AntisymTridiagonal, mu0: float, theta0: np.ndarray,
             mu1: float, depth: int) -> np.ndarray:
    raw = _raw_phases(t, mu1)
    cand = _branch_select(raw, theta0)
    if np.max(theta0 - cand) <= math.pi / 2.0 + 1e-9:
        return cand
    if depth <= 0:
        raise RefinementError(f"unresolved phase branch between mu={mu0} and mu={mu1}")
    mid = 0.5 * (mu0 + mu1)
    th_mid = _advance(t, mu0, theta0, mid, depth - 1)
    return _advance(t, mid, th_mid, mu1, depth - 1)
