"""Inductive bordered-matrix sampler for the positive spectra.

A size-(n+1) matrix is obtained from a size-n one by adding a border row
and column; the new positive eigenvalues are the roots of an explicit
random rational function in the squared variable.  The reverse move (a
random corank-1 projection with Dirichlet weights) is also provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .streams import ParameterError, RandomStream, sample_dirichlet, sample_gamma


class RootBracketError(RuntimeError):
    """A root bracket failed its sign condition (invariant violation)."""


@dataclass(frozen=True)
class RandomRational:
    """The function ``constant - sum_i c_i / (y - a_i)`` with strictly
    descending poles ``a`` and positive weights ``c``.

    With ``constant = 1`` there is exactly one real root per pole gap plus
    one above the top pole; with ``constant = 0`` there is one root per
    interior gap only.
    """

    constant: int
    a: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        if self.constant not in (0, 1):
            raise ParameterError("constant must be 0 or 1")
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if a.size != c.size or a.size == 0:
            raise ParameterError("poles and weights must have equal nonzero length")
        if np.any(np.diff(a) >= 0):
            raise ParameterError("poles must be strictly descending")
        if not np.all(c > 0):
            raise ParameterError("weights must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    def value(self, y: float) -> float:
        return self.constant - float(np.sum(self.c / (y - self.a)))


@dataclass(frozen=True)
class ChainState:
    """Positive spectrum (descending) of the chain after ``m`` border steps."""

    m: int
    lam: np.ndarray


def _bisect_signed(f, lo: float, hi: float, sign_lo: float) -> float:
    """Bisection on an open interval; the limit signs of ``f`` at the two
    endpoints are known and opposite, and the endpoints themselves are
    never evaluated."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if math.copysign(1.0, f(mid)) == sign_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _root_near_anchor(constant: int, a: np.ndarray, c: np.ndarray,
                      anchor: float, dlo: float, dhi: float,
                      sign_lo: float, check: bool) -> float:
    """Root of the rational function inside ``(anchor+dlo, anchor+dhi)``.

    The search runs in the offset ``delta = y - anchor`` so the difference
    to the anchoring pole stays fully precise even when the root is
    exponentially close to it; the other pole distances are formed from
    exact pole-to-pole gaps.  With ``check`` the residual at the solution
    is validated against a locally scaled tolerance.
    """
    base = anchor - a

    def f(delta: float) -> float:
        return constant - float(np.sum(c / (base + delta)))

    delta = _bisect_signed(f, dlo, dhi, sign_lo)
    if check:
        local = 1.0 + float(np.sum(c / np.abs(base + delta)))
        if abs(f(delta)) > 1e-12 * local:
            raise RootBracketError(
                f"root residual too large near y={anchor + delta}")
    return anchor + delta


def _gap_root(constant: int, a: np.ndarray, c: np.ndarray,
              lo: float, hi: float, sign_lo: float) -> float:
    """Root inside the pole gap (lo, hi), anchored at the nearer endpoint."""
    coarse = _root_near_anchor(constant, a, c, lo, 0.0, hi - lo, sign_lo,
                               check=False)
    if coarse - lo <= hi - coarse:
        return _root_near_anchor(constant, a, c, lo, 0.0, hi - lo, sign_lo,
                                 check=True)
    # re-anchor at the upper pole for full precision near it
    return _root_near_anchor(constant, a, c, hi, -(hi - lo), 0.0, sign_lo,
                             check=True)


def rational_roots(r: RandomRational) -> np.ndarray:
    """All real roots of ``r``, descending; each strictly interlaces the poles."""
    a, c = r.a, r.c
    roots = []
    if r.constant == 1:
        # one root above the top pole: 1 - sum(c)/(y - a_1) bounds r from below
        width = float(np.sum(c)) + 1.0
        roots.append(_root_near_anchor(1, a, c, a[0], 0.0, width, sign_lo=-1.0,
                                       check=True))
        for i in range(1, a.size):
            roots.append(_gap_root(1, a, c, a[i], a[i - 1], sign_lo=-1.0))
    else:
        for i in range(1, a.size):
            roots.append(_gap_root(0, a, c, a[i], a[i - 1], sign_lo=-1.0))
    return np.asarray(roots)


def chain_step_up(lam_prev, n: int, beta: float, stream: RandomStream) -> np.ndarray:
    """Positive eigenvalues of the bordered size-(n+1) matrix given those of
    the size-n matrix.

    Each pole pair gets a squared border weight ``2w^2 ~ Gamma[beta/2, 1]``;
    for odd ``n`` the zero eigenvalue carries ``b^2 ~ Gamma[beta/4, 1]``.
    """
    lam_prev = np.atleast_1d(np.asarray(lam_prev, dtype=float)) if np.size(lam_prev) \
        else np.zeros(0)
    k = n // 2
    if lam_prev.size != k:
        raise ParameterError(f"expected {k} eigenvalues for step n={n}")
    weights = sample_gamma(beta / 2.0, stream, size=k) if k else np.zeros(0)
    poles = lam_prev ** 2
    if n % 2 == 1:
        poles = np.concatenate([poles, [0.0]])
        weights = np.concatenate([weights, [sample_gamma(beta / 4.0, stream)]])
    rr = RandomRational(constant=1, a=poles, c=weights)
    return np.sqrt(rational_roots(rr))


def chain_sample(n: int, beta: float, stream: RandomStream) -> np.ndarray:
    """Positive spectrum of the size-n ensemble, built one border at a time."""
    if n < 2:
        raise ParameterError("need n >= 2")
    lam = np.zeros(0)
    for m in range(1, n):
        lam = chain_step_up(lam, m, beta, stream)
    return lam


def chain_trajectory(n: int, beta: float, stream: RandomStream) -> list[ChainState]:
    """All intermediate positive spectra of the chain, sizes 1 through n."""
    if n < 2:
        raise ParameterError("need n >= 2")
    lam = np.zeros(0)
    out = [ChainState(m=1, lam=lam)]
    for m in range(1, n):
        lam = chain_step_up(lam, m, beta, stream)
        out.append(ChainState(m=m + 1, lam=lam))
    return out


def step_down(lam, n: int, beta: float, stream: RandomStream) -> np.ndarray:
    """Positive eigenvalues of a random corank-1 projection of size n, given
    the positive spectrum ``lam`` of the size-(n+1) matrix.

    The squared first components come from a Dirichlet law: parameters
    ``beta/2`` per pole pair plus ``beta/4`` on the zero pole when n+1 is odd.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    kl = (n + 1) // 2
    if lam.size != kl:
        raise ParameterError(f"expected {kl} eigenvalues of the size-{n + 1} matrix")
    if (n + 1) % 2 == 1:
        poles = np.concatenate([lam ** 2, [0.0]])
        s = np.concatenate([np.full(kl, beta / 2.0), [beta / 4.0]])
    else:
        poles = lam ** 2
        s = np.full(kl, beta / 2.0)
    weights = sample_dirichlet(s, stream)
    if poles.size == 1:
        return np.zeros(0)
    rr = RandomRational(constant=0, a=poles, c=weights)
    return np.sqrt(rational_roots(rr))


def border_matrix_check(lam_prev, w, b: float | None) -> float:
    """Cross-check one border step against a dense eigensolver.

    Builds the real symmetric arrowhead matrix equivalent (by a diagonal
    unitary) to the bordered anti-symmetric matrix with eigenvalue pairs
    ``+-lam_prev`` (plus 0 when ``b`` is given), border weights ``w`` on
    each pair and ``b`` on the zero eigenvalue.  Returns the maximum
    deviation between its positive spectrum and the rational-root route.
    """
    lam_prev = np.atleast_1d(np.asarray(lam_prev, dtype=float)) if np.size(lam_prev) \
        else np.zeros(0)
    w = np.atleast_1d(np.asarray(w, dtype=float)) if np.size(w) else np.zeros(0)
    if lam_prev.size != w.size:
        raise ParameterError("need one border weight per eigenvalue pair")
    diag = np.concatenate([lam_prev, -lam_prev, [0.0]] if b is not None
                          else [lam_prev, -lam_prev])
    border = np.concatenate([w, w, [b]] if b is not None else [w, w])
    m = diag.size + 1
    arrow = np.zeros((m, m))
    arrow[np.arange(m - 1), np.arange(m - 1)] = diag
    arrow[:-1, -1] = border
    arrow[-1, :-1] = border
    eig = np.linalg.eigvalsh(arrow)
    dense_pos = np.sort(eig[eig > 1e-13 * max(1.0, np.max(np.abs(eig)))])[::-1]

    poles = lam_prev ** 2
    weights = 2.0 * w ** 2
    if b is not None:
        poles = np.concatenate([poles, [0.0]])
        weights = np.concatenate([weights, [b ** 2]])
    order = np.argsort(poles)[::-1]
    rr = RandomRational(constant=1, a=poles[order], c=weights[order])
    rational_pos = np.sqrt(rational_roots(rr))
    if dense_pos.size != rational_pos.size:
        raise RootBracketError("positive-spectrum size mismatch between routes")
    return float(np.max(np.abs(dense_pos - rational_pos))) if dense_pos.size else 0.0


def _batch_roots_constant1(poles: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Vectorized bisection for the ``constant = 1`` rational function.

    ``poles`` and ``weights`` have shape (reps, p) with poles descending per
    row; returns the (reps, p) array of roots, descending per row.
    """
    total = np.sum(weights, axis=1, keepdims=True)
    lo = poles.copy()
    hi = np.concatenate([poles[:, :1] + total + 1.0, poles[:, :-1]], axis=1)
    for _ in range(110):
        mid = 0.5 * (lo + hi)
        f = 1.0 - np.sum(weights[:, None, :] / (mid[:, :, None] - poles[:, None, :]),
                         axis=2)
        below = f < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def chain_sample_batch(n: int, beta: float, stream: RandomStream, reps: int) -> np.ndarray:
    """``reps`` independent positive spectra of the size-n ensemble, shape
    ``(reps, n//2)``, via vectorized bisection on every border step."""
    if n < 2:
        raise ParameterError("need n >= 2")
    if reps < 1:
        raise ParameterError("need reps >= 1")
    lam_sq = np.zeros((reps, 0))
    for m in range(1, n):
        k = m // 2
        weights = sample_gamma(beta / 2.0, stream, size=(reps, k)) if k \
            else np.zeros((reps, 0))
        poles = lam_sq
        if m % 2 == 1:
            poles = np.concatenate([poles, np.zeros((reps, 1))], axis=1)
            weights = np.concatenate(
                [weights, sample_gamma(beta / 4.0, stream, size=(reps, 1))], axis=1)
        lam_sq = _batch_roots_constant1(poles, weights)
    return np.sqrt(lam_sq)
