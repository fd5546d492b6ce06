"""Characteristic polynomials, the spectrum/first-component decomposition of a
reduced-form anti-symmetric tridiagonal matrix, and its inverse.

The decomposition maps ``T`` to ``(lambda, q[, z])`` where ``lambda`` are the
positive eigenvalues of ``i*T`` in descending order, ``q`` the positive first
components of the corresponding eigenvectors and ``z`` (n odd) the first
component of the null vector, normalized so that
``2*sum(q**2) (+ z**2) = 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .ensembles import AntisymTridiagonal


class DegeneracyError(ValueError):
    """Positive eigenvalues closer than the separation tolerance."""


class ConditioningError(ValueError):
    """Loss of positivity while reconstructing a tridiagonal matrix."""


# eigenvalues closer than this fraction of lambda_max are declared degenerate
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class SpectralData:
    """Positive spectrum and positive first eigenvector components."""

    n: int
    lam: np.ndarray
    q: np.ndarray
    z: float | None = None

    def __post_init__(self) -> None:
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        k = self.n // 2
        if lam.size != k or q.size != k:
            raise ValueError(f"expected {k} positive eigenvalues/components for n={self.n}")
        if np.any(np.diff(lam) >= 0) or np.any(lam <= 0):
            raise ValueError("eigenvalues must be strictly decreasing and positive")
        if np.any(q <= 0):
            raise ValueError("first components must be positive")
        if self.n % 2 == 1 and (self.z is None or self.z <= 0):
            raise ValueError("odd order requires a positive null-vector component z")
        if self.n % 2 == 0 and self.z is not None:
            raise ValueError("even order carries no z component")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "q", q)

    def normalization_defect(self) -> float:
        total = 2.0 * np.sum(self.q ** 2)
        if self.z is not None:
            total += self.z ** 2
        return abs(total - 1.0)

    def full_spectrum(self) -> np.ndarray:
        """Eigenvalues of the similar symmetric tridiagonal matrix: (lam, -lam[, 0])."""
        parts = [self.lam, -self.lam]
        if self.n % 2 == 1:
            parts.append(np.zeros(1))
        return np.concatenate(parts)

    def full_weights(self) -> np.ndarray:
        """Squared first components matching :meth:`full_spectrum` order."""
        parts = [self.q ** 2, self.q ** 2]
        if self.n % 2 == 1:
            parts.append(np.array([self.z ** 2]))
        return np.concatenate(parts)

    def to_json(self) -> str:
        rec = {"n": self.n, "lambda": self.lam.tolist(), "q": self.q.tolist()}
        if self.z is not None:
            rec["z"] = self.z
        return json.dumps(rec)

    @classmethod
    def from_json(cls, text: str) -> "SpectralData":
        rec = json.loads(text)
        return cls(rec["n"], np.asarray(rec["lambda"]), np.asarray(rec["q"]), rec.get("z"))


@dataclass(frozen=True)
class CharPolySequence:
    """Values ``P_0(x), ..., P_n(x)`` of the characteristic polynomials of the
    trailing principal submatrices of ``i*T``, in sign/log-magnitude form.

    ``P_0 = 1``, ``P_1 = x`` and ``P_{m+1} = x*P_m - b_m**2 * P_{m-1}`` with
    ``b`` indexed from the bottom corner.
    """

    x: float
    signs: np.ndarray
    logmags: np.ndarray

    @property
    def n(self) -> int:
        return self.signs.size - 1

    def value(self, m: int) -> float:
        """Plain float value of ``P_m(x)`` (may overflow to +-inf)."""
        if self.signs[m] == 0:
            return 0.0
        with np.errstate(over="ignore"):
            return float(self.signs[m] * np.exp(self.logmags[m]))

    def values(self) -> np.ndarray:
        return np.array([self.value(m) for m in range(self.n + 1)])

    def log_ratio(self, num: int, den: int) -> tuple[float, float]:
        """Sign and log-magnitude of ``P_num(x) / P_den(x)``."""
        s = self.signs[num] * self.signs[den]
        return s, self.logmags[num] - self.logmags[den]

    def ratio(self, num: int, den: int) -> float:
        s, lm = self.log_ratio(num, den)
        return s * np.exp(lm)


def charpoly_sequence(t: AntisymTridiagonal, x: float) -> CharPolySequence:
    """Evaluate the three-term recurrence in overflow-safe scaled form."""
    b = t.b
    n = t.n
    signs = np.zeros(n + 1)
    logmags = np.full(n + 1, -np.inf)
    signs[0], logmags[0] = 1.0, 0.0
    if x != 0.0:
        signs[1], logmags[1] = np.sign(x), np.log(abs(x))
    # scaled pair (prev, cur) with common log-scale `shift`
    prev, cur, shift = 1.0, x, 0.0
    for m in range(1, n):
        nxt = x * cur - b[m - 1] ** 2 * prev
        prev, cur = cur, nxt
        mag = max(abs(prev), abs(cur))
        if mag > 1e150 or (0.0 < mag < 1e-150):
            prev /= mag
            cur /= mag
            shift += np.log(mag)
        if cur != 0.0:
            signs[m + 1] = np.sign(cur)
            logmags[m + 1] = np.log(abs(cur)) + shift
        else:
            signs[m + 1] = 0.0
    return CharPolySequence(x=x, signs=signs, logmags=logmags)


def _log_abs_derivative(lam_all_sq: np.ndarray, i: int | None, n: int) -> float:
    """log |P_n'(mu)| at mu = lam_i (or mu = 0 for ``i is None``, n odd),
    from the product-over-roots form."""
    lam_sq = lam_all_sq
    if i is None:
        # |P_n'(0)| = prod lam_j**2
        return float(np.sum(np.log(lam_sq)))
    diffs = np.abs(lam_sq[i] - np.delete(lam_sq, i))
    acc = float(np.sum(np.log(diffs)))
    if n % 2 == 0:
        return np.log(2.0) + 0.5 * np.log(lam_sq[i]) + acc
    return np.log(2.0) + np.log(lam_sq[i]) + acc


def positive_spectrum(t: AntisymTridiagonal) -> SpectralData:
    """Decompose ``T`` into ``(lambda, q[, z])``.

    Eigenvalues come from the similar symmetric tridiagonal matrix;
    first components from the characteristic-polynomial ratio
    ``q_i**2 = |P_{n-1}(lam_i) / P_n'(lam_i)|`` with log-scaled recurrences.
    """
    n = t.n
    k = n // 2
    d, e = t.symmetric_counterpart()
    vals = eigh_tridiagonal(d, e, eigvals_only=True)
    lam = np.sort(vals)[::-1][:k].copy()
    if lam.size > 1 and np.min(-np.diff(lam)) < DEGENERACY_RTOL * lam[0]:
        raise DegeneracyError("positive eigenvalues below separation tolerance")
    if lam.size and lam[-1] < DEGENERACY_RTOL * lam[0]:
        raise DegeneracyError("positive eigenvalue too close to zero")
    lam_sq = lam ** 2
    q = np.empty(k)
    for i in range(k):
        cp = charpoly_sequence(t, lam[i])
        log_q2 = cp.logmags[n - 1] - _log_abs_derivative(lam_sq, i, n)
        q[i] = np.exp(0.5 * log_q2)
    z = None
    if n % 2 == 1:
        cp0 = charpoly_sequence(t, 0.0)
        log_z2 = cp0.logmags[n - 1] - _log_abs_derivative(lam_sq, None, n)
        z = float(np.exp(0.5 * log_z2))
    return SpectralData(n=n, lam=lam, q=q, z=z)


def reconstruct_tridiagonal(sd: SpectralData) -> AntisymTridiagonal:
    """Inverse map: Lanczos on the diagonal matrix of the full spectrum with
    the first-component weights as starting vector.

    The produced symmetric tridiagonal has zero diagonal; its off-diagonals
    are the ``b`` sequence of the unique reduced-form matrix.
    """
    if sd.normalization_defect() > 1e-8:
        raise ValueError("spectral data violates the normalization invariant")
    d = sd.full_spectrum()
    w = np.sqrt(sd.full_weights())
    n = sd.n
    v = w / np.linalg.norm(w)
    basis = [v]
    b_top_down = []
    prev = np.zeros_like(v)
    beta = 0.0
    for j in range(n - 1):
        u = d * basis[-1] - beta * prev
        # the diagonal of the target matrix is identically zero, so no alpha term;
        # still project out the full basis for numerical stability
        for vec in basis:
            u -= (vec @ u) * vec
        for vec in basis:
            u -= (vec @ u) * vec
        beta = np.linalg.norm(u)
        if not beta > 0:
            raise ConditioningError(f"Lanczos breakdown at step {j}")
        prev = basis[-1]
        basis.append(u / beta)
        b_top_down.append(beta)
    return AntisymTridiagonal(np.asarray(b_top_down)[::-1])


def _secular_sum(sd: SpectralData, x: float) -> float:
    mu = sd.full_spectrum()
    c = sd.full_weights()
    return float(np.sum(c / (x - mu)))


def secular_check(t: AntisymTridiagonal, sd: SpectralData | None = None,
                  rng: np.random.Generator | None = None, points: int = 10) -> float:
    """Max relative residual of ``P_{n-1}(x)/P_n(x) = sum_i c_i/(x - mu_i)``
    at random real evaluation points away from the spectrum."""
    if sd is None:
        sd = positive_spectrum(t)
    if rng is None:
        rng = np.random.default_rng(0)
    n = t.n
    lam_max = sd.lam[0]
    mu = sd.full_spectrum()
    worst = 0.0
    drawn = 0
    while drawn < points:
        x = float(rng.uniform(-2.0 * lam_max, 2.0 * lam_max))
        if np.min(np.abs(x - mu)) < 1e-3 * lam_max:
            continue
        drawn += 1
        cp = charpoly_sequence(t, x)
        lhs = cp.ratio(n - 1, n)
        rhs = _secular_sum(sd, x)
        denom = max(abs(lhs), abs(rhs))
        worst = max(worst, abs(lhs - rhs) / denom)
    return worst


def resolvent_check(t: AntisymTridiagonal, sd: SpectralData | None = None,
                    rng: np.random.Generator | None = None, points: int = 10) -> float:
    """Residual of the first resolvent entry against its partial-fraction form:
    ``((I - s*iT)^{-1})_{11} = sum_j 2 q_j**2 / (1 - s**2 lam_j**2)`` with an
    added ``z**2`` constant for n odd."""
    if sd is None:
        sd = positive_spectrum(t)
    if rng is None:
        rng = np.random.default_rng(0)
    n = t.n
    it = 1j * t.to_dense()
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0
    lam_max = sd.lam[0]
    worst = 0.0
    drawn = 0
    while drawn < points:
        s = float(rng.uniform(-0.9, 0.9)) / lam_max
        if np.min(np.abs(1.0 - (s * sd.lam) ** 2)) < 1e-3:
            continue
        drawn += 1
        lhs = np.linalg.solve(np.eye(n) - s * it, e1)[0]
        rhs = float(np.sum(2.0 * sd.q ** 2 / (1.0 - s ** 2 * sd.lam ** 2)))
        if sd.z is not None:
            rhs += sd.z ** 2
        worst = max(worst, abs(lhs - rhs))
    return worst


def moment_equations_check(t: AntisymTridiagonal, sd: SpectralData) -> np.ndarray:
    """Residuals of the first three moment identities relating ``b`` to
    ``(lambda, q)``:

    ``1 = sum 2q^2 (+ z^2)``,
    ``b_{n-1}^2 = sum 2q^2 lam^2``,
    ``b_{n-1}^4 + b_{n-1}^2 b_{n-2}^2 = sum 2q^2 lam^4``.
    """
    b = t.b
    q2 = 2.0 * sd.q ** 2
    res = np.empty(3)
    total = np.sum(q2) + (sd.z ** 2 if sd.z is not None else 0.0)
    res[0] = abs(1.0 - total)
    bn1 = b[-1] ** 2
    res[1] = abs(bn1 - np.sum(q2 * sd.lam ** 2))
    lhs3 = bn1 ** 2 + (bn1 * b[-2] ** 2 if b.size >= 2 else 0.0)
    res[2] = abs(lhs3 - np.sum(q2 * sd.lam ** 4))
    return res
