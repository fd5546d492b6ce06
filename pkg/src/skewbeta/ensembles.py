"""Random matrix constructors and the Householder reduction to reduced form.

An anti-symmetric tridiagonal matrix in *reduced form* has zero diagonal and
strictly positive superdiagonal entries.  Following the convention used for
every formula in this package, the off-diagonal sequence ``b`` is indexed
from the bottom corner: the superdiagonal reads ``b[n-2], ..., b[0]`` top to
bottom, i.e. ``b[0]`` sits in the bottom-right 2x2 block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .streams import ParameterError, RandomStream, sample_chi_tilde, sample_gamma, \
    sample_normal, sample_standard_chi


class SizeError(ValueError):
    """Raised for invalid matrix sizes."""


class DegenerateInputError(ValueError):
    """Raised when an input is singular in a way the algorithm cannot handle."""


@dataclass(frozen=True)
class AntisymTridiagonal:
    """Reduced-form anti-symmetric tridiagonal matrix, stored as its
    positive off-diagonal sequence ``b`` (bottom-up indexing)."""

    b: np.ndarray

    def __post_init__(self) -> None:
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if b.ndim != 1:
            raise ValueError("off-diagonal sequence must be 1-d")
        if not np.all(b > 0):
            raise ValueError("reduced form requires strictly positive off-diagonals")
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.b.size + 1

    def superdiagonal_top_down(self) -> np.ndarray:
        """Superdiagonal entries in matrix order (row 1 to row n-1)."""
        return self.b[::-1]

    def to_dense(self) -> np.ndarray:
        n = self.n
        t = np.zeros((n, n))
        sup = self.superdiagonal_top_down()
        for i in range(n - 1):
            t[i, i + 1] = sup[i]
            t[i + 1, i] = -sup[i]
        return t

    def symmetric_counterpart(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of the symmetric tridiagonal matrix with
        the same characteristic polynomial as ``i * T``."""
        return np.zeros(self.n), self.superdiagonal_top_down()

    def to_json(self, beta: float | None = None) -> str:
        rec = {"n": self.n, "b": self.b.tolist()}
        if beta is not None:
            rec["beta"] = beta
        return json.dumps(rec)

    @classmethod
    def from_json(cls, text: str) -> "AntisymTridiagonal":
        rec = json.loads(text)
        t = cls(np.asarray(rec["b"], dtype=float))
        if t.n != rec["n"]:
            raise ValueError("inconsistent size in serialized record")
        return t


@dataclass(frozen=True)
class DenseAntisym:
    """Dense real anti-symmetric matrix stored as its full array."""

    a: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.allclose(a, -a.T):
            raise ValueError("matrix is not anti-symmetric")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join(repr(v) for v in row) for row in self.a)


@dataclass(frozen=True)
class LowerBidiagonal:
    """Lower bidiagonal matrix with nonnegative entries.

    ``rows`` is ``len(d)`` or ``len(d) + 1``; in the latter case the extra
    row carries only the last subdiagonal entry.
    """

    d: np.ndarray
    e: np.ndarray
    rows: int

    def __post_init__(self) -> None:
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        e = np.atleast_1d(np.asarray(self.e, dtype=float)) if np.size(self.e) else np.zeros(0)
        if self.rows not in (d.size, d.size + 1):
            raise ValueError("rows must equal cols or cols + 1")
        expected_e = d.size - 1 if self.rows == d.size else d.size
        if e.size != expected_e:
            raise ValueError(f"expected {expected_e} subdiagonal entries, got {e.size}")
        if np.any(d < 0) or np.any(e < 0):
            raise ValueError("bidiagonal entries must be nonnegative")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)

    @property
    def cols(self) -> int:
        return self.d.size

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.rows, self.cols))
        for i, v in enumerate(self.d):
            m[i, i] = v
        for i, v in enumerate(self.e):
            m[i + 1, i] = v
        return m


@dataclass(frozen=True)
class EnsembleSpec:
    """Validated parameters for one matrix family."""

    kind: str
    n: int
    beta: float
    a: float | None = None

    KINDS = ("antisym-trid", "antisym-dense-gue", "laguerre-bidiag", "c-matrix", "chain")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown ensemble kind {self.kind!r}")
        if not self.beta > 0:
            raise ParameterError("beta must be positive")
        if self.kind == "laguerre-bidiag":
            if self.a is None:
                raise ParameterError("laguerre-bidiag requires parameter a")
            if not 2 * self.a - (self.n - 1) * self.beta > 0:
                raise ParameterError(
                    f"need 2a - (n-1)*beta > 0, got 2*{self.a} - {self.n - 1}*{self.beta}"
                )
        if self.kind == "c-matrix":
            if self.n < 1:
                raise SizeError("c-matrix requires k >= 1")
        elif self.n < 2:
            raise SizeError("matrix order must be at least 2")


def build_antisym_tridiagonal(n: int, beta: float, stream: RandomStream) -> AntisymTridiagonal:
    """Sample the anti-symmetric tridiagonal beta-ensemble: ``b[k-1]`` is a
    chi-tilde variable with ``k * beta / 2`` degrees, i.e. ``b_k**2`` is
    gamma distributed with shape ``k * beta / 4``."""
    if n < 2:
        raise SizeError(f"need n >= 2, got {n}")
    if not beta > 0:
        raise ParameterError("beta must be positive")
    b = np.array([sample_chi_tilde(k * beta / 2.0, stream) for k in range(1, n)])
    return AntisymTridiagonal(b)


def antisym_tridiagonal_batch(n: int, beta: float, stream: RandomStream, reps: int) -> np.ndarray:
    """Vectorized batch of off-diagonal sequences, shape ``(reps, n-1)``."""
    cols = [np.sqrt(sample_gamma(k * beta / 4.0, stream, size=reps)) for k in range(1, n)]
    return np.stack(cols, axis=1)


def build_dense_antisym_gue(n: int, stream: RandomStream) -> DenseAntisym:
    """Dense anti-symmetric matrix with i.i.d. N[0, 1/2] strict-upper entries.

    This variance convention makes the first-row sum of squares a rate-1
    gamma with shape (n-1)/2, so the Householder reduction lands exactly on
    the tridiagonal model at beta = 2.
    """
    if n < 2:
        raise SizeError(f"need n >= 2, got {n}")
    a = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    a[iu] = sample_normal(0.0, 0.5, stream, size=iu[0].size)
    return DenseAntisym(a - a.T)


def householder_reduce(dense: DenseAntisym) -> AntisymTridiagonal:
    """Reduce a dense anti-symmetric matrix to reduced tridiagonal form by
    orthogonal similarity.

    Each reflector uses ``v = x + sign(x_1) * ||x|| * e_1`` for stability;
    a final diagonal sign similarity makes every superdiagonal entry
    positive.
    """
    a = dense.a.copy()
    n = dense.n
    for j in range(n - 2):
        x = a[j + 1:, j].copy()
        norm = np.linalg.norm(x)
        if norm == 0.0:
            raise DegenerateInputError(f"zero pivot column at step {j}")
        v = x.copy()
        v[0] += np.copysign(norm, x[0]) if x[0] != 0 else norm
        v /= np.linalg.norm(v)
        sub = a[j + 1:, j + 1:]
        # two-sided reflector application; anti-symmetry is preserved exactly
        w = a[j + 1:, j] - 2.0 * v * (v @ a[j + 1:, j])
        sub -= 2.0 * np.outer(v, v @ sub)
        sub -= 2.0 * np.outer(sub @ v, v)
        a[j + 1:, j] = w
        a[j, j + 1:] = -w
    sup = np.array([a[i, i + 1] for i in range(n - 1)])
    # diagonal +-1 similarity to enforce positive superdiagonal
    sign = 1.0
    for i in range(n - 1):
        sup[i] *= sign
        if sup[i] < 0:
            sup[i] = -sup[i]
            sign = -sign
        elif sup[i] == 0.0:
            raise DegenerateInputError("exact zero off-diagonal produced")
        else:
            sign = 1.0 * sign
    return AntisymTridiagonal(sup[::-1])


def build_laguerre_bidiagonal(n: int, a: float, beta: float, stream: RandomStream) -> LowerBidiagonal:
    """Square bidiagonal chi matrix: diagonal ``chi_{2a}, chi_{2a-beta}, ...``,
    subdiagonal ``chi_{(n-1)beta}, ..., chi_beta`` (standard chi convention)."""
    if n < 1:
        raise SizeError("need n >= 1")
    if not beta > 0:
        raise ParameterError("beta must be positive")
    if not 2 * a - (n - 1) * beta > 0:
        raise ParameterError("need 2a - (n-1)*beta > 0")
    d = np.array([sample_standard_chi(2 * a - j * beta, stream) for j in range(n)])
    e = np.array([sample_standard_chi((n - 1 - j) * beta, stream) for j in range(n - 1)])
    return LowerBidiagonal(d, e, rows=n)


def build_c_matrix(k: int, beta: float, stream: RandomStream) -> LowerBidiagonal:
    """The (k+1) x k bidiagonal chi matrix obtained from the odd-case block
    construction after removing the trailing zero column: diagonal
    ``chi_{k*beta}, ..., chi_beta``, subdiagonal ``chi_{(2k-1)beta/2}, ..., chi_{beta/2}``.
    """
    if k < 1:
        raise SizeError("need k >= 1")
    if not beta > 0:
        raise ParameterError("beta must be positive")
    d = np.array([sample_standard_chi((k - j) * beta, stream) for j in range(k)])
    e = np.array([sample_standard_chi((2 * (k - j) - 1) * beta / 2.0, stream) for j in range(k)])
    return LowerBidiagonal(d, e, rows=k + 1)
