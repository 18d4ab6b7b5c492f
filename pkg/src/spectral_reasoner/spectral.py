"""Spectral engine: eigendecomposition, Chebyshev filters, exact and
recursion-based filtering, template banks, and coefficient fitting.

The exact path goes through the graph Fourier basis (U h(Λ) Uᵀ x); the fast
path evaluates the same polynomial directly on the Laplacian via the
three-term recurrence and never decomposes, so it scales with K·nnz(L).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, NumericalError, ShapeError


@dataclass(frozen=True)
class SpectralBasis:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.eigenvalues.size else 0.0

    @property
    def n(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class ChebFilter:
    coeffs: tuple[float, ...]
    lambda_max: float

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a filter needs at least one coefficient")
        if not all(np.isfinite(self.coeffs)):
            raise ValueError(f"non-finite coefficients: {self.coeffs}")
        if not (self.lambda_max > 0):
            raise DegenerateSpectrumError(f"lambda_max must be > 0, got {self.lambda_max}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> str:
        return json.dumps({"coeffs": list(self.coeffs), "lambda_max": self.lambda_max},
                          sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ChebFilter":
        obj = json.loads(text)
        return cls(coeffs=tuple(obj["coeffs"]), lambda_max=float(obj["lambda_max"]))


@dataclass(frozen=True)
class TemplateBank:
    templates: tuple[tuple[str, ChebFilter], ...]

    def __post_init__(self):
        ids = [rid for rid, _ in self.templates]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate rule ids in template bank")

    def to_json(self) -> str:
        items = [{"rule": rid, "coeffs": list(f.coeffs), "lambda_max": f.lambda_max}
                 for rid, f in self.templates]
        return json.dumps(items, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TemplateBank":
        items = json.loads(text)
        return cls(templates=tuple(
            (it["rule"], ChebFilter(coeffs=tuple(it["coeffs"]),
                                    lambda_max=float(it["lambda_max"])))
            for it in items))


def eigendecompose(L: np.ndarray) -> SpectralBasis:
    """Symmetric eigendecomposition with ascending eigenvalues and a fixed
    sign convention: each eigenvector's largest-magnitude entry (first on
    ties) is made non-negative."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {L.shape}")
    if L.size and np.max(np.abs(L - L.T)) > 1e-10:
        raise ShapeError("matrix is not symmetric within 1e-10")
    if L.shape[0] == 0:
        return SpectralBasis(eigenvalues=np.zeros(0), eigenvectors=np.zeros((0, 0)))
    try:
        lam, u = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed to converge: {exc}") from exc
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    u = u[:, order]
    for k in range(u.shape[1]):
        col = u[:, k]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            u[:, k] = -col
    lam.setflags(write=False)
    u.setflags(write=False)
    return SpectralBasis(eigenvalues=lam, eigenvectors=u)


def rescale(lam: float, lambda_max: float) -> float:
    """Map [0, lambda_max] linearly onto [-1, 1]."""
    if not (lambda_max > 0):
        raise DegenerateSpectrumError(f"cannot rescale with lambda_max={lambda_max}")
    return 2.0 * lam / lambda_max - 1.0


def _cheb_series(coeffs, t: np.ndarray) -> np.ndarray:
    """Σ θ_k T_k(t) by the T recurrence; t may be scalar or array."""
    t = np.asarray(t, dtype=float)
    acc = np.full_like(t, coeffs[0], dtype=float)
    if len(coeffs) == 1:
        return acc
    t_prev = np.ones_like(t)
    t_cur = t.copy()
    acc = acc + coeffs[1] * t_cur
    for theta in coeffs[2:]:
        t_prev, t_cur = t_cur, 2.0 * t * t_cur - t_prev
        acc = acc + theta * t_cur
    return acc


def cheb_eval(filt: ChebFilter, lam) -> float | np.ndarray:
    """Filter response h(λ); eigenvalues slightly outside [0, λ_max] clamp
    to the interval ends."""
    t = np.clip(2.0 * np.asarray(lam, dtype=float) / filt.lambda_max - 1.0, -1.0, 1.0)
    out = _cheb_series(filt.coeffs, t)
    return float(out) if np.ndim(lam) == 0 else out


def filter_exact(basis: SpectralBasis, filt: ChebFilter, x) -> np.ndarray:
    """y = U h(Λ) Uᵀ x via forward transform, frequency-wise scaling,
    inverse transform."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise ShapeError(f"signal length {x.shape} does not match basis size {basis.n}")
    if basis.n == 0:
        return x.copy()
    xhat = basis.eigenvectors.T @ x
    yhat = cheb_eval(filt, basis.eigenvalues) * xhat
    return basis.eigenvectors @ yhat


def filter_fast(L, filt: ChebFilter, x) -> np.ndarray:
    """Σ θ_k T_k(L̃) x with L̃ = (2/λ_max) L − I, no eigendecomposition.

    Requires filt.lambda_max to upper-bound the true spectral radius of L;
    accepts dense arrays or scipy sparse matrices.
    """
    x = np.asarray(x, dtype=float)
    n = L.shape[0]
    if L.shape != (n, n) or x.shape != (n,):
        raise ShapeError(f"incompatible shapes L={L.shape}, x={x.shape}")
    scale = 2.0 / filt.lambda_max

    def shifted(v):
        return scale * (L @ v) - v

    coeffs = filt.coeffs
    t_prev = x
    acc = coeffs[0] * x
    if len(coeffs) == 1:
        return acc
    t_cur = shifted(x)
    acc = acc + coeffs[1] * t_cur
    for theta in coeffs[2:]:
        t_prev, t_cur = t_cur, 2.0 * shifted(t_cur) - t_prev
        acc = acc + theta * t_cur
    return acc


def estimate_lambda_max(L, iters: int = 100, seed: int = 0) -> float:
    """Power-iteration bound on the largest eigenvalue, inflated by 1% so
    Chebyshev rescaling stays inside [-1, 1]."""
    n = L.shape[0]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = L @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        est = float(v @ w)
        v = w / norm
    return abs(est) * 1.01


def apply_bank(bank: TemplateBank, basis_or_l, x) -> dict[str, np.ndarray]:
    """Per-rule filtered signals; composition/pooling is caller policy."""
    out = {}
    for rid, filt in bank.templates:
        if isinstance(basis_or_l, SpectralBasis):
            out[rid] = filter_exact(basis_or_l, filt, x)
        else:
            out[rid] = filter_fast(basis_or_l, filt, x)
    return out


def lowpass_filter(lambda_max: float, order: int = 8, decay: float = 1.0) -> ChebFilter:
    """Chebyshev expansion of exp(-decay·λ) on [0, lambda_max]; the default
    belief-smoothing profile."""
    if not (lambda_max > 0):
        raise DegenerateSpectrumError(f"lambda_max must be > 0, got {lambda_max}")
    coeffs = np.polynomial.chebyshev.chebinterpolate(
        lambda t: np.exp(-decay * (t + 1.0) * lambda_max / 2.0), order)
    return ChebFilter(coeffs=tuple(float(c) for c in coeffs), lambda_max=lambda_max)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def cheb_features(basis: SpectralBasis, x, order: int) -> np.ndarray:
    """Matrix F with columns F_k = U (T_k(λ̃) ⊙ Uᵀx), so that the filtered
    signal is F @ θ. Shared by fitting and the gradient check."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise ShapeError(f"signal length {x.shape} does not match basis size {basis.n}")
    lmax = basis.lambda_max
    t = np.clip(2.0 * basis.eigenvalues / lmax - 1.0, -1.0, 1.0) if lmax > 0 \
        else np.full(basis.n, -1.0)
    xhat = basis.eigenvectors.T @ x
    cols = []
    t_prev = np.ones_like(t)
    t_cur = t.copy()
    for k in range(order + 1):
        if k == 0:
            tk = t_prev
        elif k == 1:
            tk = t_cur
        else:
            t_prev, t_cur = t_cur, 2.0 * t * t_cur - t_prev
            tk = t_cur
        cols.append(basis.eigenvectors @ (tk * xhat))
    return np.column_stack(cols)


def fit_loss_grad(features: np.ndarray, theta: np.ndarray, targets: np.ndarray
                  ) -> tuple[float, np.ndarray]:
    """Mean squared error between sigmoid(F θ) and targets, with its
    analytic gradient ∂loss/∂θ."""
    n = features.shape[0]
    y = features @ theta
    p = _sigmoid(y)
    resid = p - targets
    loss = float(np.mean(resid ** 2))
    grad = features.T @ (2.0 / n * resid * p * (1.0 - p))
    return loss, grad


def fit_filter(basis: SpectralBasis, x, targets, order: int,
               steps: int = 2000, lr: float = 1.0) -> ChebFilter:
    """Fit coefficients by full-batch gradient descent on sigmoid-MSE.

    The step size adapts (halve on an increase, mild growth on a decrease),
    and the best coefficients seen are returned, so the final loss never
    exceeds the initial one. lr = 0 leaves the coefficients untouched.
    """
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (basis.n,):
        raise ShapeError(f"targets length {targets.shape} does not match basis size {basis.n}")
    if order < 0:
        raise ValueError(f"negative filter order: {order}")
    features = cheb_features(basis, x, order)
    theta = np.zeros(order + 1)
    loss, grad = fit_loss_grad(features, theta, targets)
    best_theta, best_loss = theta.copy(), loss
    step_size = lr
    for step in range(steps):
        if step_size == 0.0:
            break
        candidate = theta - step_size * grad
        new_loss, new_grad = fit_loss_grad(features, candidate, targets)
        if not np.isfinite(new_loss):
            raise NumericalError(f"fit diverged at step {step}", step=step)
        if new_loss <= loss:
            theta, loss, grad = candidate, new_loss, new_grad
            step_size *= 1.05
            if loss < best_loss:
                best_theta, best_loss = theta.copy(), loss
        else:
            step_size *= 0.5
    lmax = basis.lambda_max if basis.lambda_max > 0 else 1.0
    return ChebFilter(coeffs=tuple(best_theta), lambda_max=lmax)
