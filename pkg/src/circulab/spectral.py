"""Spectral engine: circulant eigenvalues, dense SVD, Schur block, interlacing.

Eigenvalue vectors are complex arrays in DFT order (index k matters and is
never sorted); singular value vectors are real arrays sorted descending.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .matrices import (
    CirculantSpec,
    SymmetricCirculantSpec,
    ToeplitzSpec,
    embed_toeplitz,
    materialize_circulant,
    materialize_toeplitz,
)

__all__ = [
    "SingularEmbeddingError",
    "ConvergenceError",
    "ConditionReport",
    "SchurBlock",
    "SigmaMinResult",
    "InterlacingReport",
    "circulant_eigenvalues",
    "symmetric_circulant_eigenvalues",
    "circulant_extremes",
    "dense_svd",
    "sigma_min_fast",
    "build_schur_block",
    "schur_block_oracle",
    "verify_interlacing",
    "cauchy_interlacing_check",
    "spectrum_to_csv",
    "singular_values_to_csv",
    "schur_block_to_csv",
]


class SingularEmbeddingError(ValueError):
    """Raised when some |G_2n(w^k)| falls at or below the singular tolerance."""

    def __init__(self, index: int, magnitude: float):
        self.index = int(index)
        self.magnitude = float(magnitude)
        super().__init__(f"singular embedding: |G(w^{index})| = {magnitude:.3e}")


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine exhausts its sweep/iteration budget."""


def default_singular_tolerance(eigenvalues: np.ndarray) -> float:
    """Dimension-scaled cutoff separating exact zeros from roundoff: 1e-12 * n * max|lambda|."""
    return 1e-12 * eigenvalues.size * float(np.max(np.abs(eigenvalues)))


def circulant_eigenvalues(spec: CirculantSpec) -> np.ndarray:
    """Eigenvalues lambda_k = sum_j xi_j exp(2i pi jk / n), k = 0..n-1, via FFT."""
    return np.fft.ifft(spec.first_row.values) * spec.n


def symmetric_circulant_eigenvalues(spec: SymmetricCirculantSpec) -> np.ndarray:
    """Real eigenvalues of a symmetric circulant by the cosine formulas.

    n odd:  lambda_k = xi_0 + 2 sum_{j=1}^{floor(n/2)} xi_j cos(2 pi k j / n)
    n even: lambda_k = xi_0 + 2 sum_{j=1}^{n/2-1} xi_j cos(2 pi k j / n) + (-1)^k xi_{n/2}

    Satisfies lambda_k = lambda_{n-k} and agrees with ``circulant_eigenvalues``
    on the expanded first row to 1e-10.
    """
    n = spec.n
    free = spec.free_coeffs.values
    h = n // 2
    k = np.arange(n)
    top = h if n % 2 == 1 else h - 1
    lam = np.full(n, free[0])
    if top >= 1:
        j = np.arange(1, top + 1)
        lam = lam + 2.0 * np.cos(2.0 * np.pi / n * np.outer(k, j)) @ free[1 : top + 1]
    if n % 2 == 0 and n >= 2:
        lam = lam + np.where(k % 2 == 0, 1.0, -1.0) * free[h]
    return lam


@dataclass(frozen=True)
class ConditionReport:
    """Extreme singular values and condition number; kappa is inf when singular."""

    sigma_max: float
    sigma_min: float
    kappa: float
    singular: bool


def circulant_extremes(eigenvalues: np.ndarray, singular_tolerance: float | None = None) -> ConditionReport:
    """Extremes from a circulant spectrum: normality gives sigma = |lambda|."""
    eigenvalues = np.asarray(eigenvalues)
    if eigenvalues.size == 0:
        raise ValueError("empty spectrum")
    mags = np.abs(eigenvalues)
    smax = float(mags.max())
    smin = float(mags.min())
    if singular_tolerance is None:
        singular_tolerance = default_singular_tolerance(eigenvalues)
    singular = smin <= singular_tolerance
    kappa = np.inf if singular else smax / smin
    return ConditionReport(smax, smin, kappa, singular)


def _round_robin_rounds(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Tournament schedule: n-1 rounds of disjoint column pairs covering all pairs.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ii = []
        jj = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ii.append(min(a, b))
                jj.append(max(a, b))
        rounds.append((np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def dense_svd(m: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """Singular values by one-sided Jacobi iteration, sorted descending.

    Column pairs are orthogonalized with exact 2x2 unitary rotations in a
    deterministic round-robin order; a sweep visits every pair once.  The
    iteration stops when every off-diagonal Gram entry satisfies
    |a_i* a_j| <= tol * ||a_i|| ||a_j||, which preserves high relative
    accuracy in the small singular values.  Real input stays in real
    arithmetic.

    Raises :class:`ConvergenceError` after ``max_sweeps`` sweeps.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"need a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or (np.iscomplexobj(m) and not np.all(np.isfinite(m.imag))):
        raise ValueError("matrix has non-finite entries")
    complex_input = np.iscomplexobj(m) and bool(np.any(m.imag != 0.0))
    if complex_input:
        a = np.array(m, dtype=np.complex128, order="F")
    else:
        a = np.array(m.real if np.iscomplexobj(m) else m, dtype=np.float64, order="F")
    if a.shape[0] < a.shape[1]:
        a = np.asfortranarray(a.T)  # singular values are transpose-invariant
    rows, n = a.shape
    if n == 1:
        return np.array([float(np.linalg.norm(a[:, 0]))])

    def _col_norms2(x):
        if complex_input:
            return np.einsum("ij,ij->j", x.real, x.real) + np.einsum("ij,ij->j", x.imag, x.imag)
        return np.einsum("ij,ij->j", x, x)

    rounds = _round_robin_rounds(n)
    off_max = np.inf
    for sweep in range(max_sweeps):
        norms2 = _col_norms2(a)
        off_max = 0.0
        for ii, jj in rounds:
            u = a[:, ii]
            v = a[:, jj]
            gamma = np.einsum("ij,ij->j", u.conj(), v)
            alpha = norms2[ii]
            beta = norms2[jj]
            g = np.abs(gamma)
            denom = np.sqrt(alpha * beta)
            with np.errstate(invalid="ignore", divide="ignore"):
                rel = np.where(denom > 0.0, g / denom, 0.0)
            rmax = float(rel.max())
            if rmax > off_max:
                off_max = rmax
            rot = rel > tol
            if not rot.any():
                continue
            if not rot.all():
                ii = ii[rot]
                jj = jj[rot]
                u = u[:, rot]
                v = v[:, rot]
                gamma = gamma[rot]
                g = g[rot]
                alpha = alpha[rot]
                beta = beta[rot]
            phase = gamma / g
            diff = beta - alpha
            with np.errstate(over="ignore", invalid="ignore"):
                zeta = diff / (2.0 * g)
                root = np.sqrt(1.0 + zeta * zeta)
                t = np.sign(zeta) / (np.abs(zeta) + root)
            # norm ratios beyond ~1e154 overflow zeta^2; use the small-angle
            # limit t -> g / (beta - alpha), which is the projection step
            extreme = ~np.isfinite(root * zeta)
            if extreme.any():
                t[extreme] = g[extreme] / diff[extreme]
            t[zeta == 0.0] = 1.0  # equal norms: rotate by 45 degrees
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            a[:, ii] = c * u - (s * np.conj(phase)) * v
            a[:, jj] = (s * phase) * u + c * v
            cross = 2.0 * c * s * g
            norms2[ii] = np.maximum(c * c * alpha + s * s * beta - cross, 0.0)
            norms2[jj] = np.maximum(s * s * alpha + c * c * beta + cross, 0.0)
        if off_max <= tol:
            break
    else:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge for a {rows}x{n} matrix within "
            f"{max_sweeps} sweeps (max off-diagonal ratio {off_max:.3e})"
        )
    sv = np.sqrt(_col_norms2(a))
    sv[::-1].sort()
    return sv


@dataclass(frozen=True)
class SigmaMinResult:
    """Smallest singular value from the LU / inverse-iteration fast path."""

    value: float
    singular: bool = False
    used_fallback: bool = False


_INVITER_SEED = 0x5159A17E


def sigma_min_fast(m: np.ndarray, tol: float = 1e-10, max_iter: int = 500) -> SigmaMinResult:
    """Smallest singular value via LU with partial pivoting plus inverse iteration.

    Block power iteration of width two on (m* m)^{-1} through the
    factorization's triangular solves (one step per column is w = m^{-*} v,
    z = m^{-1} w).  A two-dimensional block keeps the convergence rate at
    (sigma_min / sigma_3)^2 even when the two smallest singular values are
    nearly tied, which stalls a single vector.  The Rayleigh-Ritz value mu
    estimates 1 / sigma_min^2 and the Ritz residual ||H^{-1} u - mu u||
    certifies its error to within ``tol * mu``.  An exactly singular LU (zero
    pivot) returns the ``singular`` flag; exceeding ``max_iter`` iterations
    falls back to :func:`dense_svd`.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"need a square matrix, got shape {m.shape}")
    n = m.shape[0]
    with warnings.catch_warnings():
        # an exactly zero pivot is handled via the singular flag below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(m, check_finite=False)
    if float(np.min(np.abs(np.diag(lu)))) == 0.0:
        return SigmaMinResult(0.0, singular=True)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(_INVITER_SEED)))
    width = min(2, n)
    v = rng.standard_normal((n, width))
    if np.iscomplexobj(lu):
        v = v + 1j * rng.standard_normal((n, width))
    v, _ = np.linalg.qr(v)
    for _ in range(max_iter):
        w = lu_solve((lu, piv), v, trans=2, check_finite=False)
        z = lu_solve((lu, piv), w, trans=0, check_finite=False)  # H^{-1} V
        b = v.conj().T @ z
        b = (b + b.conj().T) / 2.0
        theta, y = np.linalg.eigh(b)
        mu = float(theta[-1])
        if not np.isfinite(mu) or mu <= 0.0:
            break
        ritz = v @ y[:, -1]
        resid = float(np.linalg.norm(z @ y[:, -1] - mu * ritz))
        if resid <= tol * mu:
            return SigmaMinResult(1.0 / np.sqrt(mu))
        v, _ = np.linalg.qr(z)
    sv = dense_svd(m)
    return SigmaMinResult(float(sv[-1]), used_fallback=True)


@dataclass(frozen=True, eq=False)
class SchurBlock:
    """Trailing n x n block of C_2n^{-1} with the two spectral weight lists.

    ``diag1`` and ``diag2`` hold the reciprocal eigenvalues 1/G_2n(w^k) for
    k = 0..n-1 and k = n..2n-1, the diagonals of the blocked spectral factor.
    """

    n: int
    matrix: np.ndarray
    diag1: np.ndarray
    diag2: np.ndarray


def _schur_from_eigenvalues(lam: np.ndarray, singular_tolerance: float | None = None) -> SchurBlock:
    big_n = lam.size
    n = big_n // 2
    if singular_tolerance is None:
        singular_tolerance = default_singular_tolerance(lam)
    mags = np.abs(lam)
    bad = np.flatnonzero(mags <= singular_tolerance)
    if bad.size:
        k = int(bad[0])
        raise SingularEmbeddingError(k, float(mags[k]))
    weights = 1.0 / lam
    # First row of the inverse circulant; its (i, j) entry is row[(j-i) mod 2n],
    # so the trailing block equals the leading block and is wrap-around Toeplitz.
    row = np.fft.fft(weights) / big_n
    j = np.arange(n)
    s = row[(j[None, :] - j[:, None]) % big_n]
    return SchurBlock(n, s, weights[:n].copy(), weights[n:].copy())


def build_schur_block(spec: CirculantSpec, singular_tolerance: float | None = None) -> SchurBlock:
    """Assemble S_n from the Fourier block partition of C_2n^{-1}.

    With F the unitary DFT matrix of size 2n partitioned into n x n blocks
    [[F1, F2], [F3, F4]], the trailing block of C^{-1} = F* diag(1/lambda) F
    is S = F2* D1 F2 + F4* D2 F4 with D1, D2 the two halves of the reciprocal
    spectrum.  That sum collapses to the inverse DFT of the reciprocal
    eigenvalues, which is how it is evaluated here; ``schur_block_oracle``
    checks the result against dense inversion.

    Raises :class:`SingularEmbeddingError` if any |G_2n(w^k)| is at or below
    the tolerance (default ``1e-12 * 2n * max|lambda|``).
    """
    if spec.n % 2 != 0:
        raise ValueError("Schur block needs an even-dimensional circulant (size 2n)")
    lam = circulant_eigenvalues(spec)
    return _schur_from_eigenvalues(lam, singular_tolerance)


def schur_block_oracle(spec: CirculantSpec) -> SchurBlock:
    """Reference S_n: materialize C_2n, invert densely, extract the trailing block."""
    if spec.n % 2 != 0:
        raise ValueError("Schur block needs an even-dimensional circulant (size 2n)")
    n = spec.n // 2
    c = materialize_circulant(spec)
    inv = np.linalg.inv(c)
    lam = circulant_eigenvalues(spec)
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = 1.0 / lam
    return SchurBlock(n, inv[n:, n:].copy(), weights[:n], weights[n:])


@dataclass(frozen=True, eq=False)
class InterlacingReport:
    """Margins for the circulant-embedding singular value inequalities.

    clause_a: sigma_max(C_2n) >= sigma_max([T; B]) and sigma_n([T; B]) >= sigma_min(C_2n)
    clause_b: sigma_i(T_n) <= sigma_i(C_2n) for every i
    clause_c: sigma_min(C)^2 sigma_i(S) <= sigma_i(T) <= sigma_max(C)^2 sigma_i(S)

    Margins are the smallest slacks (negative means violated beyond
    tolerance); clause_c is ``None`` when the embedding is singular.
    """

    clause_a: bool
    clause_b: bool
    clause_c: bool | None
    margin_a: float
    margin_b: float
    margin_c: float | None
    singular_embedding: bool
    sigma_c: np.ndarray
    sigma_t: np.ndarray
    sigma_a: np.ndarray
    sigma_s: np.ndarray | None

    @property
    def ok(self) -> bool:
        return self.clause_a and self.clause_b and self.clause_c is not False


def verify_interlacing(spec: ToeplitzSpec, xi_star: float, rtol: float = 1e-8) -> InterlacingReport:
    """Check the embedding inequalities for one Toeplitz draw at tolerance rtol * sigma_max(C_2n)."""
    n = spec.n
    cspec = embed_toeplitz(spec, xi_star)
    lam = circulant_eigenvalues(cspec)
    sigma_c = np.sort(np.abs(lam))[::-1]
    tol = rtol * float(sigma_c[0]) if sigma_c[0] > 0 else rtol
    cmat = materialize_circulant(cspec)
    stack = cmat[:, :n]  # the first n columns of C_2n are exactly [T; B]
    sigma_a = dense_svd(stack)
    sigma_t = dense_svd(materialize_toeplitz(spec))

    margin_a = min(
        float(sigma_c[0] - sigma_a[0]),
        float(sigma_a[n - 1] - sigma_c[-1]),
    )
    clause_a = margin_a >= -tol

    margin_b = float(np.min(sigma_c[:n] - sigma_t))
    clause_b = margin_b >= -tol

    sigma_s = None
    margin_c = None
    clause_c: bool | None = None
    singular = False
    try:
        block = _schur_from_eigenvalues(lam)
    except SingularEmbeddingError:
        singular = True
    else:
        sigma_s = dense_svd(block.matrix)
        lower = float(sigma_c[-1]) ** 2 * sigma_s
        upper = float(sigma_c[0]) ** 2 * sigma_s
        margin_c = min(float(np.min(sigma_t - lower)), float(np.min(upper - sigma_t)))
        clause_c = margin_c >= -tol

    return InterlacingReport(
        clause_a=clause_a,
        clause_b=clause_b,
        clause_c=clause_c,
        margin_a=margin_a,
        margin_b=margin_b,
        margin_c=margin_c,
        singular_embedding=singular,
        sigma_c=sigma_c,
        sigma_t=sigma_t,
        sigma_a=sigma_a,
        sigma_s=sigma_s,
    )


def cauchy_interlacing_check(m: np.ndarray, rtol: float = 1e-9) -> bool:
    """Verify singular value interlacing across all column prefixes of m.

    For A_r the first r columns, checks sigma_i(A_{r+1}) >= sigma_i(A_r) >=
    sigma_{i+1}(A_{r+1}) for every r and i, at tolerance rtol * sigma_1(m).
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] < m.shape[1]:
        raise ValueError(f"need rows >= cols, got shape {m.shape}")
    cols = m.shape[1]
    prefix_svs = [dense_svd(m[:, : r + 1]) for r in range(cols)]
    tol = rtol * float(prefix_svs[-1][0])
    for r in range(cols - 1):
        small = prefix_svs[r]
        big = prefix_svs[r + 1]
        if np.any(big[: r + 1] < small - tol):
            return False
        if np.any(small < big[1 : r + 2] - tol):
            return False
    return True


def spectrum_to_csv(eigenvalues: np.ndarray, path) -> None:
    """Write ``k,re,im`` rows in DFT order."""
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "re", "im"])
        for k, lam in enumerate(eigenvalues):
            w.writerow([k, repr(float(lam.real)), repr(float(lam.imag))])


def singular_values_to_csv(values: np.ndarray, path) -> None:
    """Write ``i,sigma`` rows, i = 1-based rank."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "sigma"])
        for i, s in enumerate(np.asarray(values, dtype=float), start=1):
            w.writerow([i, repr(float(s))])


def schur_block_to_csv(block: SchurBlock, path) -> None:
    """Write the block in long form ``i,j,re,im`` for cross-tool inspection."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "re", "im"])
        for i in range(block.n):
            for j in range(block.n):
                z = block.matrix[i, j]
                w.writerow([i, j, repr(float(z.real)), repr(float(z.imag))])
