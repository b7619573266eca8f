"""Construction and validation of cross-correlation matrices.

The N x N matrix eta couples the two data matrices of the product ensemble.
Admissibility means the 2N x 2N covariance [[I, eta], [eta^t, I]] is positive
definite, which is equivalent to sigma_max(eta) < 1; that is the single gate
enforced here (the eigenvalue-modulus bound follows from it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidCorrelation, NoConvergence

KINDS = ("zero", "diagonal", "equal", "tridiagonal", "dense")

NORMALITY_REL_TOL = 1e-12     # ||eta eta^t - eta^t eta||_max <= tol * sigma_max^2
POWER_ITER_REL_TOL = 1e-10
POWER_ITER_MAX = 10_000


@dataclass
class EtaSpec:
    """Structured description of a cross-correlation matrix.

    kind is one of "zero", "diagonal", "equal", "tridiagonal", "dense";
    c is the diagonal value, p/q the sub/super-diagonal values for the
    tridiagonal kind, rows the explicit matrix for the dense kind.
    """

    kind: str
    n: int
    c: float = 0.0
    p: float = 0.0
    q: float = 0.0
    rows: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidCorrelation(f"unknown eta kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise InvalidCorrelation(f"matrix dimension must be >= 1, got {self.n}")
        for name in ("c", "p", "q"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidCorrelation(f"parameter {name} is not finite")
        if self.kind == "equal" and not 0.0 <= self.c <= 1.0 / self.n:
            raise InvalidCorrelation(
                f"equal-cross value c={self.c} outside the admissible range [0, 1/N] = [0, {1.0 / self.n}]"
            )
        if self.kind == "dense":
            if self.rows is None:
                raise InvalidCorrelation("dense eta spec needs explicit rows")
            self.rows = np.asarray(self.rows, dtype=float)
            if self.rows.shape != (self.n, self.n):
                raise DimensionError(
                    f"dense rows must be {self.n}x{self.n}, got shape {self.rows.shape}"
                )
            if not np.all(np.isfinite(self.rows)):
                raise InvalidCorrelation("dense eta has non-finite entries")

    @classmethod
    def zero(cls, n: int) -> "EtaSpec":
        return cls("zero", n)

    @classmethod
    def diagonal(cls, c: float, n: int) -> "EtaSpec":
        return cls("diagonal", n, c=c)

    @classmethod
    def equal_cross(cls, c: float, n: int) -> "EtaSpec":
        return cls("equal", n, c=c)

    @classmethod
    def tridiagonal(cls, c: float, p: float, q: float, n: int) -> "EtaSpec":
        return cls("tridiagonal", n, c=c, p=p, q=q)

    @classmethod
    def dense(cls, rows, n: int | None = None) -> "EtaSpec":
        rows = np.asarray(rows, dtype=float)
        return cls("dense", n if n is not None else rows.shape[0], rows=rows)

    @classmethod
    def from_dict(cls, d: dict, n: int | None = None) -> "EtaSpec":
        """Build from the JSON form {"kind": ..., "c": ..., "p": ..., "q": ..., "rows": ...}."""
        if not isinstance(d, dict) or "kind" not in d:
            raise InvalidCorrelation("eta spec must be an object with a 'kind' field")
        kind = d["kind"]
        dim = d.get("n", n)
        if kind == "dense" and dim is None:
            dim = len(d.get("rows", []))
        if dim is None:
            raise InvalidCorrelation("eta spec needs a dimension (top-level n)")
        return cls(
            kind,
            int(dim),
            c=float(d.get("c", 0.0)),
            p=float(d.get("p", 0.0)),
            q=float(d.get("q", 0.0)),
            rows=d.get("rows"),
        )

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind in ("diagonal", "equal", "tridiagonal"):
            out["c"] = self.c
        if self.kind == "tridiagonal":
            out["p"] = self.p
            out["q"] = self.q
        if self.kind == "dense":
            out["rows"] = np.asarray(self.rows).tolist()
        return out

    def materialize(self) -> np.ndarray:
        n = self.n
        if self.kind == "zero":
            return np.zeros((n, n))
        if self.kind == "diagonal":
            return np.diag(np.full(n, self.c))
        if self.kind == "equal":
            return np.full((n, n), self.c)
        if self.kind == "tridiagonal":
            m = np.diag(np.full(n, self.c))
            if n > 1:
                m += np.diag(np.full(n - 1, self.p), -1)
                m += np.diag(np.full(n - 1, self.q), 1)
            return m
        return np.array(self.rows, dtype=float)


@dataclass
class EtaMatrix:
    """Materialized eta with its largest singular value and normality flag."""

    data: np.ndarray
    sigma_max: float
    is_normal: bool
    spec: EtaSpec | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.data.shape[0]


def _largest_singular_value(m: np.ndarray) -> float:
    """Power iteration on eta^t eta (relative tolerance 1e-10, max 10000 iters);
    falls back to a full symmetric eigensolve for n <= 1024."""
    n = m.shape[0]
    g = m.T @ m
    scale = np.abs(g).max()
    if scale == 0.0:
        return 0.0
    # deterministic start with a mild tilt so it is not orthogonal to the top space
    v = 1.0 + np.arange(n) / max(n - 1, 1)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(POWER_ITER_MAX):
        w = g @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_new = float(v @ (g @ v))
        if abs(lam_new - lam) <= POWER_ITER_REL_TOL * abs(lam_new):
            return math.sqrt(max(lam_new, 0.0))
        lam = lam_new
    if n <= 1024:
        evals = np.linalg.eigvalsh(g)
        return math.sqrt(max(float(evals[-1]), 0.0))
    raise NoConvergence("power iteration for sigma_max did not converge and n > 1024")


def make_eta(spec: EtaSpec) -> EtaMatrix:
    """Materialize an admissible eta; rejects sigma_max >= 1 (xi not positive definite)."""
    data = spec.materialize()
    sigma = _largest_singular_value(data)
    if sigma >= 1.0:
        raise InvalidCorrelation(
            f"sigma_max(eta) = {sigma:.6g} >= 1: block covariance is not positive definite"
        )
    comm = data @ data.T - data.T @ data
    normal = bool(np.abs(comm).max() <= NORMALITY_REL_TOL * sigma**2)
    return EtaMatrix(data=data, sigma_max=sigma, is_normal=normal, spec=spec)


def tridiagonal_spectrum(c: float, p: float, q: float, n: int) -> np.ndarray:
    """Eigenvalues c + 2*sqrt(p*q)*cos(j*pi/(n+1)), j = 1..n, in index order.

    For p*q < 0 the square root is taken as i*sqrt(|p*q|), so the spectrum is
    shifted onto a vertical segment.
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    pq = p * q
    root = complex(math.sqrt(pq)) if pq >= 0 else 1j * math.sqrt(-pq)
    j = np.arange(1, n + 1)
    return c + 2.0 * root * np.cos(j * np.pi / (n + 1))


def split_parts(eta: EtaMatrix | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric/antisymmetric decomposition (eta_S, eta_A) with eta_S + eta_A = eta."""
    m = eta.data if isinstance(eta, EtaMatrix) else np.asarray(eta, dtype=float)
    sym = 0.5 * (m + m.T)
    return sym, m - sym
