"""Sampling of the coupled Gaussian pair (A, B) and reproducible ensembles.

B is built conditionally on A: with S = (I - eta^t eta)^(1/2),
A = X and B = eta^t X + S Y for independent standard-normal X, Y; this has
exactly the block covariance [[I, eta], [eta^t, I]] at half the cost of a
2N x 2N square root.

Every realization owns an independent counter-based random stream keyed by a
64-bit mix of (master_seed, index), so ensembles are bit-identical regardless
of how many workers run them.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correlation import EtaMatrix, EtaSpec, make_eta
from .errors import DimensionError, EnsembleError
from .linalg import ComplexSpectrum, nonsym_eigenvalues, singular_values, symmetric_sqrt

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

ZERO_EIG_TOL = 1e-8   # modulus below which an eigenvalue counts as an exact-rank zero


def sub_seed_for(master_seed: int, index: int) -> int:
    """Splittable 64-bit mix of (master_seed, realization index) (splitmix64 finalizer)."""
    z = (master_seed + (index + 1) * _GOLDEN) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


class NormalStream:
    """Deterministic standard normals: Philox counter stream + Marsaglia polar transform.

    The polar method is used instead of the generator's native ziggurat so the
    normal stream depends only on the (stable) uniform output of Philox.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._gen = np.random.Generator(np.random.Philox(key=seed))

    def normals(self, shape) -> np.ndarray:
        count = int(np.prod(shape))
        out = np.empty(count)
        filled = 0
        while filled < count:
            pairs_needed = (count - filled + 1) // 2
            # acceptance rate is pi/4; oversample slightly to keep the loop short
            batch = max(256, int(pairs_needed / 0.75) + 16)
            u = 2.0 * self._gen.random(batch) - 1.0
            v = 2.0 * self._gen.random(batch) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            s_ok = s[ok]
            m = np.sqrt(-2.0 * np.log(s_ok) / s_ok)
            block = np.empty(2 * len(s_ok))
            block[0::2] = u[ok] * m
            block[1::2] = v[ok] * m
            take = min(len(block), count - filled)
            out[filled:filled + take] = block[:take]
            filled += take
        return out.reshape(shape)


@dataclass
class EnsembleConfig:
    """One Monte-Carlo experiment: dimensions, realization count, seed, eta."""

    n: int
    t: int
    realizations: int
    master_seed: int
    eta: EtaSpec

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise DimensionError(f"n and t must be >= 1, got n={self.n}, t={self.t}")
        if self.realizations < 1:
            raise DimensionError(f"realizations must be >= 1, got {self.realizations}")
        if self.eta.n != self.n:
            raise DimensionError(f"eta dimension {self.eta.n} does not match n={self.n}")

    @property
    def kappa(self) -> Fraction:
        """Rectangularity ratio N/T as an exact rational."""
        return Fraction(self.n, self.t)

    @property
    def kappa_float(self) -> float:
        return self.n / self.t


@dataclass
class SpectrumSample:
    """Spectral data of one realization of C plus its provenance."""

    eigenvalues: ComplexSpectrum
    singular_values: np.ndarray
    realization_index: int
    sub_seed: int

    def validate(self, n: int, t: int) -> None:
        vals = self.eigenvalues.values
        if len(vals) != n:
            raise DimensionError(f"expected {n} eigenvalues, got {len(vals)}")
        if t < n:
            zeros = int((np.abs(vals) < ZERO_EIG_TOL).sum())
            if zeros < n - t:
                raise EnsembleError(
                    f"realization {self.realization_index}: only {zeros} zero eigenvalues, "
                    f"rank deficiency requires at least {n - t}"
                )


def sample_pair(eta: EtaMatrix, n: int, t: int, stream: NormalStream) -> tuple[np.ndarray, np.ndarray]:
    """Draw one (A, B) pair, each n x t, from the coupled Gaussian law."""
    if eta.data.shape != (n, n):
        raise DimensionError(f"eta must be {n}x{n}, got {eta.data.shape}")
    s = symmetric_sqrt(np.eye(n) - eta.data.T @ eta.data)
    return _sample_pair_with_sqrt(eta.data, s, n, t, stream)


def _sample_pair_with_sqrt(eta_data, cond_sqrt, n, t, stream) -> tuple[np.ndarray, np.ndarray]:
    x = stream.normals((n, t))
    y = stream.normals((n, t))
    return x, eta_data.T @ x + cond_sqrt @ y


def form_c(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """C = A B^t / t for matching n x t factors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape != b.shape:
        raise DimensionError(f"A and B must share an n x t shape, got {a.shape} and {b.shape}")
    return a @ b.T / a.shape[1]


def _worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("NSWISHART_THREADS")
    cpu = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), 64))
        except ValueError:
            pass
    return cpu


def _realize(config: EnsembleConfig, eta_data, cond_sqrt, index: int) -> SpectrumSample:
    n, t = config.n, config.t
    seed = sub_seed_for(config.master_seed, index)
    stream = NormalStream(seed)
    a, b = _sample_pair_with_sqrt(eta_data, cond_sqrt, n, t, stream)
    c = a @ b.T / t
    if t < n:
        # spectrum(A B^t) = spectrum(B^t A) plus exactly n - t zeros (Sylvester),
        # so the rank-deficient zeros come out exact and the eigensolve is smaller
        small = nonsym_eigenvalues(b.T @ a / t)
        vals = np.concatenate([small.values, np.zeros(n - t, dtype=complex)])
        spec = ComplexSpectrum(vals, small.backward_error)
    else:
        spec = nonsym_eigenvalues(c)
    sample = SpectrumSample(spec, singular_values(c), index, seed)
    sample.validate(n, t)
    return sample


def run_ensemble(config: EnsembleConfig, workers: int | None = None) -> list[SpectrumSample]:
    """All realizations of the configured experiment, ordered by index.

    Output is bit-identical for any worker count. A failed realization aborts
    the whole run with an EnsembleError naming the failing indices.
    """
    eta = make_eta(config.eta)
    cond_sqrt = symmetric_sqrt(np.eye(config.n) - eta.data.T @ eta.data)
    nworkers = _worker_count(workers)
    results: list[SpectrumSample | None] = [None] * config.realizations
    failures: list[tuple[int, Exception]] = []

    def task(i: int):
        return _realize(config, eta.data, cond_sqrt, i)

    if nworkers == 1 or config.realizations == 1:
        for i in range(config.realizations):
            try:
                results[i] = task(i)
            except Exception as exc:  # noqa: BLE001 - aggregated below
                failures.append((i, exc))
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            futures = {pool.submit(task, i): i for i in range(config.realizations)}
            for fut, i in futures.items():
                try:
                    results[i] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    failures.append((i, exc))
    if failures:
        failures.sort(key=lambda f: f[0])
        detail = "; ".join(f"#{i}: {exc}" for i, exc in failures[:5])
        raise EnsembleError(
            f"{len(failures)} of {config.realizations} realizations failed ({detail})",
            failures,
        )
    return results  # type: ignore[return-value]
