"""Exact evolution of the chain law over Z_p^k.

States are indexed little-endian: x maps to sum_i x_i * p**i.  One step of
X' = A X + B (mod p) is a push-forward through the bijection y -> A y
(gcd(det A, p) = 1 makes it one) followed by a cyclic convolution with the
reduced increment law, so a step costs O(p^k * |supp mu|) and stays exact
up to float addition.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .algebra import IntMatrix, as_matrix, det_int, mat_mod, mat_pow
from .errors import ModulusNotCoprime, StateSpaceTooLarge
from .increments import IncrementDistribution

DEFAULT_STATE_CAP = 4_000_000
STATE_CAP_ENV = "AFFINE_MIXER_STATE_CAP"
DEFAULT_N_CAP = 100_000
SUM_TOL = 1e-10
NEG_TOL = -1e-15


def state_cap() -> int:
    """Dense state cap; the environment variable overrides the default."""
    raw = os.environ.get(STATE_CAP_ENV)
    if raw is None:
        return DEFAULT_STATE_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{STATE_CAP_ENV} must be a positive integer")
    return cap


def encode_state(x: Sequence[int], p: int) -> int:
    """Little-endian mixed-radix index of a state vector."""
    code = 0
    for i, c in enumerate(x):
        code += (int(c) % p) * p**i
    return code


def decode_state(code: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return tuple(out)


def state_table(p: int, k: int) -> np.ndarray:
    """All states as an (p**k, k) int64 array; row i decodes index i."""
    idx = np.arange(p**k, dtype=np.int64)
    return np.stack([(idx // p**i) % p for i in range(k)], axis=1)


@dataclass(frozen=True)
class ChainSpec:
    """The recursion X_{n+1} = A X_n + B_n (mod p) with start X_0 = x0."""

    a: IntMatrix
    mu: IncrementDistribution
    p: int
    x0: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_matrix(self.a))
        if self.p < 2:
            raise ValueError("modulus must be >= 2")
        if self.mu.k != self.a.k:
            raise ValueError("dimension mismatch between mu and A")
        if math.gcd(det_int(self.a), self.p) != 1:
            raise ModulusNotCoprime(
                f"gcd(det(A), {self.p}) != 1; the step map is not a bijection"
            )
        x0 = self.x0 if self.x0 is not None else (0,) * self.a.k
        if len(x0) != self.a.k:
            raise ValueError("x0 must have length k")
        object.__setattr__(self, "x0", tuple(int(c) % self.p for c in x0))

    @property
    def k(self) -> int:
        return self.a.k

    @property
    def n_states(self) -> int:
        return self.p**self.k


class StateDistribution:
    """Dense law on Z_p^k, little-endian indexed, values read-only."""

    __slots__ = ("p", "k", "values")

    def __init__(self, p: int, k: int, values: np.ndarray | Sequence[float]):
        arr = np.array(values, dtype=np.float64)
        if arr.shape != (p**k,):
            raise ValueError(f"expected {p**k} entries, got {arr.shape}")
        low = float(arr.min())
        if low < NEG_TOL:
            raise ValueError(f"negative probability {low} below tolerance")
        np.clip(arr, 0.0, None, out=arr)
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1 within {SUM_TOL}")
        arr.flags.writeable = False
        self.p = p
        self.k = k
        self.values = arr

    @classmethod
    def point_mass(cls, p: int, k: int, x: Sequence[int]) -> "StateDistribution":
        arr = np.zeros(p**k)
        arr[encode_state(x, p)] = 1.0
        return cls(p, k, arr)

    @classmethod
    def uniform(cls, p: int, k: int) -> "StateDistribution":
        return cls(p, k, np.full(p**k, 1.0 / p**k))

    def prob(self, x: Sequence[int]) -> float:
        return float(self.values[encode_state(x, self.p)])


def reduce_increments(mu: IncrementDistribution, p: int) -> StateDistribution:
    """Fold mu into Z_p^k: mu_p(r) = sum of mu(b) over b congruent to r."""
    arr = np.zeros(p**mu.k)
    for pt, w in zip(mu.support, mu.probs):
        arr[encode_state(pt, p)] += w
    return StateDistribution(p, mu.k, arr)


def _check_cap(chain: ChainSpec) -> None:
    cap = state_cap()
    if chain.n_states > cap:
        raise StateSpaceTooLarge(
            f"p**k = {chain.n_states} exceeds the state cap {cap}"
        )


@lru_cache(maxsize=16)
def _chain_ops(chain: ChainSpec) -> tuple[np.ndarray, tuple[tuple[tuple[int, ...], float], ...]]:
    """Cached step machinery: the y -> Ay index permutation and the
    reduced increment shifts with their weights."""
    p, k = chain.p, chain.k
    states = state_table(p, k)
    a_mod = np.array(mat_mod(chain.a, p).rows, dtype=np.int64)
    pow_vec = np.array([p**i for i in range(k)], dtype=np.int64)
    perm = ((states @ a_mod.T) % p) @ pow_vec
    shifts: dict[tuple[int, ...], float] = {}
    for pt, w in zip(chain.mu.support, chain.mu.probs):
        key = tuple(int(c) % p for c in pt)
        shifts[key] = shifts.get(key, 0.0) + w
    return perm, tuple(sorted(shifts.items()))


def step_exact(dist: StateDistribution, chain: ChainSpec) -> StateDistribution:
    """One exact step: P'(x) = sum_y P(y) * mu_p(x - A y mod p)."""
    if (dist.p, dist.k) != (chain.p, chain.k):
        raise ValueError("distribution and chain dimensions disagree")
    p, k = chain.p, chain.k
    perm, shifts = _chain_ops(chain)
    pushed = np.empty_like(dist.values)
    pushed[perm] = dist.values
    cube = pushed.reshape((p,) * k)
    out = np.zeros_like(cube)
    for shift, w in shifts:
        # axis j of the cube holds component x_{k-1-j}, hence the reversal
        out += w * np.roll(cube, shift=shift[::-1], axis=tuple(range(k)))
    return StateDistribution(p, k, out.reshape(-1))


def evolve_iter(chain: ChainSpec, n: int) -> Iterator[tuple[int, StateDistribution]]:
    """Yield (i, P_i) for i = 0..n starting from the point mass at x0."""
    if n < 0:
        raise ValueError("step count must be >= 0")
    _check_cap(chain)
    dist = StateDistribution.point_mass(chain.p, chain.k, chain.x0)
    yield 0, dist
    for i in range(1, n + 1):
        dist = step_exact(dist, chain)
        yield i, dist


def evolve(chain: ChainSpec, n: int) -> StateDistribution:
    """The law P_n of X_n, by n exact steps from the point mass at x0."""
    dist = None
    for _, dist in evolve_iter(chain, n):
        pass
    assert dist is not None
    return dist


def tv_distance(dist: StateDistribution) -> float:
    """Total variation distance to the uniform law on Z_p^k."""
    return 0.5 * float(np.abs(dist.values - 1.0 / len(dist.values)).sum())


def simulate(chain: ChainSpec, n: int, trials: int, seed: int) -> StateDistribution:
    """Empirical law of X_n over independent trajectories.

    Deterministic given seed: draws come from numpy's Generator with the
    PCG64 bit generator seeded with exactly this value.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_cap(chain)
    p, k = chain.p, chain.k
    rng = np.random.default_rng(seed)
    a_mod = np.array(mat_mod(chain.a, p).rows, dtype=np.int64)
    supp = np.array(
        [[int(c) % p for c in pt] for pt in chain.mu.support], dtype=np.int64
    )
    probs = np.array(chain.mu.probs)
    probs = probs / probs.sum()
    x = np.tile(np.array(chain.x0, dtype=np.int64), (trials, 1))
    for _ in range(n):
        picks = rng.choice(len(supp), size=trials, p=probs)
        x = (x @ a_mod.T + supp[picks]) % p
    pow_vec = np.array([p**i for i in range(k)], dtype=np.int64)
    codes = x @ pow_vec
    counts = np.bincount(codes, minlength=p**k)
    return StateDistribution(p, k, counts / trials)


def shift_by(dist: StateDistribution, chain: ChainSpec, n: int) -> StateDistribution:
    """Push dist through x -> A**n x0 + x (mod p), the start-shift map."""
    p, k = chain.p, chain.k
    offset = mat_pow(chain.a, n).apply(chain.x0)
    states = state_table(p, k)
    shifted = (states + np.array([c % p for c in offset], dtype=np.int64)) % p
    pow_vec = np.array([p**i for i in range(k)], dtype=np.int64)
    codes = shifted @ pow_vec
    out = np.zeros_like(dist.values)
    out[codes] = dist.values
    return StateDistribution(p, k, out)


def mixing_time(
    chain: ChainSpec, eps: float, n_cap: int = DEFAULT_N_CAP
) -> Optional[int]:
    """Smallest n <= n_cap with tv_distance(P_n) <= eps, else None.

    TV to the stationary uniform law never increases, so incremental
    stepping finds the first crossing.  None means unmixed at the cap.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    for n, dist in evolve_iter(chain, n_cap):
        if tv_distance(dist) <= eps:
            return n
    return None
