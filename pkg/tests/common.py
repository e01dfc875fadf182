"""Shared fixtures: the matrix suite and its fair two-point increments."""

from __future__ import annotations

from affine_mixer import ChainSpec, IncrementDistribution, IntMatrix

SUITE_ROWS = (
    ((2,),),
    ((1,),),
    ((0, 1), (2, 0)),
    ((2, 1), (1, 1)),
    ((1, 0), (0, 2)),
    ((0, -1), (1, 0)),
)

SUITE_PRIMES = (3, 5, 7, 11, 13)


def fair_two_point(k: int) -> IncrementDistribution:
    """Fair increments on {0, e_1} in dimension k."""
    zero = (0,) * k
    e1 = (1,) + (0,) * (k - 1)
    return IncrementDistribution.fair([zero, e1])


def suite_matrices() -> list[IntMatrix]:
    return [IntMatrix.from_rows(rows) for rows in SUITE_ROWS]


def suite_chains(primes=SUITE_PRIMES) -> list[ChainSpec]:
    chains = []
    for rows in SUITE_ROWS:
        a = IntMatrix.from_rows(rows)
        mu = fair_two_point(a.k)
        for p in primes:
            chains.append(ChainSpec(a, mu, p))
    return chains
