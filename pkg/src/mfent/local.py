"""Pointwise local-entropy estimates and level-set sampling.

A point is represented by a finite prefix long enough for the requested
order; the local entropy along it is the sequence -(1/n) log mass of the
length-(n+k) prefixes, with liminf/limsup proxied by the tail of the
sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnreachableBetaError
from .measures import Bernoulli, MeasureModel
from .space import Word


@dataclass(frozen=True)
class LocalEntropySample:
    word: Word
    k: int
    estimates: np.ndarray  # index n-1 holds -(1/n) log mass(prefix_{n+k})
    lower: float
    upper: float
    hit_zero_mass: bool


def local_entropy(
    model: MeasureModel,
    x: Word,
    k: int = 0,
    n_max: int | None = None,
    tail_fraction: float = 0.25,
) -> LocalEntropySample:
    """Local-entropy estimate sequence along the prefixes of ``x``.

    lower/upper are min/max over the final tail_fraction of indices, a
    finite proxy for liminf/limsup; a zero-mass prefix makes the tail
    infinite and is flagged.
    """
    if n_max is None:
        n_max = len(x) - k
    if len(x) < n_max + k:
        raise ValueError(
            f"word of length {len(x)} too short for n_max={n_max} at offset k={k}"
        )
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must be in (0, 1]")
    est = np.empty(n_max)
    hit_zero = False
    for n in range(1, n_max + 1):
        lm = model.log_mass(x[: n + k])
        if lm == -math.inf:
            est[n - 1 :] = math.inf
            hit_zero = True
            break
        est[n - 1] = -lm / n
    tail_start = min(n_max - 1, int(math.floor(n_max * (1 - tail_fraction))))
    tail = est[tail_start:]
    return LocalEntropySample(
        word=tuple(x),
        k=k,
        estimates=est,
        lower=float(tail.min()),
        upper=float(tail.max()),
        hit_zero_mass=hit_zero,
    )


def filtration_member(
    model: MeasureModel, x: Word, beta: float, delta: float, M: int, N: int
) -> bool:
    """Finite check that every order-n estimate from N onward stays within
    delta of beta, at dyadic radius index M."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if len(x) < N + M:
        raise ValueError(f"word of length {len(x)} shorter than N + M = {N + M}")
    for n in range(N, len(x) - M + 1):
        lm = model.log_mass(x[: n + M])
        val = math.inf if lm == -math.inf else -lm / n
        if not (beta - delta < val < beta + delta):
            return False
    return True


def mean_local_entropy(samples: list[LocalEntropySample]) -> float:
    """Monte-Carlo average of the tail estimates over samples.  A sampling
    estimate, not an exact integral."""
    return float(np.mean([0.5 * (s.lower + s.upper) for s in samples]))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sample_level_set(
    model: MeasureModel,
    beta: float,
    tol: float,
    n: int,
    count: int,
    rng_seed: int,
) -> list[Word]:
    """Words of length n whose symbol frequencies pin the local entropy near
    beta, produced by shuffling a fixed-type multiset.

    Only defined for Bernoulli models, where the attainable levels form
    the interval spanned by -log p_i; outside it no level set exists.
    """
    if not isinstance(model, Bernoulli):
        raise ValueError("level-set sampling is implemented for Bernoulli models")
    if (model.p == 0).any():
        raise ValueError("level-set sampling needs strictly positive symbol masses")
    neg_logp = -np.log(model.p)
    lo, hi = float(neg_logp.min()), float(neg_logp.max())
    if beta < lo - tol or beta > hi + tol:
        raise UnreachableBetaError(
            f"beta={beta} outside the attainable interval [{lo:.6g}, {hi:.6g}]: "
            "the level set is empty"
        )
    m = model.space.alphabet_size
    best: tuple[float, tuple[int, ...]] | None = None
    for counts in _compositions(n, m):
        val = float(np.dot(counts, neg_logp)) / n
        gap = abs(val - beta)
        if best is None or gap < best[0]:
            best = (gap, counts)
    assert best is not None
    if best[0] > tol:
        raise ValueError(
            f"no length-{n} frequency type within {tol} of beta={beta}; "
            "increase n or tol"
        )
    counts = best[1]
    base = np.repeat(np.arange(m), counts)
    rng = np.random.default_rng(rng_seed)
    return [tuple(int(s) for s in rng.permutation(base)) for _ in range(count)]
