"""Independent thermodynamic oracles: pressure, closed-form partition
growth rates, the Gibbs pressure identity, and correlation entropies.

These provide the cross-checks for the tree-based estimates: pressure is
a Perron root of a small weighted transfer matrix, while the partition
growth rates come from entrywise powers of the defining stochastic data.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError
from .measures import (
    Bernoulli,
    Gibbs,
    Markov,
    MeasureModel,
    log_mass_array,
    logsumexp,
)
from .perron import perron_root
from .potential import Potential
from .space import ShiftSpace


def pressure(space: ShiftSpace, psi: Potential, scale: float = 1.0) -> float:
    """Topological pressure of scale * psi: log Perron root of the weighted
    transfer matrix over length-(r-1) word states."""
    if psi.space != space:
        raise ValueError("potential defined on a different space")
    if not space.irreducible:
        raise ValueError("pressure needs an irreducible shift space")
    M, _ = psi.transfer_matrix(scale)
    return math.log(perron_root(M))


def _entrywise_power_growth(P: np.ndarray, q: float) -> float:
    """log Perron root of the entrywise q-power with exact zeros preserved."""
    M = np.zeros_like(P)
    pos = P > 0
    M[pos] = P[pos] ** q
    return math.log(perron_root(M))


def closed_form_h(model: MeasureModel, q: float) -> float:
    """Exact partition growth rate (1/n) log sum_w mass(w)^q for Bernoulli
    and Markov models.  Zero-mass admissible cylinders blow up for q < 0
    and count as 1 for q = 0."""
    if isinstance(model, Bernoulli):
        p = model.p
        if q < 0:
            if (p == 0).any():
                return math.inf
            return float(np.log(np.sum(p**q)))
        if q == 0:
            return math.log(model.space.alphabet_size)
        return float(np.log(np.sum(p[p > 0] ** q)))
    if isinstance(model, Markov):
        A = model.space.transitions
        if q < 0 and ((model.P == 0) & (A == 1)).any():
            return math.inf
        if q == 0:
            return math.log(perron_root(A.astype(float)))
        return _entrywise_power_growth(model.P, q)
    raise ValueError(f"no closed form for measure kind {model.kind!r}")


def log_potential_of(model: MeasureModel) -> Potential:
    """Defining log-potential of a Bernoulli/Markov/Gibbs model."""
    if isinstance(model, Bernoulli):
        with np.errstate(divide="ignore"):
            logp = np.log(model.p)
        table = {
            w: float(logp[w[1]]) for w in model.space.words_of_length(2)
        }
        return Potential(model.space, 2, table)
    if isinstance(model, Markov):
        with np.errstate(divide="ignore"):
            logP = np.log(model.P)
        table = {
            w: float(logP[w[0], w[1]]) for w in model.space.words_of_length(2)
        }
        return Potential(model.space, 2, table)
    if isinstance(model, Gibbs):
        return model.potential
    raise ValueError(f"measure kind {model.kind!r} carries no defining potential")


def gibbs_identity_residual(model: MeasureModel, q: float) -> float:
    """|g(q) - (P(q psi) - q P(psi))| for the model's defining potential,
    where g is the partition growth rate from the stochastic representation."""
    if isinstance(model, (Bernoulli, Markov)):
        g = closed_form_h(model, q)
    elif isinstance(model, Gibbs):
        g = _entrywise_power_growth(model.Q, q)
    else:
        raise ValueError(
            f"Gibbs identity needs a Bernoulli/Markov/Gibbs model, got {model.kind!r}"
        )
    psi = log_potential_of(model)
    rhs = pressure(model.space, psi, q) - q * pressure(model.space, psi, 1.0)
    if math.isinf(g) or math.isinf(rhs):
        return 0.0 if g == rhs else math.inf
    return abs(g - rhs)


def partition_growth_by_squaring(model: MeasureModel, q: float, log2_n: int = 12) -> float:
    """Brute partition growth (1/n) log Z_n at n = 2^log2_n, via repeated
    squaring of the entrywise q-power with rescaling; an independent check
    on the Perron-root route."""
    if isinstance(model, Bernoulli):
        P = np.tile(model.p, (model.space.alphabet_size, 1))
        pi = model.p
    elif isinstance(model, Markov):
        P, pi = model.P, model.pi
    else:
        raise ValueError("repeated-squaring oracle needs Bernoulli or Markov")
    M = np.zeros_like(P)
    pos = P > 0
    M[pos] = P[pos] ** q
    piq = np.where(pi > 0, pi**q, 0.0)
    B = M.copy()
    log_scale = 0.0
    half = None
    for step in range(log2_n):
        s = B.max()
        if s <= 0:
            raise ConvergenceError("partition matrix power collapsed to zero")
        B = (B / s) @ (B / s)
        log_scale = 2.0 * (log_scale + math.log(s))
        if step == log2_n - 2:
            half = (B.copy(), log_scale)

    def logZ(mat, ls):
        # Z at n = power + 1 (one extra step from the initial distribution)
        return math.log(float(piq @ mat @ np.ones(mat.shape[0]))) + ls

    z_full = logZ(B, log_scale)
    if half is None:
        return z_full / ((1 << log2_n) + 1)
    # difference of two depths cancels the eigenvector prefactor, leaving
    # only a geometrically small subdominant-eigenvalue correction
    z_half = logZ(*half)
    return (z_full - z_half) / (1 << (log2_n - 1))


def correlation_entropy(model: MeasureModel, q: float, n: int, k: int = 0) -> float:
    """Finite-n correlation-integral entropy:
    (1 / ((1-q) n)) log sum over admissible length-(n+k) words of mass^q."""
    if q == 1:
        raise ValueError("correlation entropy is undefined at q = 1")
    arr = log_mass_array(model, n + k)
    if q == 0:
        logZ = math.log(arr.size)
    elif q < 0:
        if np.isneginf(arr).any():
            return math.inf  # zero-mass admissible cylinder blows up the gauge
        logZ = logsumexp(q * arr)
    else:
        finite = arr[~np.isneginf(arr)]
        logZ = logsumexp(q * finite)
    return logZ / ((1 - q) * n)
