"""Cylinder-mass measure models: Bernoulli, Markov, Gibbs, and mixtures.

Every model assigns a mass to each admissible cylinder, additively over
children, with the empty word carrying mass 1.  All arithmetic has a
log-domain companion; masses underflow quickly, so log_mass is primary
and mass() is a convenience wrapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SpaceMismatchError, TooLargeError
from .perron import perron_triple
from .potential import Potential
from .space import ShiftSpace, Word

_TOL = 1e-12


def logsumexp(a: np.ndarray) -> float:
    """Stable log(sum(exp(a))); handles -inf entries and empty input."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return -math.inf
    hi = float(a.max())
    if math.isinf(hi):
        return hi
    return hi + math.log(float(np.exp(a - hi).sum()))


class MeasureModel:
    """Base class: immutable, pure mass queries, shareable across workers."""

    kind: str
    space: ShiftSpace

    def log_mass(self, w: Word) -> float:
        raise NotImplementedError

    def mass(self, w: Word) -> float:
        return math.exp(self.log_mass(w))

    def sample_word(self, n: int, rng: np.random.Generator) -> Word:
        raise NotImplementedError

    def one_step_log_bound(self) -> float | None:
        """log of the analytic doubling bound, +inf if unbounded, None if unknown."""
        return None


class Bernoulli(MeasureModel):
    kind = "bernoulli"

    def __init__(self, space: ShiftSpace, p):
        if not space.is_full:
            raise ValueError(
                "Bernoulli masses are additive only on the full shift; "
                "use a Markov model on a proper subshift"
            )
        p = np.asarray(p, dtype=float)
        if p.shape != (space.alphabet_size,):
            raise ValueError(
                f"need {space.alphabet_size} probabilities, got shape {p.shape}"
            )
        if (p < 0).any() or abs(p.sum() - 1.0) > _TOL:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        self.space = space
        self.p = p
        with np.errstate(divide="ignore"):
            self._logp = np.log(p)

    def log_mass(self, w: Word) -> float:
        self.space.require_admissible(w)
        if not w:
            return 0.0
        return float(self._logp[list(w)].sum())

    def sample_word(self, n: int, rng: np.random.Generator) -> Word:
        return tuple(int(s) for s in rng.choice(self.space.alphabet_size, size=n, p=self.p))

    def one_step_log_bound(self) -> float:
        if (self.p == 0).any():
            return math.inf
        return float(-np.log(self.p.min()))


class Markov(MeasureModel):
    kind = "markov"

    def __init__(self, space: ShiftSpace, P, pi=None):
        P = np.asarray(P, dtype=float)
        m = space.alphabet_size
        if P.shape != (m, m):
            raise ValueError(f"transition probabilities must be {m}x{m}, got {P.shape}")
        if (P < 0).any():
            raise ValueError("transition probabilities must be nonnegative")
        rowsums = P.sum(axis=1)
        bad = np.where(np.abs(rowsums - 1.0) > _TOL)[0]
        if bad.size:
            raise ValueError(f"row {bad[0]} of P sums to {rowsums[bad[0]]}, expected 1")
        viol = np.argwhere((P > 0) & (space.transitions == 0))
        if viol.size:
            i, j = viol[0]
            raise ValueError(
                f"P[{i},{j}] > 0 but transition {i}->{j} is inadmissible in the space"
            )
        if pi is None:
            _, _, left = perron_triple(P)
            pi = left / left.sum()
        else:
            pi = np.asarray(pi, dtype=float)
            if pi.shape != (m,) or (pi < 0).any() or abs(pi.sum() - 1.0) > _TOL:
                raise ValueError("pi must be a probability vector over the alphabet")
            if np.max(np.abs(pi @ P - pi)) > 1e-10:
                raise ValueError("pi is not stationary for P")
        self.space = space
        self.P = P
        self.pi = pi
        with np.errstate(divide="ignore"):
            self._logP = np.log(P)
            self._logpi = np.log(pi)

    def log_mass(self, w: Word) -> float:
        self.space.require_admissible(w)
        if not w:
            return 0.0
        out = float(self._logpi[w[0]])
        for a, b in zip(w, w[1:]):
            out += float(self._logP[a, b])
        return out

    def sample_word(self, n: int, rng: np.random.Generator) -> Word:
        if n == 0:
            return ()
        m = self.space.alphabet_size
        out = [int(rng.choice(m, p=self.pi))]
        for _ in range(n - 1):
            out.append(int(rng.choice(m, p=self.P[out[-1]])))
        return tuple(out)

    def one_step_log_bound(self) -> float:
        admissible = self.space.transitions.astype(bool)
        vals = self.P[admissible]
        if (vals == 0).any():
            return math.inf
        return float(-np.log(vals.min()))


class Gibbs(MeasureModel):
    """Equilibrium measure of a locally constant potential.

    Realized as an (r-1)-step Markov chain built from the Perron data of
    the weighted transfer matrix, which makes every cylinder mass exactly
    computable and gives the uniform mass-comparison property.
    """

    kind = "gibbs"

    def __init__(self, potential: Potential):
        self.space = potential.space
        self.potential = potential
        M, states = potential.transfer_matrix(1.0)
        lam, h, l = perron_triple(M)
        self.pressure_value = math.log(lam)
        self.states = states
        self._index = {u: i for i, u in enumerate(states)}
        Q = M * h[None, :] / (lam * h[:, None])
        mu = l * h
        mu = mu / mu.sum()
        self.Q = Q
        self.mu = mu
        with np.errstate(divide="ignore"):
            self._logQ = np.log(Q)
            self._logmu = np.log(mu)

    def log_mass(self, w: Word) -> float:
        self.space.require_admissible(w)
        if not w:
            return 0.0
        d = self.potential.r - 1
        if len(w) < d:
            sel = [self.mu[i] for u, i in self._index.items() if u[: len(w)] == w]
            total = float(np.sum(sel))
            return math.log(total) if total > 0 else -math.inf
        out = float(self._logmu[self._index[w[:d]]])
        for j in range(d, len(w)):
            out += float(self._logQ[self._index[w[j - d : j]], self._index[w[j - d + 1 : j + 1]]])
        return out

    def sample_word(self, n: int, rng: np.random.Generator) -> Word:
        d = self.potential.r - 1
        i = int(rng.choice(len(self.states), p=self.mu))
        word = list(self.states[i])
        while len(word) < n:
            row = self.Q[i]
            i = int(rng.choice(len(self.states), p=row))
            word.append(self.states[i][-1])
        return tuple(word[:n])

    def one_step_log_bound(self) -> float:
        d = self.potential.r - 1
        worst = 0.0
        # conditionals below the chain depth are marginal ratios of mu
        for depth in range(1, d):
            for w in self.space.words_of_length(depth):
                parent = math.exp(self.log_mass(w[:-1]))
                child = math.exp(self.log_mass(w))
                if parent <= 0:
                    continue
                if child <= 0:
                    return math.inf
                worst = max(worst, math.log(parent / child))
        # at and beyond depth d the conditionals are chain entries
        mask = self.Q > 0
        structural = np.zeros_like(mask)
        for u, i in self._index.items():
            for w in self.space.children(u):
                structural[i, self._index[w[1:]]] = True
        if (structural & ~mask).any():
            return math.inf
        worst = max(worst, float(-np.log(self.Q[mask].min())))
        return worst


class Mixture(MeasureModel):
    """Lazy convex combination of two models over the same space."""

    kind = "mixture"

    def __init__(self, model_a: MeasureModel, model_b: MeasureModel, lam: float):
        if model_a.space != model_b.space:
            raise SpaceMismatchError("mixture components live on different spaces")
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"mixture weight {lam} outside [0, 1]")
        self.space = model_a.space
        self.a = model_a
        self.b = model_b
        self.lam = float(lam)

    def log_mass(self, w: Word) -> float:
        if self.lam == 1.0:
            return self.a.log_mass(w)
        if self.lam == 0.0:
            return self.b.log_mass(w)
        la = self.a.log_mass(w) + math.log(self.lam)
        lb = self.b.log_mass(w) + math.log1p(-self.lam)
        return float(np.logaddexp(la, lb))

    def sample_word(self, n: int, rng: np.random.Generator) -> Word:
        pick_a = rng.random() < self.lam
        return (self.a if pick_a else self.b).sample_word(n, rng)


def mixture(model_a: MeasureModel, model_b: MeasureModel, lam: float) -> Mixture:
    """Formal convex combination: mass = lam * mass_a + (1 - lam) * mass_b."""
    return Mixture(model_a, model_b, lam)


def _generic_log_mass_array(model: MeasureModel, length: int) -> np.ndarray:
    return np.asarray(
        [model.log_mass(w) for w in model.space.words_of_length(length)]
    )


@lru_cache(maxsize=64)
def log_mass_array(model: MeasureModel, length: int) -> np.ndarray:
    """Log masses of all admissible length-``length`` cylinders (order unspecified).

    Cached per (model, length); models are immutable so the cache is pure.
    """
    space = model.space
    if space.alphabet_size**length > (1 << 24):
        raise TooLargeError(f"refusing to enumerate ~{space.alphabet_size}^{length} words")
    if isinstance(model, Bernoulli):
        arr = np.zeros(1)
        for _ in range(length):
            arr = (arr[:, None] + model._logp[None, :]).ravel()
    elif isinstance(model, Markov):
        if length == 0:
            arr = np.zeros(1)
        else:
            arr = model._logpi.copy()
            last = np.arange(space.alphabet_size)
            A = space.transitions
            for _ in range(length - 1):
                parts, lparts = [], []
                for j in range(space.alphabet_size):
                    mask = A[last, j] == 1
                    parts.append(arr[mask] + model._logP[last[mask], j])
                    lparts.append(np.full(int(mask.sum()), j))
                arr = np.concatenate(parts)
                last = np.concatenate(lparts)
    elif isinstance(model, Gibbs) and length >= model.potential.r - 1:
        d = model.potential.r - 1
        arr = model._logmu.copy()
        state = np.arange(len(model.states))
        links = [
            [
                (model._index[w[1:]], float(model._logQ[i, model._index[w[1:]]]))
                for w in space.children(u)
            ]
            for u, i in ((u, model._index[u]) for u in model.states)
        ]
        for _ in range(length - d):
            parts, sparts = [], []
            maxdeg = max(len(l) for l in links)
            for slot in range(maxdeg):
                ok = np.asarray([slot < len(links[s]) for s in state])
                if not ok.any():
                    continue
                tgt = np.asarray([links[s][slot][0] for s in state[ok]])
                stp = np.asarray([links[s][slot][1] for s in state[ok]])
                parts.append(arr[ok] + stp)
                sparts.append(tgt)
            arr = np.concatenate(parts)
            state = np.concatenate(sparts)
    else:
        arr = _generic_log_mass_array(model, length)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DoublingReport:
    """Empirical vs analytic bound for one dyadic step of radius doubling."""

    k: int
    n_max: int
    empirical_sup: float
    analytic_bound: float | None  # inf = unbounded, None = no closed form

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.empirical_sup) or (
            self.analytic_bound is not None and math.isinf(self.analytic_bound)
        )


def doubling_check(model: MeasureModel, k: int, n_max: int) -> DoublingReport:
    """Worst ratio of a cylinder's mass to its one-symbol extension's mass.

    Under the dyadic metric this is the ratio of the order-n ball at radius
    2^{-(k-1)} to the one at 2^{-k}, maximized over all admissible words
    with order up to n_max.  A zero-mass admissible child below a
    positive-mass parent makes the supremum infinite.
    """
    if k < 1:
        raise ValueError("doubling needs k >= 1 so that the doubled radius exists")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    space = model.space
    max_len = n_max + k
    worst_log = -math.inf

    stack: list[tuple[Word, float]] = [((), 0.0)]
    while stack:
        w, lm = stack.pop()
        for c in space.children(w):
            lc = model.log_mass(c)
            if lc == -math.inf:
                if lm > -math.inf and len(c) >= k + 1:
                    worst_log = math.inf
                continue  # zero-mass subtree contributes no ratios below
            if len(c) >= k + 1:
                worst_log = max(worst_log, lm - lc)
            if len(c) < max_len:
                stack.append((c, lc))

    empirical = math.exp(worst_log) if worst_log != math.inf else math.inf
    bound_log = model.one_step_log_bound()
    bound = None if bound_log is None else (
        math.inf if math.isinf(bound_log) else math.exp(bound_log)
    )
    if bound is not None and math.isfinite(bound) and math.isfinite(empirical):
        # log accumulation drifts by ~1 ulp; the sup can never exceed the bound
        if empirical > bound and empirical < bound * (1 + 1e-9):
            empirical = bound
    return DoublingReport(k=k, n_max=n_max, empirical_sup=empirical, analytic_bound=bound)
