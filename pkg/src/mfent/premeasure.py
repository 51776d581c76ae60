"""Finite-depth covering / packing pre-measures on the cylinder tree.

All three constructions (covering infimum, packing supremum, refined
packing via partition covers) are exact optimizations over antichains of
cylinders meeting a compact cylinder set, solved by dynamic programming
level by level.  Restricting to cylinders loses nothing for coverings and
packings here: centered dyadic dynamical balls *are* cylinders, and a
disjoint family of cylinders is exactly an antichain.  The refined
construction's arbitrary covers are restricted to cylinder partitions,
which over-estimates the infimum; the returned value records that.

Everything runs in log domain; -inf encodes value 0 and +inf the blowup
of the power gauge at zero mass with negative exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooLargeError
from .measures import MeasureModel
from .space import CylinderSet, Word

_MAX_TREE_NODES = 1 << 22
_MAX_ORACLE_OPTIONS = 1 << 21


def psi(s: float, x: float) -> float:
    """Power gauge on ball masses: x^s, with psi_0 = 1 and psi_s(0) = inf for s < 0."""
    if x < 0:
        raise ValueError(f"psi needs x >= 0, got {x}")
    if s == 0:
        return 1.0
    if x == 0.0:
        return math.inf if s < 0 else 0.0
    return x**s

def psi_log(s: float, log_x: float) -> float:
    """log of psi(s, exp(log_x)); log_x = -inf encodes x = 0."""
    if s == 0:
        return 0.0
    if log_x == -math.inf:
        return math.inf if s < 0 else -math.inf
    return s * log_x


@dataclass(frozen=True)
class PremeasureParams:
    """q: gauge exponent, t: discount rate, N: minimum order, k: dyadic
    radius offset, D: maximum order (truncation of the unbounded family)."""

    q: float
    t: float
    N: int
    k: int
    D: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("minimum order N must be >= 1")
        if self.D < self.N:
            raise ValueError(f"order cap D={self.D} below N={self.N}")
        if self.k < 0:
            raise ValueError("depth offset k must be >= 0")


@dataclass(frozen=True)
class PremeasureValue:
    log_value: float  # -inf = 0, +inf allowed
    exact_at_depth: bool

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value != math.inf else math.inf


class TreeEvaluator:
    """Cylinder tree of a compact set, with per-(q, t) DP sweeps.

    Building the tree (node log-masses and parent links) is the expensive
    part; it is done once so that root-finding in t can re-run the cheap
    vectorized sweeps.
    """

    def __init__(self, model: MeasureModel, K: CylinderSet, k: int, D: int):
        if K.is_empty:
            raise ValueError("pre-measures need a non-empty cylinder set")
        if K.space != model.space:
            raise ValueError("cylinder set and measure live on different spaces")
        self.model = model
        self.K = K
        self.k = k
        self.D = D
        depth = D + k
        space = model.space

        level_words: list[list[Word]] = [[()]]
        parents: list[np.ndarray] = [np.zeros(1, dtype=np.int64)]
        total = 1
        for _ in range(depth):
            prev = level_words[-1]
            words: list[Word] = []
            par: list[int] = []
            for i, w in enumerate(prev):
                for c in space.children(w):
                    if K.intersects(c):
                        words.append(c)
                        par.append(i)
            total += len(words)
            if total > _MAX_TREE_NODES:
                raise TooLargeError(
                    f"cylinder tree exceeds {_MAX_TREE_NODES} nodes at depth {len(level_words)}"
                )
            level_words.append(words)
            parents.append(np.asarray(par, dtype=np.int64))

        self.level_words = level_words
        self.parents = parents
        self.log_masses = [
            np.asarray([model.log_mass(w) for w in words]) for words in level_words
        ]

    # -- weights ---------------------------------------------------------

    def _weights(self, q: float, t: float, level: int) -> np.ndarray:
        lm = self.log_masses[level]
        n = level - self.k
        if q == 0:
            pw = np.zeros_like(lm)
        else:
            pw = q * lm
            if q < 0:
                pw[np.isneginf(lm)] = math.inf
        return pw - t * n

    @staticmethod
    def _children_logsum(parent_idx: np.ndarray, child_vals: np.ndarray, n_parents: int) -> np.ndarray:
        acc = np.full(n_parents, -math.inf)
        np.logaddexp.at(acc, parent_idx, child_vals)
        return acc

    # -- the three sweeps ------------------------------------------------

    def covering_log(self, q: float, t: float, N: int) -> float:
        cost = self._weights(q, t, self.D + self.k)
        for level in range(self.D + self.k - 1, -1, -1):
            acc = self._children_logsum(
                self.parents[level + 1], cost, len(self.level_words[level])
            )
            n = level - self.k
            if n >= N:
                cost = np.minimum(self._weights(q, t, level), acc)
            else:
                cost = acc
        return float(cost[0])

    def _packing_levels(self, q: float, t: float, N: int) -> list[np.ndarray]:
        packs = [np.empty(0)] * (self.D + self.k + 1)
        pack = self._weights(q, t, self.D + self.k)
        packs[self.D + self.k] = pack
        for level in range(self.D + self.k - 1, -1, -1):
            acc = self._children_logsum(
                self.parents[level + 1], pack, len(self.level_words[level])
            )
            n = level - self.k
            if n >= N:
                pack = np.maximum(self._weights(q, t, level), acc)
            else:
                pack = acc
            packs[level] = pack
        return packs

    def packing_log(self, q: float, t: float, N: int) -> float:
        return float(self._packing_levels(q, t, N)[0][0])

    def outer_log(self, q: float, t: float, N: int, cover_depth: int) -> float:
        if cover_depth < 0 or cover_depth > self.D:
            raise ValueError(f"cover depth {cover_depth} outside [0, {self.D}]")
        packs = self._packing_levels(q, t, N)
        # best usable ancestor-ball weight along each path, top-down
        anc = np.full(1, -math.inf)
        ancs = [anc]
        for level in range(1, cover_depth + 1):
            n_parent = (level - 1) - self.k
            parent_w = self._weights(q, t, level - 1)
            if N <= n_parent <= self.D:
                carried = np.maximum(anc, parent_w)
            else:
                carried = anc
            anc = carried[self.parents[level]]
            ancs.append(anc)
        # restricted packing value of K inside each depth-cover_depth piece
        outer = np.maximum(packs[cover_depth], ancs[cover_depth])
        for level in range(cover_depth - 1, -1, -1):
            acc = self._children_logsum(
                self.parents[level + 1], outer, len(self.level_words[level])
            )
            outer = np.minimum(np.maximum(packs[level], ancs[level]), acc)
        return float(outer[0])


def covering_premeasure(
    model: MeasureModel, K: CylinderSet, p: PremeasureParams
) -> PremeasureValue:
    """Exact infimum over centered coverings by balls of order N..D.

    Exact at this depth: every centered dyadic ball is a cylinder meeting K,
    so cylinder covers lose nothing.  Nonincreasing in D.
    """
    ev = TreeEvaluator(model, K, p.k, p.D)
    return PremeasureValue(ev.covering_log(p.q, p.t, p.N), exact_at_depth=True)


def packing_premeasure(
    model: MeasureModel, K: CylinderSet, p: PremeasureParams
) -> PremeasureValue:
    """Exact supremum over packings with orders N..D; a lower bound for the
    supremum over unbounded orders, nondecreasing in D."""
    ev = TreeEvaluator(model, K, p.k, p.D)
    return PremeasureValue(ev.packing_log(p.q, p.t, p.N), exact_at_depth=True)


def packing_outer(
    model: MeasureModel, K: CylinderSet, p: PremeasureParams, cover_depth: int
) -> PremeasureValue:
    """Infimum over cylinder-partition covers at depths <= cover_depth of the
    per-piece packing value.  Restricting covers to cylinder partitions
    over-estimates the unrestricted infimum, hence exact_at_depth=False."""
    ev = TreeEvaluator(model, K, p.k, p.D)
    return PremeasureValue(
        ev.outer_log(p.q, p.t, p.N, cover_depth), exact_at_depth=False
    )


def antichain_oracle(
    model: MeasureModel, K: CylinderSet, p: PremeasureParams, mode: str
) -> float:
    """Brute-force optimum over explicitly enumerated antichains (log value).

    mode="min" enumerates all covering antichains, mode="max" all packings
    (including partial selections).  Test-only; refuses oversized trees.
    """
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    if K.is_empty:
        raise ValueError("pre-measures need a non-empty cylinder set")
    space = model.space
    node_budget = space.alphabet_size ** (p.D + p.k + 1)
    if node_budget > (1 << 16):
        raise TooLargeError(
            f"oracle refuses trees with up to {node_budget} nodes (cap 65536)"
        )
    packing = mode == "max"
    budget = [0]

    def weight(w: Word) -> float:
        lw = psi_log(p.q, model.log_mass(w)) - p.t * (len(w) - p.k)
        return math.exp(lw) if lw != math.inf else math.inf

    def options(w: Word) -> np.ndarray:
        """Values of every admissible antichain selection inside the subtree of w."""
        n = len(w) - p.k
        opts: list[np.ndarray] = []
        if p.N <= n <= p.D:
            own = [weight(w)]
            if packing:
                own.append(0.0)  # a packing may leave this subtree empty
            opts.append(np.asarray(own))
        if n < p.D:
            combo = np.zeros(1)
            for c in space.children(w):
                if not K.intersects(c):
                    continue
                combo = np.add.outer(combo, options(c)).ravel()
                budget[0] += combo.size
                if budget[0] > _MAX_ORACLE_OPTIONS:
                    raise TooLargeError("oracle antichain enumeration exceeded cap")
            opts.append(combo)
        return np.concatenate(opts)

    vals = options(())
    best = float(np.max(vals) if packing else np.min(vals))
    if best == math.inf:
        return math.inf
    return math.log(best) if best > 0 else -math.inf
