"""Locally constant potentials on admissible words of a fixed length."""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .space import ShiftSpace, Word


class Potential:
    """A real value per admissible word of length r (r >= 2).

    A table value of -inf marks a structural zero: the word is excluded
    from every weighted transfer matrix regardless of the inverse
    temperature, mirroring how zero transition probabilities drop
    cylinders from admissible partition sums.
    """

    def __init__(self, space: ShiftSpace, r: int, table: Mapping[Word, float]):
        if r < 2:
            raise ValueError("potential locality depth r must be >= 2")
        self.space = space
        self.r = r
        tab = {tuple(w): float(v) for w, v in table.items()}
        admissible = set(space.words_of_length(r))
        for w in tab:
            if w not in admissible:
                raise ValueError(f"potential table contains inadmissible word {w}")
        missing = admissible - set(tab)
        if missing:
            w = min(missing)
            raise ValueError(f"potential table missing admissible word {w}")
        self.table = tab

    def states(self) -> list[Word]:
        """Admissible words of length r-1, the transfer-matrix index set."""
        return sorted(self.space.words_of_length(self.r - 1))

    def transfer_matrix(self, scale: float = 1.0) -> tuple[np.ndarray, list[Word]]:
        """Weighted transfer matrix M[u, v] = exp(scale * psi(u + v[-1])).

        Entries are zero when the overlap is inadmissible or the potential
        is -inf on the composed word (structural zero).
        """
        states = self.states()
        index = {u: i for i, u in enumerate(states)}
        n = len(states)
        M = np.zeros((n, n))
        for u in states:
            for w in self.space.children(u):
                val = self.table[w]
                if math.isinf(val) and val < 0:
                    continue
                M[index[u], index[w[1:]]] = math.exp(scale * val)
        return M, states

    def scaled(self, c: float) -> "Potential":
        return Potential(
            self.space, self.r, {w: c * v for w, v in self.table.items()}
        )
