"""Collective and excitation-restricted bases.

Two non-product constructions used by the model builders:

1. CollectiveSpace — the permutation-symmetric sector of N identical d-level
   atoms, dimension C(N+d-1, d-1).  Collective transitions carry the exact
   Dicke matrix elements sqrt((n_x+1) n_y), so no large-N approximation is
   made; the sector is exact whenever the dynamics and the initial state are
   permutation symmetric.

2. RestrictedSpace — a set of bosonic modes truncated jointly by a weighted
   total-excitation cap sum_i w_i n_i <= cap.  When every Hamiltonian term
   conserves the weighted charge and every collapse operator lowers it, the
   restricted basis is exact for initial states at or below the cap.
"""

from functools import lru_cache
from math import comb, sqrt

import numpy as np
import scipy.sparse as sp


class CollectiveSpace:
    """Symmetric sector of N atoms with d internal levels."""

    def __init__(self, n_atoms, n_levels):
        if n_atoms < 1 or n_levels < 2:
            raise ValueError("need n_atoms >= 1 and n_levels >= 2")
        self.n_atoms = n_atoms
        self.n_levels = n_levels
        self.basis = tuple(_compositions(n_atoms, n_levels))
        self.index = {occ: i for i, occ in enumerate(self.basis)}
        self.dim = len(self.basis)
        assert self.dim == comb(n_atoms + n_levels - 1, n_levels - 1)

    def transition(self, x, y):
        """Matrix of the collective operator S_xy = sum_j |x><y|_j (CSR).

        Exact Dicke element: moving one atom y -> x on |..n_x..n_y..>
        gives sqrt((n_x + 1) n_y); diagonal (x == y) is the counter n_x.
        """
        d = self.n_levels
        if not (0 <= x < d and 0 <= y < d):
            raise ValueError("level index outside atom")
        rows, cols, vals = [], [], []
        for j, occ in enumerate(self.basis):
            if x == y:
                if occ[x]:
                    rows.append(j); cols.append(j); vals.append(float(occ[x]))
                continue
            if occ[y] == 0:
                continue
            new = list(occ)
            new[y] -= 1
            new[x] += 1
            i = self.index[tuple(new)]
            rows.append(i); cols.append(j)
            vals.append(sqrt((occ[x] + 1) * occ[y]))
        return sp.csr_matrix(
            (np.asarray(vals, dtype=np.complex128), (rows, cols)),
            shape=(self.dim, self.dim),
        )

    def level_count(self, x):
        """Diagonal occupation-number matrix of level x."""
        return self.transition(x, x)

    def product_state(self, single_atom_amps):
        """|chi>^{tensor N} expanded in the symmetric basis (normalized).

        For occupation (n_0..n_{d-1}) the amplitude is
        sqrt(N!/prod n_i!) * prod amp_i^{n_i}  (multinomial weight).
        """
        c = np.asarray(single_atom_amps, dtype=np.complex128)
        if c.shape != (self.n_levels,):
            raise ValueError("one amplitude per level required")
        out = np.empty(self.dim, dtype=np.complex128)
        for i, occ in enumerate(self.basis):
            w = _multinomial(self.n_atoms, occ)
            amp = sqrt(w)
            for a, n in zip(c, occ):
                amp = amp * a**n
            out[i] = amp
        n = np.linalg.norm(out)
        return out / n


def _compositions(total, parts):
    """All tuples of `parts` nonnegative ints summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _multinomial(n, occ):
    out = _factorial(n)
    for k in occ:
        out //= _factorial(k)
    return out


class RestrictedSpace:
    """Bosonic modes under a joint weighted excitation cap."""

    def __init__(self, mode_labels, weights, cap):
        if len(mode_labels) != len(weights):
            raise ValueError("one weight per mode required")
        if len(set(mode_labels)) != len(mode_labels):
            raise ValueError("mode labels must be unique")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be positive integers")
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        self.mode_labels = tuple(mode_labels)
        self.weights = tuple(int(w) for w in weights)
        self.cap = int(cap)
        self.basis = tuple(_weighted_occupations(self.weights, self.cap))
        self.index = {occ: i for i, occ in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._mode_pos = {l: i for i, l in enumerate(self.mode_labels)}

    def mode_position(self, label):
        return self._mode_pos[label]

    def lowering(self, label):
        """Ladder operator b for one mode (CSR); lowers the weighted charge."""
        p = self.mode_position(label)
        rows, cols, vals = [], [], []
        for j, occ in enumerate(self.basis):
            n = occ[p]
            if n == 0:
                continue
            new = list(occ)
            new[p] = n - 1
            rows.append(self.index[tuple(new)]); cols.append(j)
            vals.append(sqrt(n))
        return sp.csr_matrix(
            (np.asarray(vals, dtype=np.complex128), (rows, cols)),
            shape=(self.dim, self.dim),
        )

    def raising(self, label):
        return self.lowering(label).conjugate().transpose().tocsr()

    def number(self, label):
        p = self.mode_position(label)
        diag = np.array([occ[p] for occ in self.basis], dtype=np.complex128)
        return sp.diags(diag).tocsr()

    def vacuum_index(self):
        return self.index[tuple([0] * len(self.mode_labels))]

    def vacuum(self):
        v = np.zeros(self.dim, dtype=np.complex128)
        v[self.vacuum_index()] = 1.0
        return v


def _weighted_occupations(weights, cap):
    """All occupation tuples with sum_i w_i n_i <= cap, lex order."""
    m = len(weights)

    def rec(i, remaining):
        if i == m:
            yield ()
            return
        w = weights[i]
        for n in range(remaining // w + 1):
            for rest in rec(i + 1, remaining - w * n):
                yield (n,) + rest

    yield from rec(0, cap)
