"""Tensor-product state spaces and the immutable operator/state containers.

A SpaceSpec is an ordered list of factors, each a (label, kind, cutoff)
triple.  `cutoff` is the factor DIMENSION: a photon-mode factor with cutoff 4
holds Fock levels 0..3.  Operators carry their space and either a dense array
or a CSR matrix; builders emit sparse, diagnostics densify small operators.
All containers are immutable — transformations return new objects.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

# factor kinds
PHOTON_MODE = "photon-mode"
COLLECTIVE_MODE = "collective-mode"
SPIN_HALF = "spin-half"
ATOM_LEVELS = "atom-levels"

_KINDS = (PHOTON_MODE, COLLECTIVE_MODE, SPIN_HALF, ATOM_LEVELS)

# below this total dimension operators densify for diagnostics
DENSE_DIAG_LIMIT = 4096


@dataclass(frozen=True)
class Factor:
    label: str
    kind: str
    cutoff: int  # dimension of this factor

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == SPIN_HALF and self.cutoff != 2:
            raise ValueError("spin-half factor must have cutoff 2")
        if self.kind == PHOTON_MODE:
            if self.cutoff < 1:
                raise ValueError("photon-mode cutoff must be >= 1")
        elif self.cutoff < 2:
            raise ValueError(
                f"factor {self.label!r}: cutoff {self.cutoff} < 2 "
                "(only vacuum-only photon factors may have dimension 1)"
            )


@dataclass(frozen=True)
class SpaceSpec:
    factors: tuple

    def __post_init__(self):
        facs = tuple(
            f if isinstance(f, Factor) else Factor(*f) for f in self.factors
        )
        object.__setattr__(self, "factors", facs)
        labels = [f.label for f in facs]
        if len(set(labels)) != len(labels):
            raise ValueError("factor labels must be unique")

    @property
    def dims(self):
        return tuple(f.cutoff for f in self.factors)

    @property
    def dim(self):
        out = 1
        for f in self.factors:
            out *= f.cutoff
        return out

    def index(self, label):
        for i, f in enumerate(self.factors):
            if f.label == label:
                return i
        raise KeyError(f"no factor labelled {label!r}")

    def __len__(self):
        return len(self.factors)


def space(*factors) -> SpaceSpec:
    """Convenience builder: space(("cav", PHOTON_MODE, 4), ...)."""
    return SpaceSpec(tuple(factors))


def _freeze(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class Operator:
    """Linear operator on a space; dense ndarray or CSR, immutable."""

    __slots__ = ("space", "_mat", "_is_sparse")

    def __init__(self, space, mat):
        d = space.dim
        if sp.issparse(mat):
            mat = mat.tocsr().astype(np.complex128)
            mat.data.setflags(write=False)
            self._is_sparse = True
        else:
            mat = _freeze(np.asarray(mat, dtype=np.complex128))
            self._is_sparse = False
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} != space dim {d}")
        self.space = space
        self._mat = mat

    # -- representations -------------------------------------------------
    @property
    def is_sparse(self):
        return self._is_sparse

    def csr(self):
        if self._is_sparse:
            return self._mat
        return sp.csr_matrix(self._mat)

    def dense(self):
        if self._is_sparse:
            return self._mat.toarray()
        return self._mat

    @property
    def dim(self):
        return self.space.dim

    # -- algebra (results stay in whichever format both sides share) -----
    def _same_space(self, other):
        if self.space is not other.space and self.space != other.space:
            raise ValueError("operators live on different spaces")

    def __add__(self, other):
        if isinstance(other, Operator):
            self._same_space(other)
            return Operator(self.space, self.csr() + other.csr()
                            if self._is_sparse and other._is_sparse
                            else self.dense() + other.dense())
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            self._same_space(other)
            return self + (-1.0) * other
        return NotImplemented

    def __mul__(self, c):
        if np.isscalar(c):
            return Operator(self.space, self._mat * c)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._same_space(other)
            if self._is_sparse and other._is_sparse:
                return Operator(self.space, self.csr() @ other.csr())
            return Operator(self.space, self.dense() @ other.dense())
        if isinstance(other, Ket):
            self._same_space(other)
            return Ket(other.space, self.csr() @ other.amps
                       if self._is_sparse else self.dense() @ other.amps,
                       normalize=False)
        return NotImplemented

    def dag(self):
        return Operator(self.space, self._mat.conj().T if not self._is_sparse
                        else self._mat.conjugate().transpose().tocsr())

    def is_hermitian(self, tol=1e-12):
        d = self.csr() - self.csr().conjugate().transpose()
        if d.nnz == 0:
            return True
        scale = max(1.0, abs(self.csr()).max())
        return abs(d).max() <= tol * scale

    def __repr__(self):
        fmt = "csr" if self._is_sparse else "dense"
        return f"Operator(dim={self.dim}, {fmt})"


class Ket:
    """Pure state; amplitudes immutable, norm within 1e-9 of 1 if normalized."""

    __slots__ = ("space", "amps")

    NORM_TOL = 1e-9

    def __init__(self, space, amps, normalize=False):
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != space.dim:
            raise ValueError(
                f"amplitude length {amps.shape[0]} != space dim {space.dim}"
            )
        if normalize:
            n = np.linalg.norm(amps)
            if n == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / n
        self.space = space
        self.amps = _freeze(amps)

    @property
    def dim(self):
        return self.space.dim

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def check_normalized(self):
        if abs(self.norm() - 1.0) > self.NORM_TOL:
            raise ValueError(f"state norm {self.norm()} departs from 1")

    def overlap(self, other):
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def to_density_matrix(self):
        return DensityMatrix(self.space, np.outer(self.amps, self.amps.conj()),
                             validate=False)

    def __repr__(self):
        return f"Ket(dim={self.dim}, norm={self.norm():.6f})"


class DensityMatrix:
    """Mixed state: Hermitian (1e-12), unit trace (1e-9), eigvals >= -1e-9."""

    __slots__ = ("space", "rho")

    def __init__(self, space, rho, validate=True):
        rho = np.asarray(rho, dtype=np.complex128)
        if sp.issparse(rho):
            rho = rho.toarray()
        if rho.shape != (space.dim, space.dim):
            raise ValueError("density matrix shape mismatch")
        if validate:
            herm_dev = np.max(np.abs(rho - rho.conj().T))
            if herm_dev > 1e-12 * max(1.0, np.max(np.abs(rho))):
                raise ValueError(f"density matrix not Hermitian (dev {herm_dev:g})")
            tr = np.trace(rho).real
            if abs(tr - 1.0) > 1e-9:
                raise ValueError(f"density matrix trace {tr} departs from 1")
            w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
            if w.min() < -1e-9:
                raise ValueError(f"density matrix has eigenvalue {w.min():g} < -1e-9")
        self.space = space
        self.rho = _freeze(rho)

    @property
    def dim(self):
        return self.space.dim

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"
