"""Operator construction and contraction utilities on product spaces.

Everything here is basis-explicit: a truncated mode with cutoff d carries
levels 0..d-1, the ladder operator satisfies [a, a†] = 1 - d |d-1><d-1|
exactly on the truncated space, and a†a |n> = n |n> without approximation.
"""

import numpy as np
import scipy.sparse as sp

from .spaces import Operator, Ket, DensityMatrix, SpaceSpec


def annihilation_matrix(cutoff):
    """CSR ladder operator a on a single mode of dimension `cutoff` (>= 2)."""
    if cutoff < 2:
        raise ValueError("annihilation needs cutoff >= 2")
    n = np.arange(1, cutoff)
    return sp.csr_matrix((np.sqrt(n, dtype=np.complex128), (n - 1, n)),
                         shape=(cutoff, cutoff))


def number_matrix(cutoff):
    return sp.diags(np.arange(cutoff, dtype=np.complex128)).tocsr()


def transition_matrix(cutoff, i, j):
    """|i><j| on one factor (CSR)."""
    if not (0 <= i < cutoff and 0 <= j < cutoff):
        raise ValueError("transition indices outside factor dimension")
    return sp.csr_matrix(([1.0 + 0j], ([i], [j])), shape=(cutoff, cutoff))


def tensor_product(space: SpaceSpec, factor_mats) -> Operator:
    """Kronecker product over all factors; `factor_mats` maps label -> matrix.

    Factors not named get the identity.  Result is CSR.
    """
    out = None
    for f in space.factors:
        m = factor_mats.get(f.label)
        if m is None:
            m = sp.identity(f.cutoff, dtype=np.complex128, format="csr")
        else:
            m = sp.csr_matrix(m, dtype=np.complex128)
            if m.shape != (f.cutoff, f.cutoff):
                raise ValueError(
                    f"matrix for factor {f.label!r} has shape {m.shape}, "
                    f"expected {(f.cutoff, f.cutoff)}"
                )
        out = m if out is None else sp.kron(out, m, format="csr")
    unknown = set(factor_mats) - {f.label for f in space.factors}
    if unknown:
        raise KeyError(f"no such factors in space: {sorted(unknown)}")
    return Operator(space, out)


def embed(space: SpaceSpec, label, mat) -> Operator:
    """Single-factor operator embedded with identities elsewhere."""
    return tensor_product(space, {label: mat})


def annihilation(space: SpaceSpec, label) -> Operator:
    f = space.factors[space.index(label)]
    return embed(space, label, annihilation_matrix(f.cutoff))


def number(space: SpaceSpec, label) -> Operator:
    f = space.factors[space.index(label)]
    return embed(space, label, number_matrix(f.cutoff))


def transition(space: SpaceSpec, label, i, j) -> Operator:
    f = space.factors[space.index(label)]
    return embed(space, label, transition_matrix(f.cutoff, i, j))


def basis_ket(space: SpaceSpec, occupations) -> Ket:
    """Product basis state |n_0, n_1, ...> in factor order."""
    occs = tuple(occupations)
    if len(occs) != len(space.factors):
        raise ValueError("one occupation per factor required")
    idx = 0
    for f, n in zip(space.factors, occs):
        if not (0 <= n < f.cutoff):
            raise ValueError(f"occupation {n} outside factor {f.label!r}")
        idx = idx * f.cutoff + n
    v = np.zeros(space.dim, dtype=np.complex128)
    v[idx] = 1.0
    return Ket(space, v)


def product_ket(space: SpaceSpec, factor_vecs) -> Ket:
    """Tensor product of per-factor vectors, in factor order."""
    out = np.array([1.0 + 0j])
    for f, v in zip(space.factors, factor_vecs):
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        if v.shape[0] != f.cutoff:
            raise ValueError(f"vector length mismatch on factor {f.label!r}")
        out = np.kron(out, v)
    return Ket(space, out, normalize=True)


def _keep_indices(space, keep_labels):
    keep = sorted(space.index(l) for l in keep_labels)
    if len(keep) != len(set(keep)):
        raise ValueError("duplicate labels in keep list")
    return keep


def partial_trace(state, keep_labels) -> DensityMatrix:
    """Trace out every factor not named in keep_labels (order preserved)."""
    space = state.space
    if not isinstance(space, SpaceSpec):
        raise TypeError("partial_trace needs a full product SpaceSpec")
    keep = _keep_indices(space, keep_labels)
    dims = space.dims
    n = len(dims)
    if isinstance(state, Ket):
        psi = state.amps.reshape(dims)
        drop = [i for i in range(n) if i not in keep]
        perm = keep + drop
        dk = int(np.prod([dims[i] for i in keep])) if keep else 1
        dd = int(np.prod([dims[i] for i in drop])) if drop else 1
        m = psi.transpose(perm).reshape(dk, dd)
        rho = m @ m.conj().T
    elif isinstance(state, DensityMatrix):
        rho_full = state.rho.reshape(dims + dims)
        drop = [i for i in range(n) if i not in keep]
        # trace over dropped factors pairwise
        for d in sorted(drop, reverse=True):
            rho_full = np.trace(rho_full, axis1=d, axis2=d + (rho_full.ndim // 2))
        dk = int(np.prod([dims[i] for i in keep])) if keep else 1
        rho = rho_full.reshape(dk, dk)
    else:
        raise TypeError("partial_trace takes a Ket or DensityMatrix")
    sub = SpaceSpec(tuple(space.factors[i] for i in keep))
    # trace output inherits validity from the input state
    return DensityMatrix(sub, rho, validate=False)


def expectation(op: Operator, state):
    """<A> for a Ket or DensityMatrix; returns complex."""
    if isinstance(state, Ket):
        if op.is_sparse:
            return complex(np.vdot(state.amps, op.csr() @ state.amps))
        return complex(np.vdot(state.amps, op.dense() @ state.amps))
    if isinstance(state, DensityMatrix):
        if op.is_sparse:
            return complex((op.csr() @ state.rho).diagonal().sum())
        return complex(np.trace(op.dense() @ state.rho))
    raise TypeError("expectation takes a Ket or DensityMatrix")
