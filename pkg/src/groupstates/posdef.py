"""Positive definite functions on a finite group and their state realization.

A function phi with phi(e) = 1 and PSD Gram matrix corresponds to exactly
one normal state of the group von Neumann algebra: the density element with
coefficients phi(s) in the lambda basis, paired against the normalized
trace.  The correspondence is affine, isometric and involutive, and both
directions are implemented here together with the GNS representation and
the extremality test.

Convention note: the Gram matrix puts phi(s_k^{-1} s_j) at entry (j, k).
The GNS inner-product kernel is its transpose, which makes the matrix
coefficient at the cyclic vector come out as phi(s) rather than phi(s^{-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadWeights,
    ConvergenceFailure,
    GroupMismatch,
    NotHermitianSymmetric,
    NotNormalized,
    NotPositiveDefinite,
)
from .groups import FiniteGroup, algebra_matrix, generating_set, same_group
from .linalg import DEFAULT_TOL, PsdVerdict, Tolerance, hermitian_eig, is_psd, trace_norm


@dataclass(eq=False)
class GroupFunction:
    """A complex function on the group, values indexed by element."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=complex)
        if v.shape != (self.group.order,):
            raise ValueError(
                f"expected {self.group.order} values, got shape {v.shape}"
            )
        if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
            raise ValueError("function values contain NaN or Inf")
        v.setflags(write=False)
        self.values = v

    def __call__(self, s: int) -> complex:
        return complex(self.values[s])


def delta_e(group: FiniteGroup) -> GroupFunction:
    """The point mass at the identity (the tracial state's function)."""
    v = np.zeros(group.order, dtype=complex)
    v[group.identity] = 1.0
    return GroupFunction(group, v)


def constant_one(group: FiniteGroup) -> GroupFunction:
    """The constant function 1 (the trivial representation's character)."""
    return GroupFunction(group, np.ones(group.order, dtype=complex))


def hermitian_symmetry_deviation(fn: GroupFunction) -> float:
    """Max deviation of phi(s^{-1}) from conj(phi(s))."""
    v = fn.values
    return float(np.abs(v[fn.group.inverses] - np.conj(v)).max())


def _require_hermitian_symmetric(fn: GroupFunction, tol: Tolerance) -> None:
    dev = hermitian_symmetry_deviation(fn)
    if dev > tol.residual_tol:
        raise NotHermitianSymmetric(
            f"phi(s^-1) != conj(phi(s)), max deviation {dev:.3e}",
            witness={"deviation": dev},
        )


def gram_matrix(fn: GroupFunction) -> np.ndarray:
    """The |G| x |G| matrix with entry (j, k) = phi(s_k^{-1} s_j)."""
    g = fn.group
    idx = g.cayley[g.inverses].T  # [j, k] = s_k^{-1} s_j
    return fn.values[idx]


def is_positive_definite(fn: GroupFunction, tol: Tolerance = DEFAULT_TOL) -> PsdVerdict:
    """PSD verdict for the full Gram matrix, with witness eigenvalue."""
    _require_hermitian_symmetric(fn, tol)
    return is_psd(gram_matrix(fn), tol)


@dataclass(eq=False)
class NormalState:
    """A normal state of the group algebra, held as its density element.

    ``coefficients`` are the lambda-basis coefficients of the density (equal
    to the values of the corresponding positive definite function), ``gram``
    is the cached regular-representation image, with entry (t, u) equal to
    phi(t u^{-1}).  The pairing is omega(x) = tr(x . density) / |G|.
    """

    group: FiniteGroup
    coefficients: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        self.coefficients.setflags(write=False)
        self.gram.setflags(write=False)

    def expectation(self, coeffs) -> complex:
        """omega applied to the algebra element sum_s coeffs[s] lambda_s."""
        c = np.asarray(coeffs, dtype=complex)
        return complex(np.sum(c * self.coefficients[self.group.inverses]))


def to_state(fn: GroupFunction, tol: Tolerance = DEFAULT_TOL) -> NormalState:
    """Realize a normalized positive definite function as a normal state.

    Membership in P1 is re-verified here rather than trusted: raises
    NotNormalized when phi(e) != 1 and NotPositiveDefinite when the Gram
    matrix fails the PSD test.
    """
    g = fn.group
    fe = fn.values[g.identity]
    if abs(fe - 1.0) > tol.residual_tol:
        raise NotNormalized(
            f"phi(e) = {fe}, expected 1", witness={"value_at_identity": [fe.real, fe.imag]}
        )
    verdict = is_positive_definite(fn, tol)
    if not verdict.is_psd:
        raise NotPositiveDefinite(
            f"Gram matrix has eigenvalue {verdict.witness:.3e}",
            witness={"min_eigenvalue": verdict.witness, "cutoff": verdict.cutoff},
        )
    density = algebra_matrix(g, fn.values)
    return NormalState(g, fn.values.copy(), density)


def from_state(state: NormalState) -> GroupFunction:
    """The positive definite function phi(s) = omega(lambda_s^*)."""
    return GroupFunction(state.group, state.coefficients.copy())


def a_norm(fn: GroupFunction, tol: Tolerance = DEFAULT_TOL) -> float:
    """Fourier-algebra norm: trace norm of the density in the normalized trace."""
    _require_hermitian_symmetric(fn, tol)
    return trace_norm(algebra_matrix(fn.group, fn.values)) / fn.group.order


def convex_combine(
    weights: Sequence[float], fns: Sequence[GroupFunction]
) -> GroupFunction:
    """Pointwise convex combination of functions over one group."""
    w = np.asarray(weights, dtype=float)
    if len(fns) == 0 or w.shape != (len(fns),):
        raise BadWeights(
            f"{w.size} weights for {len(fns)} functions",
            witness={"weights": w.tolist(), "functions": len(fns)},
        )
    if w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
        raise BadWeights(
            f"weights must be nonnegative and sum to 1, got sum {w.sum()!r}",
            witness={"weights": w.tolist(), "sum": float(w.sum())},
        )
    base = fns[0].group
    for fn in fns[1:]:
        if not same_group(base, fn.group):
            raise GroupMismatch(
                "functions live on different groups",
                witness={"orders": [base.order, fn.group.order]},
            )
    mixed = np.tensordot(w, np.stack([fn.values for fn in fns]), axes=1)
    return GroupFunction(base, mixed)


@dataclass(eq=False)
class GnsRepresentation:
    """The cyclic unitary representation built from a state.

    ``rep[s]`` is a dim x dim unitary, the cyclic vector satisfies
    <rep(s) xi, xi> = phi(s) (inner product linear in the first slot).
    """

    group: FiniteGroup
    dim: int
    rep: np.ndarray
    cyclic_vector: np.ndarray

    def matrix_coefficient(self, s: int) -> complex:
        xi = self.cyclic_vector
        return complex(np.vdot(xi, self.rep[s] @ xi))


def gns(fn: GroupFunction, tol: Tolerance = DEFAULT_TOL) -> GnsRepresentation:
    """GNS construction: quotient of the group algebra by the null space
    of the sesquilinear form induced by phi.

    The kernel used is the transpose of the Gram matrix, so the recovered
    matrix coefficient is phi(s) itself.  Eigenvectors with eigenvalue above
    the cutoff are kept and rescaled to an orthonormal basis of the quotient.
    """
    g = fn.group
    verdict = is_positive_definite(fn, tol)
    if not verdict.is_psd:
        raise NotPositiveDefinite(
            f"Gram matrix has eigenvalue {verdict.witness:.3e}",
            witness={"min_eigenvalue": verdict.witness},
        )
    kernel = gram_matrix(fn).T
    w, v = hermitian_eig(kernel, tol)
    cutoff = tol.eig_cutoff(kernel)
    keep = w > cutoff
    dim = int(np.count_nonzero(keep))
    if dim == 0:
        raise NotPositiveDefinite("form has rank zero", witness={})
    roots = np.sqrt(w[keep])
    vk = v[:, keep]
    project = roots[:, None] * vk.conj().T     # class of a coefficient vector
    lift = vk * (1.0 / roots)[None, :]         # orthonormal class representatives

    n = g.order
    rep = np.empty((n, dim, dim), dtype=complex)
    inv_rows = g.cayley[g.inverses]            # row s = left translation index map
    for s in range(n):
        rep[s] = project @ lift[inv_rows[s], :]
    cyclic = project[:, g.identity].copy()

    rep_dev = max(
        float(np.abs(rep[s].conj().T @ rep[s] - np.eye(dim)).max()) for s in range(n)
    )
    coeff_dev = max(
        abs(complex(np.vdot(cyclic, rep[s] @ cyclic)) - fn(s)) for s in range(n)
    )
    if rep_dev > tol.residual_tol or coeff_dev > tol.residual_tol:
        raise ConvergenceFailure(
            f"GNS verification failed (unitarity {rep_dev:.2e}, "
            f"coefficient {coeff_dev:.2e})",
            witness={"unitarity": rep_dev, "coefficient": coeff_dev},
        )
    return GnsRepresentation(g, dim, rep, cyclic)


def commutant_dimension(rep: GnsRepresentation, tol: Tolerance = DEFAULT_TOL) -> int:
    """Dimension of {X : X rep(s) = rep(s) X for generators s}.

    Commuting with a generating set implies commuting with every rep(s).
    """
    g = rep.group
    d = rep.dim
    gens = generating_set(g) or [g.identity]
    eye = np.eye(d)
    blocks = [
        np.kron(eye, rep.rep[s]) - np.kron(rep.rep[s].T, eye) for s in gens
    ]
    stacked = np.vstack(blocks)
    svals = np.linalg.svd(stacked, compute_uv=False)
    top = float(svals[0]) if svals.size else 0.0
    cutoff = tol.eig_tol * max(stacked.shape) * max(top, 1.0)
    return int(np.count_nonzero(svals <= cutoff))


def is_extreme(fn: GroupFunction, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Extreme point test: true iff the GNS representation is irreducible,
    i.e. its commutant is one-dimensional."""
    rep = gns(fn, tol)
    return commutant_dimension(rep, tol) == 1


# --------------------------------------------------------------------------
# samplers (seeded, used by property tests, demos and the CLI)
# --------------------------------------------------------------------------

def random_hermitian_symmetric(
    group: FiniteGroup, rng: np.random.Generator, scale: float = 1.0
) -> GroupFunction:
    """Random phi with phi(s^{-1}) = conj(phi(s)) and phi(e) = 1."""
    n = group.order
    v = np.zeros(n, dtype=complex)
    for s in range(n):
        t = group.inv(s)
        if s > t:
            continue
        if s == t:
            v[s] = rng.normal(scale=scale)
        else:
            z = rng.normal(scale=scale) + 1j * rng.normal(scale=scale)
            v[s] = z
            v[t] = np.conj(z)
    v[group.identity] = 1.0
    return GroupFunction(group, v)


def vector_state(group: FiniteGroup, xi) -> GroupFunction:
    """phi(s) = <lambda_s xi, xi> for a unit vector xi; always in P1."""
    x = np.asarray(xi, dtype=complex)
    x = x / np.linalg.norm(x)
    inv_rows = group.cayley[group.inverses]
    vals = np.array([np.vdot(x, x[inv_rows[s]]) for s in group.elements()])
    return GroupFunction(group, vals)


def random_p1(
    group: FiniteGroup,
    rng: np.random.Generator,
    components: int | None = None,
) -> GroupFunction:
    """Dirichlet mixture of random vector states: samples all of P1."""
    n = group.order
    m = components if components is not None else int(rng.integers(1, n + 1))
    weights = rng.dirichlet(np.ones(m))
    vals = np.zeros(n, dtype=complex)
    for w in weights:
        xi = rng.normal(size=n) + 1j * rng.normal(size=n)
        vals += w * vector_state(group, xi).values
    return GroupFunction(group, vals)
