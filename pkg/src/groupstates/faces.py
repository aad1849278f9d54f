"""Faces of the state space supported by projections in the group algebra.

Face(p) is the set of states with omega(p) = 1.  Split faces correspond
exactly to central projections; since the center is spanned by the minimal
central projections, all split faces can be enumerated exhaustively as
subset sums.  Maximal chain lengths inside a minimal split face recover the
block dimension through the rank argument in the block image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import CharacterTable, CentralProjection, minimal_central_projections
from .errors import (
    BoundsViolation,
    ConvergenceFailure,
    GroupMismatch,
    NotCentral,
    SizeLimitExceeded,
)
from .groups import FiniteGroup, generating_set, regular_representation, same_group
from .linalg import DEFAULT_TOL, Tolerance
from .posdef import GroupFunction, NormalState, to_state

SPLIT_FACE_IRREP_LIMIT = 20


@dataclass(eq=False)
class FaceDescriptor:
    """A face given by its supporting projection (coefficients + matrix)."""

    group: FiniteGroup
    coeffs: np.ndarray
    matrix: np.ndarray
    is_central: bool
    is_split: bool
    irreps: tuple[int, ...] | None = None

    def __post_init__(self):
        self.coeffs.setflags(write=False)
        self.matrix.setflags(write=False)
        if self.is_split != self.is_central:
            raise ValueError("a face is split exactly when its projection is central")


@dataclass(frozen=True)
class FaceChain:
    """A strictly increasing chain of projections inside one block face."""

    group: FiniteGroup
    irrep: int
    projections: tuple[np.ndarray, ...]
    ranks: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.projections)


def _centrality_deviation(group: FiniteGroup, matrix: np.ndarray) -> float:
    dev = 0.0
    for s in generating_set(group) or [group.identity]:
        lam = regular_representation(group, s)
        dev = max(dev, float(np.abs(lam @ matrix - matrix @ lam).max()))
    return dev


def _require_central(group: FiniteGroup, matrix: np.ndarray, tol: Tolerance) -> None:
    dev = _centrality_deviation(group, matrix)
    if dev > tol.residual_tol:
        raise NotCentral(
            f"projection does not commute with the regular representation "
            f"(deviation {dev:.3e})",
            witness={"deviation": dev},
        )


def descriptor_from_projection(
    group: FiniteGroup,
    coeffs,
    matrix=None,
    tol: Tolerance = DEFAULT_TOL,
) -> FaceDescriptor:
    """Wrap a projection as a face descriptor, detecting centrality."""
    from .groups import algebra_matrix

    c = np.asarray(coeffs, dtype=complex)
    m = np.asarray(matrix, dtype=complex) if matrix is not None else algebra_matrix(group, c)
    herm = float(np.abs(m - m.conj().T).max())
    idem = float(np.abs(m @ m - m).max())
    if herm > tol.residual_tol or idem > tol.residual_tol:
        raise ConvergenceFailure(
            f"not a projection (herm {herm:.2e}, idem {idem:.2e})",
            witness={"hermitian_residual": herm, "idempotent_residual": idem},
        )
    central = _centrality_deviation(group, m) <= tol.residual_tol
    return FaceDescriptor(group, c, m, central, central)


def face_membership(
    face: FaceDescriptor, state: NormalState, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """True iff omega(p) = 1 within tolerance."""
    if not same_group(face.group, state.group):
        raise GroupMismatch(
            "face and state live on different groups",
            witness={"orders": [face.group.order, state.group.order]},
        )
    value = state.expectation(face.coeffs)
    if not (-tol.residual_tol <= value.real <= 1.0 + tol.residual_tol):
        raise BoundsViolation(
            f"omega(p) = {value} outside [0, 1]",
            witness={"value": [value.real, value.imag]},
        )
    return abs(value - 1.0) <= tol.residual_tol


def split_faces(
    group: FiniteGroup,
    table: CharacterTable,
    tol: Tolerance = DEFAULT_TOL,
    minimal: list[CentralProjection] | None = None,
) -> list[FaceDescriptor]:
    """All 2^k split faces, as subset sums of minimal central projections.

    Exhaustive enumeration replaces any maximality search: in finite
    dimension the split faces are exactly the central-projection faces.
    """
    k = table.num_irreps
    if k > SPLIT_FACE_IRREP_LIMIT:
        raise SizeLimitExceeded(
            f"{k} irreducible blocks exceed the enumeration limit "
            f"{SPLIT_FACE_IRREP_LIMIT}",
            witness={"irreps": k, "limit": SPLIT_FACE_IRREP_LIMIT},
        )
    if minimal is None:
        minimal = minimal_central_projections(group, table, tol)
    n = group.order
    faces = []
    for mask in range(2**k):
        members = tuple(pi for pi in range(k) if mask >> pi & 1)
        coeffs = np.zeros(n, dtype=complex)
        matrix = np.zeros((n, n), dtype=complex)
        for pi in members:
            coeffs = coeffs + minimal[pi].coeffs
            matrix = matrix + minimal[pi].matrix
        faces.append(
            FaceDescriptor(group, coeffs, matrix, True, True, irreps=members)
        )
    return faces


def complementary_split_face(
    face: FaceDescriptor, tol: Tolerance = DEFAULT_TOL
) -> FaceDescriptor:
    """The complementary face, supported by 1 - p."""
    group = face.group
    _require_central(group, face.matrix, tol)
    coeffs = -face.coeffs.copy()
    coeffs[group.identity] += 1.0
    matrix = np.eye(group.order, dtype=complex) - face.matrix
    # subset bookkeeping is only well-defined relative to the full
    # enumeration, so the complement carries no irreps tag
    return FaceDescriptor(group, coeffs, matrix, True, True, irreps=None)


def state_decomposition(
    state: NormalState,
    face: FaceDescriptor,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[float, NormalState | None, NormalState | None]:
    """Split a state across a central projection: omega = t w1 + (1-t) w2.

    w1 lives in Face(p), w2 in Face(1-p), and t = omega(p).  At t = 0 or
    t = 1 the undetermined component is returned as None.
    """
    group = state.group
    if not same_group(face.group, group):
        raise GroupMismatch(
            "face and state live on different groups",
            witness={"orders": [face.group.order, group.order]},
        )
    _require_central(group, face.matrix, tol)
    t = state.expectation(face.coeffs).real
    if t >= 1.0 - tol.residual_tol:
        return 1.0, state, None
    if t <= tol.residual_tol:
        return 0.0, None, state

    p = face.matrix
    q = np.eye(group.order, dtype=complex) - p
    d = state.gram
    cut1 = (p @ d @ p) / t
    cut2 = (q @ d @ q) / (1.0 - t)
    recon = float(np.abs(t * cut1 + (1.0 - t) * cut2 - d).max())
    if recon > tol.residual_tol:
        raise ConvergenceFailure(
            f"decomposition reconstruction residual {recon:.3e}",
            witness={"residual": recon},
        )
    from .groups import algebra_coefficients

    w1 = to_state(GroupFunction(group, algebra_coefficients(group, cut1)), tol)
    w2 = to_state(GroupFunction(group, algebra_coefficients(group, cut2)), tol)
    return float(t), w1, w2


def block_face_chain(decomp, pi: int, tol: Tolerance = DEFAULT_TOL) -> FaceChain:
    """The canonical chain q_1 < q_2 < ... < q_d of projections under p_pi,
    built from the diagonal matrix units of the block decomposition."""
    group = decomp.group
    d = decomp.block_dims[pi]
    running = np.zeros((group.order, group.order), dtype=complex)
    projections = []
    ranks = []
    prev_rank = 0
    for j in range(d):
        running = running + decomp.unit_matrix(pi, j, j)
        herm = float(np.abs(running - running.conj().T).max())
        idem = float(np.abs(running @ running - running).max())
        if herm > tol.residual_tol or idem > tol.residual_tol:
            raise ConvergenceFailure(
                f"chain element {j} is not a projection",
                witness={"hermitian_residual": herm, "idempotent_residual": idem},
            )
        rank = int(np.sum(np.linalg.eigvalsh((running + running.conj().T) / 2) > 0.5))
        if rank <= prev_rank:
            raise ConvergenceFailure(
                f"chain ranks not strictly increasing at step {j}",
                witness={"rank": rank, "previous": prev_rank},
            )
        if projections:
            order_dev = float(np.abs(projections[-1] @ running - projections[-1]).max())
            if order_dev > tol.residual_tol:
                raise ConvergenceFailure(
                    f"chain order violated at step {j}",
                    witness={"deviation": order_dev},
                )
        projections.append(running.copy())
        ranks.append(rank)
        prev_rank = rank
    return FaceChain(group, pi, tuple(projections), tuple(ranks))


def maximal_chain_length(
    group: FiniteGroup,
    table: CharacterTable,
    pi: int,
    trials: int = 20,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    decomp=None,
) -> int:
    """Length of a maximal strictly increasing chain of faces inside the
    minimal split face of block pi.

    The chain is built explicitly from the block decomposition; maximality
    is certified by the rank bound inside the d x d block image rather than
    by search (``trials`` is the decomposition retry budget).
    """
    from .vn import block_decompose

    if not 0 <= pi < table.num_irreps:
        raise ValueError(f"irrep index {pi} out of range")
    if decomp is None:
        decomp = block_decompose(group, table, seed=seed, max_retries=trials, tol=tol)
    chain = block_face_chain(decomp, pi, tol)

    # certification in the block image: each chain element must be a
    # projection of rank k inside M_d, and any strictly increasing chain of
    # projections in M_d has length at most d
    d = decomp.block_dims[pi]
    for k, mat in enumerate(chain.projections, start=1):
        blocks = decomp.from_algebra(mat)
        img = blocks[pi]
        idem = float(np.abs(img @ img - img).max())
        if idem > 10 * tol.residual_tol:
            raise ConvergenceFailure(
                f"block image of chain element {k} is not a projection",
                witness={"residual": idem},
            )
        img_rank = int(np.sum(np.linalg.eigvalsh((img + img.conj().T) / 2) > 0.5))
        if img_rank != k:
            raise ConvergenceFailure(
                f"block image rank {img_rank} != chain position {k}",
                witness={"rank": img_rank, "position": k},
            )
        for rho, other in enumerate(blocks):
            if rho != pi and float(np.abs(other).max()) > 10 * tol.residual_tol:
                raise ConvergenceFailure(
                    f"chain element {k} leaks into block {rho}",
                    witness={"block": rho},
                )
    if chain.length != d:
        raise ConvergenceFailure(
            f"constructed chain has length {chain.length}, block dimension {d}",
            witness={"length": chain.length, "dimension": d},
        )
    return chain.length
