"""Finite groups as dense Cayley tables.

Elements are dense integer indices 0..n-1; labels are cosmetic metadata.
The module also realizes the left regular representation and the small
amount of group-algebra plumbing (convolution, coefficient extraction)
that the state and channel modules build on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    IndexOutOfRange,
    NoIdentity,
    NotAssociative,
    NotLatinSquare,
    SizeLimitExceeded,
)

DEFAULT_CLOSURE_LIMIT = 10000
SYMMETRIC_DEGREE_LIMIT = 8


@dataclass(eq=False)
class FiniteGroup:
    """A finite group: Cayley table, identity, inverses, optional labels."""

    order: int
    cayley: np.ndarray
    identity: int
    inverses: np.ndarray
    labels: tuple[str, ...] | None = None
    name: str = "group"

    def __post_init__(self):
        self.cayley = np.ascontiguousarray(self.cayley, dtype=np.int64)
        self.inverses = np.ascontiguousarray(self.inverses, dtype=np.int64)
        self.cayley.setflags(write=False)
        self.inverses.setflags(write=False)

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def elements(self) -> range:
        return range(self.order)

    def label(self, s: int) -> str:
        return self.labels[s] if self.labels is not None else str(s)

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class ConjugacyPartition:
    """Conjugation orbits: disjoint classes covering the group."""

    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray
    class_sizes: tuple[int, ...]
    class_reps: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


def validate_group(cayley, labels=None, name: str = "group") -> FiniteGroup:
    """Check a multiplication table and build the group it defines.

    Verifies the Latin-square property, existence of a two-sided identity,
    and associativity over all triples; computes inverses.
    """
    table = np.asarray(cayley, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise NotLatinSquare(
            f"table must be square, got shape {table.shape}",
            witness={"shape": list(table.shape)},
        )
    n = table.shape[0]
    if n == 0:
        raise NotLatinSquare("empty table", witness={"shape": [0, 0]})
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise NotLatinSquare(
            f"entry out of range at {tuple(bad)}",
            witness={"position": [int(bad[0]), int(bad[1])]},
        )
    ref = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), ref):
            raise NotLatinSquare(
                f"row {i} is not a permutation", witness={"row": i}
            )
        if not np.array_equal(np.sort(table[:, i]), ref):
            raise NotLatinSquare(
                f"column {i} is not a permutation", witness={"column": i}
            )

    identity = -1
    for e in range(n):
        if np.array_equal(table[e], ref) and np.array_equal(table[:, e], ref):
            identity = e
            break
    if identity < 0:
        raise NoIdentity("no two-sided identity element", witness={})

    # associativity: (a b) c == a (b c), one O(n^2) slab per a
    for a in range(n):
        lhs = table[table[a], :]
        rhs = table[a][table]
        if not np.array_equal(lhs, rhs):
            b, c = np.argwhere(lhs != rhs)[0]
            raise NotAssociative(
                f"(a*b)*c != a*(b*c) for (a,b,c)=({a},{int(b)},{int(c)})",
                witness={"triple": [a, int(b), int(c)]},
            )

    inverses = np.empty(n, dtype=np.int64)
    for s in range(n):
        inverses[s] = int(np.nonzero(table[s] == identity)[0][0])

    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise ValueError(f"got {len(labels)} labels for {n} elements")
    return FiniteGroup(n, table, identity, inverses, labels, name)


def _table_from_model(elems, op, labels, name) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = index[op(x, y)]
    return validate_group(table, labels=labels, name=name)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = tuple(f"g^{k}" for k in range(n))
    return validate_group(table, labels=labels, name=f"Z{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n (rotations r, flips s*r^i)."""
    if n < 1:
        raise ValueError("dihedral parameter must be positive")

    def op(x, y):
        i, f = x
        j, g = y
        return ((i + j) % n if f == 0 else (i - j) % n, f ^ g)

    elems = [(i, f) for f in (0, 1) for i in range(n)]
    labels = tuple(f"r^{i}" if f == 0 else f"s*r^{i}" for i, f in elems)
    return _table_from_model(elems, op, labels, f"D{n}")


_QUATERNION_AXIS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion_group() -> FiniteGroup:
    """The unit quaternions {±1, ±i, ±j, ±k}, in that element order."""

    def op(x, y):
        sx, ax = x
        sy, ay = y
        sz, az = _QUATERNION_AXIS[(ax, ay)]
        return (sx * sy * sz, az)

    elems = [(s, a) for a in range(4) for s in (1, -1)]
    base = ["1", "i", "j", "k"]
    labels = tuple(base[a] if s == 1 else "-" + base[a] for s, a in elems)
    return _table_from_model(elems, op, labels, "Q8")


def symmetric_group(n: int) -> FiniteGroup:
    """All permutations of {0..n-1} under composition, order n!."""
    if n < 1:
        raise ValueError("symmetric degree must be positive")
    if n > SYMMETRIC_DEGREE_LIMIT:
        raise SizeLimitExceeded(
            f"symmetric group degree {n} exceeds limit {SYMMETRIC_DEGREE_LIMIT}",
            witness={"degree": n, "limit": SYMMETRIC_DEGREE_LIMIT},
        )

    def op(p, q):
        return tuple(p[q[i]] for i in range(n))

    elems = list(itertools.permutations(range(n)))
    labels = tuple("".join(map(str, p)) for p in elems)
    return _table_from_model(elems, op, labels, f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product with element (a, b) packed as a * |H| + b."""
    n, m = g.order, h.order
    a = np.repeat(np.arange(n), m)
    b = np.tile(np.arange(m), n)
    table = g.cayley[np.ix_(a, a)] * m + h.cayley[np.ix_(b, b)]
    labels = tuple(
        f"({g.label(int(x))},{h.label(int(y))})" for x, y in zip(a, b)
    )
    return validate_group(table, labels=labels, name=f"{g.name}x{h.name}")


def build_named(kind: str) -> FiniteGroup:
    """Build a group from a CLI-style kind string.

    Supported kinds: ``cyclic:n``, ``dihedral:n``, ``quaternion8``,
    ``symmetric:n``, ``product:<kind>,<kind>``.
    """
    kind = kind.strip()
    if kind == "quaternion8":
        return quaternion_group()
    if kind.startswith("product:"):
        body = kind[len("product:"):]
        # factors are basic kinds (comma-free); the right factor may itself
        # be a product, so split at the first comma only
        split_at = body.find(",")
        if split_at < 0:
            raise ValueError(f"product kind needs two comma-separated factors: {kind!r}")
        return direct_product(build_named(body[:split_at]), build_named(body[split_at + 1:]))
    if ":" in kind:
        head, _, arg = kind.partition(":")
        n = int(arg)
        if head == "cyclic":
            return cyclic_group(n)
        if head == "dihedral":
            return dihedral_group(n)
        if head == "symmetric":
            return symmetric_group(n)
    raise ValueError(f"unknown group kind {kind!r}")


def from_permutation_generators(
    gens, max_order: int = DEFAULT_CLOSURE_LIMIT
) -> FiniteGroup:
    """Breadth-first closure of permutation generators under composition."""
    gens = [tuple(int(x) for x in p) for p in gens]
    if not gens:
        raise ValueError("need at least one generator")
    m = len(gens[0])
    for p in gens:
        if len(p) != m or sorted(p) != list(range(m)):
            raise ValueError(f"generator {p} is not a permutation of 0..{m - 1}")

    ident = tuple(range(m))
    index: dict[tuple[int, ...], int] = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for p in gens:
                z = tuple(p[x[i]] for i in range(m))
                if z not in index:
                    if len(elems) >= max_order:
                        raise SizeLimitExceeded(
                            f"closure exceeds {max_order} elements",
                            witness={"limit": max_order},
                        )
                    index[z] = len(elems)
                    elems.append(z)
                    nxt.append(z)
        frontier = nxt

    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = index[tuple(x[y[t]] for t in range(m))]
    labels = tuple("".join(map(str, p)) for p in elems) if m <= 10 else None
    return validate_group(table, labels=labels, name=f"perm{n}")


def conjugacy_classes(group: FiniteGroup) -> ConjugacyPartition:
    """Orbits of the conjugation action, identity class first."""
    n = group.order
    table, inv = group.cayley, group.inverses
    all_g = np.arange(n)
    seen = np.zeros(n, dtype=bool)
    classes = []
    for s in range(n):
        if seen[s]:
            continue
        orbit = np.unique(table[table[all_g, s], inv[all_g]])
        seen[orbit] = True
        classes.append(tuple(int(x) for x in orbit))
    classes.sort(key=lambda c: (group.identity not in c, len(c), c[0]))

    class_of = np.empty(n, dtype=np.int64)
    for ci, members in enumerate(classes):
        for s in members:
            class_of[s] = ci
    class_of.setflags(write=False)
    return ConjugacyPartition(
        classes=tuple(classes),
        class_of=class_of,
        class_sizes=tuple(len(c) for c in classes),
        class_reps=tuple(min(c) for c in classes),
    )


def regular_representation(group: FiniteGroup, s: int) -> np.ndarray:
    """Left translation operator as a 0/1 permutation matrix.

    Row t has its 1 in column s^{-1} t, so the matrix sends the point mass
    at u to the point mass at s u.
    """
    n = group.order
    if not (0 <= s < n):
        raise IndexOutOfRange(
            f"element index {s} out of range for order {n}",
            witness={"index": s, "order": n},
        )
    mat = np.zeros((n, n), dtype=complex)
    cols = group.cayley[group.inverses[s]]
    mat[np.arange(n), cols] = 1.0
    return mat


def generating_set(group: FiniteGroup) -> list[int]:
    """A small generating set, greedily built in element order."""
    n = group.order
    gens: list[int] = []
    generated = {group.identity}
    for s in range(n):
        if s in generated:
            continue
        gens.append(s)
        frontier = list(generated | {s})
        generated.add(s)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(generated):
                    for c in (group.mul(a, b), group.mul(b, a)):
                        if c not in generated:
                            generated.add(c)
                            nxt.append(c)
            frontier = nxt
        if len(generated) == n:
            break
    return gens


# --------------------------------------------------------------------------
# group-algebra plumbing: elements are complex coefficient vectors c with
# x = sum_s c[s] lambda_s; the regular representation realizes them as
# n x n matrices.
# --------------------------------------------------------------------------

def convolve(group: FiniteGroup, a, b) -> np.ndarray:
    """Coefficients of the product (sum a_s lambda_s)(sum b_t lambda_t)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = group.order
    out = np.zeros(n, dtype=complex)
    for s in range(n):
        if a[s] != 0:
            out[group.cayley[s]] += a[s] * b
    return out


def star(group: FiniteGroup, a) -> np.ndarray:
    """Coefficients of the adjoint: (a*)(s) = conj(a(s^{-1}))."""
    a = np.asarray(a, dtype=complex)
    return np.conj(a[group.inverses])


def algebra_matrix(group: FiniteGroup, coeffs) -> np.ndarray:
    """Regular-representation image of sum_s coeffs[s] lambda_s."""
    c = np.asarray(coeffs, dtype=complex)
    n = group.order
    # row t, column u carries coeff(t u^{-1})
    idx = group.cayley[:, group.inverses]
    return c[idx]


def algebra_coefficients(group: FiniteGroup, mat) -> np.ndarray:
    """Coefficient vector of an algebra element given as a matrix.

    Reads the column at the identity index; valid only when the matrix is
    in the image of the regular representation (see membership_residual).
    """
    m = np.asarray(mat, dtype=complex)
    return m[:, group.identity].copy()


def membership_residual(group: FiniteGroup, mat) -> float:
    """Distance from a matrix to the regular-representation image."""
    m = np.asarray(mat, dtype=complex)
    rebuilt = algebra_matrix(group, algebra_coefficients(group, m))
    return float(np.abs(m - rebuilt).max())


def same_group(g: FiniteGroup, h: FiniteGroup) -> bool:
    """Identity of groups as data: equal tables (labels ignored)."""
    return g is h or (g.order == h.order and np.array_equal(g.cayley, h.cayley))
