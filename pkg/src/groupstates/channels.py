"""Fourier multiplier channels on the group von Neumann algebra.

The channel with symbol phi sends lambda_s to phi(s) lambda_s.  Complete
positivity is certified twice, by independently coded paths: the PSD test
of the Schur symbol matrix phi(s t^{-1}) and the PSD test of the explicit
Choi matrix of the Schur-multiplier extension.  Disagreement between the
two outside the undecided band signals a convention bug and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GroupMismatch, InternalDisagreement
from .groups import FiniteGroup, same_group
from .linalg import DEFAULT_TOL, PsdVerdict, Tolerance, is_psd, kron
from .posdef import GroupFunction, _require_hermitian_symmetric


def schur_symbol(fn: GroupFunction) -> np.ndarray:
    """The |G| x |G| matrix with entry (s, t) = phi(s t^{-1}).

    This is the channel-side convention; the Gram matrix of the state side
    uses phi(s_k^{-1} s_j) and lives in the posdef module.
    """
    g = fn.group
    idx = g.cayley[:, g.inverses]  # [s, t] = s t^{-1}
    return fn.values[idx]


@dataclass(eq=False)
class FourierMultiplierChannel:
    """The map lambda_s -> phi(s) lambda_s, stored through its symbol."""

    group: FiniteGroup
    symbol: GroupFunction

    def __post_init__(self):
        if not same_group(self.group, self.symbol.group):
            raise GroupMismatch(
                "symbol lives on a different group",
                witness={"orders": [self.group.order, self.symbol.group.order]},
            )
        # indexing check: the Schur matrix is constant phi(u) along the
        # support of each lambda_u
        a = schur_symbol(self.symbol)
        n = self.group.order
        t = np.arange(n)
        for u in self.group.elements():
            rows = self.group.cayley[u, t]
            if not np.array_equal(a[rows, t], np.full(n, self.symbol.values[u])):
                raise InternalDisagreement(
                    f"Schur symbol inconsistent on lambda_{u}",
                    witness={"element": int(u)},
                )

    @cached_property
    def superoperator(self) -> np.ndarray:
        """Dense |G|^2 x |G|^2 matrix of the Schur-multiplier extension,
        acting on row-major vectorized regular-representation images."""
        return np.diag(schur_symbol(self.symbol).reshape(-1))


def build_channel(fn: GroupFunction) -> FourierMultiplierChannel:
    """Wrap a symbol; phi need not be positive definite or normalized."""
    return FourierMultiplierChannel(fn.group, fn)


def apply(ch: FourierMultiplierChannel, element: GroupFunction) -> GroupFunction:
    """Apply the channel to a group-algebra element given by coefficients."""
    if not same_group(ch.group, element.group):
        raise GroupMismatch(
            "element lives on a different group",
            witness={"orders": [ch.group.order, element.group.order]},
        )
    return GroupFunction(ch.group, ch.symbol.values * element.values)


def is_unital(ch: FourierMultiplierChannel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff phi(e) = 1; also checks the action on the unit directly."""
    fe = ch.symbol.values[ch.group.identity]
    unit = np.zeros(ch.group.order, dtype=complex)
    unit[ch.group.identity] = 1.0
    image = apply(ch, GroupFunction(ch.group, unit))
    direct = abs(fe - 1.0) <= tol.residual_tol
    acted = float(np.abs(image.values - unit).max()) <= tol.residual_tol
    return direct and acted


@dataclass(frozen=True)
class ChoiCertificate:
    """Dual CP certificate: symbol PSD check and explicit Choi PSD check."""

    schur: np.ndarray
    choi: np.ndarray
    verdict: bool
    min_eigenvalue: float
    symbol_verdict: PsdVerdict
    choi_verdict: PsdVerdict

    @property
    def undecided(self) -> bool:
        return self.symbol_verdict.undecided or self.choi_verdict.undecided


def _choi_matrix(a: np.ndarray) -> np.ndarray:
    # literal Choi assembly of the Schur multiplier: sum over (s, t) of
    # A[s, t] (E_st tensor E_st)
    n = a.shape[0]
    choi = np.zeros((n * n, n * n), dtype=complex)
    unit = np.zeros((n, n), dtype=complex)
    for s in range(n):
        for t in range(n):
            if a[s, t] == 0:
                continue
            unit[s, t] = 1.0
            choi += a[s, t] * kron(unit, unit)
            unit[s, t] = 0.0
    return choi


def is_completely_positive(
    ch: FourierMultiplierChannel, tol: Tolerance = DEFAULT_TOL
) -> ChoiCertificate:
    """CP certificate; verdict must match is_positive_definite(symbol)."""
    _require_hermitian_symmetric(ch.symbol, tol)
    a = schur_symbol(ch.symbol)
    symbol_verdict = is_psd(a, tol)
    choi = _choi_matrix(a)
    choi_verdict = is_psd(choi, tol)
    if symbol_verdict.is_psd != choi_verdict.is_psd and not (
        symbol_verdict.undecided or choi_verdict.undecided
    ):
        raise InternalDisagreement(
            "Schur-symbol and Choi PSD checks disagree",
            witness={
                "symbol_min": symbol_verdict.witness,
                "choi_min": choi_verdict.witness,
            },
        )
    return ChoiCertificate(
        schur=a,
        choi=choi,
        verdict=symbol_verdict.is_psd,
        min_eigenvalue=symbol_verdict.witness,
        symbol_verdict=symbol_verdict,
        choi_verdict=choi_verdict,
    )


def compose(
    ch1: FourierMultiplierChannel, ch2: FourierMultiplierChannel
) -> FourierMultiplierChannel:
    """Composition of multipliers: the symbol is the pointwise product."""
    if not same_group(ch1.group, ch2.group):
        raise GroupMismatch(
            "channels live on different groups",
            witness={"orders": [ch1.group.order, ch2.group.order]},
        )
    product = GroupFunction(ch1.group, ch1.symbol.values * ch2.symbol.values)
    return FourierMultiplierChannel(ch1.group, product)
