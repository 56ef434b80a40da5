"""Truncated two-mode bosonic Fock space.

States |n1, n2> with n1 + n2 <= n_max, ordered by ascending total n and then
ascending n1.  Ladder operators are stored as sparse matrices; components
that would leave the truncation are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal, NamedTuple

import numpy as np
import scipy.sparse as sp

LadderKind = Literal["a1", "a2", "a1_dag", "a2_dag", "N"]
LADDER_KINDS: tuple[str, ...] = ("a1", "a2", "a1_dag", "a2_dag", "N")


class FockIndex(NamedTuple):
    n1: int
    n2: int

    @property
    def n(self) -> int:
        return self.n1 + self.n2


def space_dimension(n_max: int) -> int:
    return (n_max + 1) * (n_max + 2) // 2


def _position(n1: int, n2: int) -> int:
    # blocks of lower total come first; inside a block n1 ascends
    n = n1 + n2
    return n * (n + 1) // 2 + n1


@dataclass(frozen=True, eq=False)
class TruncatedFockSpace:
    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @property
    def dim(self) -> int:
        return space_dimension(self.n_max)

    @cached_property
    def basis(self) -> tuple[FockIndex, ...]:
        return tuple(
            FockIndex(n1, n - n1) for n in range(self.n_max + 1) for n1 in range(n + 1)
        )

    @cached_property
    def index_of(self) -> dict[FockIndex, int]:
        return {state: pos for pos, state in enumerate(self.basis)}

    @cached_property
    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        n1 = np.array([s.n1 for s in self.basis], dtype=np.int64)
        n2 = np.array([s.n2 for s in self.basis], dtype=np.int64)
        return n1, n2

    @cached_property
    def totals(self) -> np.ndarray:
        n1, n2 = self.occupations
        return n1 + n2

    def block(self, n: int) -> slice:
        """Dense positions of the level-n block F_n."""
        if not 0 <= n <= self.n_max:
            raise ValueError(f"level {n} outside 0..{self.n_max}")
        start = n * (n + 1) // 2
        return slice(start, start + n + 1)

    def position(self, n1: int, n2: int) -> int:
        if n1 < 0 or n2 < 0 or n1 + n2 > self.n_max:
            raise KeyError((n1, n2))
        return _position(n1, n2)

    @cached_property
    def _ladders(self) -> dict[str, sp.csr_matrix]:
        n1, n2 = self.occupations
        dim = self.dim
        out: dict[str, sp.csr_matrix] = {}
        for mode, occ in (("1", n1), ("2", n2)):
            rows, cols, vals = [], [], []
            for col, state in enumerate(self.basis):
                if occ[col] == 0:
                    continue
                lowered = (state.n1 - 1, state.n2) if mode == "1" else (state.n1, state.n2 - 1)
                rows.append(_position(*lowered))
                cols.append(col)
                vals.append(np.sqrt(occ[col]))
            low = sp.csr_matrix(
                (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
            )
            out["a" + mode] = low
            out["a" + mode + "_dag"] = low.conj().T.tocsr()
        out["N"] = sp.diags(self.totals.astype(complex)).tocsr()
        return out

    def ladder_sparse(self, kind: LadderKind) -> sp.csr_matrix:
        if kind not in LADDER_KINDS:
            raise ValueError(f"unknown ladder kind {kind!r}")
        return self._ladders[kind]


@dataclass(frozen=True, eq=False)
class LadderMatrix:
    kind: str
    entries: np.ndarray


def build_space(n_max: int) -> TruncatedFockSpace:
    return TruncatedFockSpace(int(n_max))


def ladder(space: TruncatedFockSpace, kind: LadderKind) -> LadderMatrix:
    return LadderMatrix(kind, space.ladder_sparse(kind).toarray())


def valid_window(space: TruncatedFockSpace, degree: int) -> np.ndarray:
    """Boolean mask of basis states with n <= n_max - degree (may be empty)."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return space.totals <= space.n_max - degree


def window_level(space: TruncatedFockSpace, degree: int) -> int:
    """Highest total level inside the window, or -1 when the window is empty."""
    return space.n_max - degree


def restrict_to_window(mat: np.ndarray, space: TruncatedFockSpace, degree: int) -> np.ndarray:
    """Zero every row and column outside the window."""
    mask = valid_window(space, degree)
    out = np.zeros_like(mat)
    out[np.ix_(mask, mask)] = mat[np.ix_(mask, mask)]
    return out


def apply_to_state(
    space: TruncatedFockSpace, kind: LadderKind, state: FockIndex
) -> tuple[complex, FockIndex | None]:
    """Single ladder action on a basis vector: (amplitude, image) or (0, None)."""
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index_of[state]] = 1.0
    img = space.ladder_sparse(kind) @ vec
    nz = np.flatnonzero(np.abs(img) > 0)
    if nz.size == 0:
        return 0.0, None
    pos = int(nz[0])
    return complex(img[pos]), space.basis[pos]


def integer_ladder_action(state: FockIndex, kind: LadderKind) -> tuple[int, FockIndex | None]:
    """Ladder action in the unnormalized basis (a|n> = n|n-1>, a^+|n> = |n+1>).

    The unnormalized basis is a diagonal similarity transform of the normalized
    one, so diagonal matrix elements of products agree and stay integral.
    """
    n1, n2 = state
    if kind == "a1":
        return (n1, FockIndex(n1 - 1, n2)) if n1 > 0 else (0, None)
    if kind == "a2":
        return (n2, FockIndex(n1, n2 - 1)) if n2 > 0 else (0, None)
    if kind == "a1_dag":
        return 1, FockIndex(n1 + 1, n2)
    if kind == "a2_dag":
        return 1, FockIndex(n1, n2 + 1)
    if kind == "N":
        return n1 + n2, state
    raise ValueError(f"unknown ladder kind {kind!r}")
