"""Bit-packed linear algebra over the two-element field.

Matrices are stored row-major with 64 columns packed per ``uint64`` word,
which keeps Gaussian elimination a handful of vectorized XOR sweeps.
"""

from __future__ import annotations

import heapq
from collections import Counter
from typing import Iterable, List, Sequence, Tuple

import numpy as np

__all__ = [
    "BitMatrix",
    "rank_of_entries",
    "homology_dims",
    "cancel_dims",
]


def _nwords(ncols: int) -> int:
    return max(1, (ncols + 63) // 64)


class BitMatrix:
    """A dense matrix over GF(2) with bit-packed rows."""

    __slots__ = ("nrows", "ncols", "words")

    def __init__(self, nrows: int, ncols: int, words: np.ndarray | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if words is None:
            words = np.zeros((nrows, _nwords(ncols)), dtype=np.uint64)
        self.words = words

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_entries(
        cls, nrows: int, ncols: int, entries: Iterable[Tuple[int, int]]
    ) -> "BitMatrix":
        """Build from an iterable of (row, col) positions holding a 1.

        Repeated positions cancel, matching addition over GF(2).
        """
        m = cls(nrows, ncols)
        w = m.words
        for i, j in entries:
            w[i, j >> 6] ^= np.uint64(1) << np.uint64(j & 63)
        return m

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]]) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = a.shape
        m = cls(nrows, ncols)
        for i in range(nrows):
            for j in np.nonzero(a[i])[0]:
                m.set(i, int(j))
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_entries(n, n, ((i, i) for i in range(n)))

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, self.words.copy())

    # -- element access ---------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int = 1) -> None:
        bit = np.uint64(1) << np.uint64(j & 63)
        if value & 1:
            self.words[i, j >> 6] |= bit
        else:
            self.words[i, j >> 6] &= ~bit

    def flip(self, i: int, j: int) -> None:
        self.words[i, j >> 6] ^= np.uint64(1) << np.uint64(j & 63)

    def row_bits(self, i: int) -> np.ndarray:
        """Return row ``i`` as a 0/1 array of length ``ncols``."""
        raw = np.unpackbits(self.words[i].view(np.uint8), bitorder="little")
        return raw[: self.ncols]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i in range(self.nrows):
            out[i] = self.row_bits(i)
        return out

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):  # pragma: no cover - mutable, not hashable
        raise TypeError("BitMatrix is unhashable")

    # -- algebra -----------------------------------------------------------

    def xor_row_into(self, src: int, dst: int) -> None:
        self.words[dst] ^= self.words[src]

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Matrix product over GF(2)."""
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matmul")
        out = BitMatrix(self.nrows, other.ncols)
        for i in range(self.nrows):
            idx = np.nonzero(self.row_bits(i))[0]
            if idx.size:
                out.words[i] = np.bitwise_xor.reduce(other.words[idx], axis=0)
        return out

    def matvec_entries(self, cols: Iterable[int]) -> np.ndarray:
        """XOR of the given columns of the transpose view; helper for maps."""
        rows = list(cols)
        if not rows:
            return np.zeros(self.words.shape[1], dtype=np.uint64)
        return np.bitwise_xor.reduce(self.words[rows], axis=0)

    def transpose(self) -> "BitMatrix":
        out = BitMatrix(self.ncols, self.nrows)
        for i in range(self.nrows):
            for j in np.nonzero(self.row_bits(i))[0]:
                out.set(int(j), i)
        return out

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        """Vertical stack; both operands must have equal column counts."""
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in stack")
        words = np.vstack([self.words, other.words])
        return BitMatrix(self.nrows + other.nrows, self.ncols, words)

    # -- elimination --------------------------------------------------------

    def rref(self) -> Tuple["BitMatrix", List[int]]:
        """Reduced row echelon form; returns (reduced copy, pivot columns)."""
        work = self.copy()
        w = work.words
        pivots: List[int] = []
        r = 0
        one = np.uint64(1)
        for c in range(work.ncols):
            if r >= work.nrows:
                break
            word, bit = c >> 6, np.uint64(c & 63)
            col = (w[r:, word] >> bit) & one
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                w[[r, p]] = w[[p, r]]
            hits = np.nonzero((w[:, word] >> bit) & one)[0]
            hits = hits[hits != r]
            if hits.size:
                w[hits] ^= w[r]
            pivots.append(c)
            r += 1
        return work, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "BitMatrix":
        """Rows form a basis of the right kernel {v : Mv = 0}."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        ker = BitMatrix(len(free), self.ncols)
        free_pos = {c: k for k, c in enumerate(free)}
        for k, c in enumerate(free):
            ker.set(k, c)
        for i, p in enumerate(pivots):
            bits = reduced.row_bits(i)
            for c in np.nonzero(bits)[0]:
                c = int(c)
                if c in free_pos:
                    ker.flip(free_pos[c], p)
        return ker

    def column_pivots(self) -> List[int]:
        """Indices of a maximal independent set of columns."""
        return self.rref()[1]

    def image_basis(self) -> "BitMatrix":
        """Rows form a basis of the column space (each of length nrows)."""
        pivots = self.column_pivots()
        out = BitMatrix(len(pivots), self.nrows)
        for k, c in enumerate(pivots):
            for i in range(self.nrows):
                if self.get(i, c):
                    out.set(k, i)
        return out

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        out = BitMatrix(self.nrows, len(cols))
        for k, c in enumerate(cols):
            word, bit = c >> 6, np.uint64(c & 63)
            hits = np.nonzero((self.words[:, word] >> bit) & np.uint64(1))[0]
            kw, kb = k >> 6, np.uint64(k & 63)
            out.words[hits, kw] |= np.uint64(1) << kb
        return out


def rank_of_entries(nrows: int, ncols: int, entries: Iterable[Tuple[int, int]]) -> int:
    return BitMatrix.from_entries(nrows, ncols, entries).rank()


def cancel_dims(grading: dict, edges: Iterable[Tuple], key=None) -> dict:
    """Surviving generator counts of a chain complex after pair cancellation.

    ``grading`` maps each generator id to its degree key; ``edges`` lists
    (source, target) pairs carrying a 1 in the differential, with repeats
    cancelling mod 2.  Cancelling an edge u -> v removes both generators
    and toggles w -> x for every other w into v and x out of u, which is a
    homotopy equivalence; once no edges remain, the survivors counted by
    degree are the homology dimensions.  Pivots are chosen by smallest
    fill-in via a lazy heap.  ``key`` optionally remaps degrees on output.
    """
    out_adj: dict = {}
    in_adj: dict = {}

    def toggle(u, v) -> bool:
        """Flip edge u -> v; return True when the edge is now present."""
        outs = out_adj.setdefault(u, set())
        if v in outs:
            outs.discard(v)
            in_adj[v].discard(u)
            return False
        outs.add(v)
        in_adj.setdefault(v, set()).add(u)
        return True

    heap: List[Tuple[int, Tuple, Tuple]] = []
    for u, v in edges:
        if toggle(u, v):
            heapq.heappush(heap, (0, u, v))

    def cost(u, v) -> int:
        return (len(out_adj.get(u, ())) - 1) * (len(in_adj.get(v, ())) - 1)

    alive = dict(grading)
    while heap:
        c, u, v = heapq.heappop(heap)
        if v not in out_adj.get(u, ()):
            continue
        real = cost(u, v)
        if real > c:
            heapq.heappush(heap, (real, u, v))
            continue
        ins = in_adj.pop(v, set())
        ins.discard(u)
        outs = out_adj.pop(u, set())
        outs.discard(v)
        for w in ins:
            out_adj[w].discard(v)
        for x in outs:
            in_adj[x].discard(u)
        for z in in_adj.pop(u, set()):
            out_adj[z].discard(u)
        for y in out_adj.pop(v, set()):
            in_adj[y].discard(v)
        del alive[u], alive[v]
        for w in ins:
            for x in outs:
                if toggle(w, x):
                    heapq.heappush(heap, (cost(w, x), w, x))
    counts: Counter = Counter()
    for g, d in alive.items():
        counts[d if key is None else key(d)] += 1
    return dict(counts)


def homology_dims(dims: Sequence[int], matrices: Sequence[BitMatrix | None]) -> List[int]:
    """Homology dimensions of a finite chain complex over GF(2).

    ``dims[i]`` is the dimension in degree ``i`` and ``matrices[i]`` the
    boundary map from degree ``i`` to degree ``i + 1`` (``None`` for zero).
    Raises ``ValueError`` if consecutive maps fail to compose to zero.
    """
    n = len(dims)
    ranks = [0] * n
    for i in range(n):
        mat = matrices[i] if i < len(matrices) else None
        if mat is None:
            continue
        if mat.ncols != dims[i] or (i + 1 < n and mat.nrows != dims[i + 1]):
            raise ValueError(f"boundary matrix {i} has inconsistent shape")
        ranks[i] = mat.rank()
    for i in range(n - 1):
        a, b = matrices[i] if i < len(matrices) else None, None
        if i + 1 < len(matrices):
            b = matrices[i + 1]
        if a is not None and b is not None and not b.matmul(a).is_zero():
            raise ValueError(f"boundary maps {i} and {i + 1} do not compose to zero")
    out = []
    for i in range(n):
        incoming = ranks[i - 1] if i > 0 else 0
        out.append(dims[i] - ranks[i] - incoming)
    return out
