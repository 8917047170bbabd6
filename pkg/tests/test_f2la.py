"""Tests for the bit-packed GF(2) linear algebra layer.

A naive dense elimination over Python ints serves as the oracle; the
packed implementation must agree with it on every randomized instance.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rp3bn.f2la import BitMatrix, homology_dims


def naive_rank(rows: list[list[int]]) -> int:
    """Textbook Gaussian elimination over GF(2), no packing."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@st.composite
def dense_matrix(draw, max_rows=8, max_cols=8):
    nrows = draw(st.integers(1, max_rows))
    ncols = draw(st.integers(1, max_cols))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, 1), min_size=ncols, max_size=ncols),
            min_size=nrows,
            max_size=nrows,
        )
    )
    return rows


class TestRank:
    @given(dense_matrix())
    @settings(max_examples=200)
    def test_rank_matches_naive_oracle(self, rows):
        m = BitMatrix.from_dense(rows)
        assert m.rank() == naive_rank(rows)

    def test_rank_wide_matrix_crossing_word_boundary(self):
        m = BitMatrix(2, 130)
        m.set(0, 0)
        m.set(0, 129)
        m.set(1, 129)
        assert m.rank() == 2

    def test_identity_rank(self):
        assert BitMatrix.identity(100).rank() == 100


class TestKernelAndImage:
    @given(dense_matrix())
    @settings(max_examples=200)
    def test_kernel_vectors_annihilate(self, rows):
        m = BitMatrix.from_dense(rows)
        ker = m.kernel_basis()
        for k in range(ker.nrows):
            acc = np.zeros(m.nrows, dtype=np.uint8)
            for c in np.nonzero(ker.row_bits(k))[0]:
                for i in range(m.nrows):
                    acc[i] ^= m.get(i, int(c))
            assert not acc.any()

    @given(dense_matrix())
    @settings(max_examples=200)
    def test_rank_nullity(self, rows):
        m = BitMatrix.from_dense(rows)
        assert m.rank() + m.kernel_basis().nrows == m.ncols

    @given(dense_matrix())
    @settings(max_examples=100)
    def test_image_basis_spans_columns(self, rows):
        m = BitMatrix.from_dense(rows)
        img = m.image_basis()
        assert img.nrows == m.rank()
        # every original column lies in the row space of img
        stacked = img.copy()
        for c in range(m.ncols):
            col = BitMatrix(1, m.nrows)
            for i in range(m.nrows):
                if m.get(i, c):
                    col.set(0, i)
            assert img.stack(col).rank() == img.rank()


class TestMatmul:
    @given(dense_matrix(max_rows=6, max_cols=6), st.integers(1, 6))
    @settings(max_examples=100)
    def test_matmul_matches_numpy(self, rows, inner):
        a = np.array(rows, dtype=np.uint8)
        rng = np.random.default_rng(len(rows) * 31 + inner)
        b = rng.integers(0, 2, size=(a.shape[1], inner), dtype=np.uint8)
        want = (a @ b) % 2
        got = BitMatrix.from_dense(a).matmul(BitMatrix.from_dense(b)).to_dense()
        assert np.array_equal(got, want)


class TestSelectColumns:
    def test_select_preserves_entries(self):
        m = BitMatrix.from_dense([[1, 0, 1, 1], [0, 1, 0, 1]])
        sub = m.select_columns([2, 3, 0])
        assert np.array_equal(sub.to_dense(), [[1, 1, 1], [0, 1, 0]])


class TestHomologyDims:
    def test_two_step_complex(self):
        # 0 -> F^2 --[1 1]--> F -> 0 has homology (1, 0)
        d0 = BitMatrix.from_dense([[1, 1]])
        assert homology_dims([2, 1], [d0, None]) == [1, 0]

    def test_square_zero_enforced(self):
        d0 = BitMatrix.from_dense([[1], [0]])
        d1 = BitMatrix.from_dense([[1, 0]])
        with pytest.raises(ValueError):
            homology_dims([1, 2, 1], [d0, d1, None])

    def test_exact_complex(self):
        d0 = BitMatrix.from_dense([[1], [1]])
        d1 = BitMatrix.from_dense([[1, 1]])
        assert homology_dims([1, 2, 1], [d0, d1, None]) == [0, 0, 0]
