import numpy as np
import pytest

from gaugecolor import gf2


def test_pack_rows_bit_layout():
    rows = np.zeros((2, 70), dtype=np.uint8)
    rows[0, 0] = 1
    rows[0, 63] = 1
    rows[1, 64] = 1
    packed = gf2.pack_rows(rows)
    assert packed.shape == (2, 2)
    assert packed[0, 0] == (1 | (1 << 63))
    assert packed[0, 1] == 0
    assert packed[1, 1] == 1


def test_rank_identity_and_zero():
    assert gf2.rank(np.eye(7, dtype=np.uint8), 7) == 7
    assert gf2.rank(np.zeros((4, 9), dtype=np.uint8), 9) == 0
    rows = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    assert gf2.rank(rows, 3) == 2  # third row = sum of first two


def test_in_rowspan():
    rows = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.uint8)
    assert gf2.in_rowspan(np.array([1, 1, 1, 1], dtype=np.uint8), rows, 4)
    assert not gf2.in_rowspan(np.array([1, 0, 0, 0], dtype=np.uint8), rows, 4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_solve_random_systems(seed):
    rng = np.random.default_rng(seed)
    for _ in range(120):
        m = int(rng.integers(1, 40))
        n = int(rng.integers(1, 70))
        A = rng.integers(0, 2, size=(m, n)).astype(np.uint8)
        x_true = rng.integers(0, 2, size=n).astype(np.uint8)
        b = (A @ x_true) % 2
        x, kernel = gf2.solve_with_kernel(A, b)
        assert x is not None
        assert ((A @ x) % 2 == b).all()
        if len(kernel):
            assert ((A @ kernel.T) % 2 == 0).all()
            assert kernel.any(axis=1).all()
            reduced = gf2.reduce_weight(x, kernel)
            assert ((A @ reduced) % 2 == b).all()
            assert reduced.sum() <= x.sum()


def test_solve_detects_inconsistency():
    A = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    b = np.array([0, 1], dtype=np.uint8)
    assert gf2.solve(A, b) is None


def test_kernel_dimension():
    A = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.uint8)
    x, kernel = gf2.solve_with_kernel(A, np.zeros(2, dtype=np.uint8))
    assert (x == 0).all()
    assert len(kernel) == 2
    assert gf2.rank(kernel, 4) == 2
