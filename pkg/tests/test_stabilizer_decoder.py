import itertools

import numpy as np
import pytest

from gaugecolor import decode, is_logical_failure
from gaugecolor import gf2
from gaugecolor.code_structure import stabilizer_syndrome_of


def syndrome_of_qubits(code, qubits):
    e = np.zeros(code.n_qubits, dtype=np.uint8)
    e[list(qubits)] = 1
    return e, stabilizer_syndrome_of(code, e)


def test_empty_syndrome(code3):
    corr = decode(code3, np.zeros(code3.n_cells, dtype=np.uint8))
    assert not corr.decoder_failed
    assert not corr.bits.any()


def test_single_qubit_errors_exhaustive(code3):
    for q in range(code3.n_qubits):
        e, syn = syndrome_of_qubits(code3, [q])
        corr = decode(code3, syn)
        assert not corr.decoder_failed
        residual = e ^ corr.bits
        assert not stabilizer_syndrome_of(code3, residual).any()
        assert not is_logical_failure(code3, residual)


def test_weight2_errors_sample(code3):
    pairs = list(itertools.combinations(range(code3.n_qubits), 2))[::23]
    for a, b in pairs:
        e, syn = syndrome_of_qubits(code3, [a, b])
        corr = decode(code3, syn)
        assert not corr.decoder_failed, (a, b)
        residual = e ^ corr.bits
        assert not stabilizer_syndrome_of(code3, residual).any()
        assert not is_logical_failure(code3, residual), (a, b)


def test_syndrome_consistency_random(code3):
    rng = np.random.default_rng(11)
    for _ in range(300):
        e = (rng.random(code3.n_qubits) < 0.04).astype(np.uint8)
        syn = stabilizer_syndrome_of(code3, e)
        corr = decode(code3, syn)
        if corr.decoder_failed:
            continue
        assert (stabilizer_syndrome_of(code3, corr.bits) == syn).all()


def test_same_color_pair_connected_by_string(code3):
    """Two same-colored defects decode to a correction matching both, and the
    combined operator is a gauge element (brute-force weight oracle)."""
    lat = code3.lattice
    # two tets sharing a triangle: their product has exactly two defects
    for a, b in itertools.combinations(range(len(lat.tets)), 2):
        shared = set(lat.tets[a]) & set(lat.tets[b])
        if len(shared) == 3:
            break
    e, syn = syndrome_of_qubits(code3, [a, b])
    cells = np.nonzero(syn)[0]
    assert len(cells) == 2
    assert len({int(lat.colors[c]) for c in cells}) == 1
    corr = decode(code3, syn)
    assert not corr.decoder_failed
    residual = e ^ corr.bits
    assert not stabilizer_syndrome_of(code3, residual).any()
    assert int(residual.sum()) % 2 == 0


def test_four_color_quadruple_weight_one(code3):
    """Defects of all four colors around one tetrahedron admit a weight-1
    explanation; the decoder must find an equivalent of it."""
    tet = next(q for q in code3.qubits if len(q.simplex) == 4)
    e, syn = syndrome_of_qubits(code3, [tet.id])
    corr = decode(code3, syn)
    assert not corr.decoder_failed
    # minimum-weight oracle over all qubits: brute force weights 0..1
    colmatch = [q for q in range(code3.n_qubits)
                if (stabilizer_syndrome_of(
                    code3, np.eye(code3.n_qubits, dtype=np.uint8)[q]) == syn).all()]
    assert tet.id in colmatch
    assert int(corr.bits.sum()) == 1


def test_is_logical_failure_contract(code3):
    Q = code3.n_qubits
    assert not is_logical_failure(code3, np.zeros(Q, dtype=np.uint8))
    assert is_logical_failure(code3, np.ones(Q, dtype=np.uint8))
    s = code3.supports[5]
    e = np.zeros(Q, dtype=np.uint8)
    e[list(s.qubits)] = 1
    assert not is_logical_failure(code3, e)
    bad = np.zeros(Q, dtype=np.uint8)
    bad[0] = 1
    with pytest.raises(ValueError):
        is_logical_failure(code3, bad)


def test_parity_check_soundness_rank(code3):
    """kernel(stabilizer map) = span(gauge supports) + {0, logical}: weight
    parity separates the gauge group from the logical coset."""
    Q = code3.n_qubits
    gauge = code3.gauge.toarray().astype(np.uint8)
    stab = code3.stabilizer.toarray().astype(np.uint8)
    ones = np.ones(Q, dtype=np.uint8)
    r_h = gf2.rank(stab, Q)
    r_g = gf2.rank(gauge, Q)
    r_gx = gf2.rank(np.vstack([gauge, ones[None, :]]), Q)
    assert r_gx == r_g + 1                     # logical outside the gauge span
    assert Q - r_h == r_gx                     # kernel = gauge + logical coset
    weights = gauge.sum(axis=1)
    assert (weights % 2 == 0).all()            # gauge group is even-weight
    assert Q % 2 == 1


def test_decode_validates_input_shape(code3):
    with pytest.raises(ValueError):
        decode(code3, np.zeros(code3.n_cells + 1, dtype=np.uint8))
