import numpy as np
import pytest

from fdshift.constellation import (Constellation, ConstellationOrderError,
                                   check_symmetry, dump_points, load_points,
                                   make_qam, shift)


@pytest.mark.parametrize("order", [4, 16, 64])
def test_qam_energy_and_mean(order):
    eb = 2.5
    c = make_qam(order, eb)
    bits = int(np.log2(order))
    assert c.bits_per_symbol == bits
    assert c.avg_energy == pytest.approx(eb * bits, rel=1e-12)
    assert abs(np.mean(c.points)) < 1e-12 * np.sqrt(c.avg_energy)
    assert len(np.unique(c.points)) == order


@pytest.mark.parametrize("order", [4, 16, 64])
def test_gray_labels_are_permutation(order):
    c = make_qam(order, 1.0)
    assert sorted(c.labels.tolist()) == list(range(order))


@pytest.mark.parametrize("order", [4, 16, 64])
def test_gray_adjacency_single_bit(order):
    # horizontally or vertically adjacent grid points differ in exactly one bit
    c = make_qam(order, 1.0)
    d_min = np.min(np.abs(c.points[:, None] - c.points[None, :])
                   + np.eye(order) * 1e9)
    for i in range(order):
        for j in range(i + 1, order):
            if abs(c.points[i] - c.points[j]) < d_min * 1.001:
                assert bin(int(c.labels[i]) ^ int(c.labels[j])).count("1") == 1


def test_bits_msb_first():
    c = make_qam(16, 1.0)
    k = int(np.where(c.labels == 0b1011)[0][0])
    assert c.bits([k]).tolist() == [1, 0, 1, 1]


def test_bits_stream_length():
    c = make_qam(16, 1.0)
    assert c.bits([0, 1, 2]).shape == (12,)


def test_unsupported_order_raises():
    with pytest.raises(ConstellationOrderError):
        make_qam(8, 1.0)
    with pytest.raises(ValueError):
        make_qam(16, 0.0)


def test_constellation_validation():
    with pytest.raises(ValueError):
        Constellation([1 + 0j, 1 + 0j])  # duplicates
    with pytest.raises(ValueError):
        Constellation([1 + 0j, 2 + 0j, 3 + 0j])  # not a power of 2


def test_shift_value_and_energy():
    base = make_qam(16, 1.0)
    e = base.avg_energy
    for beta in (0.05, 0.2, 0.8, 1.0):
        s = shift(base, beta)
        assert s.shift_value == pytest.approx(np.sqrt(beta * e), rel=1e-12)
        # zero-mean base: shifted energy is E*(1+beta)
        assert s.avg_energy == pytest.approx(e * (1 + beta), rel=1e-12)
        assert np.allclose(s.points, base.points + s.shift_value)


def test_shift_rejects_bad_beta_and_biased_base():
    base = make_qam(16, 1.0)
    for beta in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            shift(base, beta)
    biased = Constellation(base.points + 1.0)
    with pytest.raises(ValueError):
        shift(biased, 0.2)


@pytest.mark.parametrize("order", [4, 16, 64])
def test_unshifted_qam_has_negation_witness(order):
    c = make_qam(order, 1.0)
    w = check_symmetry(c)
    assert w is not None
    assert w.ratio == pytest.approx(-1.0)
    assert w.orbit_length == 2
    # the certificate must actually hold
    assert np.allclose(c.points, w.ratio * c.points[w.permutation])
    assert sorted(w.permutation.tolist()) == list(range(order))


@pytest.mark.parametrize("beta", [0.05, 0.2, 0.8])
def test_shifted_qam_identifiable(beta):
    s = shift(make_qam(16, 1.0), beta)
    assert check_symmetry(s) is None


def test_rotation_witness_without_negation():
    # cube roots of unity: closed under c = exp(2pi j/3), not under negation
    pts = np.exp(2j * np.pi * np.arange(3) / 3)
    w = check_symmetry(pts)
    assert w is not None
    assert abs(abs(w.ratio) - 1.0) < 1e-12
    assert w.orbit_length == 3
    assert np.allclose(pts, w.ratio * pts[w.permutation])


def test_check_symmetry_tol_validation():
    with pytest.raises(ValueError):
        check_symmetry(make_qam(4, 1.0), tol=0.0)


def test_dump_load_roundtrip(tmp_path):
    c = make_qam(16, 3.7)
    path = tmp_path / "pts.txt"
    dump_points(c, path)
    back = load_points(path)
    assert np.array_equal(back, c.points)


def test_load_skips_comments_and_blanks(tmp_path):
    path = tmp_path / "pts.txt"
    path.write_text("# header\n\n1.5,-2.5\n")
    assert load_points(path).tolist() == [1.5 - 2.5j]
