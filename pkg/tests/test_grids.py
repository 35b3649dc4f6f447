import numpy as np
import pytest

from bbmlab.grids import (
    FrequencyGrid,
    GridMismatchError,
    SpectralFunction,
    SupportOverflowError,
    UndersampledError,
    apply_multiplier,
    convolve,
    distance,
    physical_l2,
    physical_points,
    read_spectrum,
    support_measure,
    to_physical,
    write_spectrum,
)


def band_pair_indicator(grid, n):
    pos = SpectralFunction.indicator(grid, n - 1, n + 1)
    neg = SpectralFunction.indicator(grid, -n - 1, -n + 1)
    return pos + neg


class TestFrequencyGrid:
    def test_torus_contains_zero_and_symmetric(self):
        g = FrequencyGrid("torus", 10)
        idx = g.all_indices()
        assert 0 in idx
        assert np.array_equal(idx, -idx[::-1])
        assert len(g) == 21

    def test_line_lattice(self):
        g = FrequencyGrid("line", 4, 0.25)
        assert g.halfwidth == 16
        assert g.frequencies(np.array([4])) == pytest.approx(1.0)
        assert g.measure_weight == 0.25

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(kind="plane", cutoff=4),
            dict(kind="torus", cutoff=0),
            dict(kind="torus", cutoff=4, spacing=0.5),
            dict(kind="line", cutoff=4, spacing=1.5),
            dict(kind="line", cutoff=4, spacing=0.0),
        ],
    )
    def test_invalid_grids_rejected(self, kwargs):
        with pytest.raises(ValueError):
            FrequencyGrid(**kwargs)

    def test_index_of_off_lattice(self):
        g = FrequencyGrid("line", 4, 0.25)
        assert g.index_of(0.75) == 3
        with pytest.raises(ValueError):
            g.index_of(0.1)
        with pytest.raises(ValueError):
            g.index_of(5.0)


class TestSpectralFunction:
    def test_duplicate_indices_merge(self, torus):
        f = SpectralFunction(torus, np.array([1, 1, -2]), np.array([1.0, 2.0, 5.0]))
        assert f.coeff(1) == 3.0
        assert f.coeff(-2) == 5.0

    def test_nonfinite_rejected(self, torus):
        with pytest.raises(ValueError):
            SpectralFunction(torus, np.array([0]), np.array([np.nan + 0j]))

    def test_out_of_range_rejected(self, torus):
        with pytest.raises(ValueError):
            SpectralFunction(torus, np.array([33]), np.array([1.0 + 0j]))

    def test_values_immutable(self, torus):
        f = SpectralFunction.delta(torus, 1)
        with pytest.raises(ValueError):
            f.values[0] = 2.0

    def test_support_is_sound(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 5)
        lo, hi = f.support
        dense = f.to_dense()
        m = torus.halfwidth
        outside = np.concatenate([dense[: lo + m], dense[hi + m + 1 :]])
        assert np.all(outside == 0)

    def test_hermitian_detection(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 6, hermitian=True)
        assert f.is_hermitian()
        g = f + SpectralFunction.delta(torus, 3, 1j)
        assert not g.is_hermitian()

    def test_arithmetic(self, torus):
        f = SpectralFunction.delta(torus, 1, 2.0)
        g = SpectralFunction.delta(torus, 2, 3.0)
        h = f + 2.0 * g - f
        assert h.coeff(2) == 6.0
        assert h.coeff(1) == 0.0


class TestConvolve:
    def test_band_pair_counts(self, torus):
        # brute-force pair counting over the 36 ordered pairs
        f = band_pair_indicator(torus, 10)
        points = [int(i) for i in f.indices]
        for xi in (0, 1, -1, 2):
            expected = sum(1 for a in points for b in points if a + b == xi)
            assert convolve(f, f).coeff(xi) == pytest.approx(expected)
        assert convolve(f, f).coeff(0) == pytest.approx(6)
        assert convolve(f, f).coeff(1) == pytest.approx(4)

    def test_delta_is_identity(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 7)
        e = SpectralFunction.delta(torus, 0)
        assert distance(convolve(e, f), f) == 0.0

    def test_commutative_and_bilinear(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 5)
        g = random_spectral(rng, torus, 6)
        h = random_spectral(rng, torus, 4)
        assert distance(convolve(f, g), convolve(g, f)) <= 1e-13 * f.l1() * g.l1()
        lhs = convolve(f + 2.0 * h, g)
        rhs = convolve(f, g) + 2.0 * convolve(h, g)
        assert distance(lhs, rhs) <= 1e-13 * (f.l1() + h.l1()) * g.l1()

    def test_support_sumset_exact(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 4, min_mag=0.1)
        g = band_pair_indicator(torus, 9)
        out = convolve(f, g)
        fi = set(int(i) for i in f.active()[0])
        gi = set(int(i) for i in g.active()[0])
        sumset = {a + b for a in fi for b in gi}
        assert set(int(i) for i in out.active()[0]) <= sumset
        assert set(int(i) for i in out.indices) == sumset

    def test_line_riemann_weight(self, line):
        f = SpectralFunction.indicator(line, -1.0, 1.0)
        out = convolve(f, f)
        # brute-force Riemann double sum at xi = 0
        idx, val = f.active()
        acc = sum(
            v1 * v2
            for i1, v1 in zip(idx, val)
            for i2, v2 in zip(idx, val)
            if i1 + i2 == 0
        )
        assert out.coeff(0.0) == pytest.approx(acc * line.spacing)
        # quantifies the continuum value (chi * chi)(0) = 2 as h -> 0
        assert abs(out.coeff(0.0) - 2.0) < 2 * line.spacing

    def test_grid_mismatch(self, torus, line):
        with pytest.raises(GridMismatchError):
            convolve(SpectralFunction.delta(torus, 1), SpectralFunction.delta(line, 1.0))

    def test_overflow_raises_then_truncates(self, torus):
        f = SpectralFunction.delta(torus, 20)
        with pytest.raises(SupportOverflowError):
            convolve(f, f)
        out = convolve(f, f, truncate=True)
        assert out.indices.size == 0

    @pytest.mark.parametrize("method", ["window", "fft"])
    def test_methods_agree(self, rng, torus, random_spectral, method):
        f = random_spectral(rng, torus, 6)
        g = random_spectral(rng, torus, 5)
        direct = convolve(f, g, method="direct")
        other = convolve(f, g, method=method)
        assert distance(direct, other) <= 1e-12 * f.l1() * g.l1()


class TestApplyMultiplier:
    def test_identity(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 8)
        assert distance(apply_multiplier(f, lambda xi: np.ones_like(xi)), f) == 0.0

    def test_rational_multiplier_values(self, torus):
        m = lambda xi: xi / (1.0 + xi**2)
        assert apply_multiplier(SpectralFunction.delta(torus, 1), m).coeff(1) == pytest.approx(0.5)
        out = apply_multiplier(SpectralFunction.delta(torus, 0), m)
        assert out.coeff(0) == 0.0

    def test_composition_exact(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 8)
        m1 = lambda xi: np.exp(1j * xi / 7.0)
        m2 = lambda xi: 1.0 / (1.0 + xi**2)
        once = apply_multiplier(f, lambda xi: m1(xi) * m2(xi))
        twice = apply_multiplier(apply_multiplier(f, m1), m2)
        # equal up to reassociation of the complex products
        assert distance(once, twice) <= 1e-15 * f.l1()


class TestSupportMeasure:
    def test_indicator_count(self, torus):
        f = band_pair_indicator(torus, 10)
        assert support_measure(f, 0.0) == 6.0

    def test_zero_function(self, torus):
        assert support_measure(SpectralFunction.zero(torus), 0.0) == 0.0

    def test_monotone_in_threshold(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 9)
        ts = [0.0, 0.2, 0.5, 0.9]
        ms = [support_measure(f, t) for t in ts]
        assert all(a >= b for a, b in zip(ms, ms[1:]))

    def test_line_measure_weight(self, line):
        f = SpectralFunction.indicator(line, -1.0, 1.0)
        assert support_measure(f, 0.0) == pytest.approx(17 * 0.125)

    def test_negative_threshold_rejected(self, torus):
        with pytest.raises(ValueError):
            support_measure(SpectralFunction.zero(torus), -1.0)


class TestToPhysical:
    def test_constant_mode(self, torus):
        samples = to_physical(SpectralFunction.delta(torus, 0), 2 * len(torus))
        assert np.allclose(samples, 1.0)

    def test_single_oscillation(self, torus):
        n = 2 * len(torus)
        samples = to_physical(SpectralFunction.delta(torus, 1), n)
        x = physical_points(torus, n)
        assert np.allclose(samples, np.exp(1j * x))

    @pytest.mark.parametrize("grid_name", ["torus", "line"])
    def test_plancherel(self, rng, random_spectral, grid_name, torus, line):
        g = torus if grid_name == "torus" else line
        f = random_spectral(rng, g, 8)
        samples = to_physical(f, 2 * len(g))
        assert physical_l2(samples, g) == pytest.approx(f.l2(), rel=1e-12)

    def test_hermitian_gives_real(self, rng, torus, random_spectral):
        f = random_spectral(rng, torus, 6, hermitian=True)
        samples = to_physical(f, 2 * len(torus))
        assert np.abs(samples.imag).max() <= 1e-12 * np.abs(samples).max()

    def test_undersampling_refused(self, torus):
        with pytest.raises(UndersampledError):
            to_physical(SpectralFunction.delta(torus, 0), len(torus))


class TestSpectrumFiles:
    def test_roundtrip_torus(self, rng, torus, random_spectral, tmp_path):
        f = random_spectral(rng, torus, 9)
        path = tmp_path / "spec.csv"
        write_spectrum(f, path)
        back = read_spectrum(path)
        assert back.grid.kind == "torus"
        assert distance(back, SpectralFunction(back.grid, f.indices, f.values)) <= 1e-15 * f.l1()

    def test_roundtrip_line(self, rng, line, random_spectral, tmp_path):
        f = random_spectral(rng, line, 4)
        path = tmp_path / "spec.csv"
        write_spectrum(f, path)
        back = read_spectrum(path, kind="line", cutoff=16, spacing=0.125)
        assert back.grid == line
        assert np.array_equal(back.indices, f.indices[f.values != 0])

    def test_absent_frequencies_zero(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("xi,re,im\n-3,1,0\n5,0,2\n")
        f = read_spectrum(path)
        assert f.coeff(0) == 0.0
        assert f.coeff(5) == 2j

    def test_decreasing_rejected_with_line_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("xi,re,im\n2,1,0\n1,1,0\n")
        with pytest.raises(ValueError, match=":3"):
            read_spectrum(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(ValueError, match=":1"):
            read_spectrum(path)
