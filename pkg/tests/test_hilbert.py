import itertools
import math

import numpy as np
import pytest

from symquant.born import born
from symquant.errors import DimensionError, DomainError, NonUnitaryError, SymquantError
from symquant.hilbert import (AmplitudeVector, Selection, block_rates, composite_amplitude,
                              composite_amplitudes, normalize_rows, normalize_single_object,
                              project, random_unitary, rotate, sample_object, sample_objects,
                              unitary_deviation)
from symquant.pairs import Pair


def within_4_se(values, expected):
    se = values.std(ddof=1) / math.sqrt(values.size)
    return abs(values.mean() - expected) <= 4 * se


def born_rows(X):
    return X.real ** 2 + X.imag ** 2


class TestAmplitudeVector:
    def test_from_pairs(self):
        x = AmplitudeVector([Pair(1, 2), Pair(3, 4)])
        assert x.n == 2 and x.norm2() == 30
        assert x.pairs == [Pair(1, 2), Pair(3, 4)]

    def test_from_real_rows(self):
        assert AmplitudeVector([[1, 2], [3, 4]]).allclose(AmplitudeVector([1 + 2j, 3 + 4j]))

    def test_immutable(self):
        x = AmplitudeVector([1j])
        with pytest.raises(ValueError):
            x.array[0] = 2

    def test_invalid(self):
        with pytest.raises(DimensionError):
            AmplitudeVector([])
        with pytest.raises(SymquantError):
            AmplitudeVector([complex(math.inf, 0)])


class TestSampling:
    def test_single_component_exponential(self):
        p = born_rows(sample_objects(1, 10**5, seed=1)[:, 0])
        assert within_4_se(p, 1.0)

    def test_supply_rate_is_n(self):
        X = sample_objects(16, 10**5, seed=2)
        assert within_4_se(born_rows(X).sum(axis=1), 16.0)

    def test_components_uncorrelated(self):
        X = sample_objects(2, 10**5, seed=3)
        cross = X[:, 0] * np.conj(X[:, 1])
        for part in (cross.real, cross.imag):
            assert within_4_se(part, 0.0)

    def test_single_draw(self):
        x = sample_object(5, seed=7)
        assert x.n == 5
        np.testing.assert_array_equal(x.array, sample_objects(5, 1, seed=7)[0])


class TestComposite:
    def test_singleton_is_pure(self):
        x = sample_object(4, seed=0)
        assert composite_amplitude(x, Selection({2}, 4)) == x.pairs[2]

    def test_full_selection(self):
        x = sample_object(4, seed=1)
        total = sum(x.array)
        c = composite_amplitude(x, Selection(range(4), 4))
        assert (c.c1, c.c2) == pytest.approx((total.real, total.imag), abs=1e-15)

    def test_mean_is_cardinality(self):
        X = sample_objects(8, 10**5, seed=4)
        S = Selection({0, 3, 6}, 8)
        assert within_4_se(born_rows(composite_amplitudes(X, S)), 3.0)

    def test_empty_rejected(self):
        with pytest.raises(SymquantError):
            composite_amplitude(sample_object(3), Selection(set(), 3))

    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_exponential_law(self, m):
        X = sample_objects(6, 10**5, seed=10 + m)
        p = born_rows(composite_amplitudes(X, Selection(range(m), 6)))
        assert within_4_se(p, m)
        # variance of an exponential with mean m is m**2; se of the sample variance via the 4th moment
        var_se = math.sqrt((np.mean((p - p.mean()) ** 4) - p.var() ** 2) / p.size)
        assert abs(p.var(ddof=1) - m * m) <= 4 * var_se


class TestProject:
    def test_example(self):
        x = AmplitudeVector([Pair(1, 2), Pair(3, 4)])
        assert project(x, Selection({0}, 2)).pairs == [Pair(1, 2), Pair(0, 0)]

    def test_algebra(self, rng):
        n = 5
        subsets = [Selection(s, n) for r in range(n + 1) for s in itertools.combinations(range(n), r)]
        for _ in range(20):
            x = AmplitudeVector(rng.normal(size=n) + 1j * rng.normal(size=n))
            for S in subsets[::3]:
                P = project(x, S)
                Q = project(x, S.complement())
                assert project(P, S).allclose(P, rtol=0, atol=0)
                assert (P + Q).allclose(x, rtol=0, atol=0)
                assert P.norm2() + Q.norm2() == pytest.approx(x.norm2(), rel=1e-14)
                for S2 in subsets[::7]:
                    assert project(P, S2).allclose(project(x, S & S2), rtol=0, atol=0)

    def test_matrix_identities(self):
        n = 4
        for r in range(n + 1):
            for s in itertools.combinations(range(n), r):
                S = Selection(s, n)
                Pm, Qm = S.matrix(), S.complement().matrix()
                np.testing.assert_array_equal(Pm @ Pm, Pm)
                np.testing.assert_array_equal(Pm + Qm, np.eye(n))
                np.testing.assert_array_equal(Pm @ Qm, np.zeros((n, n)))

    def test_selection_validation(self):
        with pytest.raises(DimensionError):
            Selection({4}, 4)
        with pytest.raises(DimensionError):
            project(sample_object(3), Selection({0}, 4))


class TestRotate:
    def test_identity(self):
        x = sample_object(3, seed=2)
        assert rotate(x, np.eye(3)).allclose(x)

    def test_hadamard(self):
        H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        y = rotate(AmplitudeVector([Pair(1, 0), Pair(0, 0)]), H)
        assert y.allclose(AmplitudeVector([1 / math.sqrt(2), 1 / math.sqrt(2)]), rtol=0, atol=1e-15)

    def test_non_unitary_rejected(self):
        with pytest.raises(NonUnitaryError) as exc:
            rotate(sample_object(2), [[1, 0], [0, 1.1]])
        assert exc.value.deviation == pytest.approx(0.21)

    def test_shape_checked(self):
        with pytest.raises(DimensionError):
            rotate(sample_object(2), np.eye(3))

    def test_norm_preserved(self, rng):
        for k in range(100):
            n = int(rng.integers(1, 9))
            U = random_unitary(n, seed=k)
            assert unitary_deviation(U) < 1e-12
            x = AmplitudeVector(rng.normal(size=n) + 1j * rng.normal(size=n))
            assert rotate(x, U).norm2() == pytest.approx(x.norm2(), rel=1e-9)

    def test_rotated_statistics_match(self):
        # spherical symmetry: composite rates look the same in a rotated basis
        n, m, draws = 6, 3, 10**5
        X = sample_objects(n, draws, seed=21)
        Y = X @ random_unitary(n, seed=5).T
        S = Selection(range(m), n)
        px, py = born_rows(composite_amplitudes(X, S)), born_rows(composite_amplitudes(Y, S))
        assert within_4_se(px, m) and within_4_se(py, m)
        se = math.hypot(px.std(), py.std()) / math.sqrt(draws)
        assert abs(px.mean() - py.mean()) <= 4 * se


class TestNormalize:
    def test_single_component(self):
        psi = normalize_single_object(AmplitudeVector([3 - 4j]))
        assert born(psi.pairs[0]) == pytest.approx(1.0, abs=1e-15)

    def test_unit_norm(self, rng):
        for _ in range(50):
            x = AmplitudeVector(rng.normal(size=7) + 1j * rng.normal(size=7))
            assert normalize_single_object(x).norm2() == pytest.approx(1.0, abs=1e-12)

    def test_component_probabilities(self):
        psi = normalize_rows(sample_objects(4, 10**5, seed=8))
        for k in range(4):
            assert within_4_se(born_rows(psi[:, k]), 0.25)

    def test_commutes_with_rotation(self, rng):
        U = random_unitary(5, seed=3)
        for _ in range(20):
            x = AmplitudeVector(rng.normal(size=5) + 1j * rng.normal(size=5))
            assert normalize_single_object(rotate(x, U)).allclose(rotate(normalize_single_object(x), U))

    def test_zero(self):
        with pytest.raises(DomainError):
            normalize_single_object(AmplitudeVector([0j, 0j]))


def test_partition_blocks_form_additive_measure():
    n = 9
    X = sample_objects(n, 10**5, seed=30)
    blocks = [Selection({0, 1}, n), Selection({2, 3, 4, 5}, n), Selection({6, 7, 8}, n)]
    rates = block_rates(X, blocks)
    p = np.stack([born_rows(composite_amplitudes(X, b)) for b in blocks]).sum(axis=0)
    assert within_4_se(p, n)
    assert rates.sum() == pytest.approx(p.mean(), rel=1e-12)
    assert np.all(rates > 0)
