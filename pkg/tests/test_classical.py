import numpy as np
import pytest

from netbell.classical import (
    DeterministicStrategy,
    enumerate_deterministic_max,
    eval_model,
    eval_strategy,
    random_model,
    root_sum_lemma_check,
    sample_nlocal_value,
)
from netbell.errors import NegativeEntry, SearchSpaceTooLarge, ShapeMismatch
from netbell.functionals import (
    Kind,
    build_functional,
    classical_bound,
    sign_family_classical_bound,
)

CHSH = build_functional(Kind.CHSH, 2)
BILOCAL = build_functional(Kind.BILOCAL, 2, 2)
XI32 = build_functional(Kind.XI, 3, 2)


class TestEvalStrategy:
    def test_chsh_saturating(self):
        s = DeterministicStrategy(((1, 1),), (1, 1))
        assert eval_strategy(CHSH, s) == pytest.approx(2.0)

    def test_bilocal_all_plus(self):
        s = DeterministicStrategy(((1, 1), (1, 1)), (1, 1))
        # I1 = 2*1*2 = 4, I2 = 0, so sqrt(4) + 0 = 2 saturates the bound.
        assert eval_strategy(BILOCAL, s) == pytest.approx(2.0)

    def test_xi_m3_all_plus(self):
        s = DeterministicStrategy(((1, 1, 1), (1, 1, 1)), (1, 1, 1))
        assert eval_strategy(XI32, s) == pytest.approx(4.0)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            eval_strategy(CHSH, DeterministicStrategy(((1, 1, 1),), (1, 1)))
        with pytest.raises(ShapeMismatch):
            eval_strategy(CHSH, DeterministicStrategy(((1, 2),), (1, 1)))

    def test_central_sign_flip(self):
        edge = ((1, -1), (1, 1))
        plus = DeterministicStrategy(edge, (1, 1))
        minus = DeterministicStrategy(edge, (-1, -1))
        # ROOT_SUM values are invariant under flipping all central responses.
        assert eval_strategy(BILOCAL, plus) == pytest.approx(
            eval_strategy(BILOCAL, minus)
        )
        lin_plus = eval_strategy(CHSH, DeterministicStrategy(((1, -1),), (1, 1)))
        lin_minus = eval_strategy(CHSH, DeterministicStrategy(((1, -1),), (-1, -1)))
        assert lin_plus == pytest.approx(-lin_minus)


class TestEnumerate:
    def test_chsh(self):
        value, witness = enumerate_deterministic_max(CHSH)
        assert value == 2.0
        assert eval_strategy(CHSH, witness) == value

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_chained(self, m):
        f = build_functional(Kind.CHAINED, m)
        value, witness = enumerate_deterministic_max(f)
        assert value == 2 * m - 2
        assert eval_strategy(f, witness) == value

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_gm(self, m):
        f = build_functional(Kind.GM, m)
        value, _ = enumerate_deterministic_max(f)
        assert value == sign_family_classical_bound(m)

    def test_gm3_resolves_bound_discrepancy(self):
        # 128-strategy enumeration gives 6, the m*C(m-1, .) form, and
        # rejects the larger closed form m*C(m, floor((m-1)/2)) = 9.
        value, _ = enumerate_deterministic_max(build_functional(Kind.GM, 3))
        assert value == 6.0
        assert value != 9.0

    def test_bilocal_and_star(self):
        assert enumerate_deterministic_max(BILOCAL)[0] == 2.0
        for n in (2, 3):
            f = build_functional(Kind.STAR, 2, n)
            assert enumerate_deterministic_max(f)[0] == 2.0

    @pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (4, 2), (3, 1)])
    def test_xi(self, m, n):
        f = build_functional(Kind.XI, m, n)
        value, _ = enumerate_deterministic_max(f)
        assert value == 2 * m - 2

    @pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (4, 2)])
    def test_delta(self, m, n):
        f = build_functional(Kind.DELTA, m, n)
        value, _ = enumerate_deterministic_max(f)
        assert value == sign_family_classical_bound(m)

    def test_matches_formula_bounds(self):
        for f in (CHSH, BILOCAL, XI32, build_functional(Kind.GM, 4)):
            assert enumerate_deterministic_max(f)[0] == classical_bound(f)

    def test_witness_is_deterministic_and_lexicographic(self):
        value, witness = enumerate_deterministic_max(CHSH)
        again = enumerate_deterministic_max(CHSH)[1]
        assert witness == again
        # The all-minus edge table attains the maximum and is smallest.
        assert witness.edge_responses == ((-1, -1),)
        assert witness.central_responses == (-1, -1)

    def test_search_space_guard(self):
        with pytest.raises(SearchSpaceTooLarge):
            enumerate_deterministic_max(build_functional(Kind.GM, 6))


class TestSampling:
    def test_bilocal_never_exceeds_bound(self):
        best = sample_nlocal_value(BILOCAL, trials=2000, support_size=2, seed=11)
        assert best <= 2.0 + 1e-12

    def test_xi_never_exceeds_bound(self):
        best = sample_nlocal_value(XI32, trials=2000, support_size=2, seed=12)
        assert best <= 4.0 + 1e-12

    def test_point_mass_support(self):
        best = sample_nlocal_value(BILOCAL, trials=200, support_size=1, seed=5)
        assert best <= 2.0 + 1e-12

    def test_reproducible(self):
        a = sample_nlocal_value(XI32, trials=50, support_size=3, seed=9)
        b = sample_nlocal_value(XI32, trials=50, support_size=3, seed=9)
        assert a == b

    def test_never_exceeds_deterministic_max(self):
        rng = np.random.default_rng(21)
        for f in (CHSH, BILOCAL, XI32):
            det_max, _ = enumerate_deterministic_max(f)
            for _ in range(100):
                assert eval_model(f, random_model(f, 3, rng)) <= det_max + 1e-12


class TestRootSumLemma:
    def test_all_ones_equality(self):
        z = np.ones((3, 5))
        assert root_sum_lemma_check(z, 3)

    def test_single_source_equality(self):
        z = np.array([[0.3, 1.7, 2.0]])
        assert root_sum_lemma_check(z, 1)

    def test_random_matrices(self):
        rng = np.random.default_rng(77)
        for _ in range(10_000):
            n = int(rng.integers(1, 5))
            terms = int(rng.integers(1, 9))
            z = rng.uniform(0.0, 5.0, size=(n, terms))
            assert root_sum_lemma_check(z, n)

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            root_sum_lemma_check(np.array([[1.0, -0.1]]), 1)
