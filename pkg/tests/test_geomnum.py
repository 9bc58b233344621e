import random
from fractions import Fraction
from math import factorial

import pytest

from invlat.degree_bounds import bfield
from invlat.geomnum import (
    DependentInputError,
    complete_basis_short,
    determinant_form,
    dual_pair_lift,
    effective_minima_bounds,
    gen_deg_basis,
    mahler_basis,
    minkowski_check,
    successive_minima,
)
from invlat.lattice_core import (
    CongruenceSystem,
    LatticeBasis,
    from_congruences,
    is_generating,
    l1norm,
)
from invlat.sampling import random_congruence_systems

import oracles


def kernel(n, row):
    return from_congruences(CongruenceSystem((n,), (tuple(row),)))


def det_of(vectors):
    return oracles.det_laplace([list(r) for r in zip(*vectors)])


class TestSuccessiveMinima:
    def test_mod5_example(self):
        sm = successive_minima(kernel(5, (1, 4)))
        assert sm.values == (2, 5)
        assert abs(sm.witnesses[0][0]) == 1 and abs(sm.witnesses[0][1]) == 1
        assert l1norm(sm.witnesses[1]) == 5

    def test_identity(self):
        sm = successive_minima(LatticeBasis.identity(3))
        assert sm.values == (1, 1, 1)

    def test_mod4_example(self):
        sm = successive_minima(kernel(4, (1, 3)))
        assert sm.values[0] == 2

    def test_against_oracle(self):
        rng = random.Random(31)
        for _ in range(20):
            m = rng.choice((2, 3))
            n = rng.randint(m + 1, 18)
            system = CongruenceSystem((n,), (tuple(rng.sample(range(1, n), m)),))
            sm = successive_minima(from_congruences(system))
            assert list(sm.values) == oracles.oracle_minima(system)
            assert oracles.rank_of(sm.witnesses) == m

    def test_no_smaller_independent_sets(self):
        # definitional check: below lambda_i there is no rank-i set
        rng = random.Random(32)
        for _ in range(8):
            m = 2
            n = rng.randint(3, 14)
            system = CongruenceSystem((n,), (tuple(rng.sample(range(1, n), m)),))
            L = from_congruences(system)
            sm = successive_minima(L)
            for i, lam in enumerate(sm.values, start=1):
                below = [p for p in oracles.members_up_to(system, lam - 1)]
                assert oracles.rank_of(below) < i if below else True


class TestMinkowski:
    def test_tight_example(self):
        chk = minkowski_check(kernel(5, (1, 4)))
        assert chk.product == 10 and chk.bound == 10 and chk.ok

    def test_identity(self):
        chk = minkowski_check(LatticeBasis.identity(2))
        assert chk.product == 1 and chk.bound == 2 and chk.ok

    def test_accepts_precomputed_minima(self):
        L = kernel(7, (1, 2))
        sm = successive_minima(L)
        assert minkowski_check(L, sm).ok

    def test_sweep(self):
        for system in random_congruence_systems(40, seed=33, n_max=30):
            L = from_congruences(system)
            chk = minkowski_check(L)
            assert chk.ok
            assert chk.bound == factorial(L.dimension) * L.index


class TestMahlerBasis:
    def test_mod5_example(self):
        mb = mahler_basis(kernel(5, (1, 4)))
        assert abs(mb.vectors[0][0]) == 1 and abs(mb.vectors[0][1]) == 1
        assert mb.norms[0] == 2
        assert mb.norms[1] <= 2 * 5
        assert det_of(mb.vectors) == 5

    def test_identity(self):
        mb = mahler_basis(LatticeBasis.identity(3))
        assert set(mb.vectors) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    def test_mod7_lambda1(self):
        mb = mahler_basis(kernel(7, (1, 2)))
        assert mb.vectors[0] in ((-2, 1), (2, -1))
        assert mb.norms[0] == 3

    def test_norm_bounds_and_det(self):
        for system in random_congruence_systems(40, seed=34, n_max=30):
            L = from_congruences(system)
            mb = mahler_basis(L)
            assert det_of(mb.vectors) == L.index
            for i, (v, nrm) in enumerate(zip(mb.vectors, mb.norms), start=1):
                assert v in L
                assert l1norm(v) == nrm
                assert nrm <= i * mb.minima.values[i - 1]


class TestDeterminantForm:
    def test_small_examples(self):
        assert determinant_form([(1, 1)]).coefficients == (-1, 1)
        assert determinant_form([(2, -1)]).coefficients == (1, 2)
        assert determinant_form([(1, 0, 0), (0, 1, 0)]).coefficients == (0, 0, 1)

    def test_apply_matches_direct_determinant(self):
        rng = random.Random(35)
        for _ in range(25):
            m = rng.choice((2, 3, 4))
            while True:
                vecs = [tuple(rng.randint(-4, 4) for _ in range(m))
                        for _ in range(m - 1)]
                if oracles.rank_of(vecs) == m - 1:
                    break
            form = determinant_form(vecs)
            for _ in range(10):
                w = tuple(rng.randint(-6, 6) for _ in range(m))
                direct = det_of(list(vecs) + [w])
                assert form.apply(w) == direct
            for v in vecs:
                assert form.apply(v) == 0

    def test_dependent_input(self):
        with pytest.raises(DependentInputError):
            determinant_form([(1, 1, 0), (2, 2, 0)])


class TestCompleteBasisShort:
    def test_mod7_worked_example(self):
        L = kernel(7, (1, 2))
        comp = complete_basis_short(L, [(2, -1)])
        assert comp.bstar == (-1, 4)
        assert comp.dstar == 2
        assert comp.form.coefficients == (1, 2)
        assert comp.norm_bound == Fraction(7, 2) + 3
        assert l1norm(comp.bstar) == 5 <= comp.norm_bound
        assert det_of([(2, -1), comp.bstar]) == 7
        assert not comp.dstar_at_least_index

    def test_mod7_tie_example(self):
        L = kernel(7, (1, 6))
        comp = complete_basis_short(L, [(1, 1)])
        assert comp.bstar == (-7, 0)
        assert comp.form.coefficients == (-1, 1)
        assert comp.dstar == -1
        assert det_of([(1, 1), comp.bstar]) == 7

    def test_identity_example(self):
        comp = complete_basis_short(LatticeBasis.identity(2), [(1, 0)])
        assert comp.form.coefficients == (0, 1)
        assert comp.bstar == (0, 1)

    def test_prime_sample_properties(self):
        systems = [s for s in random_congruence_systems(60, seed=36, n_max=40)
                   if oracles.subgroup_order(s) > 1][:40]
        for system in systems:
            L = from_congruences(system)
            mb = mahler_basis(L)
            short = list(mb.vectors[:-1])
            comp = complete_basis_short(L, short)
            assert comp.form.apply(comp.bstar) == L.index
            assert det_of(short + [comp.bstar]) in (L.index, -L.index)
            assert l1norm(comp.bstar) <= comp.norm_bound
            assert comp.norm_bound == \
                Fraction(L.index, abs(comp.dstar)) + sum(map(l1norm, short))


class TestGenDegBasis:
    def test_mod5_example(self):
        gd = gen_deg_basis(kernel(5, (1, 4)))
        assert gd.max_norm == 5
        assert gd.bound == 5
        assert gd.within_bound

    def test_mod7_example(self):
        gd = gen_deg_basis(kernel(7, (1, 2)))
        assert set(map(l1norm, gd.vectors)) == {3, 5}
        assert gd.max_norm == 5
        assert gd.bound == 7
        assert gd.within_bound
        assert det_of(gd.vectors) == 7

    def test_m3_pipeline(self):
        L = kernel(7, (1, 2, 4))
        gd = gen_deg_basis(L)
        assert gd.bound == 4
        assert det_of(gd.vectors) == 7
        assert all(v in L for v in gd.vectors)

    def test_basis_property_on_sample(self):
        for system in random_congruence_systems(30, seed=37, n_max=25):
            L = from_congruences(system)
            gd = gen_deg_basis(L)
            assert det_of(gd.vectors) == L.index
            assert gd.max_norm == max(gd.norms)
            assert gd.within_bound == (gd.max_norm <= gd.bound)


class TestEffectiveMinimaBounds:
    def test_perfect_square(self):
        bounds = effective_minima_bounds(2, 2)
        assert bounds == (Fraction(2),)

    def test_m2_p5(self):
        (b1,) = effective_minima_bounds(2, 5)
        # outward enclosure of sqrt(10)
        assert b1 * b1 >= 10
        assert (b1 - Fraction(1, 10**6)) ** 2 < 10
        mb = mahler_basis(kernel(5, (1, 4)))
        assert mb.norms[0] <= b1

    def test_m3_p11(self):
        b1, b2 = effective_minima_bounds(3, 11)
        assert b1 ** 3 >= 66
        assert (b1 - Fraction(1, 10**6)) ** 3 < 66
        half = b2 / 2
        assert half ** 2 >= 33
        assert (half - Fraction(1, 10**6)) ** 2 < 33

    def test_domination_on_prime_sample(self):
        systems = random_congruence_systems(25, seed=38, n_max=40, prime_only=True)
        for system in systems:
            L = from_congruences(system)
            if L.dimension < 2:
                continue
            mb = mahler_basis(L)
            bounds = effective_minima_bounds(L.dimension, L.index)
            for nrm, bound in zip(mb.norms, bounds):
                assert Fraction(nrm) <= bound

    def test_rejects_rank_one(self):
        with pytest.raises(ValueError):
            effective_minima_bounds(1, 5)


class TestDualPairLift:
    def test_single_vector_example(self):
        L = kernel(5, (1, 4))
        lifted = dual_pair_lift(L, [(0, 1)], [(2, -3), (0, 5)])
        assert (5, 0) in lifted
        assert (1, 1) in lifted
        assert all(min(v) >= 0 for v in lifted)

    def test_nonnegative_untouched(self):
        L = kernel(5, (1, 4))
        lifted = dual_pair_lift(L, [(0, 1)], [(1, 1), (5, 0)])
        assert (1, 1) in lifted and (5, 0) in lifted

    def test_m4_gen_deg_composition(self):
        L = kernel(5, (1, 2, 3, 4))
        gd = gen_deg_basis(L)
        lifted = dual_pair_lift(L, [(0, 3), (1, 2)], gd.vectors)
        assert all(min(v) >= 0 for v in lifted)
        assert is_generating(L, lifted)
        assert max(map(l1norm, lifted)) <= max(gd.max_norm, 2)

    def test_norm_nonincreasing(self):
        L = kernel(5, (1, 2, 3, 4))
        inputs = list(L.columns)
        lifted = dual_pair_lift(L, [(0, 3), (1, 2)], inputs)
        # the first len(inputs) entries are the lifts, in input order
        for a, b in zip(inputs, lifted):
            assert min(b) >= 0
            assert l1norm(b) <= l1norm(a)

    def test_error_cases(self):
        L = kernel(5, (1, 4))
        with pytest.raises(ValueError):
            dual_pair_lift(L, [(0, 0)], [(1, 1)])  # not a partition
        with pytest.raises(ValueError):
            dual_pair_lift(kernel(5, (1, 2)), [(0, 1)], [(1, 2)])  # pair sum not in L
        with pytest.raises(ValueError):
            dual_pair_lift(L, [(0, 1)], [(1, 1)])  # does not generate
