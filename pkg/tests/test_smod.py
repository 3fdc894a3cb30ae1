import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

import oracles
from pexa import corpus
from pexa.search import bits, mask_of
from pexa.smod import (EPI, ISO, MONO, NEITHER, FiniteModule, InvalidMorphism,
                       ModuleMorphism, all_maps, automorphisms, b_module, chain_module,
                       check_module_axioms, check_third_iso, classify_morphism,
                       complete_pullback, complete_pushout, complete_square,
                       congruence_classes, direct_product, enumerate_homs,
                       enumerate_submodules, find_isomorphism, generated_submodule,
                       is_admissible_epi, is_admissible_mono, is_saturated, is_submodule,
                       quotient_module, regular_module, saturation_closure, submodule_object,
                       zero_module)
from pexa.tables import BOOLEAN, chain_semiring, prime_field

B = regular_module(BOOLEAN)
B2 = direct_product(B, B)          # index 2a+b: e2 = 1, e1 = 2, (1,1) = 3
E1, E2, TOP = 2, 1, 3
CHAIN3 = chain_module(3)
ZERO = zero_module()

SMALL = corpus.bmodules(5)
OTHER_BASES = [regular_module(chain_semiring(3)), regular_module(prime_field(3)),
               direct_product(regular_module(prime_field(2)), regular_module(prime_field(2))),
               direct_product(regular_module(chain_semiring(3)), regular_module(chain_semiring(3)))]
CORPUS = SMALL + OTHER_BASES


def as_lists(m: FiniteModule):
    return [list(r) for r in m.add], [list(r) for r in m.act]


def hom(m, n, f):
    return ModuleMorphism(m, n, tuple(f))


class TestAxioms:
    def test_regular_module(self):
        assert check_module_axioms(BOOLEAN, B).valid

    def test_chain3(self):
        assert check_module_axioms(BOOLEAN, CHAIN3).valid

    def test_noncommutative_addition_reported(self):
        add = [[0, 1, 2], [1, 1, 1], [2, 2, 2]]
        rep = check_module_axioms(BOOLEAN, b_module(add))
        assert rep.witness("add_commutative") == (1, 2)

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_corpus_agrees_with_oracle(self, m):
        add, act = as_lists(m)
        r = m.ring
        assert check_module_axioms(r, m).valid == oracles.module_ok(r.add, r.mul, add, act)

    def test_action_table_shape_checked(self):
        with pytest.raises(ValueError):
            FiniteModule(BOOLEAN, ((0, 1), (1, 1)), ((0, 0),))


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_random_b_tables_agree_with_oracle(cells):
    # 3-element candidate B-modules: rows of 1 and 2 are free, zero is forced
    a11, a12, a21, a22 = cells
    add = [[0, 1, 2], [1, a11, a12], [2, a21, a22]]
    m = b_module(add)
    assert check_module_axioms(BOOLEAN, m).valid == \
        oracles.module_ok(BOOLEAN.add, BOOLEAN.mul, add, [list(r) for r in m.act])


class TestSaturation:
    def test_top_generates_everything(self):
        assert saturation_closure(B2, 1 << TOP) == 0b1111

    def test_empty_and_zero(self):
        assert saturation_closure(B2, 0) == 1
        assert saturation_closure(B2, 1) == 1

    def test_e1(self):
        assert bits(saturation_closure(B2, 1 << E1)) == [0, E1]

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_closure_matches_fixpoint_oracle(self, m):
        add, act = as_lists(m)
        for s in oracles.subsets(m.size):
            assert saturation_closure(m, oracles.to_mask(s)) == \
                oracles.to_mask(oracles.fixpoint_saturation(add, act, s))

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_closure_operator_laws(self, m):
        masks = range(1 << m.size)
        cl = {s: saturation_closure(m, s) for s in masks}
        for s in masks:
            assert s & ~cl[s] == 0                       # extensive
            assert cl[cl[s]] == cl[s]                     # idempotent
            assert is_saturated(m, cl[s])
        for s in masks:
            for t in (s | 1 << k for k in range(m.size)):
                assert cl[s] & ~cl[t] == 0                # monotone

    @pytest.mark.parametrize("m", SMALL, ids=lambda m: m.name)
    def test_saturated_iff_downward_closed(self, m):
        add, act = as_lists(m)
        leq = [[m.leq(a, b) for b in range(m.size)] for a in range(m.size)]
        for s in oracles.submodules(add, act):
            assert oracles.saturated(add, s) == oracles.downsets_closed(leq, s)
            assert is_saturated(m, oracles.to_mask(s)) == oracles.saturated(add, s)


class TestSubmodules:
    def test_b2_saturated(self):
        assert enumerate_submodules(B2, saturated_only=True) == \
            sorted([1, 1 | 1 << E1, 1 | 1 << E2, 0b1111])

    def test_b(self):
        assert enumerate_submodules(B) == [1, 3]

    def test_chain3_saturated(self):
        assert enumerate_submodules(CHAIN3, saturated_only=True) == [1, 3, 7]

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_matches_brute_force(self, m):
        add, act = as_lists(m)
        subs = oracles.submodules(add, act)
        assert enumerate_submodules(m) == sorted(oracles.to_mask(s) for s in subs)
        assert enumerate_submodules(m, saturated_only=True) == \
            sorted(oracles.to_mask(s) for s in subs if oracles.saturated(add, s))

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_strategies_agree(self, m):
        for sat in (False, True):
            assert enumerate_submodules(m, sat, strategy="brute") == \
                enumerate_submodules(m, sat, strategy="closure")

    def test_closure_strategy_on_larger_module(self):
        m = direct_product(direct_product(B, B), CHAIN3)   # 12 elements
        for sat in (False, True):
            assert enumerate_submodules(m, sat, strategy="brute") == \
                enumerate_submodules(m, sat, strategy="closure")

    def test_generated_submodule(self):
        assert generated_submodule(B2, 1 << E1 | 1 << E2) == 0b1111


class TestQuotients:
    def test_b2_by_e1(self):
        q = quotient_module(B2, 1 | 1 << E1)
        assert q.quotient.size == 2
        assert q.class_of[0] == q.class_of[E1] != q.class_of[E2] == q.class_of[TOP]
        assert find_isomorphism(q.quotient, B) is not None

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_trivial_quotients(self, m):
        q0 = quotient_module(m, 1)
        assert q0.class_of == tuple(range(m.size))
        assert quotient_module(m, (1 << m.size) - 1).quotient.size == 1

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_congruence_matches_oracle_and_saturation(self, m):
        add, _ = as_lists(m)
        for n in enumerate_submodules(m):
            cls = congruence_classes(m, n)
            oracle = oracles.congruence(add, bits(n))
            assert all((cls[x] == cls[y]) == (oracle[x] == oracle[y])
                       for x in range(m.size) for y in range(m.size))
            assert quotient_module(m, n).class_of == \
                quotient_module(m, saturation_closure(m, n)).class_of

    @pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name or "M")
    def test_projection_is_admissible_epi(self, m):
        for n in enumerate_submodules(m, saturated_only=True):
            q = quotient_module(m, n)
            assert q.projection.is_valid() and q.projection.surjective
            assert is_admissible_epi(q.projection)
            assert q.projection.kernel() == n
            assert check_module_axioms(m.ring, q.quotient).valid

    def test_not_a_submodule(self):
        with pytest.raises(ValueError):
            quotient_module(B2, 1 << TOP)


class TestClassification:
    def test_inclusion_is_mono(self):
        _, inc = submodule_object(B2, 1 | 1 << E1)
        assert classify_morphism(inc) == MONO

    def test_projection_is_epi(self):
        assert classify_morphism(quotient_module(B2, 1 | 1 << E1).projection) == EPI

    def test_diagonal_is_neither(self):
        assert classify_morphism(hom(B, B2, [0, TOP])) == NEITHER

    def test_identity_is_iso(self):
        assert classify_morphism(hom(B2, B2, range(4))) == ISO

    def test_invalid_map_raises(self):
        with pytest.raises(InvalidMorphism):
            classify_morphism(hom(B, B2, [1, 0]))

    @pytest.mark.parametrize("m", SMALL, ids=lambda m: m.name)
    def test_preimage_of_saturated_is_saturated(self, m):
        for n in SMALL:
            sats = enumerate_submodules(n, saturated_only=True)
            for f in enumerate_homs(m, n):
                for s in sats:
                    assert is_saturated(m, f.preimage(s))

    def test_composition_closure(self):
        objs = corpus.bmodules(4)
        homs = {(a, b): enumerate_homs(objs[a], objs[b])
                for a in range(len(objs)) for b in range(len(objs))}
        for (a, b), fs in homs.items():
            for c in range(len(objs)):
                for f in fs:
                    for g in homs[(b, c)]:
                        h = f.then(g)
                        if is_admissible_mono(f) and is_admissible_mono(g):
                            assert is_admissible_mono(h)
                        if is_admissible_epi(f) and is_admissible_epi(g):
                            assert is_admissible_epi(h)


class TestHoms:
    def test_hom_b_b(self):
        assert [f.map for f in enumerate_homs(B, B)] == [(0, 0), (0, 1)]

    def test_hom_to_zero(self):
        assert len(enumerate_homs(B2, ZERO)) == 1

    def test_hom_b2_b(self):
        assert len(enumerate_homs(B2, B)) == 4

    @pytest.mark.parametrize("pair", list(combinations(range(len(SMALL)), 2))[::3])
    def test_matches_brute_force(self, pair):
        m, n = SMALL[pair[0]], SMALL[pair[1]]
        for x, y in ((m, n), (n, m)):
            expected = oracles.module_homs(*as_lists(x), *as_lists(y))
            assert [f.map for f in enumerate_homs(x, y)] == sorted(expected)

    def test_all_maps_oracle_helper(self):
        valid = [f for f in all_maps(B2, B) if hom(B2, B, f).is_valid()]
        assert len(valid) == 4


class TestIsomorphism:
    def test_b2_vs_l2(self):
        diamond = b_module([[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]])
        f = find_isomorphism(B2, diamond)
        assert f is not None and {f.map[E1], f.map[E2]} == {1, 2}

    def test_identity_found(self):
        assert find_isomorphism(CHAIN3, CHAIN3).map == (0, 1, 2)

    def test_size_mismatch(self):
        assert find_isomorphism(CHAIN3, B2) is None

    def test_corpus_pairwise_non_isomorphic(self):
        for x, y in combinations(SMALL, 2):
            assert find_isomorphism(x, y) is None
            if x.size == y.size:
                assert not oracles.isomorphic_tables([x.add], [y.add])

    def test_automorphisms_of_b2(self):
        assert sorted(a.map for a in automorphisms(B2)) == [(0, 1, 2, 3), (0, 2, 1, 3)]

    @given(st.integers(0, len(SMALL) - 1), st.randoms(use_true_random=False))
    def test_relabelled_copy_is_found(self, k, rnd):
        m = SMALL[k]
        perm = [0] + rnd.sample(range(1, m.size), m.size - 1)
        inv = {v: i for i, v in enumerate(perm)}
        add = [[perm[m.add[inv[a]][inv[b]]] for b in range(m.size)] for a in range(m.size)]
        f = find_isomorphism(m, b_module(add))
        assert f is not None and f.is_valid() and f.injective


class TestThirdIso:
    def test_trivial_k(self):
        b3 = direct_product(B2, B)
        n = saturation_closure(b3, 1 << 4)
        iso = check_third_iso(b3, n, 1)
        assert iso.source.size == iso.target.size == quotient_module(b3, n).quotient.size

    def test_full_k(self):
        b3 = direct_product(B2, B)
        n = saturation_closure(b3, 1 << 4)
        q = quotient_module(b3, n).quotient
        iso = check_third_iso(b3, n, (1 << q.size) - 1)
        assert iso.source.size == iso.target.size == 1

    def test_b3_e1_e2(self):
        b3 = direct_product(B2, B)          # index 4a + 2b + c
        n = saturation_closure(b3, 1 << 4)  # <e1>
        first = quotient_module(b3, n)
        k = saturation_closure(first.quotient, 1 << first.class_of[2])
        iso = check_third_iso(b3, n, k)
        assert iso.source.size == iso.target.size == 2

    def test_unsaturated_n_rejected(self):
        with pytest.raises(ValueError):
            check_third_iso(B2, 1 | 1 << TOP, 1)

    def test_random_instances(self):
        rnd = random.Random(7)
        pool = corpus.bmodules(6)
        for _ in range(30):
            m = rnd.choice(pool)
            n = rnd.choice(enumerate_submodules(m, saturated_only=True))
            q = quotient_module(m, n).quotient
            k = rnd.choice(enumerate_submodules(q, saturated_only=True))
            assert check_third_iso(m, n, k).is_valid()


class TestSquares:
    def test_pullback_of_zero(self):
        q = quotient_module(B2, 1 | 1 << E2)
        i2 = hom(ZERO, q.quotient, [0])
        sq = complete_pullback(i2, q.projection)
        assert sq.commutes()
        assert sq.i.image() == 1 | 1 << E2

    def test_pullback_along_identity(self):
        q = quotient_module(B2, 1 | 1 << E2)
        ident = hom(q.quotient, q.quotient, range(q.quotient.size))
        sq = complete_pullback(ident, q.projection)
        assert sq.i.injective and sq.i.surjective
        assert sq.commutes()

    def test_pushout_to_quotient(self):
        sub, inc = submodule_object(B2, 1 | 1 << E1)
        j = hom(sub, ZERO, [0] * sub.size)
        sq = complete_pushout(inc, j)
        assert sq.commutes()
        assert find_isomorphism(sq.corners[3], B) is not None
        assert sq.j2.kernel() == 1 | 1 << E1

    def test_rejects_non_admissible(self):
        with pytest.raises(ValueError):
            complete_square(hom(B, B2, [0, TOP]), quotient_module(B2, 1).projection, "pullback")

    def test_unknown_direction(self):
        q = quotient_module(B2, 1 | 1 << E2)
        with pytest.raises(ValueError):
            complete_square(hom(ZERO, q.quotient, [0]), q.projection, "sideways")

    @pytest.mark.parametrize("m", corpus.bmodules(5), ids=lambda m: m.name)
    def test_all_completions_commute_and_are_admissible(self, m):
        for n in enumerate_submodules(m, saturated_only=True):
            q = quotient_module(m, n)
            for s in enumerate_submodules(q.quotient, saturated_only=True):
                _, i2 = submodule_object(q.quotient, s)
                sq = complete_pullback(i2, q.projection)
                assert sq.commutes()
                assert is_admissible_mono(sq.i) and is_admissible_epi(sq.j)
            sub, inc = submodule_object(m, n)
            for k in enumerate_submodules(sub, saturated_only=True):
                sq = complete_pushout(inc, quotient_module(sub, k).projection)
                assert sq.commutes()
                assert is_admissible_mono(sq.i2) and is_admissible_epi(sq.j2)


class TestProducts:
    def test_b_times_b(self):
        assert find_isomorphism(direct_product(B, B), B2) is not None

    def test_with_zero(self):
        assert find_isomorphism(direct_product(CHAIN3, ZERO), CHAIN3) is not None

    def test_chain3_times_b(self):
        p = direct_product(CHAIN3, B)
        assert p.size == 6 and check_module_axioms(BOOLEAN, p).valid

    def test_ring_mismatch(self):
        with pytest.raises(ValueError):
            direct_product(B, regular_module(prime_field(2)))
