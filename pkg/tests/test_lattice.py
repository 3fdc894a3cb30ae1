from itertools import combinations

import pytest
from hypothesis import given, strategies as st

import oracles
from pexa import corpus
from pexa.lattice import (EPI, ISO, MONO, NEITHER, FiniteLattice, LatticeMorphism,
                          NotALattice, NotAPartialOrder, boolean_lattice, chain_lattice,
                          classify_lattice_morphism, compact_elements_module,
                          complete_lattice_pullback, complete_lattice_pushout,
                          enumerate_lattice_homs, find_lattice_isomorphism, from_order,
                          interval_quotient, is_geometric, is_normal_mono, lattice_product,
                          ln_lattice, module_lattice, normal_epi_base, pentagon,
                          quotient_lattice, s_on_morphism, saturated_submodule_lattice,
                          sublattice_object)
from pexa.search import bits
from pexa import smod
from pexa.smod import (direct_product, enumerate_homs, find_isomorphism, quotient_module,
                       regular_module, submodule_object, zero_module)
from pexa.tables import BOOLEAN, prime_field

B = regular_module(BOOLEAN)
B2 = direct_product(B, B)
L2 = ln_lattice(2)
M3 = ln_lattice(3)
CHAIN2, CHAIN3 = chain_lattice(2), chain_lattice(3)

LATS = corpus.lattices(5)
MODS = corpus.bmodules(5)


def lat_iso(a, b) -> bool:
    return find_lattice_isomorphism(a, b) is not None


class TestConstruction:
    def test_diamond(self):
        assert L2.size == 4 and L2.bottom == 0 and L2.top == 3
        assert L2.join[1][2] == 3 and L2.meet[1][2] == 0

    def test_missing_join_reports_pair(self):
        with pytest.raises(NotALattice) as exc:
            from_order(3, lambda a, b: a == b or a == 0)
        assert exc.value.pair == (1, 2)

    def test_pentagon_tables(self):
        n5 = pentagon()
        assert n5.join[1][3] == 4 and n5.meet[2][3] == 0 and n5.join[1][2] == 2

    def test_not_a_partial_order(self):
        with pytest.raises(NotAPartialOrder):
            FiniteLattice([[1, 1], [1, 1]])
        with pytest.raises(NotAPartialOrder):
            FiniteLattice([[1, 0], [0, 0]])

    @pytest.mark.parametrize("lat", LATS, ids=lambda l: f"n{l.size}")
    def test_join_meet_are_bounds(self, lat):
        n, le = lat.size, lat.leq
        for a in range(n):
            assert le[lat.bottom][a] and le[a][lat.top]
            for b in range(n):
                j, m = lat.join[a][b], lat.meet[a][b]
                assert le[a][j] and le[b][j] and le[m][a] and le[m][b]
                assert all(le[j][c] for c in range(n) if le[a][c] and le[b][c])
                assert all(le[c][m] for c in range(n) if le[c][a] and le[c][b])

    def test_height_of_boolean(self):
        assert boolean_lattice(3).height == tuple(bin(x).count("1") for x in range(8))

    def test_product(self):
        assert lat_iso(lattice_product(CHAIN2, CHAIN2), L2)


class TestCorpus:
    def test_counts_up_to_five_match_brute_force(self):
        # every B-module on n elements is a finite lattice once ordered by x <= y iff x+y = y
        for n in range(1, 6):
            assert len(corpus.lattices_of_size(n)) == \
                oracles.count_up_to_iso(oracles.all_b_module_tables(n))

    def test_known_counts(self):
        # numbers of unlabelled lattices on 1..8 elements
        assert [len(corpus.lattices_of_size(n)) for n in range(1, 9)] == \
            [1, 1, 1, 2, 5, 15, 53, 222]

    def test_pairwise_non_isomorphic(self):
        lats = corpus.lattices_of_size(6)
        for a, b in combinations(lats, 2):
            assert not lat_iso(a, b)


class TestMorphisms:
    def test_inclusion_is_normal_mono(self):
        sub, inc = sublattice_object(L2, 1)
        assert classify_lattice_morphism(inc) == MONO

    def test_chain3_to_chain2_is_normal_epi(self):
        f = LatticeMorphism(CHAIN3, CHAIN2, (0, 0, 1))
        assert classify_lattice_morphism(f) == EPI
        assert normal_epi_base(f) == 1

    def test_neither(self):
        f = LatticeMorphism(CHAIN3, CHAIN3, (0, 2, 2))
        assert classify_lattice_morphism(f) == NEITHER

    def test_identity_is_iso(self):
        assert classify_lattice_morphism(LatticeMorphism(M3, M3, range(5))) == ISO

    def test_non_join_preserving_rejected(self):
        # sends the two atoms of L2 to themselves but top to an atom
        with pytest.raises(ValueError):
            classify_lattice_morphism(LatticeMorphism(L2, L2, (0, 1, 2, 1)))

    def test_homs_match_brute_force(self):
        for a in corpus.lattices(4):
            for b in corpus.lattices(4):
                brute = sum(1 for f in smod.all_maps(compact_elements_module(a),
                                                     compact_elements_module(b))
                            if LatticeMorphism(a, b, _relabel(a, b, f)).is_valid())
                assert len(enumerate_lattice_homs(a, b)) == brute


def _relabel(a, b, f):
    """Translate a map on module indices (bottom first) to lattice indices."""
    oa = [a.bottom] + [x for x in range(a.size) if x != a.bottom]
    ob = [b.bottom] + [x for x in range(b.size) if x != b.bottom]
    out = [0] * a.size
    for i, v in enumerate(f):
        out[oa[i]] = ob[v]
    return tuple(out)


class TestQuotients:
    def test_chain3_by_bottom_two(self):
        q, p = quotient_lattice(CHAIN3, 0b011)
        assert q.size == 2 and p.map == (0, 0, 1)

    def test_by_bottom_is_identity(self):
        q, p = quotient_lattice(M3, 1)
        assert q.size == M3.size and p.map == tuple(range(M3.size))

    def test_l3_by_atom(self):
        l3 = ln_lattice(3)
        q, _ = quotient_lattice(l3, 0b11)
        assert lat_iso(q, CHAIN2)

    def test_non_ideal_rejected(self):
        with pytest.raises(ValueError):
            quotient_lattice(L2, 0b0110)

    @pytest.mark.parametrize("lat", LATS, ids=lambda l: f"n{l.size}")
    def test_quotients_compose(self, lat):
        for x in range(lat.size):
            q1, p1 = interval_quotient(lat, x)
            for y in range(q1.size):
                q2, p2 = interval_quotient(q1, y)
                comp = p1.then(p2)
                assert classify_lattice_morphism(comp) in (EPI, ISO)
                x0 = normal_epi_base(comp)
                q3, _ = interval_quotient(lat, x0)
                assert lat_iso(q3, q2)


class TestFunctorS:
    def test_s_of_b(self):
        assert lat_iso(saturated_submodule_lattice(B), CHAIN2)

    def test_s_of_zero(self):
        assert saturated_submodule_lattice(zero_module()).size == 1

    def test_s_of_b2(self):
        assert lat_iso(saturated_submodule_lattice(B2), L2)

    def test_s_of_identity(self):
        f = smod.ModuleMorphism(B2, B2, (0, 1, 2, 3))
        assert s_on_morphism(f).map == tuple(range(4))

    def test_s_of_inclusion_is_normal_mono(self):
        _, inc = submodule_object(B2, 0b101)
        assert classify_lattice_morphism(s_on_morphism(inc)) == MONO

    def test_s_of_projection_is_normal_epi(self):
        p = quotient_module(B2, 0b101).projection
        assert classify_lattice_morphism(s_on_morphism(p)) == EPI

    def test_requires_boolean_base(self):
        with pytest.raises(ValueError):
            saturated_submodule_lattice(regular_module(prime_field(2)))

    def test_functoriality(self):
        mods = corpus.bmodules(4)
        for a in mods:
            for b in mods:
                for c in mods:
                    for f in enumerate_homs(a, b):
                        for g in enumerate_homs(b, c):
                            assert s_on_morphism(f.then(g)).map == \
                                s_on_morphism(f).then(s_on_morphism(g)).map


class TestEquivalence:
    def test_chain2_module_is_b(self):
        assert find_isomorphism(compact_elements_module(CHAIN2), B) is not None

    def test_one_element(self):
        assert compact_elements_module(chain_lattice(1)).size == 1

    def test_diamond_module_is_b2(self):
        assert find_isomorphism(compact_elements_module(L2), B2) is not None

    @pytest.mark.parametrize("m", MODS, ids=lambda m: m.name)
    def test_module_round_trip(self, m):
        back = compact_elements_module(saturated_submodule_lattice(m))
        assert find_isomorphism(back, m) is not None

    @pytest.mark.parametrize("lat", LATS, ids=lambda l: f"n{l.size}")
    def test_lattice_round_trip(self, lat):
        assert lat_iso(saturated_submodule_lattice(compact_elements_module(lat)), lat)

    @pytest.mark.parametrize("m", MODS, ids=lambda m: m.name)
    def test_module_order_is_a_lattice(self, m):
        assert lat_iso(module_lattice(m), saturated_submodule_lattice(m))

    def test_hom_counts_and_transport(self):
        mods = corpus.bmodules(4)
        for a in mods:
            sa = saturated_submodule_lattice(a)
            for b in mods:
                sb = saturated_submodule_lattice(b)
                fs = enumerate_homs(a, b)
                images = {s_on_morphism(f, sa, sb).map for f in fs}
                assert len(fs) == len(enumerate_lattice_homs(sa, sb)) == len(images)
                for f in fs:
                    sf = s_on_morphism(f, sa, sb)
                    assert smod.classify_morphism(f).replace("admissible", "normal") == \
                        classify_lattice_morphism(sf)


class TestGeometric:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_boolean(self, n):
        assert is_geometric(boolean_lattice(n)).geometric

    def test_m3(self):
        assert is_geometric(M3).geometric

    def test_n5_fails_jordan_dedekind(self):
        rep = is_geometric(pentagon())
        assert not rep.jordan_dedekind
        assert rep.witnesses["jordan_dedekind"] == (0, 4, (2, 3))

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_chains_not_atomistic(self, k):
        rep = is_geometric(chain_lattice(k))
        assert not rep.atomistic and not rep.geometric

    @pytest.mark.parametrize("lat", corpus.lattices(6), ids=lambda l: f"n{l.size}")
    def test_jordan_dedekind_matches_chain_oracle(self, lat):
        le = [list(r) for r in lat.leq]
        jd = all(len(oracles.maximal_chain_lengths(le, x, y)) == 1
                 for x in range(lat.size) for y in range(lat.size) if le[x][y])
        assert is_geometric(lat).jordan_dedekind == jd


class TestSquares:
    @pytest.mark.parametrize("lat", LATS, ids=lambda l: f"n{l.size}")
    def test_completions_commute(self, lat):
        for x in range(lat.size):
            q, p = interval_quotient(lat, x)
            for y in range(q.size):
                _, i2 = sublattice_object(q, y)
                sq = complete_lattice_pullback(i2, p)
                assert sq.commutes() and is_normal_mono(sq.i)
            sub, inc = sublattice_object(lat, x)
            for y in range(sub.size):
                _, j = interval_quotient(sub, y)
                sq = complete_lattice_pushout(inc, j)
                assert sq.commutes() and normal_epi_base(sq.j2) is not None


@given(st.integers(0, len(LATS) - 1), st.data())
def test_normal_epi_base_is_kernel_join(k, data):
    lat = LATS[k]
    x = data.draw(st.integers(0, lat.size - 1))
    _, p = interval_quotient(lat, x)
    assert normal_epi_base(p) == x
    assert bits(p.kernel()) == bits(lat.down(x))
