import pytest
from hypothesis import given, strategies as st

import oracles
from pexa.search import bits, find_isomorphism
from pexa.tables import (BOOLEAN, KRASNER, SIGN, BoundExceeded, HyperTable, RingTable,
                         SemiringTable, StructureError, as_hypertable, builtin,
                         chain_semiring, check_hyperstructure_axioms, check_semiring_axioms,
                         check_size, prime_field, quotient_hyperring)
from pexa.geometry import en_table


def hyper_iso(h1: HyperTable, h2: HyperTable) -> bool:
    return find_isomorphism(h1.sig, h2.sig) is not None


class TestSemiringAxioms:
    def test_boolean_is_valid_and_idempotent(self):
        assert check_semiring_axioms(BOOLEAN).valid
        assert BOOLEAN.idempotent

    def test_bad_identity_reports_zero_zero(self):
        t = SemiringTable([[1, 1], [1, 1]], [[0, 0], [0, 1]])
        rep = check_semiring_axioms(t)
        assert not rep.valid
        assert rep.witness("add_identity") == (0, 0)

    def test_min_plus_two_chain_is_rejected(self):
        # a*b = min(a+b, 2) has no multiplicative identity at index 1 and 0 is not absorbing
        t = SemiringTable([[max(a, b) for b in range(3)] for a in range(3)],
                          [[min(a + b, 2) for b in range(3)] for a in range(3)])
        names = check_semiring_axioms(t).names()
        assert "mul_identity" in names and "zero_absorbing" in names

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_chain_semiring_valid(self, k):
        c = chain_semiring(k)
        assert check_semiring_axioms(c).valid
        assert oracles.semiring_ok(c.add, c.mul)
        assert c.idempotent

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_prime_fields(self, p):
        f = prime_field(p)
        assert check_semiring_axioms(f).valid
        assert not f.idempotent
        assert all(f.add[a][f.neg[a]] == 0 for a in range(p))
        assert bits(f.units) == list(range(1, p))

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            prime_field(6)

    def test_out_of_range_entry_is_structural(self):
        with pytest.raises(StructureError):
            SemiringTable([[0, 2], [1, 1]], [[0, 0], [0, 1]])

    def test_ragged_table_is_structural(self):
        with pytest.raises(StructureError):
            SemiringTable([[0, 1], [1]], [[0, 0], [0, 1]])


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9),
       st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_semiring_checker_agrees_with_naive_loop(add_flat, mul_flat):
    add = [add_flat[3 * i:3 * i + 3] for i in range(3)]
    mul = [mul_flat[3 * i:3 * i + 3] for i in range(3)]
    t = SemiringTable(add, mul)
    assert check_semiring_axioms(t).valid == oracles.semiring_ok(add, mul)


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9),
       st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_semiring_witnesses_refail(add_flat, mul_flat):
    add = [add_flat[3 * i:3 * i + 3] for i in range(3)]
    mul = [mul_flat[3 * i:3 * i + 3] for i in range(3)]
    rep = check_semiring_axioms(SemiringTable(add, mul))
    for name, wit in rep.violations:
        if name == "add_commutative":
            a, b = wit
            assert add[a][b] != add[b][a]
        elif name == "add_associative":
            a, b, c = wit
            assert add[add[a][b]][c] != add[a][add[b][c]]
        elif name == "mul_associative":
            a, b, c = wit
            assert mul[mul[a][b]][c] != mul[a][mul[b][c]]
        elif name == "distributive":
            a, b, c = wit
            assert mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]


class TestHyperstructures:
    def test_krasner_is_hyperfield(self):
        assert check_hyperstructure_axioms(KRASNER).valid
        assert KRASNER.hyperadd[1][1] == 0b11

    def test_sign_is_hyperfield(self):
        assert check_hyperstructure_axioms(SIGN).valid
        assert SIGN.hyperadd[1][2] == 0b111

    def test_e3_fails_associativity_at_a1_a1_a2(self):
        # the E_3 addition table as a hypergroup
        rep = check_hyperstructure_axioms(HyperTable(en_table(3).hyperadd, [[0] * 4] * 4,
                                                     kind="hypergroup"))
        assert rep.witness("add_associative") == (1, 1, 2)

    def test_empty_cell_is_structural(self):
        with pytest.raises(StructureError):
            HyperTable([[1, 0], [2, 3]], [[0, 0], [0, 1]])

    def test_missing_negative(self):
        # 1 + 1 = {1}: 1 has no negative
        rep = check_hyperstructure_axioms(HyperTable([[1, 2], [2, 2]], [[0, 0], [0, 1]]))
        assert not rep.valid

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_ring_as_hyperring(self, p):
        assert check_hyperstructure_axioms(as_hypertable(prime_field(p))).valid

    def test_kind_validated(self):
        with pytest.raises(StructureError):
            HyperTable(KRASNER.hyperadd, KRASNER.mul, kind="field")


class TestBuiltins:
    @pytest.mark.parametrize("name", ["B", "K", "S", "zero", "chain_3", "chain4", "F3", "F_5"])
    def test_builtins_pass_their_checker(self, name):
        obj = builtin(name)
        rep = check_hyperstructure_axioms(obj) if isinstance(obj, HyperTable) \
            else check_semiring_axioms(obj)
        assert rep.valid

    def test_sizes(self):
        assert (builtin("B").size, builtin("K").size, builtin("S").size) == (2, 2, 3)

    def test_unknown(self):
        with pytest.raises(KeyError):
            builtin("Q")


class TestQuotientHyperring:
    def test_f3_mod_units_is_krasner(self):
        q = quotient_hyperring(prime_field(3), {1, 2})
        assert q.hyperadd == KRASNER.hyperadd and q.mul == KRASNER.mul

    @pytest.mark.parametrize("p", [3, 5, 7, 11])
    def test_full_unit_group_gives_krasner(self, p):
        q = quotient_hyperring(prime_field(p), range(1, p))
        assert hyper_iso(q, KRASNER)

    def test_trivial_group(self):
        q = quotient_hyperring(prime_field(3), {1})
        assert q.size == 3
        assert all(v.bit_count() == 1 for row in q.hyperadd for v in row)
        assert check_hyperstructure_axioms(q).valid

    def test_f5_by_plus_minus_one(self):
        q = quotient_hyperring(prime_field(5), {1, 4})
        assert q.size == 3
        assert check_hyperstructure_axioms(q).valid
        # classes {0}, {1,4}, {2,3}; [1] + [1] = {[0], [2]}
        assert bits(q.hyperadd[1][1]) == [0, 2]

    def test_not_a_subgroup(self):
        with pytest.raises(ValueError):
            quotient_hyperring(prime_field(5), {1, 2})
        with pytest.raises(ValueError):
            quotient_hyperring(prime_field(5), {0, 1})


def test_size_cap(monkeypatch):
    monkeypatch.setenv("PEXA_MAX_SIZE", "3")
    with pytest.raises(BoundExceeded):
        check_size(4)
    check_size(3)


@given(st.lists(st.integers(1, 7), min_size=3, max_size=3))
def test_hypergroup_checker_agrees_with_naive_loop(cells):
    # symmetric 3-element tables with zero fixed as identity; off-zero cells are free
    c11, c12, c22 = cells
    hadd = [[1, 2, 4], [2, c11, c12], [4, c12, c22]]
    sets = [[frozenset(bits(v)) for v in row] for row in hadd]
    rep = check_hyperstructure_axioms(HyperTable(hadd, [[0] * 3] * 3, kind="hypergroup"))
    assert rep.valid == oracles.hypergroup_ok(sets)
