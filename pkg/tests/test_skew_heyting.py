import numpy as np
import pytest

from skewbench import (
    check_arrow_congruences,
    check_imp_or,
    check_lifting,
    check_sh_axioms,
    check_sha,
    derive_arrow,
    greens,
    heyting_arrow,
    leq_matrix,
    preceq_matrix,
    quotient,
    special_case_arrows,
    upset_at,
)
from skewbench.errors import NoTop, NotCoStronglyDistributive
from skewbench.models import Poset, SurjectionModel, poset_sections_algebra


class TestDeriveArrow:
    def test_pf22_matches_residue_formula(self, pf22):
        derived = derive_arrow(pf22.drop_arrow())
        assert derived
        assert np.array_equal(derived.table, pf22.arrow)

    def test_pf12_comparable_pair_maps_to_top(self, pf12):
        derived = derive_arrow(pf12.drop_arrow())
        p0, p1 = pf12.index("{p:0}"), pf12.index("{p:1}")
        assert derived.table[p0, p1] == pf12.index("{}")

    def test_x_to_x_is_top(self, pf22, t3, chain2):
        for A in (pf22.drop_arrow(), t3, chain2.drop_arrow()):
            derived = derive_arrow(A)
            assert all(derived.table[x, x] == A.top for x in range(A.n))

    def test_requires_top(self, rect2):
        with pytest.raises(NoTop):
            derive_arrow(rect2)

    def test_requires_costrong(self):
        from skewbench import make_algebra

        # a rectangular pair over an adjoined bottom, under an adjoined top:
        # has a top but is not conormal, so not co-strongly distributive
        meet = [[0, 0, 2, 0], [1, 1, 2, 1], [2, 2, 2, 2], [0, 1, 2, 3]]
        join = [[0, 1, 0, 3], [0, 1, 1, 3], [0, 1, 2, 3], [3, 3, 3, 3]]
        bad = make_algebra(["a", "b", "0", "1"], meet, join, top=3, bottom=2)
        with pytest.raises(NotCoStronglyDistributive):
            derive_arrow(bad)

    def test_arrow_lands_in_upset_of_second_argument(self, pf22):
        derived = derive_arrow(pf22.drop_arrow())
        leq = leq_matrix(pf22)
        for x in range(pf22.n):
            for y in range(pf22.n):
                assert leq[y, derived.table[x, y]]

    def test_upset_coherence(self, pf22):
        # x→y computed globally equals the upset-local arrow wherever both live
        derived = derive_arrow(pf22.drop_arrow())
        for up in derived.upsets:
            for gi in up.members:
                for gj in up.members:
                    local = up.to_global(int(up.arrow[up.local(gi), up.local(gj)]))
                    assert derived.table[gi, gj] == local


class TestUpset:
    def test_members_and_bounds(self, pf22):
        u = pf22.index("{p:0}")
        up = upset_at(pf22, u)
        assert pf22.index("{}") in up.members
        assert up.algebra.bottom == up.local(u)
        assert up.algebra.top == up.local(pf22.index("{}"))

    def test_upset_arrow_is_heyting(self, pf22):
        u = pf22.index("{p:0,q:0}")
        up = upset_at(pf22, u)
        oracle = heyting_arrow(up.algebra)
        assert oracle and np.array_equal(oracle.table, up.arrow)


class TestShAxioms:
    def test_pf22_all_hold(self, pf22):
        rep = check_sh_axioms(pf22, pf22.arrow)
        assert rep.all_hold()

    def test_chain2_reduces_to_heyting(self, chain2):
        arrow = heyting_arrow(chain2).table
        rep = check_sh_axioms(chain2, arrow)
        assert rep.all_hold()

    def test_mutation_breaks_an_axiom(self, pf22):
        rng = np.random.default_rng(7)
        for _ in range(25):
            arrow = np.array(pf22.arrow)
            x = int(rng.integers(pf22.n))
            y = int(rng.integers(pf22.n))
            delta = 1 + int(rng.integers(pf22.n - 1))
            arrow[x, y] = (arrow[x, y] + delta) % pf22.n
            rep = check_sh_axioms(pf22, arrow)
            sha = check_sha(pf22, arrow)
            assert not (rep.all_hold() and sha.ok)

    def test_uniqueness_every_single_mutation_detected(self, pf12):
        # small enough to try every mutated table exhaustively
        for x in range(pf12.n):
            for y in range(pf12.n):
                for v in range(pf12.n):
                    if v == pf12.arrow[x, y]:
                        continue
                    arrow = np.array(pf12.arrow)
                    arrow[x, y] = v
                    rep = check_sh_axioms(pf12, arrow)
                    assert not (rep.all_hold() and check_sha(pf12, arrow).ok)


class TestSha:
    def test_pf22(self, pf22):
        assert check_sha(pf22, pf22.arrow)

    def test_pf12_unit_clause(self, pf12):
        pre = preceq_matrix(pf12)
        p0, p1 = pf12.index("{p:0}"), pf12.index("{p:1}")
        assert pf12.arrow[p0, p1] == pf12.index("{}")
        assert pre[p0, p1]

    def test_chain2(self, chain2):
        arrow = heyting_arrow(chain2).table
        assert check_sha(chain2, arrow)


class TestImpOr:
    def test_pf22(self, pf22):
        assert check_imp_or(pf22, pf22.arrow)

    def test_chain2(self, chain2):
        arrow = heyting_arrow(chain2).table
        assert check_imp_or(chain2, arrow)

    def test_section_algebra_over_two_chain(self):
        model = SurjectionModel.from_fiber_sizes(Poset.chain(2, ["a", "b"]), (2, 1))
        A = poset_sections_algebra(model)
        assert check_imp_or(A, A.arrow)


class TestLifting:
    def test_pf22(self, pf22):
        assert check_lifting(pf22.drop_arrow())

    def test_t3(self, t3):
        assert check_lifting(t3)

    def test_chain2(self, chain2):
        assert check_lifting(chain2.drop_arrow())


class TestArrowCongruences:
    def test_pf22(self, pf22):
        assert check_arrow_congruences(pf22.drop_arrow(), pf22.arrow)

    def test_quotients_remain_derivable(self, pf22):
        _, L, R = greens(pf22)
        for part in (L, R):
            Q, _ = quotient(pf22.drop_arrow(), part)
            assert derive_arrow(Q)

    def test_chain2(self, chain2):
        arrow = heyting_arrow(chain2).table
        assert check_arrow_congruences(chain2.drop_arrow(), arrow)


class TestSpecialCases:
    def test_t3_chain_formula(self, t3):
        rep = special_case_arrows(t3)
        assert rep["case2-skew-chain"].verdict == "holds"

    def test_chain2_both_cases(self, chain2):
        rep = special_case_arrows(chain2.drop_arrow())
        assert rep["case2-skew-chain"].verdict == "holds"
        assert rep["case3-dual-boolean-diff"].verdict == "holds"

    def test_pf22_case3(self, pf22):
        rep = special_case_arrows(pf22, pf22.arrow)
        assert rep["case2-skew-chain"].verdict == "skipped"
        assert rep["case3-dual-boolean-diff"].verdict == "holds"

    def test_chain3_case3_skipped(self, chain3):
        rep = special_case_arrows(chain3.drop_arrow())
        assert rep["case2-skew-chain"].verdict == "holds"
        assert rep["case3-dual-boolean-diff"].verdict == "skipped"


def test_d_congruence_at_partition_level(pf22):
    # D-related argument pairs produce D-related arrow values
    D, _, _ = greens(pf22)
    R = pf22.arrow
    for a in range(pf22.n):
        for b in range(pf22.n):
            for c in range(pf22.n):
                for d in range(pf22.n):
                    if D.same(a, c) and D.same(b, d):
                        assert D.same(int(R[a, b]), int(R[c, d]))
