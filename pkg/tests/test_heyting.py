import numpy as np
import pytest

from skewbench import (
    check_heyting_axioms,
    direct_product,
    dual_gb_diff,
    generalized_heyting_arrow,
    greens,
    heyting_arrow,
    make_algebra,
    quotient,
)
from skewbench.models import Poset, upset_heyting


@pytest.fixture(scope="module")
def boolean4(chain2):
    return direct_product(chain2, chain2)


class TestHeytingArrow:
    def test_chain2_table(self, chain2):
        res = heyting_arrow(chain2)
        assert res
        # rows indexed by the first argument: 0→0=1, 0→1=1, 1→0=0, 1→1=1
        assert res.table.tolist() == [[1, 1], [0, 1]]

    def test_boolean4_is_negation_join(self, boolean4):
        res = heyting_arrow(boolean4)
        assert res
        leq = np.asarray(
            (boolean4.join == np.arange(4)[None, :])
            & (boolean4.join.T == np.arange(4)[None, :])
        )
        # a→b = ¬a∨b where ¬a is the complement
        comp = {}
        for a in range(4):
            comp[a] = next(
                w
                for w in range(4)
                if boolean4.meet[a, w] == boolean4.bottom and boolean4.join[a, w] == boolean4.top
            )
        for a in range(4):
            for b in range(4):
                assert res.table[a, b] == boolean4.join[comp[a], b]

    def test_n5_absent_with_two_maxima(self, n5):
        res = heyting_arrow(n5)
        assert not res
        y, z = res.offending
        assert (n5.names[y], n5.names[z]) == ("c", "a")
        assert sorted(n5.names[m] for m in res.maximal) == ["a", "b"]

    def test_absence_implies_not_distributive(self, n5):
        from skewbench import classify

        assert not classify(n5).holds("distributive")


class TestHeytingAxioms:
    def test_chain2_all_hold(self, chain2):
        arrow = heyting_arrow(chain2).table
        rep = check_heyting_axioms(chain2, arrow)
        assert rep.all_hold()

    def test_perturbed_arrow_breaks_ha(self, boolean4):
        arrow = np.array(heyting_arrow(boolean4).table)
        arrow[1, 0] = (arrow[1, 0] + 1) % 4
        rep = check_heyting_axioms(boolean4, arrow)
        assert not rep.holds("HA")
        assert rep["HA"].witness is not None

    def test_esakia_upsets_of_two_chain(self):
        L = upset_heyting(Poset.chain(2, ["a", "b"]))
        rep = check_heyting_axioms(L.drop_arrow(), L.arrow)
        assert rep.all_hold()

    def test_join_reduction_lemma(self, chain3, boolean4):
        for L in (chain3, boolean4):
            arrow = heyting_arrow(L).table
            rep = check_heyting_axioms(L, arrow)
            assert rep.holds("arrow-join-reduction")


class TestGeneralizedArrow:
    def test_three_chain_without_bottom(self):
        meet = [[min(i, j) for j in range(3)] for i in range(3)]
        join = [[max(i, j) for j in range(3)] for i in range(3)]
        L = make_algebra(["0", "1", "2"], meet, join, top=2)
        res = generalized_heyting_arrow(L)
        assert res

    def test_pf22_quotient(self, pf22):
        D, _, _ = greens(pf22)
        Q, _ = quotient(pf22.drop_arrow(), D)
        assert generalized_heyting_arrow(Q)

    def test_any_finite_distributive_with_top(self, chain3, boolean4):
        for L in (chain3, boolean4):
            assert generalized_heyting_arrow(L)


class TestDualDiff:
    def test_chain2_entrywise(self, chain2):
        res = dual_gb_diff(chain2)
        assert res.table.tolist() == [[1, 0], [1, 1]]

    def test_boolean4_negation_form_and_arrow_agreement(self, boolean4):
        res = dual_gb_diff(boolean4)
        assert res
        arrow = heyting_arrow(boolean4).table
        for x in range(4):
            for y in range(4):
                assert res.table[y, x] == arrow[x, y]
        # frozen spot check: top∖∖bottom = top, bottom∖∖top = bottom∨¬top = bottom
        assert res.table[boolean4.top, boolean4.bottom] == boolean4.top
        assert res.table[boolean4.bottom, boolean4.top] == boolean4.bottom

    def test_three_chain_has_no_dual_diff(self, chain3):
        # the middle element has no relative complement in [0, top]: at
        # (y, x) = (0, 1) nothing satisfies both defining identities
        res = dual_gb_diff(chain3)
        assert not res
        assert res.offending == (0, 1)

    def test_agreement_with_arrow_wherever_solvable(self, chain2, boolean4):
        for L in (chain2, boolean4):
            res = dual_gb_diff(L)
            assert res
            arrow = heyting_arrow(L).table
            assert np.array_equal(res.table.T, arrow)

    def test_ambiguous_on_diamond(self):
        from skewbench.errors import AmbiguousDiff

        # M3: three incomparable atoms under a common top; 0∖∖a has both
        # other atoms as candidates
        meet = [
            [0, 0, 0, 0, 0],
            [0, 1, 0, 0, 1],
            [0, 0, 2, 0, 2],
            [0, 0, 0, 3, 3],
            [0, 1, 2, 3, 4],
        ]
        join = [
            [0, 1, 2, 3, 4],
            [1, 1, 4, 4, 4],
            [2, 4, 2, 4, 4],
            [3, 4, 4, 3, 4],
            [4, 4, 4, 4, 4],
        ]
        m3 = make_algebra(["0", "a", "b", "c", "1"], meet, join, top=4, bottom=0)
        with pytest.raises(AmbiguousDiff):
            dual_gb_diff(m3)
