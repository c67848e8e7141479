import random

import pytest

from normone.errors import CapExceeded, NotASubgroupError
from normone.perms import (
    Permutation, PermGroup, alternating, are_conjugate_subgroups, core,
    coset_position, cyclic, cyclic_subgroup_classes, dihedral, klein_four,
    product_of_cyclics, right_transversal, small_generating_set,
    subgroup_classes, symmetric,
)
from oracles import all_subgroups_brute, brute_closure, conjugacy_class_count_brute

P = Permutation.from_cycles


class TestPermutation:
    def test_composition_applies_left_factor_first(self):
        # (1 2) then (2 3): 1 -> 2 -> 3
        p = P([(1, 2)], 3) * P([(2, 3)], 3)
        assert p == P([(1, 3, 2)], 3)

    def test_inverse_and_power(self):
        g = P([(1, 2, 3, 4, 5)], 5)
        assert g * g.inverse() == Permutation.identity(5)
        assert g ** 5 == Permutation.identity(5)
        assert g ** -2 == (g.inverse()) ** 2

    def test_order(self):
        assert P([(1, 2), (3, 4, 5)], 5).order() == 6
        assert Permutation.identity(4).order() == 1

    def test_cycle_string_round_trip(self):
        g = P([(1, 2, 3), (4, 5)], 6)
        assert g.cycle_string() == "(1 2 3)(4 5)"
        assert Permutation.identity(3).cycle_string() == "()"

    def test_from_cycles_rejects_repeats(self):
        with pytest.raises(ValueError):
            P([(1, 2, 1)], 3)

    def test_extend(self):
        g = P([(1, 2)], 2).extend(5)
        assert g.degree == 5
        assert g.images[4] == 4

    def test_nondisjoint_cycles_compose_left_to_right(self):
        assert P([(1, 2), (2, 3)], 3) == P([(1, 3, 2)], 3)


class TestCatalog:
    def test_orders(self):
        assert alternating(6).order() == 360
        assert symmetric(4).order() == 24
        assert dihedral(4).order() == 8    # order 2n convention
        assert cyclic(5).order() == 5
        assert klein_four().order() == 4
        assert product_of_cyclics((2, 3)).order() == 6
        assert alternating(5).order() == 60

    def test_standard_generators(self):
        G = symmetric(4)
        assert G.generators[0] == P([(1, 2)], 4)
        assert G.generators[1] == P([(1, 2, 3, 4)], 4)
        A5 = alternating(5)
        assert A5.generators == (P([(1, 2, 3)], 5), P([(1, 2, 3, 4, 5)], 5))
        A6 = alternating(6)
        assert A6.generators == (P([(1, 2, 3)], 6), P([(2, 3, 4, 5, 6)], 6))

    def test_degree_cap(self):
        with pytest.raises(CapExceeded):
            alternating(17)

    def test_small_degenerate_cases(self):
        assert alternating(2).order() == 1
        assert symmetric(2).order() == 2
        assert cyclic(1).order() == 1
        assert dihedral(1).order() == 2
        assert dihedral(2).order() == 4

    def test_trivial_group_on_larger_degree(self):
        assert PermGroup(3, ()).order() == 1

    def test_order_matches_brute_closure(self):
        for G in (alternating(5), symmetric(4), symmetric(5), dihedral(6),
                  dihedral(14), klein_four()):
            assert G.order() == len(brute_closure(G.degree, G.generators))

    def test_nonstandard_generating_pair(self):
        G = PermGroup(5, [P([(1, 2, 3, 4, 5)], 5), P([(1, 2, 3)], 5)])
        assert G.order() == 60


class TestSubgroups:
    def test_membership_required(self):
        G = alternating(4)
        with pytest.raises(NotASubgroupError):
            G.subgroup([P([(1, 2)], 4)])  # odd permutation

    def test_point_stabilizer(self):
        G = alternating(6)
        H = G.point_stabilizer(1)
        assert H.order() == 60
        assert all(g.images[0] == 0 for g in H.elements())

    def test_is_normal(self):
        S3 = symmetric(3)
        assert S3.subgroup([P([(1, 2, 3)], 3)]).is_normal()
        assert not S3.subgroup([P([(1, 2)], 3)]).is_normal()

    def test_small_generating_set(self):
        G = alternating(4)
        gens = small_generating_set(G.elements())
        assert len(gens) <= 2
        assert G.subgroup(gens).order() == 12


class TestTransversal:
    def test_index_six(self):
        G = alternating(6)
        T = right_transversal(G, G.point_stabilizer(1))
        assert len(T) == 6
        assert T[0].is_identity()

    def test_whole_group(self):
        G = symmetric(3)
        T = right_transversal(G, G.as_subgroup())
        assert T == [Permutation.identity(3)]

    def test_c4_over_c2(self):
        G = cyclic(4)
        H = G.subgroup([P([(1, 3), (2, 4)], 4)])
        T = right_transversal(G, H)
        assert len(T) == 2
        assert T[0].is_identity()
        # reps found in ascending order are the lex-minimal coset members
        assert T[1] == min(h * T[1] for h in H.elements())

    def test_reps_cover_and_are_disjoint(self):
        G = symmetric(4)
        H = G.subgroup([P([(1, 2)], 4), P([(3, 4)], 4)])
        T = right_transversal(G, H)
        assert len(T) == G.order() // H.order()
        hset = H.element_set()
        for i, a in enumerate(T):
            for b in T[i + 1:]:
                assert a * b.inverse() not in hset
        cosets = {(h * t).images for t in T for h in H.elements()}
        assert len(cosets) == G.order()

    def test_coset_position(self):
        G = alternating(4)
        H = G.subgroup([P([(1, 2, 3)], 4)])
        T = right_transversal(G, H)
        assert coset_position(G, H, T, Permutation.identity(4)) == 1
        for k, rep in enumerate(T, start=1):
            assert coset_position(G, H, T, rep) == k
            for h in H.elements():
                assert coset_position(G, H, T, h * rep) == k
        assert coset_position(G, H, T, P([(1, 2), (3, 4)], 4)) != 1

    def test_coset_position_rejects_outsiders(self):
        G = alternating(4)
        H = G.subgroup([P([(1, 2, 3)], 4)])
        T = right_transversal(G, H)
        with pytest.raises(ValueError):
            coset_position(G, H, T, P([(1, 2)], 4))


class TestCore:
    def test_simple_group_trivial_core(self):
        G = alternating(6)
        H = G.point_stabilizer(1)
        assert core(G, H).order() == 1

    def test_core_of_whole_group(self):
        G = symmetric(3)
        assert core(G, G.as_subgroup()).order() == 6

    def test_normal_subgroup_is_its_own_core(self):
        G = symmetric(3)
        H = G.subgroup([P([(1, 2, 3)], 3)])
        c = core(G, H)
        assert c.element_set() == H.element_set()

    def test_core_is_normal_and_contained(self):
        G = symmetric(4)
        H = G.subgroup([P([(1, 2)], 4), P([(1, 2, 3)], 4)])  # S3
        c = core(G, H)
        assert c.element_set() <= H.element_set()
        assert c.is_normal()


class TestConjugacy:
    def test_the_two_a5_classes_of_a6(self):
        G = alternating(6)
        H1 = G.subgroup([P([(1, 2, 3, 4, 5)], 6), P([(1, 2, 3)], 6)])
        H2 = G.subgroup([P([(1, 2, 3, 4, 5)], 6), P([(1, 4), (5, 6)], 6)])
        assert H1.order() == H2.order() == 60
        assert not are_conjugate_subgroups(G, H1, H2)

    def test_reflexive(self):
        G = symmetric(4)
        H = G.subgroup([P([(1, 2, 3)], 4)])
        assert are_conjugate_subgroups(G, H, H)

    def test_point_stabilizers_conjugate(self):
        G = alternating(5)
        assert are_conjugate_subgroups(G, G.point_stabilizer(1), G.point_stabilizer(2))

    def test_symmetric_and_transitive_on_random_pairs(self):
        rng = random.Random(11)
        G = symmetric(4)
        elems = G.elements()
        handles = []
        for _ in range(12):
            gens = [rng.choice(elems) for _ in range(2)]
            handles.append(G.subgroup(gens))
        for a in handles:
            for b in handles:
                ab = are_conjugate_subgroups(G, a, b)
                assert ab == are_conjugate_subgroups(G, b, a)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            are_conjugate_subgroups(alternating(8),
                                    alternating(8).trivial_subgroup(),
                                    alternating(8).trivial_subgroup())


class TestSubgroupClasses:
    def test_a4_has_five(self):
        classes = subgroup_classes(alternating(4))
        assert len(classes) == 5
        assert sorted(c.order() for c in classes) == [1, 2, 3, 4, 12]

    def test_s3_has_four(self):
        assert len(subgroup_classes(symmetric(3))) == 4

    def test_prime_cyclic(self):
        assert len(subgroup_classes(cyclic(7))) == 2

    def test_matches_brute_force(self):
        for G in (symmetric(3), alternating(4), dihedral(4), klein_four()):
            subs = all_subgroups_brute(G)
            expected = conjugacy_class_count_brute(G, subs)
            assert len(subgroup_classes(G)) == expected

    def test_no_two_reps_conjugate(self):
        G = symmetric(4)
        classes = subgroup_classes(G)
        for i, a in enumerate(classes):
            for b in classes[i + 1:]:
                assert not are_conjugate_subgroups(G, a, b)

    def test_random_subgroups_hit_some_class(self):
        rng = random.Random(5)
        G = alternating(5)
        classes = subgroup_classes(G)
        elems = G.elements()
        for _ in range(15):
            gens = [rng.choice(elems) for _ in range(rng.randint(1, 2))]
            H = G.subgroup(gens)
            assert any(are_conjugate_subgroups(G, H, c) for c in classes
                       if c.order() == H.order())

    def test_sorted_by_decreasing_order(self):
        classes = subgroup_classes(alternating(5))
        orders = [c.order() for c in classes]
        assert orders == sorted(orders, reverse=True)
        assert orders[0] == 60 and orders[-1] == 1

    def test_cap(self):
        with pytest.raises(CapExceeded):
            subgroup_classes(alternating(7), cap=100)

    def test_cyclic_classes(self):
        G = alternating(4)
        cyc = cyclic_subgroup_classes(G)
        assert sorted(c.order() for c in cyc) == [2, 3]


class TestWords:
    def test_c3(self):
        G = cyclic(3)
        words = G.elements_with_words()
        assert len(words) == 3
        assert words[G.identity()] == ()

    def test_words_evaluate_back(self):
        G = alternating(4)
        words = G.elements_with_words()
        assert len(words) == 12
        for p, w in words.items():
            acc = G.identity()
            for k in w:
                acc = acc * G.generators[k - 1]
            assert acc == p

    def test_alternate_alphabet(self):
        G = alternating(4)
        alphabet = (P([(1, 2), (3, 4)], 4), P([(1, 2, 3)], 4))
        words = G.elements_with_words(alphabet=alphabet)
        assert len(words) == 12
