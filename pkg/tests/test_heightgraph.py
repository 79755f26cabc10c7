import pytest

import arithsub as ar
from corpus import (
    BIJECTIVE4,
    CONSTANT_LENGTH_CORPUS,
    FIVE_LETTER_H3,
    HEIGHT3_DOUBLING,
    MERGE_CODING,
    PERIODIC_PAIR,
    ROTATIONS5,
    TOEPLITZ,
    coding,
    first_seed,
    scan_letters,
    sub,
)


def graph_of(rules):
    m = sub(rules)
    seed = first_seed(m)
    return m, seed, ar.period_graph(m, ar.height(m, seed))


def vertex_sets(graph):
    return [set(v) for v in graph.vertices]


def test_height_examples():
    m = sub(BIJECTIVE4)
    hd = ar.height(m, first_seed(m))
    assert hd.height == 2
    assert [set(c) for c in hd.classes] == [{0, 3}, {1, 2}]

    m = sub(HEIGHT3_DOUBLING)
    hd = ar.height(m, first_seed(m))
    assert hd.height == 3
    assert [set(c) for c in hd.classes] == [{0}, {1}, {2, 3}]

    m = sub(TOEPLITZ)
    hd = ar.height(m, ar.SeedPair(right=1))
    assert hd.height == 1
    assert hd.classes == (frozenset({0, 1}),)

    m = sub(FIVE_LETTER_H3)
    assert ar.height(m, first_seed(m)).height == 3


def test_height_partition_invariants():
    for rules in CONSTANT_LENGTH_CORPUS.values():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        hd = ar.height(m, seeds[0])
        length = m.profile().constant_length
        import math

        assert math.gcd(hd.height, length) == 1
        union = set()
        for cls in hd.classes:
            assert cls and not (cls & union)
            union |= cls
        assert union == set(range(len(m.domain)))


def test_height_rejects_bad_input():
    with pytest.raises(ar.DomainError):
        ar.height(sub({"0": "01", "1": "0"}), ar.SeedPair(right=0))  # not constant length
    m = sub(TOEPLITZ)
    with pytest.raises(ar.DomainError):
        ar.height(m, ar.SeedPair(right=0))  # sigma(0) starts with 1


def test_period_graph_bijective4():
    _, _, graph = graph_of(BIJECTIVE4)
    assert vertex_sets(graph) == [{0, 3}, {1, 2}]
    assert graph.roots == (0, 1)
    # digits 0 and 2 are self-loops, digit 1 swaps the two classes
    assert graph.edges == ((0, 1, 0), (1, 0, 1))


def test_period_graph_rotations5():
    _, _, graph = graph_of(ROTATIONS5)
    # breadth-first discovery order: roots, then {1}, {2}, {3}, {0}
    assert vertex_sets(graph) == [{0, 2}, {1, 3}, {1}, {2}, {3}, {0}]
    e = {v: graph.edges[v] for v in range(6)}
    assert e[0] == (0, 2, 0, 1, 0)
    assert e[1] == (1, 0, 1, 0, 1)
    # singleton component: {1} -0-> {1}, -1-> {2}, -2-> {3}, -3-> {0}, -4-> {1}
    assert e[2] == (2, 3, 4, 5, 2)
    assert e[3] == (3, 2, 5, 2, 3)
    assert e[4] == (4, 5, 2, 3, 4)
    assert e[5] == (5, 2, 3, 4, 5)


def test_period_graph_height3_doubling():
    _, _, graph = graph_of(HEIGHT3_DOUBLING)
    assert vertex_sets(graph) == [{0}, {1}, {2, 3}, {2}, {3}]


def test_graph_monotone_cardinalities():
    for rules in CONSTANT_LENGTH_CORPUS.values():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        length = m.profile().constant_length
        for v, row in enumerate(graph.edges):
            assert len(row) == length
            for w in row:
                assert len(graph.vertices[w]) <= len(graph.vertices[v])
                if len(graph.vertices[v]) == 1:
                    assert len(graph.vertices[w]) == 1


def test_alphabet_at_examples():
    _, _, graph = graph_of(ROTATIONS5)
    assert ar.alphabet_at(graph, None, 1, 1) == frozenset({1})
    for i, root in enumerate(graph.roots):
        assert ar.alphabet_at(graph, None, i, 0) == graph.vertices[root]

    m, _, g1 = graph_of(BIJECTIVE4)
    phi = coding(MERGE_CODING)
    image = ar.alphabet_at(g1, phi, 0, 0)
    assert {phi.codomain.token(i) for i in image} == {"a"}
    with pytest.raises(ar.DomainError):
        ar.alphabet_at(g1, phi, 6, 0)


def test_alphabet_at_matches_prefix_scan():
    for name, rules in CONSTANT_LENGTH_CORPUS.items():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        seed = seeds[0]
        graph = ar.period_graph(m, ar.height(m, seed))
        h, l = graph.height, graph.arity
        for level in range(0, 3):
            modulus = h * l**level
            for k in range(modulus):
                expected = scan_letters(m, seed, 60 * modulus, modulus, k)
                assert ar.alphabet_at(graph, None, k, level) == expected, (name, level, k)


def test_positional_refinement():
    for name, rules in CONSTANT_LENGTH_CORPUS.items():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        h, l = graph.height, graph.arity
        for level in range(0, 3):
            modulus = h * l**level
            for k in range(modulus):
                parent = ar.alphabet_at(graph, None, k, level)
                children = frozenset().union(
                    *(
                        ar.alphabet_at(graph, None, k + j * modulus, level + 1)
                        for j in range(l)
                    )
                )
                assert parent == children, (name, level, k)


def test_constant_difference_witnesses_examples():
    _, _, graph = graph_of(ROTATIONS5)
    assert ar.constant_difference_witnesses(graph, None, 10, 1) == [(1, 1)]
    assert ar.constant_difference_witnesses(graph, None, 5, 1) == []
    assert ar.constant_difference_witnesses(graph, None, 2, 1) == []

    m, _, g1 = graph_of(BIJECTIVE4)
    phi = coding(MERGE_CODING)
    wits = ar.constant_difference_witnesses(g1, phi, 2, 0)
    assert [(r, phi.codomain.token(b)) for r, b in wits] == [(0, "a")]

    with pytest.raises(ar.DomainError):
        ar.constant_difference_witnesses(g1, phi, 4, 1)  # 4 does not divide 2*3


def test_classify_examples():
    _, _, g1 = graph_of(BIJECTIVE4)
    assert ar.classify(g1).kind is ar.AutoClassification.NO_CONSTANT_AP

    _, _, g4 = graph_of(HEIGHT3_DOUBLING)
    outcome = ar.classify(g4)
    assert outcome.kind is ar.AutoClassification.UNBOUNDED_ESSENTIAL_PERIODS
    assert outcome.cycle is not None
    assert all(len(g4.vertices[v]) >= 2 for v in outcome.cycle)
    assert outcome.witness_vertex is not None
    assert len(g4.vertices[outcome.witness_vertex]) == 1

    _, _, gp = graph_of(PERIODIC_PAIR)
    assert ar.classify(gp).kind is ar.AutoClassification.PERIODIC

    _, _, gt = graph_of(TOEPLITZ)
    assert ar.classify(gt).kind is ar.AutoClassification.UNBOUNDED_ESSENTIAL_PERIODS

    phi = coding(MERGE_CODING)
    coded = ar.classify(g1, phi)
    assert coded.kind is ar.AutoClassification.HAS_CONSTANT_AP
    assert set(g1.vertices[coded.witness_vertex]) == {0, 3}


def test_classify_matches_fixed_walk_length_criterion():
    # "periodic" must agree with: every admissible walk of length 2^d ends in
    # a coded singleton (level sets at exactly that walk length)
    cases = [(rules, None) for rules in CONSTANT_LENGTH_CORPUS.values()]
    cases.append((BIJECTIVE4, coding(MERGE_CODING)))
    cases.append((PERIODIC_PAIR, None))
    for rules, phi in cases:
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        level = {v for v in graph.roots}
        for _ in range(2 ** len(m.domain)):
            level = {graph.edges[v][digit] for v in level for digit in range(graph.arity)}
        images = [ar.phi_image(graph, phi, v) for v in level]
        walk_periodic = all(len(img) == 1 for img in images)
        assert walk_periodic == (
            ar.classify(graph, phi).kind is ar.AutoClassification.PERIODIC
        ), rules


def test_branching_number_examples():
    _, _, g1 = graph_of(BIJECTIVE4)
    assert ar.branching_number(g1) == 2
    _, _, g2 = graph_of(ROTATIONS5)
    assert ar.branching_number(g2) == 1
    _, _, gp = graph_of(PERIODIC_PAIR)
    assert ar.branching_number(gp) == 1


def test_branching_number_one_iff_constant_subsequence():
    for rules in CONSTANT_LENGTH_CORPUS.values():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        kind = ar.classify(graph).kind
        assert (ar.branching_number(graph) == 1) == (
            kind is not ar.AutoClassification.NO_CONSTANT_AP
        ), rules


def test_level_reports_height3_doubling():
    _, _, graph = graph_of(HEIGHT3_DOUBLING)
    reports = ar.level_reports(graph, None, 5)
    assert [rep.singleton_count for rep in reports[:2]] == [2, 5]
    assert reports[1].new_essential_periods == ((6, 2, 2),)
    found = {p for rep in reports for p, _, _ in rep.new_essential_periods}
    assert found == {3, 6, 12, 24, 48, 96}


def test_level_reports_rotations5():
    _, _, graph = graph_of(ROTATIONS5)
    reports = ar.level_reports(graph, None, 2)
    assert reports[0].singleton_count == 0
    assert reports[1].singleton_count == 1
    assert reports[1].new_essential_periods == ((10, 1, 1),)


def test_level_reports_bijective4():
    _, _, graph = graph_of(BIJECTIVE4)
    reports = ar.level_reports(graph, None, 4)
    assert all(rep.singleton_count == 0 for rep in reports)
    assert all(not rep.new_essential_periods for rep in reports)


def test_level_reports_merge_coding():
    _, _, graph = graph_of(BIJECTIVE4)
    phi = coding(MERGE_CODING)
    reports = ar.level_reports(graph, phi, 5)
    assert reports[0].singleton_count == 1
    for prev, nxt in zip(reports, reports[1:]):
        assert nxt.singleton_count == 3 * prev.singleton_count
    assert reports[0].new_essential_periods == ((2, 0, 0),)
    assert all(not rep.new_essential_periods for rep in reports[1:])


def test_level_growth_lower_bound():
    for rules in CONSTANT_LENGTH_CORPUS.values():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        reports = ar.level_reports(graph, None, 4)
        for prev, nxt in zip(reports, reports[1:]):
            assert nxt.singleton_count >= graph.arity * prev.singleton_count, rules


def test_level_reports_budget():
    # levels need 2, 10, 50, 250, ... residues; the budget stops before 250
    _, _, graph = graph_of(ROTATIONS5)
    with pytest.raises(ar.BudgetError) as info:
        ar.level_reports(graph, None, 6, budget=100)
    partial = info.value.partial
    assert [rep.level for rep in partial] == [0, 1, 2]


def test_new_essential_period_iff_growth_jump():
    for rules in CONSTANT_LENGTH_CORPUS.values():
        m = sub(rules)
        seeds = ar.admissible_seeds(m)
        if not seeds:
            continue
        graph = ar.period_graph(m, ar.height(m, seeds[0]))
        reports = ar.level_reports(graph, None, 4)
        for prev, nxt in zip(reports, reports[1:]):
            jumped = nxt.singleton_count > graph.arity * prev.singleton_count
            assert bool(nxt.new_essential_periods) == jumped, rules


def test_difference_witnesses_constant_length():
    m = sub(BIJECTIVE4)
    phi = coding(MERGE_CODING)
    outcome = ar.difference_witnesses(m, 2, phi)
    assert outcome.reduced == 2 and outcome.level == 0
    assert [(r, phi.codomain.token(b)) for r, b in outcome.witnesses] == [(0, "a")]

    # reductions: 8 = 2 * 4 with 4 coprime to both height and length
    outcome = ar.difference_witnesses(m, 8, phi)
    assert outcome.reduced == 2
    assert outcome.witnesses

    outcome = ar.difference_witnesses(m, 5, phi)
    assert outcome.reduced == 1 and not outcome.witnesses

    with pytest.raises(ar.PeriodicInputError):
        ar.difference_witnesses(sub(PERIODIC_PAIR), 2)


def test_graph_to_dot_structure():
    m, _, graph = graph_of(BIJECTIVE4)
    dot = ar.graph_to_dot(graph, None)
    assert dot == ar.graph_to_dot(graph, None)
    node_lines = [l for l in dot.splitlines() if "->" not in l and "|" in l]
    edge_lines = [l for l in dot.splitlines() if "->" in l]
    assert len(node_lines) == 2
    assert len(edge_lines) == 6
    assert "peripheries=2" not in dot  # identity coding: no singleton vertices

    phi = coding(MERGE_CODING)
    dot = ar.graph_to_dot(graph, phi)
    assert '"0,3|a" [shape=doublecircle, peripheries=2];' in dot
    assert '"1,2|b,c" [shape=doublecircle];' in dot
    assert '"0,3|a" -> "1,2|b,c" [label="1"];' in dot
