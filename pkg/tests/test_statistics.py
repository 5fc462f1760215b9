"""
Estatísticas combinatórias sobre o quiver AR de D4
"""

from collections import Counter
from itertools import combinations, permutations

import pytest

from denomkit.exceptions import BudgetExhaustedError, EmptyPhiSetError, UnsupportedShapeError
from denomkit.services.arquiver import build_ar_quiver
from denomkit.services.cartan import build_root_system
from denomkit.services.coefficients import DenPoly, QMonomial
from denomkit.services.statistics import (
    StatisticsEngine,
    StatisticsTable,
    bilex_below,
    decompositions,
    distance,
    distance_polynomial,
    is_simple,
    max_t,
    minimal_pairs,
    o_t,
    phi_set,
    q_length,
    socle,
    theta_t,
)
from denomkit.services.denomlab import default_assignment
from denomkit.services.words import (
    QuiverOrientation,
    class_members_linear_extensions,
    class_of_orientation,
    roots_sequence,
)

A1 = (1, 0, 0, 0)
A2 = (0, 1, 0, 0)
A1_A2 = (1, 1, 0, 0)
A234 = (0, 1, 1, 1)
ALL = (1, 1, 1, 1)


@pytest.fixture
def d4_quiver():
    rs = build_root_system('D4')
    return build_ar_quiver(class_of_orientation(rs, QuiverOrientation.parse('1>2 3>2 4>2')))


def test_bilex_order_on_a_pair(d4_quiver):
    assert bilex_below(d4_quiver, [ALL], [A1, A234])
    assert not bilex_below(d4_quiver, [A1, A234], [ALL])
    # pesos diferentes nunca são comparáveis
    assert not bilex_below(d4_quiver, [A1_A2], [A1, A234])


def test_distance_and_socle_of_a_pair(d4_quiver):
    assert distance(d4_quiver, (A1, A234)) == 1
    assert socle(d4_quiver, (A1, A234)) == (ALL,)
    assert decompositions(d4_quiver, (A1, A234)) == [(ALL,)]


def test_simple_pair(d4_quiver):
    assert is_simple(d4_quiver, (A1, A1_A2))
    assert distance(d4_quiver, (A1, A1_A2)) == 0
    assert socle(d4_quiver, (A1, A1_A2)) == (A1, A1_A2)


def test_single_roots_are_simple(d4_quiver):
    for beta in d4_quiver.roots:
        assert is_simple(d4_quiver, [beta])


def test_minimal_pairs_of_the_middle_root(d4_quiver):
    pairs = minimal_pairs(d4_quiver, ALL)
    assert (A1, A234) in pairs
    assert len(pairs) == 3
    for alpha, beta in pairs:
        assert tuple(a + b for a, b in zip(alpha, beta)) == ALL
        assert d4_quiver.precedes(alpha, ALL)
        assert d4_quiver.precedes(ALL, beta)


def test_socle_rejects_non_pairs(d4_quiver):
    with pytest.raises(UnsupportedShapeError):
        socle(d4_quiver, (A1, A1))


def test_phi_sets(d4_quiver):
    assert len(phi_set(d4_quiver, 1, 1, 2)) == 2
    assert phi_set(d4_quiver, 1, 1, 4) == [(A1, A1_A2)]
    assert phi_set(d4_quiver, 1, 1, 1) == []


def test_o_t_on_empty_phi_raises(d4_quiver):
    with pytest.raises(EmptyPhiSetError):
        o_t(d4_quiver, 1, 1, 1)


def test_theta_values(d4_quiver):
    assert o_t(d4_quiver, 1, 1, 2) == 1
    assert theta_t(d4_quiver, 1, 1, 2) == 1
    assert theta_t(d4_quiver, 1, 1, 4) == 0
    assert theta_t(d4_quiver, 1, 1, 3) == 0


def test_distance_polynomials(d4_quiver):
    assert max_t(d4_quiver) == 5
    assert distance_polynomial(d4_quiver, 1, 1) == DenPoly.from_roots({QMonomial(0, 2): 1})
    assert str(distance_polynomial(d4_quiver, 1, 3)) == '(z-qs^4)'


def test_q_length_of_a_simple_pair(d4_quiver):
    assert q_length(d4_quiver, (A1, A1_A2)) == 0


def test_budget_is_enforced(d4_quiver):
    engine = StatisticsEngine(d4_quiver, budget=1)
    with pytest.raises(BudgetExhaustedError):
        engine.sequences_below(engine.seq((A1, A234)))


def test_statistics_table_csv(d4_quiver):
    table = StatisticsTable(d4_quiver)
    lines = table.to_csv().splitlines()
    assert lines[0] == 'k,l,t,phi,o_t,theta_t'
    assert '1,1,2,2,1,1' in lines
    assert all(row.size > 0 for row in table.rows)


def _bilex_by_members(quiver, comparisons):
    """≺ᵇ decidido palavra a palavra, sobre todas as extensões lineares da classe"""
    verdict = [True] * len(comparisons)
    for word in class_members_linear_extensions(quiver.commutation_class):
        rank = {beta: k for k, beta in enumerate(roots_sequence(quiver.rs, word))}
        for c, (m, m2) in enumerate(comparisons):
            if not verdict[c]:
                continue
            a, b = Counter(m), Counter(m2)
            diff = sorted((beta for beta in set(a) | set(b) if a[beta] != b[beta]), key=rank.get)
            verdict[c] = bool(diff) and b[diff[0]] > a[diff[0]] and b[diff[-1]] > a[diff[-1]]
    return verdict


def _weight(roots):
    return tuple(map(sum, zip(*roots)))


def _small_quiver(name):
    if name == 'A3':
        return build_ar_quiver(class_of_orientation(build_root_system('A3'), QuiverOrientation.parse('1>2 3>2')))
    if name == 'D4':
        return build_ar_quiver(class_of_orientation(build_root_system('D4'), QuiverOrientation.parse('1>2 3>2 4>2')))
    return default_assignment('D4~3').quiver


@pytest.mark.parametrize('name', ['A3', 'D4', 'D4~3'])
def test_bilex_criterion_agrees_with_all_class_members(name):
    quiver = _small_quiver(name)
    pairs = list(combinations(quiver.roots, 2))
    comparisons = []
    for m, m2 in permutations(pairs, 2):
        if _weight(m) == _weight(m2):
            comparisons.append((m, m2))
    for gamma in quiver.roots:
        for pair in pairs:
            if _weight(pair) == gamma:
                comparisons.append(((gamma,), pair))
                comparisons.append((pair, (gamma,)))
    assert comparisons
    expected = _bilex_by_members(quiver, comparisons)
    got = [bilex_below(quiver, m, m2) for m, m2 in comparisons]
    assert got == expected
