"""
Base de denominadores, regra de Dorey, Γ^J e suítes de verificação
"""

import random

import pytest

from denomkit import database
from denomkit.exceptions import DenomkitError
from denomkit.services.coefficients import QMonomial
from denomkit.services.denomlab import (
    applicable_suites,
    cluster_assignments,
    default_assignment,
    denom_lookup,
    dorey_query,
    factorization_checks,
    gamma_j,
    parse_factor_group,
    parse_param,
    suite_cells,
    table_for,
    verify_tables,
)
from denomkit.services.statistics import distance, distance_polynomial, max_t, minimal_pairs, phi_set, theta_t

ALL_TYPES = ['G2~1', 'D4~3', 'E6~2', 'F4~1', 'E6~1', 'E7~1', 'E8~1', 'D4~1']


def mq(p):
    return QMonomial.minus_q(p)


@pytest.mark.parametrize('tag, i, j, expected', [
    ('G2~1', 2, 2, '(z-qs^2)(z-qs^8)(z-qs^12)'),
    ('E8~1', 8, 8, '(z-qs^2)(z-qs^12)(z-qs^20)(z-qs^30)'),
    ('F4~1', 2, 3, '(z+qs^5)(z+qs^7)(z+qs^9)(z+qs^11)^2(z+qs^13)(z+qs^15)(z+qs^17)'),
    ('E6~1', 4, 4, '(z-qs^2)(z-qs^4)^2(z-qs^6)^3(z-qs^8)^3(z-qs^10)^2(z-qs^12)'),
    ('E6~1', 1, 6, '(z-qs^6)(z-qs^12)'),
    ('D4~1', 2, 3, '(z+qs^3)(z+qs^5)'),
])
def test_lookup_values(tag, i, j, expected):
    assert str(denom_lookup(tag, i, j)) == expected
    assert denom_lookup(tag, j, i) == denom_lookup(tag, i, j)


def test_lookup_accepts_other_tag_spellings():
    assert denom_lookup('G2^(1)', 2, 2) == denom_lookup('G2~1', 2, 2)


def test_lookup_rejects_bad_indices():
    with pytest.raises(ValueError):
        denom_lookup('G2~1', 1, 3)


def test_triality_entry_has_cyclotomic_roots():
    d12 = denom_lookup('D4~3', 1, 2)
    assert d12.degree == 6
    for unit in (2, 6, 10):
        assert d12.multiplicity(QMonomial(unit, 3)) == 1
        assert d12.multiplicity(QMonomial(unit, 5)) == 1


def test_factor_group_with_degree():
    poly = parse_factor_group({'unit': 0, 'degree': 2, 'exps': '4,12^2'})
    assert poly.multiplicity(QMonomial(0, 2)) == 1
    assert poly.multiplicity(QMonomial(6, 2)) == 1
    assert poly.multiplicity(QMonomial(0, 6)) == 2
    assert poly.degree == 6
    with pytest.raises(ValueError):
        parse_factor_group({'unit': 1, 'degree': 2, 'exps': '4'})


def test_lookup_from_store(seeded_db):
    assert denom_lookup('E6~1', 4, 4, use_store=True) == denom_lookup('E6~1', 4, 4)
    row = database.fetch_denominator('E6~1', 4, 4)
    assert row['provenance'] == 'resolved'


def test_lookup_from_empty_store_falls_back():
    assert denom_lookup('G2~1', 2, 2, use_store=True) == table_for('G2~1').get(2, 2)


def test_dorey_rule_on_d4():
    # V(ϖ1)_{(-q)^-1} ⊗ V(ϖ1)_{(-q)} ↠ V(ϖ2)_1
    answer = dorey_query('D4~1', (1, mq(-1)), (1, mq(1)), (2, QMonomial(0, 0)), 'surjection')
    assert answer.holds
    w = answer.witness
    assert tuple(a + b for a, b in zip(w.alpha, w.beta)) == w.gamma
    assert not answer.witness.swapped


def test_dorey_rule_direction_matters():
    assert not dorey_query('D4~1', (1, mq(1)), (1, mq(-1)), (2, QMonomial(0, 0)), 'surjection').holds
    answer = dorey_query('D4~1', (1, mq(1)), (1, mq(-1)), (2, QMonomial(0, 0)), 'injection')
    assert answer.holds
    assert answer.witness.swapped
    assert 'injeção' in answer.witness.describe()


def test_dorey_rule_negatives():
    assert not dorey_query('D4~1', (1, mq(-1)), (1, mq(1)), (2, mq(3))).holds
    assert not dorey_query('D4~1', (1, mq(-1)), (1, mq(3)), (2, None)).holds


def test_dorey_rejects_unknown_direction():
    with pytest.raises(ValueError):
        dorey_query('D4~1', (1, mq(-1)), (1, mq(1)), (2, None), 'sideways')


@pytest.mark.parametrize('tag', ['G2~1', 'D4~3', 'E6~2'])
def test_dorey_rule_reads_minimal_pairs(tag):
    assignment = cluster_assignments(tag)[0]
    quiver = assignment.quiver
    for gamma in quiver.roots:
        pairs = minimal_pairs(quiver, gamma)
        if pairs:
            alpha, beta = pairs[0]
            break
    params = assignment.params
    answer = dorey_query(tag, params[beta], params[alpha], params[gamma], 'surjection')
    assert answer.holds


def test_cluster_of_d4_is_enumerated():
    classes = cluster_assignments('D4~1')
    assert len(classes) > 1
    assert classes[0].quiver.word == default_assignment('D4~1').quiver.word


def test_gamma_j_of_default_d4_quiver_is_dynkin():
    quiver = gamma_j('D4~1')
    assert quiver.matches_dynkin
    assert quiver.is_consistent
    assert {(u, v) for u, v, _ in quiver.arrows} == {(2, 1), (2, 3), (2, 4)}
    assert 'grafo de Dynkin: sim' in quiver.to_text()


def test_gamma_j_with_spread_parameters_has_no_arrows():
    params = {i: (i, QMonomial(0, 100 * i)) for i in (1, 2, 3, 4)}
    quiver = gamma_j('D4~1', parameters=params)
    assert quiver.arrows == ()
    assert not quiver.matches_dynkin


def test_factorization_identities_hold():
    for tag in ('D4~3', 'E6~2'):
        checks = factorization_checks(tag)
        assert checks
        assert [c.name for c in checks if not c.passed] == []
    assert factorization_checks('G2~1') == []


def test_applicable_suites():
    assert applicable_suites('G2~1') == ['symmetry', 'qdisk', 'distance']
    assert applicable_suites('E6~1') == ['symmetry', 'qdisk', 'theta', 'factorization']
    assert suite_cells('G2~1', 'computed') == [(2, 2)]
    with pytest.raises(ValueError):
        suite_cells('G2~1', 'bogus')


@pytest.mark.parametrize('tag', ALL_TYPES)
def test_tables_are_symmetric_and_in_the_q_disk(tag):
    report = verify_tables(tag, ['symmetry', 'qdisk'], threads=1, record=False)
    assert report.passed, report.to_text()


def test_verification_is_recorded():
    report = verify_tables('G2~1', ['symmetry', 'qdisk'], threads=2)
    assert report.passed
    assert report.to_text().splitlines()[-1] == 'G2~1: 6 verificações, 0 falhas'
    runs = database.list_verification_runs('G2~1')
    assert len(runs) == 1
    assert runs[0]['suite'] == 'symmetry,qdisk'
    assert runs[0]['passed'] == 6 and runs[0]['failed'] == 0


def test_distance_suite_on_g2():
    report = verify_tables('G2~1', ['distance'], threads=1, record=False)
    assert report.passed, report.to_text()


@pytest.mark.slow
def test_theta_suite_on_e6():
    report = verify_tables('E6~1', ['theta'], record=False)
    assert report.passed, report.to_text()


def test_parseparse_param():
    assert parse_param('D4~1', '1:(-q)^-1') == (1, mq(-1))
    assert parse_param('E6~1', '3') == (3, None)
    assert parse_param('E6~1', '3:*') == (3, None)
    with pytest.raises(DenomkitError):
        parse_param('E6~1', 'x:q')


@pytest.mark.parametrize('tag', ['E6~1', 'E7~1', 'E8~1', 'D4~3', 'E6~2', 'F4~1', 'G2~1'])
def test_gamma_j_of_the_simple_roots_is_the_dynkin_diagram(tag):
    quiver = gamma_j(tag)
    assert quiver.underlying_graph() == frozenset(quiver.dynkin_edges)
    assert quiver.is_consistent


def test_gamma_j_of_the_e6_figure_quiver():
    quiver = gamma_j('E6~1')
    labels = {v: (index, x) for v, index, x in quiver.labels}
    # α1 em (1,15), α3 em (1,13), α6 em (1,1), α2 em (2,14)
    assert labels[1] == (1, mq(15))
    assert labels[3] == (1, mq(13))
    assert labels[6] == (1, mq(1))
    assert labels[2] == (2, mq(14))
    assert quiver.matches_dynkin


@pytest.mark.parametrize('orientation', ['3>2 2>1 2>4', '1>2 3>2 4>2', '2>1 2>3 2>4'])
def test_gamma_j_of_triality_is_d4_for_any_quiver(orientation):
    quiver = gamma_j('D4~3', default_assignment('D4~3', orientation=orientation))
    assert quiver.underlying_graph() == frozenset({(1, 2), (2, 3), (2, 4)})


def test_gamma_j_labels_of_the_triality_figure_quiver():
    quiver = gamma_j('D4~3', default_assignment('D4~3', orientation='3>2 2>1 2>4'))
    labels = {v: (index, x) for v, index, x in quiver.labels}
    assert labels[1] == (1, mq(1))
    assert labels[2] == (1, mq(5) * QMonomial(4, 0))
    assert labels[3] == (1, mq(7) * QMonomial(4, 0))
    assert labels[4] == (1, mq(1) * QMonomial(8, 0))


@pytest.mark.parametrize('tag, first, second, target, direction', [
    ('G2~1', '2:(-qs)^4', '2:(-qs)^-4', '2:1', 'injection'),
    ('G2~1', '2:(-qs)', '2:(-qs)^-1', '1:1', 'injection'),
    ('G2~1', '2:-qs^-1', '2:-qs', '1:1', 'surjection'),
    ('G2~1', '1:-qs^-1', '2:(-qs)^10', '2:1', 'surjection'),
    ('E6~2', '1:-q^-1', '1:-q', '2:1', 'surjection'),
    ('E6~2', '4:-q^-1', '4:-q', '3:1', 'surjection'),
    ('E6~2', '1:(-q)^-3', '1:q^3', '4:i', 'surjection'),
    ('E6~2', '1:(-q)^-3', '1:q^3', '4:-i', 'surjection'),
    ('E6~2', '1:(-q)^-4', '1:(-q)^4', '1:-1', 'surjection'),
    ('F4~1', '1:-qs^-2', '1:-qs^2', '2:1', 'surjection'),
    ('F4~1', '4:-qs^-1', '4:-qs', '3:1', 'surjection'),
    ('F4~1', '4:qs^-6', '4:qs^6', '4', 'surjection'),
    ('E8~1', '8:q^-6', '8:q^6', '1:1', 'surjection'),
])
def test_dorey_homomorphisms_from_the_tables(tag, first, second, target, direction):
    answer = dorey_query(tag, parse_param(tag, first), parse_param(tag, second), parse_param(tag, target), direction)
    assert answer.holds
    w = answer.witness
    assert tuple(a + b for a, b in zip(w.alpha, w.beta)) == w.gamma


def test_dorey_rejects_a_sign_flipped_target_on_g2():
    # V(ϖ2) ⊗ V(ϖ1)_{-qs^8} ↠ V(ϖ2)_{-qs^4} contradiria d_{2,2}
    first, second, target = (parse_param('G2~1', text) for text in ('2:1', '1:-qs^8', '2:-qs^4'))
    assert not dorey_query('G2~1', first, second, target).holds


def _random_surjections(seed, count):
    """
    Sobrejeções com o expoente do segundo fator menor ou igual ao do
    primeiro: V(β)_a ⊗ V(α)_a ↠ V(γ)_a exige α à direita de β.
    """
    rng = random.Random(seed)
    tags = [t for t in ALL_TYPES if t != 'D4~1']
    out = []
    for _ in range(count):
        tag = rng.choice(tags)
        nodes = table_for(tag).nodes
        e1 = rng.randint(-12, 12)
        e2 = e1 - rng.randint(0, 10)
        target = (rng.choice(nodes), rng.choice([None, mq(rng.randint(-6, 6))]))
        out.append((tag, (rng.choice(nodes), mq(e1)), (rng.choice(nodes), mq(e2)), target))
    return out


@pytest.mark.parametrize('tag, first, second, target', _random_surjections(20240, 20))
def test_dorey_randomized_negatives(tag, first, second, target):
    assert not dorey_query(tag, first, second, target, 'surjection').holds


def test_theta_does_not_depend_on_the_class_for_d4():
    classes = cluster_assignments('D4~1')
    assert len(classes) >= 5
    quivers = [a.quiver for a in classes]
    for k in (1, 2, 3, 4):
        for l in (1, 2, 3, 4):
            for t in range(1, max_t(quivers[0]) + 1):
                values = {theta_t(q, k, l, t) for q in quivers}
                assert len(values) == 1, (k, l, t, values)


@pytest.mark.slow
def test_theta_does_not_depend_on_the_class_for_e6():
    quivers = [a.quiver for a in cluster_assignments('E6~1')[:6]]
    assert len(quivers) == 6
    for k, l in table_for('E6~1').cells():
        for t in range(1, max_t(quivers[0]) + 1):
            values = {theta_t(q, k, l, t) for q in quivers}
            assert len(values) == 1, (k, l, t, values)


@pytest.mark.parametrize('tag', ['D4~1', 'E6~1'])
def test_distance_is_constant_on_each_phi_set(tag):
    quiver = default_assignment(tag).quiver
    for k, l in table_for(tag).cells():
        for t in range(1, max_t(quiver) + 1):
            pairs = phi_set(quiver, k, l, t)
            assert len({distance(quiver, pair) for pair in pairs}) <= 1, (k, l, t)


def test_f4_distance_polynomial_multiplicities():
    quiver = default_assignment('F4~1').quiver
    d23 = distance_polynomial(quiver, 2, 3)
    assert d23.multiplicity(QMonomial(6, 9)) == 1
    assert d23.multiplicity(QMonomial(6, 11)) == 2
    assert d23 == denom_lookup('F4~1', 2, 3)
    d33 = distance_polynomial(quiver, 3, 3)
    assert d33.multiplicity(QMonomial(0, 12)) == 2


def test_e7_theta_at_twelve_on_the_sixth_node():
    quiver = default_assignment('E7~1').quiver
    assert theta_t(quiver, 6, 6, 12) == 1
    assert theta_t(quiver, 6, 6, 10) == 2


@pytest.mark.slow
def test_distance_suite_on_f4():
    report = verify_tables('F4~1', ['distance'], threads=1, record=False)
    assert report.passed, report.to_text()


@pytest.mark.slow
@pytest.mark.parametrize('tag', ['E7~1', 'E8~1'])
def test_theta_suite_on_e7_and_e8(tag):
    report = verify_tables(tag, ['theta'], record=False)
    assert report.passed, report.to_text()


@pytest.mark.slow
def test_e8_d11_agrees_with_theta_on_the_first_node():
    quiver = default_assignment('E8~1').quiver
    stored = denom_lookup('E8~1', 1, 1)
    assert {root.exp for root, _ in stored.roots} == {2, 8, 12, 14, 18, 20, 24, 30}
    ones = {t for t in range(1, max_t(quiver) + 1) if theta_t(quiver, 1, 1, t) >= 1}
    assert ones == {2, 8, 12, 14, 18, 20, 24}
