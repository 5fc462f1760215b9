"""
Quivers AR: coordenadas, ordem convexa, dobra e renderização
"""

import json
from fractions import Fraction

import pytest

from denomkit.exceptions import NotReducedError
from denomkit.services.arquiver import build_ar_quiver, fold, render
from denomkit.services.cartan import build_root_system, parse_root, standard_automorphism, twisted_longest_word
from denomkit.services.denomlab import cluster_assignments
from denomkit.services.words import QuiverOrientation, class_of_orientation, commutation_class


@pytest.fixture
def d4_quiver():
    rs = build_root_system('D4')
    return build_ar_quiver(class_of_orientation(rs, QuiverOrientation.parse('1>2 3>2 4>2')))


@pytest.fixture
def e6_quiver():
    rs = build_root_system('E6')
    return build_ar_quiver(class_of_orientation(rs, QuiverOrientation.parse('1>3 3>4 2>4 4>5 5>6')))


def test_d4_golden_coordinates(d4_quiver):
    assert len(d4_quiver) == 12
    assert d4_quiver.coordinate((1, 0, 0, 0)) == (1, Fraction(6))
    assert d4_quiver.coordinate((0, 1, 0, 0)) == (2, Fraction(1))
    assert d4_quiver.root_at(2, 5) == (1, 1, 1, 1)
    rows = {}
    for beta in d4_quiver.roots:
        i, p = d4_quiver.coordinate(beta)
        rows.setdefault(i, []).append(p)
    assert sorted(rows[1]) == [2, 4, 6]
    assert sorted(rows[2]) == [1, 3, 5]


def test_arrows_raise_coordinate_by_one(e6_quiver):
    assert len(e6_quiver) == 36
    assert min(e6_quiver.coordinates.values()) == 1
    for source, target in e6_quiver.arrows:
        assert e6_quiver.coordinates[target] - e6_quiver.coordinates[source] == 1


def test_earlier_roots_sit_further_right(e6_quiver):
    for alpha in e6_quiver.roots:
        for beta in e6_quiver.roots:
            if e6_quiver.precedes(alpha, beta):
                assert e6_quiver.coordinates[alpha] > e6_quiver.coordinates[beta]
                assert e6_quiver.positions[alpha] < e6_quiver.positions[beta]


def test_interval(d4_quiver):
    alpha, beta = (1, 0, 0, 0), (0, 1, 0, 0)
    assert d4_quiver.precedes(alpha, beta)
    inside = d4_quiver.interval(alpha, beta)
    assert (1, 1, 1, 1) in inside
    assert alpha not in inside and beta not in inside


def test_other_member_gives_same_quiver(d4_quiver):
    word = (3, 1, 4, 2) + (1, 3, 4, 2) * 2
    other = build_ar_quiver(d4_quiver.commutation_class, word=word)
    assert other.coordinates == d4_quiver.coordinates


def test_word_outside_class(d4_quiver):
    with pytest.raises(NotReducedError):
        build_ar_quiver(d4_quiver.commutation_class, word=(2, 1, 3, 4) + (2, 1, 3, 4) * 2)


def test_shifted_anchor(d4_quiver):
    moved = d4_quiver.shifted(0)
    assert min(moved.coordinates.values()) == 0
    assert moved.coordinate((1, 0, 0, 0)) == (1, Fraction(5))


def test_twisted_e6_fold_is_injective():
    sigma = standard_automorphism('E6', 2)
    rs = build_root_system('E6')
    c = commutation_class(rs, twisted_longest_word((1, 3, 4, 2), sigma), check=False)
    quiver = build_ar_quiver(c, sigma=sigma)
    assert min(quiver.coordinates.values()) == Fraction(1, 2)
    folded = fold(quiver)
    assert len(set(folded.folded.values())) == 36
    assert {f for f, _ in folded.folded.values()} == {1, 2, 3, 4}


def test_render_formats(d4_quiver):
    ascii_out = render(d4_quiver, 'ascii')
    assert ascii_out.splitlines()[0].startswith('(i/p)')
    assert len(ascii_out.splitlines()) == 5
    dot = render(d4_quiver, 'dot')
    assert dot.startswith('digraph AR {')
    assert dot.count('->') == len(d4_quiver.arrows)
    payload = json.loads(render(d4_quiver, 'json'))
    assert payload['type'] == 'D4'
    assert len(payload['vertices']) == 12
    with pytest.raises(ValueError):
        render(d4_quiver, 'svg')


def test_render_is_deterministic(e6_quiver):
    assert render(e6_quiver, 'dot') == render(e6_quiver, 'dot')


# Linhas das figuras: resíduo → (primeira coordenada, raízes da esquerda para a direita, passo 2)
E6_ROWS = {
    1: (1, '000001 000010 000100 011111 101110 010100 001000 100000'),
    3: (2, '000011 000110 011211 112221 111210 011100 101000'),
    4: (3, '000111 011221 112321 122321 112210 111100'),
    2: (4, '010111 001110 111211 011110 101100 010000'),
    5: (4, '001111 111221 011210 112211 111110'),
    6: (5, '101111 010110 001100 111111'),
}

E7_ROWS = {
    1: (6, '1011111 0101110 0011100 1112111 0111110 1011100 0101000 0010000 1000000'),
    3: (5, '0011111 1112221 0112210 1123211 1223221 1122210 1112100 0111000 1010000'),
    4: (4, '0001111 0112221 1123321 1224321 1234321 2234321 1223210 1122100 1111000'),
    2: (5, '0101111 0011110 1112211 0112110 1122211 1112110 0111100 1011000 0100000'),
    5: (3, '0000111 0001110 0112211 1123221 1223321 1123210 1223221 1122110 1111100'),
    6: (2, '0000011 0000110 0001100 0112111 1122221 1112210 0112100 1122111 1111110'),
    7: (1, '0000001 0000010 0000100 0001000 0111111 1011110 0101100 0011000 1111111'),
}

E8_ROWS = {
    1: (7, '10111111 01011110 00111100 11122111 01121110 11222211 11122110 01121100 '
           '11222111 11121110 01111100 10111000 01010000 00100000 10000000'),
    3: (6, '00111111 11122221 01122210 11233211 12243221 12343321 22344321 12243210 '
           '12343211 22343221 12232210 11222100 11121000 01110000 10100000'),
    4: (5, '00011111 01122221 11233321 12244321 12354321 23465432 23465431 23465421 '
           '23465321 23464321 23454321 22343210 12232100 11221000 11110000'),
    2: (6, '01011111 00111110 11122211 01122110 11232211 12233221 11233210 12233211 '
           '11232110 12232211 11222110 11121100 01111000 10110000 01000000'),
    5: (4, '00001111 00011110 01122211 11233221 12243321 12344321 22354321 13354321 '
           '22454321 23354321 12343210 22343211 12232110 11221100 11111000'),
    6: (3, '00000111 00001110 00011100 01122111 11232221 12233321 11233210 12243211 '
           '12343221 22343321 12233210 11232100 12232111 11221110 11111100'),
    7: (2, '00000011 00000110 00001100 00011000 01121111 11222221 11122210 01122100 '
           '11232111 12232221 11222210 11122100 01121000 11221111 11111110'),
    8: (1, '00000001 00000010 00000100 00001000 00010000 01111111 10111110 01011100 '
           '00111000 11121111 01111110 10111100 01011000 00110000 11111111'),
}

D4_ROWS = {
    1: (1, '<1,-2> <2,4> <1,-4>'),
    2: (2, '<1,4> <1,2> <2,-4>'),
    3: (3, '<1,3> <2,-3> <3,-4>'),
    4: (1, '<3,4> <1,-3> <2,3>'),
}


def _expand(rs, rows):
    out = {}
    for residue, (first, labels) in rows.items():
        for n, label in enumerate(labels.split()):
            out[parse_root(rs, label)] = (residue, Fraction(first + 2 * n))
    return out


def _explicit(rs, rows):
    return {parse_root(rs, label): (residue, Fraction(p))
            for residue, entries in rows.items() for p, label in entries}


@pytest.mark.parametrize('tag, orientation, rows, size', [
    ('E6', '1>3 3>4 2>4 4>5 5>6', E6_ROWS, 36),
    ('D4', '3>2 2>1 2>4', D4_ROWS, 12),
    ('E7', '1>3 3>4 2>4 4>5 5>6 6>7', E7_ROWS, 63),
    ('E8', '1>3 3>4 2>4 4>5 5>6 6>7 7>8', E8_ROWS, 120),
])
def test_adapted_quivers_match_the_figures(tag, orientation, rows, size):
    rs = build_root_system(tag)
    quiver = build_ar_quiver(class_of_orientation(rs, QuiverOrientation.parse(orientation)))
    expected = _expand(rs, rows)
    assert len(expected) == size == len(quiver)
    assert {beta: quiver.coordinate(beta) for beta in quiver.roots} == expected


TWISTED_E6_ROWS = {
    1: [(2, '000111'), (4, '011110'), (6, '111211'), (8, '001000'), (10, '100000')],
    3: [(1, '000110'), (3, '011221'), (5, '122321'), (7, '112211'), (9, '101000')],
    4: [('1/2', '000100'), ('3/2', '010110'), ('5/2', '001110'), ('7/2', '011211'), ('9/2', '111221'),
        ('11/2', '112210'), ('13/2', '011111'), ('15/2', '101111'), ('17/2', '111100')],
    2: [(1, '010100'), (2, '000010'), (3, '001100'), (4, '010111'), (5, '101110'),
        (6, '011100'), (7, '000011'), (8, '101100'), (9, '010000')],
    5: [(2, '011210'), (4, '112321'), (6, '112221'), (8, '111111')],
    6: [(3, '111210'), (5, '001111'), (7, '111110'), (9, '000001')],
}

FOLDED_E6_ROWS = {
    1: [(2, '000111'), (3, '111210'), (4, '011110'), (5, '001111'), (6, '111211'),
        (7, '111110'), (8, '001000'), (9, '000001'), (10, '100000')],
    2: [(1, '000110'), (2, '011210'), (3, '011221'), (4, '112321'), (5, '122321'),
        (6, '112221'), (7, '112211'), (8, '111111'), (9, '101000')],
    3: TWISTED_E6_ROWS[4],
    4: TWISTED_E6_ROWS[2],
}

TWISTED_D4_ROWS = {
    1: [('7/3', '<1,3>'), ('13/3', '<1,-3>')],
    2: [('4/3', '<2,4>'), (2, '<3,-4>'), ('8/3', '<1,4>'), ('10/3', '<2,-4>'), (4, '<1,-2>'), ('14/3', '<2,-3>')],
    3: [('5/3', '<2,3>'), ('11/3', '<1,-4>')],
    4: [(1, '<3,4>'), (3, '<1,2>')],
}

FOLDED_D4_ROWS = {
    1: [(1, '<3,4>'), ('5/3', '<2,3>'), ('7/3', '<1,3>'), (3, '<1,2>'), ('11/3', '<1,-4>'), ('13/3', '<1,-3>')],
    2: TWISTED_D4_ROWS[2],
}


@pytest.fixture
def twisted_e6_quiver():
    rs = build_root_system('E6')
    word = (1, 3, 4, 2, 6, 5, 4, 2) * 4 + (1, 3, 4, 2)
    return build_ar_quiver(commutation_class(rs, word, check=False), sigma=standard_automorphism('E6', 2))


@pytest.fixture
def twisted_d4_quiver():
    rs = build_root_system('D4')
    word = (2, 1, 2, 3, 2, 4) * 2
    return build_ar_quiver(commutation_class(rs, word, check=False), sigma=standard_automorphism('D4', 3))


def test_twisted_e6_quiver_matches_the_figure(twisted_e6_quiver):
    expected = _explicit(twisted_e6_quiver.rs, TWISTED_E6_ROWS)
    assert len(expected) == 36
    assert {b: twisted_e6_quiver.coordinate(b) for b in twisted_e6_quiver.roots} == expected


def test_folded_e6_quiver_matches_the_figure(twisted_e6_quiver):
    folded = fold(twisted_e6_quiver)
    assert folded.folded == _explicit(twisted_e6_quiver.rs, FOLDED_E6_ROWS)


def test_twisted_d4_quiver_matches_the_figure(twisted_d4_quiver):
    expected = _explicit(twisted_d4_quiver.rs, TWISTED_D4_ROWS)
    assert len(expected) == 12
    assert {b: twisted_d4_quiver.coordinate(b) for b in twisted_d4_quiver.roots} == expected


def test_folded_d4_quiver_matches_the_figure(twisted_d4_quiver):
    folded = fold(twisted_d4_quiver)
    assert folded.folded == _explicit(twisted_d4_quiver.rs, FOLDED_D4_ROWS)


def test_twisted_coxeter_words_give_the_figure_classes(twisted_e6_quiver, twisted_d4_quiver):
    for quiver, reps in ((twisted_e6_quiver, (1, 3, 4, 2)), (twisted_d4_quiver, (2, 1))):
        rs = quiver.rs
        word = twisted_longest_word(reps, quiver.sigma)
        other = build_ar_quiver(commutation_class(rs, word, check=False), sigma=quiver.sigma)
        assert other.coordinates == quiver.coordinates


def _every_quiver(tag):
    return [a.quiver for a in cluster_assignments(tag)]


def _assert_hasse(quiver):
    arrows = set(quiver.arrows)
    for alpha in quiver.roots:
        for beta in quiver.roots:
            if alpha == beta:
                continue
            covers = quiver.precedes(alpha, beta) and not quiver.interval(alpha, beta)
            assert covers == ((beta, alpha) in arrows), (quiver.label(alpha), quiver.label(beta))


def _assert_paths_consistent(quiver):
    for source, target in quiver.arrows:
        step = quiver.coordinates[target] - quiver.coordinates[source]
        assert step == quiver.arrow_length(source, target)
    for alpha in quiver.roots:
        for beta in quiver.roots:
            if alpha != beta and quiver.precedes(alpha, beta):
                assert quiver.coordinates[alpha] > quiver.coordinates[beta]


@pytest.mark.parametrize('tag', ['D4~1', 'D4~3', 'G2~1'])
def test_arrows_are_the_covering_relations(tag):
    for quiver in _every_quiver(tag):
        _assert_hasse(quiver)
        _assert_paths_consistent(quiver)


@pytest.mark.slow
@pytest.mark.parametrize('tag', ['E6~1', 'F4~1'])
def test_arrows_are_the_covering_relations_on_e6(tag):
    for quiver in _every_quiver(tag):
        _assert_hasse(quiver)
        _assert_paths_consistent(quiver)
