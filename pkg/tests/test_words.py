"""
Classes de comutação, adaptação e funtores de reflexão
"""

import pytest

from denomkit.exceptions import NotReducedError
from denomkit.services.cartan import build_root_system
from denomkit.services.words import (
    QuiverOrientation,
    adapted_quiver,
    adapted_word,
    canonical_form,
    class_members_linear_extensions,
    class_of_orientation,
    commutation_class,
    count_linear_extensions,
    is_adapted,
    reflection_cluster,
    reflection_functor,
    reflection_functor_inverse,
    roots_sequence,
)

D4_WORD = (1, 3, 4, 2) * 3


@pytest.fixture
def d4_class():
    rs = build_root_system('D4')
    return class_of_orientation(rs, QuiverOrientation.parse('1>2 3>2 4>2'))


def test_orientation_parse_and_format():
    q = QuiverOrientation.parse('1>3 3<4')
    assert q.arrows == frozenset({(1, 3), (4, 3)})
    assert q.format() == '1>3 4>3'
    assert q.sinks() == [3]
    with pytest.raises(ValueError):
        QuiverOrientation.parse('1-3')


def test_canonical_form_sorts_commuting_letters():
    datum = build_root_system('E6').datum
    assert canonical_form(datum, (2, 1)) == (1, 2)
    assert canonical_form(datum, (3, 1)) == (3, 1)


def test_d4_class_of_orientation(d4_class):
    assert d4_class.word == D4_WORD


def test_adapted_word_removes_sinks():
    rs = build_root_system('D4')
    q = QuiverOrientation.parse('2>1 2>3 2>4')
    word = adapted_word(rs, q)
    assert is_adapted(word, q)
    assert word == D4_WORD


def test_adapted_quiver_recovers_orientation(d4_class):
    assert adapted_quiver(d4_class) == QuiverOrientation.parse('1>2 3>2 4>2').reversed()


def test_commutation_class_rejects_short_word():
    rs = build_root_system('D4')
    with pytest.raises(NotReducedError):
        commutation_class(rs, (1, 3, 4, 2))


def test_roots_sequence_ends_in_simple_root():
    rs = build_root_system('D4')
    roots = roots_sequence(rs, D4_WORD)
    assert roots[0] == (1, 0, 0, 0)
    assert roots[3] == (1, 1, 1, 1)
    assert roots[-1] == (0, 1, 0, 0)
    assert len(set(roots)) == 12


def test_reflection_functors_are_inverse(d4_class):
    moved = reflection_functor(d4_class, 2)
    assert moved != d4_class
    assert moved.word[0] == 2
    assert reflection_functor_inverse(moved, 2) == d4_class


def test_reflection_functor_without_terminal_letter(d4_class):
    assert reflection_functor(d4_class, 1) == d4_class


def test_reflection_cluster_contains_neighbours(d4_class):
    cluster = reflection_cluster(d4_class)
    words = {c.word for c in cluster.classes}
    assert d4_class.word in words
    assert reflection_functor(d4_class, 2).word in words
    assert not cluster.truncated


def test_reflection_cluster_cap(d4_class):
    cluster = reflection_cluster(d4_class, cap=2)
    assert len(cluster.classes) == 2
    assert cluster.truncated


def test_linear_extensions(d4_class):
    assert count_linear_extensions(d4_class.heap()) == 216
    members = list(class_members_linear_extensions(d4_class))
    assert len(members) == 216
    datum = d4_class.datum
    assert {canonical_form(datum, w) for w in members} == {d4_class.word}


def test_linear_extensions_truncate(d4_class):
    stream = class_members_linear_extensions(d4_class, cap=10)
    assert len(list(stream)) == 10
    assert stream.truncated
