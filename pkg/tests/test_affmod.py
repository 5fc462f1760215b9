"""
Módulos fundamentais: construções, decomposição clássica e relações
"""

import json

import pytest

from denomkit.exceptions import ModuleConstructionError
from denomkit.services.affmod import (
    build_adjoint,
    build_minuscule,
    builtin_module,
    classical_decomposition,
    dominant_extremal_vector,
    fundamental_module,
    highest_weight_space,
    module_dump,
    reaches_extremal,
    relation_report,
    specialize,
    tensor,
)


@pytest.mark.parametrize('tag, i, dim, construction', [
    ('E6~1', 1, 27, 'minuscule'),
    ('E6~1', 6, 27, 'minuscule'),
    ('E6~1', 2, 79, 'adjoint'),
    ('E7~1', 7, 56, 'minuscule'),
    ('G2~1', 2, 7, 'builtin'),
    ('D4~3', 1, 8, 'builtin'),
    ('F4~1', 4, 26, 'adjoint-short'),
])
def test_fundamental_module_dimensions(tag, i, dim, construction):
    module = fundamental_module(tag, i)
    assert module.dim == dim
    assert module.construction == construction
    assert module.index == i


def test_bad_indices_are_rejected():
    with pytest.raises(ModuleConstructionError):
        fundamental_module('E6~1', 7)
    with pytest.raises(ModuleConstructionError):
        fundamental_module('E6~1', 3)
    with pytest.raises(ModuleConstructionError):
        build_minuscule('E6~1', 2)
    with pytest.raises(ModuleConstructionError):
        build_adjoint('E6~1', 1)
    with pytest.raises(ModuleConstructionError):
        builtin_module('E6~1', 1)


def test_dominant_extremal_vector():
    module = fundamental_module('E6~1', 1)
    k = dominant_extremal_vector(module)
    assert k == 0
    assert module.weights[k] == (1, 0, 0, 0, 0, 0)


@pytest.mark.parametrize('tag, i, expected', [
    ('E6~1', 1, {(1, 0, 0, 0, 0, 0): 1}),
    ('E6~1', 2, {(0, 1, 0, 0, 0, 0): 1, (0, 0, 0, 0, 0, 0): 1}),
    ('G2~1', 2, {(0, 1): 1}),
    ('D4~3', 1, {(1, 0): 1, (0, 0): 1}),
])
def test_classical_decomposition(tag, i, expected):
    assert classical_decomposition(fundamental_module(tag, i)) == expected


def test_zero_weight_space_of_the_adjoint_has_one_trivial_vector():
    module = fundamental_module('E6~1', 2)
    vectors = highest_weight_space(module, (0, 0, 0, 0, 0, 0))
    assert len(vectors) == 1
    (only,) = vectors
    assert module.labels[next(iter(only))] == 'y0'


@pytest.mark.parametrize('tag, i', [('G2~1', 2), ('D4~3', 1)])
def test_builtin_tables_satisfy_the_relations(tag, i):
    report = relation_report(fundamental_module(tag, i))
    assert report.ok, report.failures[:5]
    assert report.checked > 0


def test_minuscule_module_satisfies_the_relations():
    report = relation_report(specialize(fundamental_module('E6~1', 1), 2))
    assert report.ok, report.failures[:5]


def test_specialize_keeps_shape():
    module = fundamental_module('G2~1', 2)
    special = specialize(module, 3)
    assert special.is_special and special.s == 3
    assert special.labels == module.labels
    assert specialize(special) is special


@pytest.mark.parametrize('coproduct', ['A', 'B'])
def test_tensor_square_decomposes_classically(coproduct):
    V = fundamental_module('G2~1', 2)
    VV = tensor(V, V, coproduct=coproduct)
    assert VV.dim == 49
    assert VV.construction == f"tensor-{coproduct}"
    assert classical_decomposition(VV) == {(0, 2): 1, (1, 0): 1, (0, 1): 1, (0, 0): 1}


def test_tensor_rejects_mixed_types_and_unknown_coproduct():
    with pytest.raises(ModuleConstructionError):
        tensor(fundamental_module('G2~1', 2), fundamental_module('D4~3', 1))
    V = fundamental_module('G2~1', 2)
    with pytest.raises(ValueError):
        tensor(V, V, coproduct='C')


def test_lowest_vector_reaches_the_extremal_one():
    module = fundamental_module('G2~1', 2)
    lowest = module.labels.index('1̄')
    assert reaches_extremal(module, module.basis_vector(lowest))
    assert not reaches_extremal(module, {})


def test_module_dump_is_json():
    module = fundamental_module('D4~3', 1)
    payload = json.loads(module_dump(module))
    assert payload['type'] == 'D4~3'
    assert payload['construction'] == 'builtin'
    assert [b['label'] for b in payload['basis']] == list(module.labels)
    assert all(op[0][0] in 'ef' for op in payload['operators'])
