"""
Módulos fundamentais explícitos de U_q'(g): construção minúscula, adjunta
(com a variante de raízes curtas), as tabelas embutidas de G2⁽¹⁾ ϖ₂ e
D4⁽³⁾ ϖ₁, especialização em q_s = s, produtos tensoriais com parâmetros
espectrais e decomposição clássica.

Operadores são esparsos: operador[coluna] = {linha: coeficiente}.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import sympy
from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix

from denomkit.config import get_settings
from denomkit.exceptions import ExtremalMultiplicityError, ModuleConstructionError
from denomkit.services.cartan import AffineType, Root, add_roots, affine_type, negate, root_label
from denomkit.services.coefficients import MODULE_FIELD, qs, quantum_integer, specialize_scalar

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]
Operator = Dict[int, Dict[int, Any]]
Vector = Dict[int, Any]

# Q(z) com q_s já especializado: corpo de trabalho das matrizes R
SPECIAL_FIELD, zf = field('z', QQ)

COPRODUCTS = ('A', 'B')


def lift(value) -> Any:
    """Fraction/int → elemento de SPECIAL_FIELD"""
    value = Fraction(value)
    return SPECIAL_FIELD(QQ(value.numerator, value.denominator))


def to_fraction(x) -> Fraction:
    """Elemento constante de SPECIAL_FIELD → Fraction"""
    if not (x.numer.is_ground and x.denom.is_ground):
        raise ValueError(f"Escalar depende de z: {x}")
    num = QQ.convert(x.numer.LC)
    den = QQ.convert(x.denom.LC)
    return Fraction(int(num.numerator), int(num.denominator)) / Fraction(int(den.numerator), int(den.denominator))


# ---------------------------------------------------------------------------
# Pesos clássicos


def classical_nodes(aff: AffineType) -> Tuple[int, ...]:
    return aff.classical_nodes


def fundamental_weight(aff: AffineType, r: int) -> Weight:
    nodes = classical_nodes(aff)
    if r not in nodes:
        raise ModuleConstructionError(f"Índice {r} fora de I₀ para {aff.tag}")
    return tuple(1 if i == r else 0 for i in nodes)


def alpha_weight(aff: AffineType, k: int) -> Weight:
    """α_k em coordenadas ⟨h_j, ·⟩, j ∈ I₀ (vale também para k = 0)"""
    return tuple(aff.datum.a(j, k) for j in classical_nodes(aff))


def pairing(aff: AffineType, i: int, mu: Weight) -> int:
    """⟨h_i, μ⟩ para μ de nível 0; h₀ sai do elemento central"""
    nodes = classical_nodes(aff)
    if i != 0:
        return mu[nodes.index(i)]
    c = aff.central_element
    total = -sum(Fraction(c[aff.datum.position(j)]) * mu[x] for x, j in enumerate(nodes))
    value = total / c[aff.datum.position(0)]
    if value.denominator != 1:
        raise ModuleConstructionError(f"⟨h₀, μ⟩ não inteiro para μ={mu}")
    return int(value)


def weight_of_root(aff: AffineType, beta: Root) -> Weight:
    rs = aff.root_system()
    return tuple(rs.pairing(j, beta) for j in classical_nodes(aff))


def add_weights(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub_weights(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def format_weight(mu: Weight) -> str:
    return '(' + ','.join(str(x) for x in mu) + ')'


def is_dominant(mu: Weight) -> bool:
    return all(x >= 0 for x in mu)


# ---------------------------------------------------------------------------
# Módulo com base


@dataclass
class BasedModule:
    """
    Módulo de dimensão finita com base fixa. Escalares em MODULE_FIELD
    (simbólico) ou em SPECIAL_FIELD quando `s` está definido.
    """
    aff: AffineType
    labels: Tuple[str, ...]
    weights: Tuple[Weight, ...]
    e: Dict[int, Operator]
    f: Dict[int, Operator]
    index: Optional[int] = None
    construction: str = ''
    s: Optional[int] = None
    factors: Tuple['BasedModule', ...] = dc_field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def nodes(self) -> Tuple[int, ...]:
        return self.aff.datum.nodes

    @property
    def is_special(self) -> bool:
        return self.s is not None

    def one(self):
        return SPECIAL_FIELD.one if self.is_special else MODULE_FIELD.one

    def q_power(self, i: int, n: int):
        """q_i^n no domínio do módulo"""
        step = self.aff.q_step(i) * n
        if self.is_special:
            return lift(Fraction(self.s) ** step)
        return qs ** step

    def quantum(self, n: int, i: int):
        if self.is_special:
            q = Fraction(self.s) ** self.aff.q_step(i)
            return lift((q ** n - q ** (-n)) / (q - 1 / q))
        return quantum_integer(n, self.aff.q_step(i))

    def operator(self, kind: str, i: int) -> Operator:
        return (self.e if kind == 'e' else self.f).get(i, {})

    def apply(self, kind: str, i: int, vec: Vector) -> Vector:
        return apply_operator(self.operator(kind, i), vec)

    def k_eigen(self, i: int, idx: int, sign: int = 1):
        return self.q_power(i, sign * pairing(self.aff, i, self.weights[idx]))

    def weight_space(self, mu: Weight) -> List[int]:
        return [k for k, w in enumerate(self.weights) if w == mu]

    def basis_vector(self, idx: int) -> Vector:
        return {idx: self.one()}


def apply_operator(op: Operator, vec: Vector) -> Vector:
    out: Vector = {}
    for k, c in vec.items():
        column = op.get(k)
        if not column:
            continue
        for row, coeff in column.items():
            value = out.get(row)
            term = c * coeff
            out[row] = term if value is None else value + term
    return {k: v for k, v in out.items() if v}


def add_vectors(a: Vector, b: Vector, scale=None) -> Vector:
    out = dict(a)
    for k, v in b.items():
        term = v if scale is None else v * scale
        out[k] = out[k] + term if k in out else term
    return {k: v for k, v in out.items() if v}


def _set(op: Operator, col: int, row: int, coeff) -> None:
    if coeff:
        column = op.setdefault(col, {})
        column[row] = column.get(row, 0) + coeff


# ---------------------------------------------------------------------------
# Construção minúscula


def build_minuscule(tag, r: int) -> BasedModule:
    """
    Base = W₀-órbita de ϖ̄_r; e_i v_μ = v_{μ+α_i} quando ⟨h_i, μ⟩ = −1 e
    f_i v_μ = v_{μ−α_i} quando ⟨h_i, μ⟩ = 1, para todo i ∈ I.
    """
    aff = affine_type(tag) if isinstance(tag, str) else tag
    top = fundamental_weight(aff, r)
    nodes = classical_nodes(aff)
    alphas = {k: alpha_weight(aff, k) for k in aff.datum.nodes}
    order: List[Weight] = [top]
    seen = {top}
    queue = deque([top])
    while queue:
        mu = queue.popleft()
        for i in nodes:
            p = pairing(aff, i, mu)
            if p == 0:
                continue
            nxt = sub_weights(mu, tuple(p * a for a in alphas[i]))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    index = {mu: k for k, mu in enumerate(order)}
    e: Dict[int, Operator] = {i: {} for i in aff.datum.nodes}
    f: Dict[int, Operator] = {i: {} for i in aff.datum.nodes}
    one = MODULE_FIELD.one
    for mu in order:
        for i in aff.datum.nodes:
            p = pairing(aff, i, mu)
            if abs(p) > 1:
                raise ModuleConstructionError(f"ϖ_{r} não é minúsculo em {aff.tag}: ⟨h_{i}, μ⟩ = {p}")
            if p == 1:
                target = sub_weights(mu, alphas[i])
                if target not in index:
                    raise ModuleConstructionError(f"Peso {format_weight(target)} fora da órbita")
                _set(f[i], index[mu], index[target], one)
                _set(e[i], index[target], index[mu], one)
    module = BasedModule(aff, tuple(format_weight(mu) for mu in order), tuple(order), e, f, r, 'minuscule')
    logger.info(f"Módulo minúsculo {aff.tag} ϖ{r}: dimensão {module.dim}")
    return module


# ---------------------------------------------------------------------------
# Construção adjunta


def _adjoint_shape(aff: AffineType, r: int) -> bool:
    """True para a variante de raízes curtas; erro se (tipo, r) não é adjunto"""
    rs = aff.root_system()
    top = fundamental_weight(aff, r)
    alpha0 = aff.classical_alpha0()
    if top == weight_of_root(aff, rs.highest) and alpha0 == negate(rs.highest) and 0 in aff.datum.neighbors(r):
        return False
    if not aff.datum.simply_laced and top == weight_of_root(aff, rs.highest_short):
        return True
    raise ModuleConstructionError(f"ϖ_{r} não é adjunto em {aff.tag}")


def build_adjoint(tag, r: int) -> BasedModule:
    """
    Base {x_β} ∪ {y_i}; as cordas passam por y_i nos pesos nulos e a mistura
    Σ_{j∼i} [−a_ij]_i/[2]_j y_j aparece ao entrar no espaço de peso 0.
    Na variante curta só entram raízes curtas e vértices curtos.
    """
    aff = affine_type(tag) if isinstance(tag, str) else tag
    short = _adjoint_shape(aff, r)
    rs = aff.root_system()
    positive = list(rs.positive)
    roots = positive + [negate(b) for b in positive]
    if short:
        roots = [b for b in roots if rs.is_short(b)]
        smallest = min(aff.datum.lengths)
        ys = [i for i in aff.datum.nodes if aff.datum.length(i) == smallest]
    else:
        ys = list(aff.datum.nodes)
    roots.sort(key=lambda b: (-rs.height(b), tuple(-x for x in b)))
    root_set = set(roots)
    simple = {i: rs.simple(i) for i in classical_nodes(aff)}
    simple[0] = aff.classical_alpha0()
    zero = tuple(0 for _ in classical_nodes(aff))

    def label(b):
        return f"x{root_label(rs, b)}" if rs.is_positive(b) else f"x-{root_label(rs, negate(b))}"

    labels = [label(b) for b in roots] + [f"y{i}" for i in ys]
    weights = [weight_of_root(aff, b) for b in roots] + [zero for _ in ys]
    x_index = {b: k for k, b in enumerate(roots)}
    y_index = {i: len(roots) + k for k, i in enumerate(ys)}

    def down(b, i):
        kind, val = b
        if kind == 'x':
            if val == simple[i]:
                return ('y', i) if i in y_index else None
            nxt = tuple(a - s for a, s in zip(val, simple[i]))
            return ('x', nxt) if nxt in root_set else None
        return ('x', negate(simple[i])) if val == i else None

    def up(b, i):
        kind, val = b
        if kind == 'x':
            if val == negate(simple[i]):
                return ('y', i) if i in y_index else None
            nxt = add_roots(val, simple[i])
            return ('x', nxt) if nxt in root_set else None
        return ('x', simple[i]) if val == i else None

    def string(b, i, step):
        n = 0
        cur = step(b, i)
        while cur is not None:
            n += 1
            cur = step(cur, i)
        return n

    def idx(b):
        return x_index[b[1]] if b[0] == 'x' else y_index[b[1]]

    def mixing(op, col, i):
        _set(op, col, y_index[i], MODULE_FIELD.one)
        for j in aff.datum.neighbors(i):
            if j in y_index:
                coeff = quantum_integer(-aff.datum.a(i, j), aff.q_step(i)) / quantum_integer(2, aff.q_step(j))
                _set(op, col, y_index[j], coeff)

    elements = [('x', b) for b in roots] + [('y', i) for i in ys]
    e: Dict[int, Operator] = {i: {} for i in aff.datum.nodes}
    f: Dict[int, Operator] = {i: {} for i in aff.datum.nodes}
    for b in elements:
        col = idx(b)
        for i in aff.datum.nodes:
            step = aff.q_step(i)
            target = up(b, i)
            if target is not None:
                if target[0] == 'y':
                    mixing(e[i], col, i)
                else:
                    _set(e[i], col, idx(target), quantum_integer(string(b, i, down) + 1, step))
            target = down(b, i)
            if target is not None:
                if target[0] == 'y':
                    mixing(f[i], col, i)
                else:
                    _set(f[i], col, idx(target), quantum_integer(string(b, i, up) + 1, step))
    module = BasedModule(aff, tuple(labels), tuple(weights), e, f, r, 'adjoint-short' if short else 'adjoint')
    logger.info(f"Módulo adjunto {aff.tag} ϖ{r}: dimensão {module.dim}")
    return module


# ---------------------------------------------------------------------------
# Tabelas embutidas

# (operador, i, origem, destino, coeficiente)
_G2_TABLE = (
    ('e', 0, '1', '2̄', '1'), ('e', 0, '2', '1̄', '1'), ('f', 0, '2̄', '1', '1'), ('f', 0, '1̄', '2', '1'),
    ('e', 1, '2̄', '3̄', '1'), ('e', 1, '3', '2', '1'), ('f', 1, '2', '3', '1'), ('f', 1, '3̄', '2̄', '1'),
    ('e', 2, '1̄', '2̄', '1'), ('e', 2, '2', '1', '1'), ('e', 2, '3̄', '0', '1'), ('e', 2, '0', '3', '[2]_2'),
    ('f', 2, '1', '2', '1'), ('f', 2, '3', '0', '1'), ('f', 2, '0', '3̄', '[2]_2'), ('f', 2, '2̄', '1̄', '1'),
)

_D43_TABLE = (
    ('e', 0, '1', '∅', '1'), ('e', 0, '1', '0', '1/[2]_1'), ('e', 0, '2', '3̄', '1'), ('e', 0, '3', '2̄', '1'),
    ('e', 0, '0', '1̄', '1'), ('e', 0, '∅', '1̄', '[3]_1/[2]_1'),
    ('f', 0, '1̄', '∅', '1'), ('f', 0, '1̄', '0', '1/[2]_1'), ('f', 0, '2̄', '3', '1'), ('f', 0, '3̄', '2', '1'),
    ('f', 0, '0', '1', '1'), ('f', 0, '∅', '1', '[3]_1/[2]_1'),
    ('e', 1, '2', '1', '1'), ('e', 1, '0', '3', '[2]_1'), ('e', 1, '3̄', '0', '1'), ('e', 1, '1̄', '2̄', '1'),
    ('f', 1, '2̄', '1̄', '1'), ('f', 1, '0', '3̄', '[2]_1'), ('f', 1, '3', '0', '1'), ('f', 1, '1', '2', '1'),
    ('e', 2, '3', '2', '1'), ('e', 2, '2̄', '3̄', '1'), ('f', 2, '3̄', '2̄', '1'), ('f', 2, '2', '3', '1'),
)

BUILTIN_TABLES = {
    ('G2~1', 2): ('1 2 3 0 3̄ 2̄ 1̄'.split(), _G2_TABLE),
    ('D4~3', 1): ('1 2 3 0 3̄ 2̄ 1̄ ∅'.split(), _D43_TABLE),
}


def _table_scalar(aff: AffineType, text: str):
    """'1', '[2]_2', '[3]_1/[2]_1', '1/[2]_1'"""
    value = MODULE_FIELD.one
    for x, part in enumerate(text.split('/')):
        part = part.strip()
        if part == '1':
            term = MODULE_FIELD.one
        else:
            n, _, i = part.strip('[').partition(']_')
            term = quantum_integer(int(n), aff.q_step(int(i)))
        value = value * term if x == 0 else value / term
    return value


def builtin_module(tag, i: int) -> BasedModule:
    """Ações escritas à mão: G2⁽¹⁾ ϖ₂ (dim 7) e D4⁽³⁾ ϖ₁ (dim 8)"""
    aff = affine_type(tag) if isinstance(tag, str) else tag
    key = (aff.tag, i)
    if key not in BUILTIN_TABLES:
        raise ModuleConstructionError(f"Sem tabela embutida para {aff.tag} ϖ{i}")
    labels, table = BUILTIN_TABLES[key]
    index = {label: k for k, label in enumerate(labels)}
    e: Dict[int, Operator] = {k: {} for k in aff.datum.nodes}
    f: Dict[int, Operator] = {k: {} for k in aff.datum.nodes}
    for kind, node, src, dst, coeff in table:
        _set((e if kind == 'e' else f)[node], index[src], index[dst], _table_scalar(aff, coeff))

    # pesos propagados a partir do vetor extremal
    weights: Dict[int, Weight] = {0: fundamental_weight(aff, i)}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for kind, ops in (('e', e), ('f', f)):
            for node, op in ops.items():
                shift = alpha_weight(aff, node)
                for row in op.get(k, {}):
                    w = add_weights(weights[k], shift) if kind == 'e' else sub_weights(weights[k], shift)
                    if row not in weights:
                        weights[row] = w
                        queue.append(row)
                    elif weights[row] != w:
                        raise ModuleConstructionError(f"Pesos inconsistentes na tabela {aff.tag} ϖ{i}")
    if len(weights) != len(labels):
        raise ModuleConstructionError(f"Tabela {aff.tag} ϖ{i} desconexa")
    module = BasedModule(aff, tuple(labels), tuple(weights[k] for k in range(len(labels))), e, f, i, 'builtin')
    logger.info(f"Módulo embutido {aff.tag} ϖ{i}: dimensão {module.dim}")
    return module


@lru_cache(maxsize=64)
def fundamental_module(tag: str, i: int) -> BasedModule:
    """Tabela embutida, construção minúscula ou adjunta, nessa ordem"""
    aff = affine_type(tag)
    if (aff.tag, i) in BUILTIN_TABLES:
        return builtin_module(aff, i)
    try:
        return build_minuscule(aff, i)
    except ModuleConstructionError:
        pass
    return build_adjoint(aff, i)


def dominant_extremal_vector(module: BasedModule) -> int:
    """Índice do único vetor de peso ϖ_i"""
    if module.index is None:
        raise ExtremalMultiplicityError("Módulo sem índice fundamental")
    top = fundamental_weight(module.aff, module.index)
    found = module.weight_space(top)
    if len(found) != 1:
        raise ExtremalMultiplicityError(f"Multiplicidade {len(found)} no peso extremal {format_weight(top)}")
    return found[0]


# ---------------------------------------------------------------------------
# Especialização e produto tensorial


def specialize(module: BasedModule, s: Optional[int] = None) -> BasedModule:
    """Cópia com q_s = s e escalares em SPECIAL_FIELD"""
    if module.is_special:
        return module
    s = s or get_settings().qs_sample
    cache: Dict[Any, Any] = {}

    def conv(x):
        key = str(x)
        if key not in cache:
            cache[key] = lift(specialize_scalar(x, s))
        return cache[key]

    def conv_ops(ops):
        return {i: {col: {row: conv(c) for row, c in column.items()} for col, column in op.items()}
                for i, op in ops.items()}

    return BasedModule(module.aff, module.labels, module.weights, conv_ops(module.e), conv_ops(module.f),
                       module.index, module.construction, s)


def tensor(V: BasedModule, W: BasedModule, x=None, y=None, coproduct: Optional[str] = None) -> BasedModule:
    """
    V_x ⊗ W_y. Convenção A: Δe = e⊗K⁻¹ + 1⊗e, Δf = f⊗1 + K⊗f;
    convenção B: Δe = e⊗1 + K⊗e, Δf = f⊗K⁻¹ + 1⊗f. e₀ carrega x (ou y),
    f₀ carrega x⁻¹ (ou y⁻¹).
    """
    if V.aff.tag != W.aff.tag:
        raise ModuleConstructionError(f"Tipos diferentes: {V.aff.tag} e {W.aff.tag}")
    coproduct = coproduct or get_settings().coproduct
    if coproduct not in COPRODUCTS:
        raise ValueError(f"Convenção de coproduto desconhecida: {coproduct}")
    s = V.s or W.s or get_settings().qs_sample
    V, W = specialize(V, s), specialize(W, s)
    x = SPECIAL_FIELD.one if x is None else x
    y = SPECIAL_FIELD.one if y is None else y
    m = W.dim
    labels = tuple(f"{a}⊗{b}" for a in V.labels for b in W.labels)
    weights = tuple(add_weights(a, b) for a in V.weights for b in W.weights)
    e: Dict[int, Operator] = {}
    f: Dict[int, Operator] = {}
    for i in V.nodes:
        ex = x if i == 0 else SPECIAL_FIELD.one
        ey = y if i == 0 else SPECIAL_FIELD.one
        ei, fi = {}, {}
        kv = [V.k_eigen(i, a) for a in range(V.dim)]
        kw = [W.k_eigen(i, b) for b in range(W.dim)]
        for a in range(V.dim):
            for b in range(W.dim):
                col = a * m + b
                for row_a, c in V.e.get(i, {}).get(a, {}).items():
                    scale = ex * (1 / kw[b] if coproduct == 'A' else 1)
                    _set(ei, col, row_a * m + b, c * scale)
                for row_b, c in W.e.get(i, {}).get(b, {}).items():
                    scale = ey * (1 if coproduct == 'A' else kv[a])
                    _set(ei, col, a * m + row_b, c * scale)
                for row_a, c in V.f.get(i, {}).get(a, {}).items():
                    scale = (1 / ex) * (1 if coproduct == 'A' else 1 / kw[b])
                    _set(fi, col, row_a * m + b, c * scale)
                for row_b, c in W.f.get(i, {}).get(b, {}).items():
                    scale = (1 / ey) * (kv[a] if coproduct == 'A' else 1)
                    _set(fi, col, a * m + row_b, c * scale)
        e[i], f[i] = ei, fi
    return BasedModule(V.aff, labels, weights, e, f, None, f"tensor-{coproduct}", s, (V, W))


# ---------------------------------------------------------------------------
# Vetores de peso máximo clássico


def _qq(x):
    value = to_fraction(x) if not isinstance(x, (int, Fraction)) else Fraction(x)
    return QQ(value.numerator, value.denominator)


def highest_weight_space(module: BasedModule, mu: Weight) -> List[Vector]:
    """
    Base de {v ∈ M_μ : e_i v = 0, i ∈ I₀}, cada vetor com primeiro
    coeficiente não nulo igual a 1 na ordem da base.
    """
    module = specialize(module)
    cols = module.weight_space(mu)
    if not cols:
        return []
    rows: List[List[Any]] = []
    for i in classical_nodes(module.aff):
        targets = module.weight_space(add_weights(mu, alpha_weight(module.aff, i)))
        if not targets:
            continue
        op = module.operator('e', i)
        for t in targets:
            rows.append([_qq(op.get(c, {}).get(t, 0)) for c in cols])
    if rows:
        kernel = DomainMatrix(rows, (len(rows), len(cols)), QQ).nullspace().to_Matrix()
        basis = [[kernel[r, c] for c in range(len(cols))] for r in range(kernel.rows)]
    else:
        basis = [[sympy.Integer(1 if c == r else 0) for c in range(len(cols))] for r in range(len(cols))]
    out = []
    for vec in basis:
        lead = next(v for v in vec if v != 0)
        scaled = [sympy.Rational(v / lead) for v in vec]
        out.append({cols[c]: lift(Fraction(int(v.p), int(v.q))) for c, v in enumerate(scaled) if v != 0})
    return out


def dominant_weights(module: BasedModule) -> List[Weight]:
    """Pesos dominantes em ordem decrescente de altura"""
    found = sorted({w for w in module.weights if is_dominant(w)}, key=lambda w: (-sum(w), tuple(-x for x in w)))
    return found


def classical_decomposition(module: BasedModule) -> Dict[Weight, int]:
    """{λ: multiplicidade} pelos núcleos dos e_i, i ∈ I₀"""
    out = {}
    for mu in dominant_weights(module):
        dim = len(highest_weight_space(module, mu))
        if dim:
            out[mu] = dim
    return out


# ---------------------------------------------------------------------------
# Relações do grupo quântico


@dataclass
class RelationReport:
    module: str
    failures: List[str]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def _divided_power(module: BasedModule, kind: str, i: int, n: int, vec: Vector) -> Vector:
    out = vec
    for _ in range(n):
        out = module.apply(kind, i, out)
    if n > 1:
        fact = module.one()
        for k in range(2, n + 1):
            fact = fact * module.quantum(k, i)
        out = {k: v / fact for k, v in out.items()}
    return out


def relation_report(module: BasedModule, serre: bool = True) -> RelationReport:
    """
    Deslocamento de pesos, [e_i, f_j] = δ_ij [⟨h_i, wt⟩]_i e as relações
    de Serre quânticas, checadas vetor a vetor da base.
    """
    aff = module.aff
    failures: List[str] = []
    checked = 0
    nodes = module.nodes
    for kind, ops in (('e', module.e), ('f', module.f)):
        for i, op in ops.items():
            shift = alpha_weight(aff, i)
            for col, column in op.items():
                for row in column:
                    expected = add_weights(module.weights[col], shift) if kind == 'e' \
                        else sub_weights(module.weights[col], shift)
                    checked += 1
                    if module.weights[row] != expected:
                        failures.append(f"peso: {kind}{i} {module.labels[col]} → {module.labels[row]}")
    for k in range(module.dim):
        v = module.basis_vector(k)
        for i in nodes:
            for j in nodes:
                lhs = add_vectors(module.apply('e', i, module.apply('f', j, v)),
                                  module.apply('f', j, module.apply('e', i, v)), -1)
                if i == j:
                    expected = module.quantum(pairing(aff, i, module.weights[k]), i)
                    lhs = add_vectors(lhs, {k: expected}, -1) if expected else lhs
                checked += 1
                if lhs:
                    failures.append(f"[e{i}, f{j}] em {module.labels[k]}")
        if not serre:
            continue
        for i in nodes:
            for j in nodes:
                if i == j:
                    continue
                n = 1 - aff.datum.a(i, j)
                for kind in ('e', 'f'):
                    total: Vector = {}
                    for t in range(n + 1):
                        w = _divided_power(module, kind, i, t, v)
                        w = module.apply(kind, j, w)
                        w = _divided_power(module, kind, i, n - t, w)
                        total = add_vectors(total, w, -1 if t % 2 else None)
                    checked += 1
                    if total:
                        failures.append(f"Serre {kind}{i},{kind}{j} em {module.labels[k]}")
    name = f"{aff.tag} {module.construction}"
    if failures:
        logger.error(f"Relações falharam em {name}: {len(failures)} casos")
    return RelationReport(name, failures, checked)


def reaches_extremal(module: BasedModule, vec: Vector, budget: int = 10000) -> bool:
    """Busca de palavras de levantamento até o vetor extremal dominante"""
    target = dominant_extremal_vector(module)
    queue = deque([vec])
    seen = set()
    used = 0
    while queue and used < budget:
        cur = queue.popleft()
        if target in cur:
            return True
        key = tuple(sorted(cur))
        if key in seen:
            continue
        seen.add(key)
        for i in module.nodes:
            nxt = module.apply('e', i, cur)
            used += 1
            if nxt:
                queue.append(nxt)
    return False


# ---------------------------------------------------------------------------
# E/S


def module_dump(module: BasedModule) -> str:
    """JSON: base, pesos e triplas esparsas (operador, linha, coluna, coeficiente)"""
    ops = []
    for kind, table in (('e', module.e), ('f', module.f)):
        for i in sorted(table):
            for col in sorted(table[i]):
                for row in sorted(table[i][col]):
                    ops.append([f"{kind}{i}", row, col, str(table[i][col][row])])
    payload = {
        'type': module.aff.tag,
        'index': module.index,
        'construction': module.construction,
        'basis': [{'label': l, 'weight': list(w)} for l, w in zip(module.labels, module.weights)],
        'operators': ops,
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'
