"""
Dados de Cartan finitos e afins, sistemas de raízes, palavras do grupo de
Weyl, automorfismos de diagrama com as dobras (A_{2n−1},B_n), (D_{n+1},C_n),
(E6,F4), (D4,G2), elementos σ-Coxeter e a expressão reduzida torcida de w₀.

Convenção: a_ij = ⟨h_i, α_j⟩ = 2(α_i, α_j)/(α_i, α_i); raízes são vetores de
coordenadas inteiras sobre as raízes simples.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from denomkit.exceptions import DuplicateOrbitError, NotReducedError, UnsupportedTypeError
from denomkit.services.coefficients import QMonomial

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]
Word = Tuple[int, ...]


@dataclass(frozen=True)
class CartanDatum:
    """
    Matriz de Cartan generalizada com rótulos de vértices e comprimentos ao
    quadrado (inteiros, a menos de escala comum).
    """
    tag: str
    nodes: Tuple[int, ...]
    lengths: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def position(self, i: int) -> int:
        return self.nodes.index(i)

    def a(self, i: int, j: int) -> int:
        return self.matrix[self.position(i)][self.position(j)]

    def length(self, i: int) -> int:
        return self.lengths[self.position(i)]

    def normalized_length(self, i: int) -> Fraction:
        """|α_i|² com a raiz mais longa normalizada em 1"""
        return Fraction(self.length(i), max(self.lengths))

    def inner(self, i: int, j: int) -> Fraction:
        """(α_i, α_j) na escala de `lengths`"""
        return Fraction(self.a(i, j) * self.length(i), 2)

    def neighbors(self, i: int) -> List[int]:
        return [j for j in self.nodes if j != i and self.a(i, j) != 0]

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for x, i in enumerate(self.nodes) for j in self.nodes[x + 1:] if self.a(i, j) != 0]

    @property
    def simply_laced(self) -> bool:
        return len(set(self.lengths)) == 1

    def symmetrizer(self) -> Tuple[Fraction, ...]:
        short = min(self.lengths)
        return tuple(Fraction(l, short) for l in self.lengths)

    def restrict(self, nodes: Sequence[int], tag: Optional[str] = None) -> 'CartanDatum':
        pos = [self.position(i) for i in nodes]
        return CartanDatum(
            tag=tag or self.tag,
            nodes=tuple(nodes),
            lengths=tuple(self.lengths[p] for p in pos),
            matrix=tuple(tuple(self.matrix[p][q] for q in pos) for p in pos),
        )

    def to_dict(self) -> dict:
        return {
            'tag': self.tag,
            'nodes': list(self.nodes),
            'lengths': list(self.lengths),
            'matrix': [list(row) for row in self.matrix],
        }


def _from_edges(tag: str, lengths: Mapping[int, int], edges: Mapping[Tuple[int, int], int]) -> CartanDatum:
    """Monta a matriz a partir de (α_i, α_i) e dos produtos (α_i, α_j) nas arestas"""
    nodes = tuple(sorted(lengths))
    inner: Dict[Tuple[int, int], int] = {}
    for (i, j), value in edges.items():
        inner[(i, j)] = inner[(j, i)] = value
    matrix = []
    for i in nodes:
        row = []
        for j in nodes:
            if i == j:
                row.append(2)
            else:
                value = 2 * inner.get((i, j), 0)
                if value % lengths[i]:
                    raise ValueError(f"Aresta ({i},{j}) não inteira em {tag}")
                row.append(value // lengths[i])
        matrix.append(tuple(row))
    return CartanDatum(tag, nodes, tuple(lengths[i] for i in nodes), tuple(matrix))


def _chain(nodes: Sequence[int], value: int = -1) -> Dict[Tuple[int, int], int]:
    return {(a, b): value for a, b in zip(nodes, nodes[1:])}


_FINITE_RE = re.compile(r'^([A-G])(\d+)$')


@lru_cache(maxsize=None)
def finite_cartan(tag: str) -> CartanDatum:
    """Tipos finitos com rótulos de Bourbaki (E: 1-3-4-5-…, com 2 ligado a 4)"""
    match = _FINITE_RE.match(tag.strip().upper())
    if not match:
        raise UnsupportedTypeError(f"Tipo finito inválido: {tag!r}")
    series, n = match.group(1), int(match.group(2))
    tag = f"{series}{n}"
    if series == 'A' and n >= 1:
        return _from_edges(tag, {i: 2 for i in range(1, n + 1)}, _chain(range(1, n + 1)))
    if series == 'B' and n >= 2:
        lengths = {i: 4 for i in range(1, n)}
        lengths[n] = 2
        return _from_edges(tag, lengths, _chain(range(1, n + 1), -2))
    if series == 'C' and n >= 2:
        lengths = {i: 2 for i in range(1, n)}
        lengths[n] = 4
        edges = _chain(range(1, n))
        edges[(n - 1, n)] = -2
        return _from_edges(tag, lengths, edges)
    if series == 'D' and n >= 4:
        edges = _chain(range(1, n))
        edges[(n - 2, n)] = -1
        return _from_edges(tag, {i: 2 for i in range(1, n + 1)}, edges)
    if series == 'E' and n in (6, 7, 8):
        edges = _chain([1] + list(range(3, n + 1)))
        edges[(2, 4)] = -1
        return _from_edges(tag, {i: 2 for i in range(1, n + 1)}, edges)
    if series == 'F' and n == 4:
        return _from_edges(tag, {1: 4, 2: 4, 3: 2, 4: 2}, {(1, 2): -2, (2, 3): -2, (3, 4): -1})
    if series == 'G' and n == 2:
        return _from_edges(tag, {1: 2, 2: 6}, {(1, 2): -3})
    raise UnsupportedTypeError(f"Posto não suportado: {tag}")


# ---------------------------------------------------------------------------
# Sistemas de raízes


@dataclass(frozen=True, eq=False)
class RootSystemData:
    """Φ⁺ como vetores de coordenadas, ordenados por altura e depois lexicograficamente"""
    datum: CartanDatum
    positive: Tuple[Root, ...]
    highest: Root
    highest_short: Root
    _index: Dict[Root, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {beta: k for k, beta in enumerate(self.positive)})

    @property
    def nodes(self) -> Tuple[int, ...]:
        return self.datum.nodes

    @property
    def N(self) -> int:
        return len(self.positive)

    def simple(self, i: int) -> Root:
        pos = self.datum.position(i)
        return tuple(1 if k == pos else 0 for k in range(self.datum.rank))

    def pairing(self, i: int, beta: Root) -> int:
        """⟨h_i, β⟩"""
        row = self.datum.matrix[self.datum.position(i)]
        return sum(a * b for a, b in zip(row, beta))

    def reflect(self, i: int, beta: Root) -> Root:
        """s_i(β) = β − ⟨h_i, β⟩ α_i"""
        c = self.pairing(i, beta)
        if not c:
            return beta
        pos = self.datum.position(i)
        out = list(beta)
        out[pos] -= c
        return tuple(out)

    def norm(self, beta: Root) -> Fraction:
        """(β, β) com a raiz mais longa de comprimento 1"""
        total = Fraction(0)
        for x, i in enumerate(self.nodes):
            if not beta[x]:
                continue
            for y, j in enumerate(self.nodes):
                if beta[y]:
                    total += beta[x] * beta[y] * self.datum.inner(i, j)
        return total / max(self.datum.lengths)

    def is_short(self, beta: Root) -> bool:
        return self.norm(beta) < 1

    def is_root(self, beta: Root) -> bool:
        return beta in self._index or negate(beta) in self._index

    def is_positive(self, beta: Root) -> bool:
        return beta in self._index

    def height(self, beta: Root) -> int:
        return sum(beta)

    def index(self, beta: Root) -> int:
        return self._index[beta]

    def fundamental_pairings(self, beta: Root) -> Tuple[int, ...]:
        """Coordenadas de β na base dos pesos fundamentais"""
        return tuple(self.pairing(i, beta) for i in self.nodes)


def negate(beta: Root) -> Root:
    return tuple(-b for b in beta)


def add_roots(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub_roots(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def is_nonnegative(beta: Root) -> bool:
    return all(b >= 0 for b in beta)


@lru_cache(maxsize=None)
def build_root_system(datum) -> RootSystemData:
    """
    Φ⁺ pelo fecho sob reflexões simples a partir das raízes simples.

    Aceita um CartanDatum de tipo finito ou a etiqueta ('E6', 'D4', ...).
    """
    if isinstance(datum, str):
        datum = finite_cartan(datum)
    rank = datum.rank
    simples = [tuple(1 if k == x else 0 for k in range(rank)) for x in range(rank)]
    seen = set(simples)
    frontier = list(simples)
    limit = 10000
    while frontier:
        nxt = []
        for beta in frontier:
            for x, i in enumerate(datum.nodes):
                row = datum.matrix[x]
                c = sum(a * b for a, b in zip(row, beta))
                if not c:
                    continue
                gamma = list(beta)
                gamma[x] -= c
                gamma = tuple(gamma)
                if is_nonnegative(gamma) and gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
        if len(seen) > limit:
            raise UnsupportedTypeError(f"Sistema de raízes infinito para {datum.tag}")
    positive = tuple(sorted(seen, key=lambda b: (sum(b), b)))
    rs_tmp = RootSystemData(datum, positive, positive[-1], positive[-1])
    shorts = [b for b in positive if rs_tmp.is_short(b)]
    highest_short = shorts[-1] if shorts else positive[-1]
    logger.debug(f"Sistema de raízes {datum.tag}: {len(positive)} raízes positivas")
    return RootSystemData(datum, positive, positive[-1], highest_short)


# ---------------------------------------------------------------------------
# Palavras do grupo de Weyl


def apply_word(rs: RootSystemData, word: Sequence[int], beta: Root) -> Root:
    """s_{i1}⋯s_{ik}(β): a letra mais à direita age primeiro"""
    for i in reversed(word):
        beta = rs.reflect(i, beta)
    return beta


def word_roots(rs: RootSystemData, word: Sequence[int]) -> List[Root]:
    """β_k = s_{i1}⋯s_{i_{k−1}}(α_{ik})"""
    out = []
    for k, i in enumerate(word):
        out.append(apply_word(rs, word[:k], rs.simple(i)))
    return out


def is_reduced(rs: RootSystemData, word: Sequence[int]) -> bool:
    """Reduzida sse todas as raízes β_k são positivas"""
    prefix_roots = word_roots(rs, word)
    return all(is_nonnegative(b) for b in prefix_roots)


def is_longest(rs: RootSystemData, word: Sequence[int]) -> bool:
    return len(word) == rs.N and is_reduced(rs, word)


@lru_cache(maxsize=None)
def weyl_longest_word(rs: RootSystemData) -> Word:
    """
    Expressão reduzida de w₀: a partir de ρ, aplica repetidamente a menor
    reflexão simples com coordenada positiva até ρ virar antidominante.
    """
    datum = rs.datum
    weight = [1] * datum.rank
    word: List[int] = []
    while True:
        pick = next((x for x, c in enumerate(weight) if c > 0), None)
        if pick is None:
            break
        c = weight[pick]
        # s_i(λ)_j = λ_j − λ_i a_ji
        weight = [w - c * datum.matrix[y][pick] for y, w in enumerate(weight)]
        word.append(datum.nodes[pick])
    result = tuple(word)
    if len(result) != rs.N:
        raise NotReducedError(f"Palavra de w₀ com comprimento inesperado em {datum.tag}")
    return result


def weyl_longest(rs: RootSystemData) -> Word:
    return weyl_longest_word(rs)


@lru_cache(maxsize=None)
def _star_table(rs: RootSystemData) -> Dict[int, int]:
    w0 = weyl_longest_word(rs)
    table = {}
    for i in rs.nodes:
        image = negate(apply_word(rs, w0, rs.simple(i)))
        table[i] = rs.nodes[image.index(1)]
    return table


def star_involution(rs, i: int) -> int:
    """i* com w₀(α_i) = −α_{i*}"""
    if isinstance(rs, (str, CartanDatum)):
        rs = build_root_system(rs)
    return _star_table(rs)[i]


# ---------------------------------------------------------------------------
# Automorfismos de diagrama e dobras


@dataclass(frozen=True)
class DiagramAutomorphism:
    """
    Permutação σ dos vértices, de ordem d, com o mapa de órbitas σ̄ para o
    conjunto dobrado.
    """
    datum: CartanDatum
    perm: Tuple[Tuple[int, int], ...]
    bar: Tuple[Tuple[int, int], ...]
    folded_tag: str

    def __call__(self, i: int) -> int:
        return dict(self.perm)[i]

    @property
    def order(self) -> int:
        mapping = dict(self.perm)
        d = 1
        for i in self.datum.nodes:
            k, j = 1, mapping[i]
            while j != i:
                j = mapping[j]
                k += 1
            d = max(d, k)
        return d

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in self.perm)

    def sigma_bar(self, i: int) -> int:
        return dict(self.bar)[i]

    def power(self, i: int, k: int) -> int:
        mapping = dict(self.perm)
        for _ in range(k % self.order):
            i = mapping[i]
        return i

    def orbit(self, i: int) -> Tuple[int, ...]:
        out = [i]
        j = self(i)
        while j != i:
            out.append(j)
            j = self(j)
        return tuple(sorted(out))

    def folded_nodes(self) -> Tuple[int, ...]:
        return tuple(sorted(set(dict(self.bar).values())))

    def orbit_of(self, folded: int) -> Tuple[int, ...]:
        return tuple(sorted(i for i, f in self.bar if f == folded))

    def preserves_cartan(self) -> bool:
        return all(self.datum.a(i, j) == self.datum.a(self(i), self(j)) for i in self.datum.nodes for j in self.datum.nodes)

    def folded_length(self, folded: int) -> Fraction:
        """|α̂|² = |órbita|/d, raiz mais longa com comprimento 1"""
        if self.is_identity:
            return Fraction(1)
        return Fraction(len(self.orbit_of(folded)), self.order)

    def arrow_length(self, i: int, j: int) -> Fraction:
        """ℓ = min(|α̂_ī|², |α̂_j̄|²) para uma flecha entre resíduos i e j"""
        if self.is_identity:
            return Fraction(1)
        return min(self.folded_length(self.sigma_bar(i)), self.folded_length(self.sigma_bar(j)))


def identity_automorphism(datum: CartanDatum) -> DiagramAutomorphism:
    return DiagramAutomorphism(
        datum=datum,
        perm=tuple((i, i) for i in datum.nodes),
        bar=tuple((i, i) for i in datum.nodes),
        folded_tag=datum.tag,
    )


@lru_cache(maxsize=None)
def standard_automorphism(tag: str, order: int = 2) -> DiagramAutomorphism:
    """
    Os automorfismos das dobras: E6 → F4, D4 → G2 (ordem 3),
    A_{2n−1} → B_n e D_{n+1} → C_n. Ordem 1 devolve a identidade.
    """
    datum = finite_cartan(tag)
    tag = datum.tag
    if order == 1:
        return identity_automorphism(datum)
    series, n = tag[0], datum.rank
    if tag == 'E6' and order == 2:
        perm = {1: 6, 6: 1, 3: 5, 5: 3, 2: 2, 4: 4}
        bar = {1: 1, 6: 1, 3: 2, 5: 2, 4: 3, 2: 4}
        folded = 'F4'
    elif tag == 'D4' and order == 3:
        perm = {1: 3, 3: 4, 4: 1, 2: 2}
        # rótulos afins: órbita externa é o vértice longo 1, o central é 2
        bar = {1: 1, 3: 1, 4: 1, 2: 2}
        folded = 'G2'
    elif series == 'A' and order == 2 and n % 2 == 1 and n >= 3:
        m = (n + 1) // 2
        perm = {i: n + 1 - i for i in range(1, n + 1)}
        bar = {i: min(i, n + 1 - i) for i in range(1, n + 1)}
        folded = f"B{m}"
    elif series == 'D' and order == 2:
        perm = {i: i for i in range(1, n - 1)}
        perm.update({n - 1: n, n: n - 1})
        bar = {i: i for i in range(1, n)}
        bar[n] = n - 1
        folded = f"C{n - 1}"
    else:
        raise UnsupportedTypeError(f"Automorfismo de ordem {order} não suportado para {tag}")
    sigma = DiagramAutomorphism(datum, tuple(sorted(perm.items())), tuple(sorted(bar.items())), folded)
    if not sigma.preserves_cartan():
        raise UnsupportedTypeError(f"σ não preserva a matriz de Cartan de {tag}")
    return sigma


def fold_cartan(sigma: DiagramAutomorphism) -> CartanDatum:
    """â(î, ĵ) = Σ_{j' ∈ órbita(ĵ)} a(i, j'), para qualquer i na órbita de î"""
    if sigma.is_identity:
        return sigma.datum
    nodes = sigma.folded_nodes()
    matrix = []
    for fi in nodes:
        i = sigma.orbit_of(fi)[0]
        matrix.append(tuple(sum(sigma.datum.a(i, j) for j in sigma.orbit_of(fj)) for fj in nodes))
    lengths = tuple(2 * len(sigma.orbit_of(f)) for f in nodes)
    return CartanDatum(sigma.folded_tag, nodes, lengths, tuple(matrix))


def sigma_coxeter_word(sigma: DiagramAutomorphism, reps: Sequence[int], order: Optional[Sequence[int]] = None) -> Word:
    """
    s_{i1}⋯s_{ik} com exatamente um índice por σ-órbita; `order` reordena
    as órbitas pelos índices dobrados.
    """
    seen: Dict[int, int] = {}
    for i in reps:
        if i not in sigma.datum.nodes:
            raise DuplicateOrbitError(f"Índice fora do diagrama: {i}")
        f = sigma.sigma_bar(i)
        if f in seen:
            raise DuplicateOrbitError(f"Órbita {f} repetida: {seen[f]} e {i}")
        seen[f] = i
    if set(seen) != set(sigma.folded_nodes()):
        missing = sorted(set(sigma.folded_nodes()) - set(seen))
        raise DuplicateOrbitError(f"Órbitas sem representante: {missing}")
    if order is not None:
        if sorted(order) != sorted(seen):
            raise DuplicateOrbitError(f"Ordem de órbitas inválida: {list(order)}")
        return tuple(seen[f] for f in order)
    return tuple(reps)


def twisted_longest_word(c: Sequence[int], sigma: Optional[DiagramAutomorphism] = None,
                         rs: Optional[RootSystemData] = None) -> Word:
    """
    Π_{k≥0} c^{kσ} truncado em N = |Φ⁺| letras; a saída precisa ser reduzida.
    """
    if sigma is None and rs is None:
        raise ValueError("Informe σ ou o sistema de raízes")
    if rs is None:
        rs = build_root_system(sigma.datum)
    if sigma is None:
        sigma = identity_automorphism(rs.datum)
    if not c:
        raise NotReducedError("Palavra de Coxeter vazia")
    word: List[int] = []
    k = 0
    while len(word) < rs.N:
        word.extend(sigma.power(i, k) for i in c)
        k += 1
    word = word[:rs.N]
    if not is_reduced(rs, word):
        raise NotReducedError(f"Palavra torcida não reduzida: {format_word(word)}")
    return tuple(word)


# ---------------------------------------------------------------------------
# Tipos afins


@dataclass(frozen=True)
class AffineType:
    """
    Tipo afim excepcional (mais D4⁽¹⁾): vértices rotulados como nos
    diagramas usuais, com 0 o vértice afim.
    """
    tag: str
    datum: CartanDatum
    twist: int
    scale: int
    pstar: QMonomial
    finite_tag: str

    @property
    def classical(self) -> CartanDatum:
        return self.datum.restrict([i for i in self.datum.nodes if i != 0], tag=self.finite_tag)

    @property
    def classical_nodes(self) -> Tuple[int, ...]:
        return tuple(i for i in self.datum.nodes if i != 0)

    @property
    def period(self) -> int:
        """Período dos símbolos q-Pochhammer: 2·p* em unidades de q_s"""
        return 2 * int(self.pstar.exp)

    def q(self, power: int = 1) -> QMonomial:
        """q^power em unidades de q_s"""
        return QMonomial(0, self.scale * power)

    def minus_q(self, power: int) -> QMonomial:
        """(−q)^power"""
        return QMonomial(6 * power, self.scale * power)

    def q_step(self, i: int) -> int:
        """q_i = q_s^step"""
        return self.datum.length(i) // min(self.datum.lengths)

    @property
    def null_root(self) -> Tuple[int, ...]:
        return null_vector(self.datum)

    @property
    def central_element(self) -> Tuple[int, ...]:
        return null_vector(self.datum, transpose=True)

    def classical_alpha0(self) -> Root:
        """Imagem clássica de α₀: −Σ_{i≠0} (δ_i/δ_0) α_i"""
        delta = self.null_root
        d0 = delta[self.datum.position(0)]
        out = []
        for i in self.classical_nodes:
            value = Fraction(delta[self.datum.position(i)], d0)
            if value.denominator != 1:
                raise UnsupportedTypeError(f"α₀ clássico não inteiro em {self.tag}")
            out.append(-value.numerator)
        return tuple(out)

    def root_system(self) -> RootSystemData:
        return build_root_system(self.classical)

    def to_dict(self) -> dict:
        return {
            'tag': self.tag,
            'cartan': self.datum.to_dict(),
            'twist': self.twist,
            'scale': self.scale,
            'pstar': str(self.pstar),
            'period': self.period,
            'delta': list(self.null_root),
            'c': list(self.central_element),
        }


def null_vector(datum: CartanDatum, transpose: bool = False) -> Tuple[int, ...]:
    """Vetor nulo primitivo positivo de A (ou de Aᵀ)"""
    matrix = sympy.Matrix(datum.matrix)
    if transpose:
        matrix = matrix.T
    space = matrix.nullspace()
    if len(space) != 1:
        raise UnsupportedTypeError(f"{datum.tag} não é afim")
    vec = space[0]
    denom = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
    vec = [int(x * denom) for x in vec]
    g = sympy.igcd(*vec)
    vec = [x // g for x in vec]
    if vec[0] < 0:
        vec = [-x for x in vec]
    return tuple(vec)


def _affine_data() -> Dict[str, dict]:
    def e_chain(n):
        edges = _chain([1] + list(range(3, n + 1)))
        edges[(2, 4)] = -1
        return edges

    e6 = e_chain(6)
    e6[(0, 2)] = -1
    e7 = e_chain(7)
    e7[(0, 1)] = -1
    e8 = e_chain(8)
    e8[(0, 8)] = -1
    return {
        'E6~1': dict(lengths={i: 2 for i in range(7)}, edges=e6, twist=1, scale=1, pstar=12, finite='E6'),
        'E7~1': dict(lengths={i: 2 for i in range(8)}, edges=e7, twist=1, scale=1, pstar=18, finite='E7'),
        'E8~1': dict(lengths={i: 2 for i in range(9)}, edges=e8, twist=1, scale=1, pstar=30, finite='E8'),
        'D4~1': dict(lengths={i: 2 for i in range(5)},
                     edges={(0, 2): -1, (1, 2): -1, (2, 3): -1, (2, 4): -1},
                     twist=1, scale=1, pstar=6, finite='D4'),
        'F4~1': dict(lengths={0: 4, 1: 4, 2: 4, 3: 2, 4: 2},
                     edges={(0, 1): -2, (1, 2): -2, (2, 3): -2, (3, 4): -1},
                     twist=1, scale=2, pstar=9, finite='F4'),
        'G2~1': dict(lengths={0: 6, 1: 6, 2: 2}, edges={(0, 1): -3, (1, 2): -3},
                     twist=1, scale=3, pstar=4, finite='G2'),
        'E6~2': dict(lengths={0: 2, 1: 2, 2: 2, 3: 4, 4: 4},
                     edges={(0, 1): -1, (1, 2): -1, (2, 3): -2, (3, 4): -2},
                     twist=2, scale=1, pstar=-12, finite='F4'),
        'D4~3': dict(lengths={0: 2, 1: 2, 2: 6}, edges={(0, 1): -1, (1, 2): -3},
                     twist=3, scale=1, pstar=6, finite='G2'),
    }


_AFFINE_RE = re.compile(r'^([A-G])(\d+)\s*(?:~|\^\s*\(?|\()\s*(\d)\s*\)?$')


def normalize_affine_tag(tag: str) -> str:
    match = _AFFINE_RE.match(tag.strip().upper())
    if not match:
        raise UnsupportedTypeError(f"Etiqueta de tipo afim inválida: {tag!r}")
    return f"{match.group(1)}{match.group(2)}~{match.group(3)}"


@lru_cache(maxsize=None)
def affine_type(tag: str) -> AffineType:
    """Interpreta 'E6~1', 'D4~3', 'F4^1', 'G2(1)' etc."""
    norm = normalize_affine_tag(tag)
    if norm[0] == 'A' and norm.endswith('~2') and int(norm[1:-2]) % 2 == 0:
        raise UnsupportedTypeError(f"Tipo {norm} reservado e não implementado")
    data = _affine_data().get(norm)
    if data is None:
        raise UnsupportedTypeError(f"Tipo afim fora do escopo: {norm}")
    datum = _from_edges(norm, data['lengths'], data['edges'])
    pstar = data['pstar']
    unit = QMonomial(6 if pstar < 0 else 0, abs(pstar) * data['scale'])
    result = AffineType(norm, datum, data['twist'], data['scale'], unit, data['finite'])
    logger.debug(f"Tipo afim {norm}: δ={result.null_root}, p*={unit}")
    return result


AFFINE_TAGS = ('G2~1', 'D4~3', 'E6~2', 'F4~1', 'E6~1', 'E7~1', 'E8~1', 'D4~1')


# ---------------------------------------------------------------------------
# Rótulos e palavras (E/S)


def format_word(word: Iterable[int]) -> str:
    return ' '.join(str(i) for i in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.replace(',', ' ').split())
    except ValueError:
        raise ValueError(f"Palavra malformada: {text!r}")


def d_type_label(beta: Root) -> str:
    """⟨a, ±b⟩ = ε_a ± ε_b com α_i = ε_i − ε_{i+1} e α_n = ε_{n−1} + ε_n"""
    n = len(beta)
    eps = [0] * (n + 1)
    for x, c in enumerate(beta):
        i = x + 1
        if i < n:
            eps[i] += c
            eps[i + 1] -= c
        else:
            eps[n - 1] += c
            eps[n] += c
    support = [(k, v) for k, v in enumerate(eps) if v]
    if len(support) != 2:
        raise ValueError(f"Não é raiz de tipo D: {beta}")
    (a, va), (b, vb) = support
    return f"<{a},{b}>" if vb > 0 else f"<{a},-{b}>"


def a_type_label(beta: Root) -> str:
    """[a, b] = α_a + ⋯ + α_b"""
    support = [x + 1 for x, c in enumerate(beta) if c]
    return f"[{support[0]},{support[-1]}]"


def root_label(rs: RootSystemData, beta: Root) -> str:
    tag = rs.datum.tag
    if tag.startswith('D') and rs.datum.simply_laced and rs.datum.rank >= 4:
        return d_type_label(beta)
    if tag.startswith('A') and rs.datum.simply_laced:
        return a_type_label(beta)
    return ''.join(str(c) for c in beta)


def parse_root(rs: RootSystemData, label: str) -> Root:
    label = label.strip()
    for beta in rs.positive:
        if root_label(rs, beta) == label:
            return beta
    if label.isdigit() and len(label) == rs.datum.rank:
        beta = tuple(int(ch) for ch in label)
        if rs.is_positive(beta):
            return beta
    raise ValueError(f"Raiz desconhecida em {rs.datum.tag}: {label!r}")
