"""
Palavras reduzidas, classes de comutação (via heaps), adaptação a quivers
de Dynkin, funtores de reflexão e a sequência de raízes β_k.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from denomkit.exceptions import NotReducedError
from denomkit.services.cartan import (
    CartanDatum,
    Root,
    RootSystemData,
    Word,
    apply_word,
    build_root_system,
    format_word,
    is_longest,
    is_nonnegative,
    star_involution,
    word_roots,
)

logger = logging.getLogger(__name__)


class Heap:
    """
    Heap de uma palavra: j está abaixo de k (j < k) quando existe uma cadeia
    de posições com letras iguais ou adjacentes no diagrama.
    """

    def __init__(self, datum: CartanDatum, word: Sequence[int]):
        self.datum = datum
        self.word = tuple(word)
        n = len(self.word)
        self.preds: List[int] = [0] * n
        self.below: List[int] = [0] * n
        for k in range(n):
            ik = self.word[k]
            mask = 0
            closure = 0
            for j in range(k):
                ij = self.word[j]
                if ij == ik or datum.a(ij, ik) != 0:
                    mask |= 1 << j
                    closure |= self.below[j] | (1 << j)
            self.preds[k] = mask
            self.below[k] = closure

    def __len__(self) -> int:
        return len(self.word)

    def is_below(self, j: int, k: int) -> bool:
        return bool(self.below[k] >> j & 1)

    def comparable(self, j: int, k: int) -> bool:
        return self.is_below(j, k) or self.is_below(k, j)

    def maximal(self) -> List[int]:
        """Posições sem sucessores no heap"""
        has_succ = 0
        for mask in self.preds:
            has_succ |= mask
        return [k for k in range(len(self.word)) if not has_succ >> k & 1]

    def minimal(self) -> List[int]:
        return [k for k in range(len(self.word)) if not self.preds[k]]


def canonical_form(datum: CartanDatum, word: Sequence[int]) -> Word:
    """
    Menor palavra lexicográfica da classe de comutação: a cada passo emite a
    menor letra disponível no heap.
    """
    heap = Heap(datum, word)
    n = len(heap)
    emitted = 0
    out: List[int] = []
    for _ in range(n):
        best = None
        for k in range(n):
            if emitted >> k & 1:
                continue
            if heap.preds[k] & ~emitted:
                continue
            if best is None or heap.word[k] < heap.word[best]:
                best = k
        emitted |= 1 << best
        out.append(heap.word[best])
    return tuple(out)


@dataclass(frozen=True)
class CommutationClass:
    """Classe [w̃₀] representada pela forma canônica"""
    datum: CartanDatum
    word: Word

    @property
    def root_system(self) -> RootSystemData:
        return build_root_system(self.datum)

    def heap(self) -> Heap:
        return _heap(self.datum, self.word)

    def __str__(self) -> str:
        return f"[{format_word(self.word)}]"


@lru_cache(maxsize=4096)
def _heap(datum: CartanDatum, word: Word) -> Heap:
    return Heap(datum, word)


def commutation_class(rs, word: Sequence[int], check: bool = True) -> CommutationClass:
    """Classe de comutação de uma expressão reduzida de w₀"""
    if not isinstance(rs, RootSystemData):
        rs = build_root_system(rs)
    word = tuple(word)
    if check and not is_longest(rs, word):
        raise NotReducedError(f"Não é expressão reduzida de w₀: {format_word(word)}")
    return CommutationClass(rs.datum, canonical_form(rs.datum, word))


def roots_sequence(rs, word: Sequence[int]) -> List[Root]:
    """β_k = s_{i1}⋯s_{i_{k−1}}(α_{ik}), k = 1…N, para uma palavra de w₀"""
    if not isinstance(rs, RootSystemData):
        rs = build_root_system(rs)
    word = tuple(word)
    if len(word) != rs.N:
        raise NotReducedError(f"Comprimento {len(word)} ≠ N = {rs.N}")
    roots = word_roots(rs, word)
    if not all(is_nonnegative(b) for b in roots):
        raise NotReducedError(f"Palavra não reduzida: {format_word(word)}")
    return roots


# ---------------------------------------------------------------------------
# Quivers de Dynkin


@dataclass(frozen=True)
class QuiverOrientation:
    """Orientação das arestas de um diagrama simplesmente laçado: (i, j) é i → j"""
    arrows: FrozenSet[Tuple[int, int]]

    @classmethod
    def parse(cls, text: str) -> 'QuiverOrientation':
        """Mini-linguagem "1>3 3>4 2>4" (também aceita "a<b")"""
        arrows = set()
        for token in text.replace(',', ' ').split():
            if '>' in token:
                a, _, b = token.partition('>')
                arrows.add((int(a), int(b)))
            elif '<' in token:
                a, _, b = token.partition('<')
                arrows.add((int(b), int(a)))
            else:
                raise ValueError(f"Flecha malformada: {token!r}")
        return cls(frozenset(arrows))

    def format(self) -> str:
        return ' '.join(f"{a}>{b}" for a, b in sorted(self.arrows))

    def matches(self, datum: CartanDatum) -> bool:
        edges = {tuple(sorted(e)) for e in self.arrows}
        return edges == set(datum.edges()) and len(edges) == len(self.arrows)

    def is_sink(self, i: int) -> bool:
        return not any(a == i for a, _ in self.arrows)

    def sinks(self) -> List[int]:
        nodes = sorted({v for e in self.arrows for v in e})
        return [i for i in nodes if self.is_sink(i)]

    def reflect(self, i: int) -> 'QuiverOrientation':
        """s_i Q: inverte as flechas incidentes a i"""
        return QuiverOrientation(frozenset((b, a) if i in (a, b) else (a, b) for a, b in self.arrows))

    def reversed(self) -> 'QuiverOrientation':
        return QuiverOrientation(frozenset((b, a) for a, b in self.arrows))


def is_adapted(word: Sequence[int], quiver: QuiverOrientation) -> bool:
    """i_k é sorvedouro de s_{i_{k−1}}⋯s_{i1}Q para todo k"""
    current = quiver
    for i in word:
        if not current.is_sink(i):
            return False
        current = current.reflect(i)
    return True


def adapted_word(rs, quiver: QuiverOrientation) -> Word:
    """
    Palavra de w₀ adaptada a Q: retira sempre o menor sorvedouro que mantém a
    palavra reduzida.
    """
    if not isinstance(rs, RootSystemData):
        rs = build_root_system(rs)
    if not quiver.matches(rs.datum):
        raise ValueError(f"Orientação não cobre o diagrama de {rs.datum.tag}: {quiver.format()}")
    word: List[int] = []
    current = quiver
    while len(word) < rs.N:
        step = None
        for i in current.sinks():
            if is_nonnegative(apply_word(rs, word, rs.simple(i))):
                step = i
                break
        if step is None:
            raise NotReducedError(f"Sem sorvedouro válido após {format_word(word)}")
        word.append(step)
        current = current.reflect(step)
    return tuple(word)


def class_of_orientation(rs, quiver: QuiverOrientation) -> CommutationClass:
    """
    A classe desenhada como Γ_Q nas figuras: β₁ fica numa fonte de Q, ou seja,
    é a classe adaptada (por sorvedouros) a Q^rev.
    """
    if not isinstance(rs, RootSystemData):
        rs = build_root_system(rs)
    return commutation_class(rs, adapted_word(rs, quiver.reversed()), check=False)


def adapted_quiver(c: CommutationClass) -> Optional[QuiverOrientation]:
    """
    O único Q ao qual a classe é adaptada, ou None. Cada aresta aponta para a
    letra que aparece primeiro; depois a retirada de sorvedouros é simulada.
    """
    if not c.datum.simply_laced:
        return None
    first: Dict[int, int] = {}
    for k, i in enumerate(c.word):
        first.setdefault(i, k)
    arrows = set()
    for i, j in c.datum.edges():
        if i not in first or j not in first:
            return None
        arrows.add((j, i) if first[i] < first[j] else (i, j))
    quiver = QuiverOrientation(frozenset(arrows))
    return quiver if is_adapted(c.word, quiver) else None


# ---------------------------------------------------------------------------
# Funtores de reflexão e r-cluster points


def _last_maximal(heap: Heap, i: int) -> Optional[int]:
    for k in heap.maximal():
        if heap.word[k] == i:
            return k
    return None


def _first_minimal(heap: Heap, i: int) -> Optional[int]:
    for k in heap.minimal():
        if heap.word[k] == i:
            return k
    return None


def reflection_functor(c: CommutationClass, i: int) -> CommutationClass:
    """r_i: se algum membro termina em s_i, devolve [(s_{i*}, prefixo)]"""
    heap = c.heap()
    k = _last_maximal(heap, i)
    if k is None:
        return c
    star = star_involution(c.root_system, i)
    word = (star,) + c.word[:k] + c.word[k + 1:]
    return CommutationClass(c.datum, canonical_form(c.datum, word))


def reflection_functor_inverse(c: CommutationClass, i: int) -> CommutationClass:
    """Movimento oposto: se algum membro começa com s_i, devolve [(sufixo, s_{i*})]"""
    heap = c.heap()
    k = _first_minimal(heap, i)
    if k is None:
        return c
    star = star_involution(c.root_system, i)
    word = c.word[:k] + c.word[k + 1:] + (star,)
    return CommutationClass(c.datum, canonical_form(c.datum, word))


@dataclass
class ClusterEnumeration:
    classes: List[CommutationClass]
    truncated: bool


def reflection_cluster(c: CommutationClass, cap: int = 5000) -> ClusterEnumeration:
    """Busca em largura pelo r-cluster point [[c]] nas duas direções"""
    seen = {c.word: c}
    order = [c]
    queue = deque([c])
    truncated = False
    while queue:
        current = queue.popleft()
        for i in current.datum.nodes:
            for nxt in (reflection_functor(current, i), reflection_functor_inverse(current, i)):
                if nxt.word in seen:
                    continue
                if len(seen) >= cap:
                    truncated = True
                    continue
                seen[nxt.word] = nxt
                order.append(nxt)
                queue.append(nxt)
    if truncated:
        logger.warning(f"r-cluster point truncado em {cap} classes")
    return ClusterEnumeration(order, truncated)


# ---------------------------------------------------------------------------
# Membros da classe


class LinearExtensions:
    """
    Fluxo preguiçoso das palavras da classe (extensões lineares do heap),
    de consumidor único; `truncated` indica que o limite foi atingido.
    """

    def __init__(self, c: CommutationClass, cap: int = 100000):
        self.c = c
        self.cap = cap
        self.truncated = False
        self.count = 0

    def __iter__(self) -> Iterator[Word]:
        heap = self.c.heap()
        n = len(heap)
        full = (1 << n) - 1
        stack: List[Tuple[int, Tuple[int, ...]]] = [(0, ())]
        while stack:
            emitted, prefix = stack.pop()
            if emitted == full:
                if self.count >= self.cap:
                    self.truncated = True
                    logger.warning(f"Enumeração de {self.c} truncada em {self.cap} palavras")
                    return
                self.count += 1
                yield tuple(heap.word[k] for k in prefix)
                continue
            options = [k for k in range(n) if not emitted >> k & 1 and not heap.preds[k] & ~emitted]
            for k in reversed(options):
                stack.append((emitted | 1 << k, prefix + (k,)))


def class_members_linear_extensions(c: CommutationClass, cap: int = 100000) -> LinearExtensions:
    return LinearExtensions(c, cap)


def count_linear_extensions(heap: Heap) -> int:
    """Contagem por programação dinâmica sobre ideais de ordem"""
    n = len(heap)
    memo: Dict[int, int] = {(1 << n) - 1: 1}

    def walk(emitted: int) -> int:
        if emitted in memo:
            return memo[emitted]
        total = 0
        for k in range(n):
            if not emitted >> k & 1 and not heap.preds[k] & ~emitted:
                total += walk(emitted | 1 << k)
        memo[emitted] = total
        return total

    return walk(0)
