"""
Quiver de Auslander–Reiten combinatório de uma classe de comutação de w₀:
vértices Φ⁺, resíduos, coordenadas (i, p), a ordem convexa ≺ (alcance no
heap), dobra pelas órbitas de σ e renderização em DOT/ASCII/JSON.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from denomkit.exceptions import CoordinateCollisionError, NotReducedError
from denomkit.services.cartan import (
    DiagramAutomorphism,
    Root,
    RootSystemData,
    Word,
    build_root_system,
    format_word,
    identity_automorphism,
    root_label,
)
from denomkit.services.words import CommutationClass, Heap, canonical_form, roots_sequence

logger = logging.getLogger(__name__)

# Ordem das linhas nas figuras de tipo E
E_ROW_ORDER = (1, 3, 4, 2, 5, 6, 7, 8)


def format_coordinate(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def default_anchor(datum_tag: str, sigma: DiagramAutomorphism) -> Fraction:
    """Menor coordenada p das figuras: ½ para a classe torcida de E6, 1 nos demais casos"""
    if not sigma.is_identity and datum_tag == 'E6':
        return Fraction(1, 2)
    return Fraction(1)


@dataclass(frozen=True, eq=False)
class ARQuiver:
    rs: RootSystemData
    sigma: DiagramAutomorphism
    word: Word
    roots: Tuple[Root, ...]
    residues: Dict[Root, int]
    coordinates: Dict[Root, Fraction]
    arrows: Tuple[Tuple[Root, Root], ...]
    anchor: Fraction
    heap: Heap = field(repr=False)
    _positions: Dict[Root, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_positions", {beta: k for k, beta in enumerate(self.roots)})

    @property
    def commutation_class(self) -> CommutationClass:
        return CommutationClass(self.rs.datum, self.word)

    @property
    def positions(self) -> Dict[Root, int]:
        return self._positions

    def __len__(self) -> int:
        return len(self.roots)

    def residue(self, beta: Root) -> int:
        return self.residues[beta]

    def coordinate(self, beta: Root) -> Tuple[int, Fraction]:
        """Ω(β) = (i, p)"""
        return self.residues[beta], self.coordinates[beta]

    def folded_coordinate(self, beta: Root) -> Tuple[int, Fraction]:
        """Ω̂(β) = (σ̄(i), p)"""
        return self.sigma.sigma_bar(self.residues[beta]), self.coordinates[beta]

    def arrow_length(self, source: Root, target: Root) -> Fraction:
        return self.sigma.arrow_length(self.residues[source], self.residues[target])

    def precedes(self, alpha: Root, beta: Root) -> bool:
        """α ≺ β: existe caminho no heap da posição de α até a de β"""
        pos = self.positions
        return self.heap.is_below(pos[alpha], pos[beta])

    def comparable(self, alpha: Root, beta: Root) -> bool:
        return self.precedes(alpha, beta) or self.precedes(beta, alpha)

    def interval(self, alpha: Root, beta: Root) -> List[Root]:
        """Raízes γ com α ≺ γ ≺ β, em ordem de leitura"""
        pos = self.positions
        a, b = pos[alpha], pos[beta]
        return [self.roots[k] for k in range(a + 1, b) if self.heap.is_below(a, k) and self.heap.is_below(k, b)]

    def by_coordinate(self) -> Dict[Tuple[int, Fraction], Root]:
        return {(self.residues[b], self.coordinates[b]): b for b in self.roots}

    def root_at(self, residue: int, p) -> Optional[Root]:
        return self.by_coordinate().get((residue, Fraction(p)))

    def shifted(self, anchor) -> 'ARQuiver':
        """Mesmo quiver com a menor coordenada movida para `anchor`"""
        anchor = Fraction(anchor)
        delta = anchor - min(self.coordinates.values())
        coords = {b: p + delta for b, p in self.coordinates.items()}
        return ARQuiver(self.rs, self.sigma, self.word, self.roots, self.residues, coords,
                        self.arrows, anchor, self.heap)

    def label(self, beta: Root) -> str:
        return root_label(self.rs, beta)


def _arrows_of(heap: Heap) -> List[Tuple[int, int]]:
    """
    Flechas (k, j), j < k: letras adjacentes e nenhuma ocorrência de i_j ou
    i_k entre as duas posições.
    """
    datum = heap.datum
    word = heap.word
    last: Dict[int, int] = {}
    out = []
    for k, ik in enumerate(word):
        for letter, j in last.items():
            if letter == ik or datum.a(letter, ik) == 0:
                continue
            if last.get(ik, -1) > j:
                continue
            out.append((k, j))
        last[ik] = k
    return out


def build_ar_quiver(c, sigma: Optional[DiagramAutomorphism] = None, anchor=None,
                    word: Optional[Sequence[int]] = None) -> ARQuiver:
    """
    Algoritmo (Q1)(Q2): um vértice por β_k com resíduo i_k; flecha de β_k
    para β_j; ao longo de cada flecha p cresce pelo comprimento ℓ.

    `word` permite construir a partir de qualquer membro da classe.
    """
    if isinstance(c, CommutationClass):
        datum = c.datum
        base = c.word
    else:
        raise TypeError("Esperada uma CommutationClass")
    rs = build_root_system(datum)
    if sigma is None:
        sigma = identity_automorphism(datum)
    if word is None:
        word = base
    else:
        word = tuple(word)
        if canonical_form(datum, word) != base:
            raise NotReducedError(f"Palavra fora da classe {c}: {format_word(word)}")
    betas = roots_sequence(rs, word)
    heap = Heap(datum, word)
    links = _arrows_of(heap)

    # coordenadas relativas por busca em largura no grafo subjacente
    neighbors: Dict[int, List[Tuple[int, Fraction]]] = {k: [] for k in range(len(word))}
    for k, j in links:
        length = sigma.arrow_length(word[k], word[j])
        neighbors[k].append((j, length))
        neighbors[j].append((k, -length))
    rel: Dict[int, Fraction] = {0: Fraction(0)}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v, step in neighbors[u]:
            if v not in rel:
                rel[v] = rel[u] + step
                queue.append(v)
            elif rel[v] != rel[u] + step:
                raise CoordinateCollisionError(f"Coordenadas inconsistentes entre β_{u + 1} e β_{v + 1}")
    if len(rel) != len(word):
        raise CoordinateCollisionError("Quiver desconexo: diagrama de Dynkin não conexo?")

    if anchor is None:
        anchor = default_anchor(datum.tag, sigma)
    anchor = Fraction(anchor)
    shift = anchor - min(rel.values())
    canon_betas = roots_sequence(rs, base) if word != base else betas
    canon_heap = heap if word == base else Heap(datum, base)
    residues = {betas[k]: word[k] for k in range(len(word))}
    coords = {betas[k]: rel[k] + shift for k in range(len(word))}
    arrows = tuple(sorted((betas[k], betas[j]) for k, j in links))
    quiver = ARQuiver(rs, sigma, base, tuple(canon_betas), residues, coords, arrows, anchor, canon_heap)
    logger.debug(f"Quiver construído: {len(betas)} vértices, {len(arrows)} flechas ({datum.tag})")
    return quiver


@dataclass(frozen=True)
class FoldedARQuiver:
    quiver: ARQuiver
    folded: Dict[Root, Tuple[int, Fraction]]

    def coordinate(self, beta: Root) -> Tuple[int, Fraction]:
        return self.folded[beta]

    def root_at(self, folded_index: int, p) -> Optional[Root]:
        key = (folded_index, Fraction(p))
        for beta, value in self.folded.items():
            if value == key:
                return beta
        return None

    def row(self, folded_index: int) -> List[Tuple[Fraction, Root]]:
        return sorted((p, b) for b, (f, p) in self.folded.items() if f == folded_index)


def fold(quiver: ARQuiver, sigma: Optional[DiagramAutomorphism] = None) -> FoldedARQuiver:
    """Υ̂: β ↦ (σ̄(i), p), que precisa ser injetivo"""
    if sigma is not None and sigma != quiver.sigma:
        quiver = build_ar_quiver(quiver.commutation_class, sigma, quiver.anchor)
    folded: Dict[Root, Tuple[int, Fraction]] = {}
    seen: Dict[Tuple[int, Fraction], Root] = {}
    for beta in quiver.roots:
        key = quiver.folded_coordinate(beta)
        if key in seen:
            raise CoordinateCollisionError(
                f"Colisão em {key[0]}, p={format_coordinate(key[1])}: "
                f"{quiver.label(seen[key])} e {quiver.label(beta)}"
            )
        seen[key] = beta
        folded[beta] = key
    return FoldedARQuiver(quiver, folded)


# ---------------------------------------------------------------------------
# Renderização


def row_order(quiver: ARQuiver, folded: bool) -> List[int]:
    if folded:
        return list(quiver.sigma.folded_nodes())
    nodes = list(quiver.rs.nodes)
    if quiver.rs.datum.tag.startswith('E'):
        return [i for i in E_ROW_ORDER if i in nodes]
    return nodes


def render(quiver: ARQuiver, fmt: str = 'ascii', anchor=None, folded: bool = False) -> str:
    """Saída determinística em 'dot', 'ascii' ou 'json'"""
    if anchor is not None:
        quiver = quiver.shifted(anchor)
    if folded:
        coords = fold(quiver).folded
    else:
        coords = {b: quiver.coordinate(b) for b in quiver.roots}
    if fmt == 'ascii':
        return _render_ascii(quiver, coords, folded)
    if fmt == 'dot':
        return _render_dot(quiver, coords)
    if fmt == 'json':
        return _render_json(quiver, coords)
    raise ValueError(f"Formato desconhecido: {fmt}")


def _render_ascii(quiver: ARQuiver, coords, folded: bool) -> str:
    columns = sorted({p for _, p in coords.values()})
    cells = {value: quiver.label(b) for b, value in coords.items()}
    width = max(max(len(quiver.label(b)) for b in quiver.roots), max(len(format_coordinate(p)) for p in columns))
    head_width = max(len('(i/p)'), 3)
    lines = ['(i/p)'.ljust(head_width) + ' ' + ' '.join(format_coordinate(p).rjust(width) for p in columns)]
    for i in row_order(quiver, folded):
        cols = [cells.get((i, p), '').rjust(width) for p in columns]
        lines.append(str(i).ljust(head_width) + ' ' + ' '.join(cols))
    return '\n'.join(line.rstrip() for line in lines) + '\n'


def _render_dot(quiver: ARQuiver, coords) -> str:
    names = {b: f"v{k + 1}" for k, b in enumerate(quiver.roots)}
    lines = ['digraph AR {', '  rankdir=LR;']
    for b in quiver.roots:
        i, p = coords[b]
        lines.append(f'  {names[b]} [label="{i}:{format_coordinate(p)}:{quiver.label(b)}"];')
    # flechas no sentido de p crescente
    for source, target in quiver.arrows:
        lines.append(f'  {names[source]} -> {names[target]};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _render_json(quiver: ARQuiver, coords) -> str:
    payload = {
        'type': quiver.rs.datum.tag,
        'word': list(quiver.word),
        'vertices': [
            {'root': quiver.label(b), 'residue': coords[b][0], 'p': format_coordinate(coords[b][1])}
            for b in quiver.roots
        ],
        'arrows': [[quiver.label(s), quiver.label(t)] for s, t in quiver.arrows],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'
