"""
Estatísticas de ordem sobre o quiver AR (dobrado): ordem bilexicográfica
≺ᵇ, sequências simples, pares minimais, socle, distância, os conjuntos
Φ(k̂,l̂)[t], o_t, θ_t, polinômios de distância e vizinhos adjacentes bons.

Sequências são multiconjuntos de posições na ordem de leitura da palavra
canônica do quiver.
"""

import logging
import math
import weakref
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from denomkit.config import get_settings
from denomkit.exceptions import BudgetExhaustedError, EmptyPhiSetError, SocleError, UnsupportedShapeError
from denomkit.services.arquiver import ARQuiver, build_ar_quiver
from denomkit.services.cartan import Root, add_roots
from denomkit.services.coefficients import DenPoly, QMonomial
from denomkit.services.words import adapted_quiver, adapted_word, commutation_class

logger = logging.getLogger(__name__)

Seq = Tuple[int, ...]
Pair = Tuple[Root, Root]


@dataclass(frozen=True)
class RootSequence:
    """Multiconjunto de raízes positivas, guardado como posições ordenadas"""
    positions: Seq

    @classmethod
    def from_roots(cls, quiver: ARQuiver, roots: Iterable[Root]) -> 'RootSequence':
        pos = quiver.positions
        return cls(tuple(sorted(pos[tuple(b)] for b in roots)))

    def roots(self, quiver: ARQuiver) -> Tuple[Root, ...]:
        return tuple(quiver.roots[k] for k in self.positions)

    def weight(self, quiver: ARQuiver) -> Root:
        total = tuple(0 for _ in quiver.rs.nodes)
        for k in self.positions:
            total = add_roots(total, quiver.roots[k])
        return total

    @property
    def is_pair(self) -> bool:
        return len(self.positions) == 2 and self.positions[0] != self.positions[1]

    def __len__(self) -> int:
        return len(self.positions)


class StatisticsEngine:
    """
    Cálculos memorizados sobre um quiver fixo. O critério de ≺ᵇ: depois de
    retirar a parte comum, m ≺ᵇ m' sse todo elemento de m tem um elemento de
    m' abaixo e outro acima no heap.
    """

    def __init__(self, quiver: ARQuiver, allow_multiplicity: Optional[bool] = None,
                 budget: Optional[int] = None):
        settings = get_settings()
        self.quiver = quiver
        self.allow_multiplicity = settings.allow_multiplicity if allow_multiplicity is None else allow_multiplicity
        self.budget = settings.search_budget if budget is None else budget
        heap = quiver.heap
        n = len(quiver.roots)
        self.below = list(heap.below)
        self.above = [0] * n
        for k in range(n):
            mask = self.below[k]
            j = 0
            while mask:
                if mask & 1:
                    self.above[j] |= 1 << k
                mask >>= 1
                j += 1
        self._below_cache: Dict[Seq, Tuple[Seq, ...]] = {}
        self._distance_cache: Dict[Seq, int] = {}
        self._warned: set = set()

    # -- sequências -------------------------------------------------------

    def seq(self, roots: Iterable[Root]) -> Seq:
        pos = self.quiver.positions
        return tuple(sorted(pos[tuple(b)] for b in roots))

    def weight(self, m: Seq) -> Root:
        roots = self.quiver.roots
        total = [0] * len(self.quiver.rs.nodes)
        for k in m:
            for x, c in enumerate(roots[k]):
                total[x] += c
        return tuple(total)

    def _count_key(self, m: Seq) -> Tuple[int, ...]:
        counts = [0] * len(self.quiver.roots)
        for k in m:
            counts[k] += 1
        return tuple(counts)

    def bilex(self, m: Seq, m2: Seq) -> bool:
        """m ≺ᵇ m'"""
        if self.weight(m) != self.weight(m2):
            return False
        a, b = Counter(m), Counter(m2)
        common = a & b
        n1, n2 = a - common, b - common
        if not n1 or not n2:
            return False
        mask2 = 0
        for k in n2:
            mask2 |= 1 << k
        for k in n1:
            if not self.below[k] & mask2 or not self.above[k] & mask2:
                return False
        return True

    def _candidates(self, m: Seq) -> List[int]:
        support = 0
        up = 0
        down = 0
        for k in set(m):
            support |= 1 << k
            up |= self.above[k]
            down |= self.below[k]
        mask = (up & down) | support
        return [k for k in range(len(self.quiver.roots)) if mask >> k & 1]

    def decompose(self, target: Root, candidates: List[int]) -> List[Seq]:
        """Multiconjuntos de raízes candidatas com peso `target` (com repetição)"""
        roots = self.quiver.roots
        out: List[Seq] = []
        chosen: List[int] = []
        visited = 0

        def walk(start: int, remaining: Tuple[int, ...]) -> None:
            nonlocal visited
            visited += 1
            if visited > self.budget:
                raise BudgetExhaustedError(f"Orçamento de busca esgotado ({self.budget}) em decomposições")
            if not any(remaining):
                out.append(tuple(chosen))
                return
            for idx in range(start, len(candidates)):
                k = candidates[idx]
                rest = tuple(r - b for r, b in zip(remaining, roots[k]))
                if min(rest) < 0:
                    continue
                chosen.append(k)
                walk(idx, rest)
                chosen.pop()

        walk(0, target)
        return out

    def below_all(self, m: Seq) -> Tuple[Seq, ...]:
        """Todas as sequências m' ≺ᵇ m, inclusive com raízes repetidas"""
        m = tuple(sorted(m))
        cached = self._below_cache.get(m)
        if cached is not None:
            return cached
        found = [cand for cand in self.decompose(self.weight(m), self._candidates(m))
                 if cand != m and self.bilex(cand, m)]
        result = tuple(sorted(found, key=self._count_key))
        self._below_cache[m] = result
        return result

    def sequences_below(self, m: Seq) -> Tuple[Seq, ...]:
        """
        Sequências m' ≺ᵇ m em ordem compatível com ≺ᵇ. Sem
        allow_multiplicity, as que repetem raízes ficam de fora.
        """
        m = tuple(sorted(m))
        if not self.allow_multiplicity and len(set(m)) != len(m):
            raise UnsupportedShapeError(f"Sequência com multiplicidade: {self.describe(m)}")
        below = self.below_all(m)
        if self.allow_multiplicity:
            return below
        kept = tuple(s for s in below if len(set(s)) == len(s))
        if len(kept) != len(below) and m not in self._warned:
            self._warned.add(m)
            logger.warning(f"Decomposições com raízes repetidas ignoradas abaixo de {self.describe(m)}")
        return kept

    def describe(self, m: Seq) -> str:
        return '(' + ', '.join(self.quiver.label(self.quiver.roots[k]) for k in m) + ')'

    # -- estatísticas -----------------------------------------------------

    def is_simple(self, m: Seq) -> bool:
        return not self.below_all(m)

    @staticmethod
    def _is_pair(s: Seq) -> bool:
        return len(s) == 2 and s[0] != s[1]

    def distance(self, m: Seq) -> int:
        """
        Maior k com m⁽⁰⁾ ≺ᵇ p⁽¹⁾ ≺ᵇ ⋯ ≺ᵇ p⁽ᵏ⁾ = m, m⁽⁰⁾ simples e os
        degraus intermediários pares.
        """
        m = tuple(sorted(m))
        if m in self._distance_cache:
            return self._distance_cache[m]
        if not self.allow_multiplicity and len(set(m)) != len(m):
            raise UnsupportedShapeError(f"Sequência com multiplicidade: {self.describe(m)}")
        below = self.below_all(m)
        if not below:
            self._distance_cache[m] = 0
            return 0
        heights: Dict[Seq, int] = {}
        for x, s in enumerate(below):
            if not self._is_pair(s):
                continue
            reachable = False
            best = 0
            for t in below[:x]:
                if not self.bilex(t, s):
                    continue
                reachable = True
                best = max(best, heights.get(t, 0))
            heights[s] = best + 1 if reachable else 0
        result = 1 + max(heights.values(), default=0)
        self._distance_cache[m] = result
        return result

    def socle(self, m: Seq) -> Seq:
        below = self.below_all(m)
        if not below:
            return tuple(sorted(m))
        minimal = [s for s in below if not any(self.bilex(t, s) for t in below if t != s)]
        if len(minimal) != 1:
            raise SocleError(f"Socle não único para {self.describe(m)}: {len(minimal)} sequências simples")
        return minimal[0]

    def minimal_pairs(self, gamma_pos: int) -> List[Seq]:
        """Coberturas de (γ) em ≺ᵇ; todas são pares"""
        roots = self.quiver.roots
        gamma = roots[gamma_pos]
        single = (gamma_pos,)
        out = []
        n = len(roots)
        for a in range(n):
            for b in range(a + 1, n):
                if add_roots(roots[a], roots[b]) != gamma:
                    continue
                pair = (a, b)
                if not self.bilex(single, pair):
                    continue
                if any(self.bilex(single, mid) for mid in self.below_all(pair)):
                    continue
                out.append(pair)
        return out


_ENGINES: 'weakref.WeakKeyDictionary[ARQuiver, StatisticsEngine]' = weakref.WeakKeyDictionary()


def engine_for(quiver: ARQuiver) -> StatisticsEngine:
    engine = _ENGINES.get(quiver)
    if engine is None:
        engine = StatisticsEngine(quiver)
        _ENGINES[quiver] = engine
    return engine


def _pair_seq(engine: StatisticsEngine, pair: Iterable[Root]) -> Seq:
    seq = engine.seq(pair)
    if len(seq) != 2 or seq[0] == seq[1]:
        raise UnsupportedShapeError("Um par tem exatamente duas raízes distintas")
    return seq


def _as_roots(engine: StatisticsEngine, seq: Seq) -> Tuple[Root, ...]:
    return tuple(engine.quiver.roots[k] for k in seq)


# ---------------------------------------------------------------------------
# API por raízes


def bilex_below(quiver: ARQuiver, m: Iterable[Root], m2: Iterable[Root]) -> bool:
    engine = engine_for(quiver)
    a, b = engine.seq(m), engine.seq(m2)
    if not engine.allow_multiplicity and (len(set(a)) != len(a) or len(set(b)) != len(b)):
        common = set(a) & set(b)
        if common:
            raise UnsupportedShapeError("Suporte comum com multiplicidade")
    return engine.bilex(a, b)


def is_simple(quiver: ARQuiver, m: Iterable[Root]) -> bool:
    engine = engine_for(quiver)
    return engine.is_simple(engine.seq(m))


def decompositions(quiver: ARQuiver, pair: Iterable[Root]) -> List[Tuple[Root, ...]]:
    """Sequências estritamente abaixo do par, em ordem compatível com ≺ᵇ"""
    engine = engine_for(quiver)
    return [_as_roots(engine, s) for s in engine.sequences_below(_pair_seq(engine, pair))]


def minimal_pairs(quiver: ARQuiver, gamma: Root) -> List[Pair]:
    engine = engine_for(quiver)
    gamma_pos = quiver.positions[tuple(gamma)]
    return [_as_roots(engine, p) for p in engine.minimal_pairs(gamma_pos)]


def socle(quiver: ARQuiver, pair: Iterable[Root]) -> Tuple[Root, ...]:
    engine = engine_for(quiver)
    return _as_roots(engine, engine.socle(_pair_seq(engine, pair)))


def distance(quiver: ARQuiver, m: Iterable[Root]) -> int:
    engine = engine_for(quiver)
    return engine.distance(engine.seq(m))


def phi_set(quiver: ARQuiver, k: int, l: int, t: int) -> List[Pair]:
    """
    Pares comparáveis (α, β), α antes de β, com {Ω̂(α), Ω̂(β)} = {(k̂,a), (l̂,b)}
    e |a − b| = t/d.
    """
    d = quiver.sigma.order
    gap = Fraction(t, d)
    roots = quiver.roots
    out = []
    for x, alpha in enumerate(roots):
        fa, pa = quiver.folded_coordinate(alpha)
        for beta in roots[x + 1:]:
            fb, pb = quiver.folded_coordinate(beta)
            if {fa, fb} != {k, l} or abs(pa - pb) != gap:
                continue
            if quiver.comparable(alpha, beta):
                out.append((alpha, beta))
    return out


def o_t(quiver: ARQuiver, k: int, l: int, t: int) -> int:
    """Distância comum dos pares de Φ(k̂,l̂)[t]; usa o par de menor intervalo"""
    pairs = phi_set(quiver, k, l, t)
    if not pairs:
        raise EmptyPhiSetError(f"Φ({k},{l})[{t}] vazio")
    alpha, beta = min(pairs, key=lambda p: (len(quiver.interval(p[0], p[1])), quiver.positions[p[0]]))
    return distance(quiver, (alpha, beta))


_REVERSED: 'weakref.WeakKeyDictionary[ARQuiver, Optional[ARQuiver]]' = weakref.WeakKeyDictionary()


def reversed_quiver(quiver: ARQuiver) -> Optional[ARQuiver]:
    """Γ_{Q^rev} quando a classe é adaptada a Q; None caso contrário"""
    if quiver in _REVERSED:
        return _REVERSED[quiver]
    result = None
    if quiver.sigma.is_identity:
        orientation = adapted_quiver(quiver.commutation_class)
        if orientation is not None:
            word = adapted_word(quiver.rs, orientation.reversed())
            result = build_ar_quiver(commutation_class(quiver.rs, word, check=False))
    _REVERSED[quiver] = result
    return result


def _o_or_zero(quiver: ARQuiver, k: int, l: int, t: int) -> int:
    try:
        return o_t(quiver, k, l, t)
    except EmptyPhiSetError:
        return 0


def theta_t(quiver: ARQuiver, k: int, l: int, t: int) -> int:
    """
    max(o^[Q], o^[Q^rev]) para classes adaptadas; ⌈o/d⌉ nos demais casos.
    Φ vazio conta como 0.
    """
    rev = reversed_quiver(quiver)
    if rev is not None:
        return max(_o_or_zero(quiver, k, l, t), _o_or_zero(rev, k, l, t))
    d = quiver.sigma.order
    return math.ceil(Fraction(_o_or_zero(quiver, k, l, t), d))


def max_t(quiver: ARQuiver) -> int:
    values = list(quiver.coordinates.values())
    return int((max(values) - min(values)) * quiver.sigma.order)


def kappa_is_index_sum(quiver: ARQuiver) -> bool:
    """κ = k̂ + l̂ para as dobras em B_n e F_4; κ = t nas demais"""
    return not quiver.sigma.is_identity and quiver.sigma.folded_tag[0] in ('B', 'F')


def distance_polynomial(quiver: ARQuiver, k: int, l: int) -> DenPoly:
    """D_{k̂,l̂}(z; −q_s) = Π_t (z − (−1)^κ q_s^t)^{θ_t}"""
    roots: Dict[QMonomial, int] = {}
    index_sum = kappa_is_index_sum(quiver)
    for t in range(1, max_t(quiver) + 1):
        theta = theta_t(quiver, k, l, t)
        if not theta:
            continue
        kappa = k + l if index_sum else t
        roots[QMonomial(6 * (kappa % 2), t)] = theta
    return DenPoly.from_roots(roots)


@dataclass(frozen=True)
class StatisticsRow:
    k: int
    l: int
    t: int
    size: int
    o: int
    theta: int

    def csv(self) -> str:
        return f"{self.k},{self.l},{self.t},{self.size},{self.o},{self.theta}"


class StatisticsTable:
    """Linhas (k̂, l̂, t, |Φ|, o_t, θ_t) para t com Φ não vazio"""

    header = 'k,l,t,phi,o_t,theta_t'

    def __init__(self, quiver: ARQuiver):
        self.quiver = quiver
        self.rows: List[StatisticsRow] = []
        nodes = quiver.sigma.folded_nodes()
        for x, k in enumerate(nodes):
            for l in nodes[x:]:
                for t in range(1, max_t(quiver) + 1):
                    pairs = phi_set(quiver, k, l, t)
                    if not pairs:
                        continue
                    o = o_t(quiver, k, l, t)
                    self.rows.append(StatisticsRow(k, l, t, len(pairs), o, theta_t(quiver, k, l, t)))
        logger.info(f"Tabela de estatísticas: {len(self.rows)} linhas")

    def to_csv(self) -> str:
        return '\n'.join([self.header] + [row.csv() for row in self.rows]) + '\n'


# ---------------------------------------------------------------------------
# Vizinhos adjacentes bons e [Q]-comprimento


def _ordered(quiver: ARQuiver, pair: Iterable[Root]) -> Pair:
    a, b = sorted((tuple(r) for r in pair), key=lambda r: quiver.positions[r])
    return a, b


def _eta_condition(quiver: ARQuiver, lower: Pair, upper: Pair, bound: int) -> bool:
    """Condição (i): algum η realiza (a) ou (b) com distâncias menores que `bound`"""
    rs = quiver.rs
    a1, b1 = lower
    a2, b2 = upper
    for eta in rs.positive:
        if add_roots(eta, b2) == b1 and add_roots(eta, a1) == a2:
            if distance(quiver, (eta, b2)) < bound and distance(quiver, (eta, a1)) < bound:
                return True
        if add_roots(b1, eta) == b2 and add_roots(a2, eta) == a1:
            if distance(quiver, (b1, eta)) < bound and distance(quiver, (a2, eta)) < bound:
                return True
    return False


def _pairs_below(quiver: ARQuiver, pair: Pair) -> List[Pair]:
    engine = engine_for(quiver)
    out = []
    for s in engine.below_all(_pair_seq(engine, pair)):
        if len(s) == 2 and s[0] != s[1]:
            out.append(_as_roots(engine, s))
    return out


def good_adjacent(quiver: ARQuiver, lower: Iterable[Root], upper: Iterable[Root]) -> bool:
    """
    p' ≺ᵇ p são vizinhos adjacentes bons: vale (i) para p' e nenhum par p''
    com p' ≺ᵇ p'' ≺ᵇ p também satisfaz (i).
    """
    lower, upper = _ordered(quiver, lower), _ordered(quiver, upper)
    if not bilex_below(quiver, lower, upper):
        return False
    bound = distance(quiver, upper)
    if not _eta_condition(quiver, lower, upper, bound):
        return False
    for mid in _pairs_below(quiver, upper):
        mid = _ordered(quiver, mid)
        if mid == lower or not bilex_below(quiver, lower, mid):
            continue
        if _eta_condition(quiver, mid, upper, bound):
            return False
    return True


def q_length(quiver: ARQuiver, pair: Iterable[Root]) -> int:
    """Número de pares não simples alcançados por cadeias de vizinhos adjacentes bons"""
    start = _ordered(quiver, pair)
    seen = set()
    stack = [start]
    while stack:
        current = stack.pop()
        for lower in _pairs_below(quiver, current):
            lower = _ordered(quiver, lower)
            if lower in seen or not good_adjacent(quiver, lower, current):
                continue
            if is_simple(quiver, lower):
                continue
            seen.add(lower)
            stack.append(lower)
    return len(seen)
