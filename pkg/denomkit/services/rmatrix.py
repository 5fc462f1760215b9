"""
Matriz R normalizada em V_x ⊗ W_y pelo método das palavras de descida,
denominadores, o cálculo dos símbolos a_{k,l}(z) e o motor de
divisibilidade das restrições de Dorey.

Toda a álgebra linear roda em q_s = s (padrão 2) sobre Q(z), com x = 1 e
y = z; a forma simbólica dos denominadores é reconhecida depois por
identify_polynomial e conferida num segundo valor de q_s.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly
from sympy.polys.matrices import DomainMatrix

from denomkit.config import get_settings
from denomkit.exceptions import (
    BudgetExhaustedError,
    IdentificationError,
    InconsistentConstraintError,
    SingularSystemError,
)
from denomkit.services.affmod import (
    SPECIAL_FIELD,
    BasedModule,
    Vector,
    Weight,
    add_vectors,
    add_weights,
    alpha_weight,
    dominant_extremal_vector,
    dominant_weights,
    format_weight,
    fundamental_module,
    highest_weight_space,
    specialize,
    sub_weights,
    tensor,
    zf,
)
from denomkit.services.coefficients import (
    Z,
    DenPoly,
    QMonomial,
    QPochProduct,
    ZRational,
    confirm_identification,
    identify_polynomial,
    poch_from_ratio,
    poch_to_laurent_ratio,
)

logger = logging.getLogger(__name__)

FIELD_DOMAIN = SPECIAL_FIELD.to_domain()

# letra de palavra: (tipo, vértice, potência dividida)
Letter = Tuple[str, int, int]


def format_letters(word: Sequence[Letter]) -> str:
    """Na ordem usual de escrita: a última letra aplicada fica à esquerda"""
    parts = []
    for kind, i, n in reversed(word):
        parts.append(f"{kind}{i}" if n == 1 else f"{kind}{i}^({n})")
    return ' '.join(parts)


# ---------------------------------------------------------------------------
# Vetores de peso máximo


@dataclass
class HighestWeightDatum:
    weight: Weight
    vectors: List[Vector]

    @property
    def multiplicity(self) -> int:
        return len(self.vectors)


def highest_weight_vectors(T: BasedModule) -> List[HighestWeightDatum]:
    """Bases dos núcleos de e_i (i ∈ I₀) por peso dominante, em ordem decrescente"""
    out = []
    for mu in dominant_weights(T):
        vecs = highest_weight_space(T, mu)
        if vecs:
            out.append(HighestWeightDatum(mu, vecs))
    logger.debug(f"Vetores de peso máximo: {[(format_weight(h.weight), h.multiplicity) for h in out]}")
    return out


def top_weight(T: BasedModule) -> Weight:
    V, W = T.factors
    return add_weights(V.weights[dominant_extremal_vector(V)], W.weights[dominant_extremal_vector(W)])


# ---------------------------------------------------------------------------
# Palavras de descida


def apply_letters(T: BasedModule, word: Sequence[Letter], vec: Vector) -> Vector:
    out = vec
    for kind, i, n in word:
        for _ in range(n):
            out = T.apply(kind, i, out)
            if not out:
                return {}
        if n > 1:
            fact = T.one()
            for k in range(2, n + 1):
                fact = fact * T.quantum(k, i)
            out = {k: v / fact for k, v in out.items()}
    return out


def _group(raw: Sequence[Tuple[str, int]]) -> Tuple[Letter, ...]:
    out: List[List] = []
    for kind, i in raw:
        if out and out[-1][0] == kind and out[-1][1] == i:
            out[-1][2] += 1
        else:
            out.append([kind, i, 1])
    return tuple(tuple(x) for x in out)


def _weight_distances(T: BasedModule, target: Weight) -> Dict[Weight, int]:
    """Distância no grafo dos pesos de T (passos ±α_i, i ∈ I) até o alvo"""
    present = set(T.weights)
    moves = [alpha_weight(T.aff, i) for i in T.nodes]
    dist = {target: 0}
    queue = deque([target])
    while queue:
        w = queue.popleft()
        for a in moves:
            for nb in (add_weights(w, a), sub_weights(w, a)):
                if nb in present and nb not in dist:
                    dist[nb] = dist[w] + 1
                    queue.append(nb)
    return dist


class WordSearch:
    """
    Busca em profundidade, graduada pela distância no grafo de pesos, de
    palavras que levam os vetores dados ao espaço extremal (unidimensional).
    Para cada folga sobre a distância: só f's, só e's, depois mistas. A
    folga cresce enquanto houver orçamento; e_i e f_0 comutam para i ≠ 0,
    então palavras curtas costumam anular os vetores de peso máximo.
    """

    def __init__(self, T: BasedModule, vectors: List[Vector], budget: Optional[int] = None):
        self.T = T
        self.vectors = vectors
        self.budget = budget or get_settings().search_budget
        self.used = 0
        self.target = top_weight(T)
        found = T.weight_space(self.target)
        if len(found) != 1:
            raise SingularSystemError(f"Espaço extremal de dimensão {len(found)}")
        self.target_index = found[0]
        self.dist = _weight_distances(T, self.target)
        self.alphas = {i: alpha_weight(T.aff, i) for i in T.nodes}

    def _moves(self, kinds):
        for kind in kinds:
            for i in self.T.nodes:
                yield kind, i

    def _dfs(self, states, weight, raw, remaining, kinds) -> Iterator[Tuple[Tuple[Letter, ...], List]]:
        if weight == self.target:
            row = [s.get(self.target_index, SPECIAL_FIELD.zero) for s in states]
            if any(row):
                yield _group(raw), row
            return
        for kind, i in self._moves(kinds):
            nxt = add_weights(weight, self.alphas[i]) if kind == 'e' else sub_weights(weight, self.alphas[i])
            d = self.dist.get(nxt)
            if d is None or d > remaining - 1:
                continue
            self.used += len(states)
            if self.used > self.budget:
                raise BudgetExhaustedError(f"Orçamento de busca esgotado ({self.budget} aplicações)")
            new_states = [self.T.apply(kind, i, s) for s in states]
            if not any(new_states):
                continue
            yield from self._dfs(new_states, nxt, raw + [(kind, i)], remaining - 1, kinds)

    def words(self, weight: Weight, max_slack: Optional[int] = None) -> Iterator[Tuple[Tuple[Letter, ...], List]]:
        """
        Gera (palavra, linha de coeficientes), sem repetir palavras. Sem
        `max_slack` a geração só para quando o consumidor para ou quando o
        orçamento acaba (BudgetExhaustedError).
        """
        if weight not in self.dist:
            return
        if weight == self.target:
            yield from self._dfs(self.vectors, weight, [], 0, ('f',))
            return
        seen = set()
        slack = 0
        while max_slack is None or slack <= max_slack:
            before = self.used
            for kinds in (('f',), ('e',), ('e', 'f')):
                for word, row in self._dfs(self.vectors, weight, [], self.dist[weight] + slack, kinds):
                    if word in seen:
                        continue
                    seen.add(word)
                    yield word, row
            if self.used == before:
                return
            logger.debug(f"Folga {slack} esgotada em {format_weight(weight)} ({self.used} aplicações)")
            slack += 1


@dataclass
class PullDown:
    word: Tuple[Letter, ...]
    coefficient: object

    def __str__(self) -> str:
        return f"{format_letters(self.word)} → {self.coefficient}"


def pull_down(T: BasedModule, vec: Vector, weight: Optional[Weight] = None,
              budget: Optional[int] = None) -> PullDown:
    """
    Primeira palavra que leva `vec` a um múltiplo não nulo do vetor extremal
    u ⊗ u; o coeficiente já considera as potências divididas.
    """
    if weight is None:
        weight = T.weights[next(iter(vec))]
    search = WordSearch(T, [vec], budget)
    for word, _ in search.words(weight):
        out = apply_letters(T, word, vec)
        coeff = out.get(search.target_index)
        if coeff:
            return PullDown(word, coeff)
    raise BudgetExhaustedError(f"Nenhuma palavra de descida a partir do peso {format_weight(weight)}")


# ---------------------------------------------------------------------------
# Autossistema


def _dm(rows) -> DomainMatrix:
    rows = [[SPECIAL_FIELD(x) for x in row] for row in rows]
    return DomainMatrix(rows, (len(rows), len(rows[0]) if rows else 0), FIELD_DOMAIN)


def _rank(rows) -> int:
    return _dm(rows).rank() if rows else 0


@dataclass
class EigenBlock:
    weight: Weight
    words: List[Tuple[Letter, ...]]
    block: List[List[object]]

    @property
    def multiplicity(self) -> int:
        return len(self.block)

    @property
    def scalar(self):
        return self.block[0][0] if self.multiplicity == 1 else None


@dataclass
class REigenSystem:
    """
    Blocos de R^norm nos vetores de peso máximo de V_1 ⊗ W_z, normalizados
    por R(u ⊗ u') = u' ⊗ u; valores em Q(z) com q_s = s.
    """
    tag: str
    i: int
    j: int
    s: int
    coproduct: str
    blocks: List[EigenBlock] = field(default_factory=list)

    def block_for(self, weight: Weight) -> EigenBlock:
        for b in self.blocks:
            if b.weight == weight:
                return b
        raise KeyError(format_weight(weight))

    def denominator_poly(self) -> Poly:
        """mmc mônico dos denominadores, sem os fatores z"""
        den = Poly(1, Z, domain='QQ')
        for b in self.blocks:
            for row in b.block:
                for x in row:
                    if x:
                        den = den.lcm(Poly(x.denom.as_expr(), Z, domain='QQ'))
        while den.degree() > 0 and den.eval(0) == 0:
            den = den.exquo(Poly(Z, Z, domain='QQ'))
        return den.monic()

    def polynomial_blocks(self) -> List[EigenBlock]:
        """Blocos multiplicados pelo denominador (normalização polinomial)"""
        d = SPECIAL_FIELD(self.denominator_poly().as_expr())
        return [EigenBlock(b.weight, b.words, [[x * d for x in row] for row in b.block]) for b in self.blocks]


def _system_for(tag: str, i: int, j: int, s: int, coproduct: str):
    V = specialize(fundamental_module(tag, i), s)
    W = V if i == j else specialize(fundamental_module(tag, j), s)
    T1 = tensor(V, W, SPECIAL_FIELD.one, zf, coproduct)
    T2 = tensor(W, V, zf, SPECIAL_FIELD.one, coproduct)
    return T1, T2


def r_eigensystem(tag: str, i: int, j: Optional[int] = None, s: Optional[int] = None,
                  coproduct: Optional[str] = None, budget: Optional[int] = None,
                  check_words: bool = False) -> REigenSystem:
    """
    Para cada peso λ: C₁ (palavras em V_1 ⊗ W_z) e C₂ (as mesmas palavras
    em W_z ⊗ V_1) dão o bloco A = C₂⁻¹C₁. Com check_words, blocos escalares
    são recalculados por uma segunda palavra.
    """
    settings = get_settings()
    j = i if j is None else j
    s = s or settings.qs_sample
    coproduct = coproduct or settings.coproduct
    T1, T2 = _system_for(tag, i, j, s, coproduct)
    hw1 = highest_weight_vectors(T1)
    hw2 = {h.weight: h for h in highest_weight_vectors(T2)} if i != j else {h.weight: h for h in hw1}
    system = REigenSystem(tag, i, j, s, coproduct)
    for h in hw1:
        m = h.multiplicity
        other = hw2.get(h.weight)
        if other is None or other.multiplicity != m:
            raise SingularSystemError(f"Multiplicidades diferentes em {format_weight(h.weight)}")
        search = WordSearch(T1, h.vectors, budget)
        target2 = T2.weight_space(top_weight(T2))[0]
        rows1, rows2, words = [], [], []
        wanted = m + 1 if check_words and m == 1 else m
        try:
            for word, _ in search.words(h.weight):
                row1 = [apply_letters(T1, word, v).get(search.target_index, SPECIAL_FIELD.zero) for v in h.vectors]
                row2 = [apply_letters(T2, word, v).get(target2, SPECIAL_FIELD.zero) for v in other.vectors]
                if len(words) < m:
                    if _rank(rows1 + [row1]) <= len(rows1) or _rank(rows2 + [row2]) <= len(rows2):
                        continue
                elif not row2[0]:
                    continue
                rows1.append(row1)
                rows2.append(row2)
                words.append(word)
                if len(words) >= wanted:
                    break
        except BudgetExhaustedError:
            if len(words) < m:
                raise
            logger.warning(f"Orçamento esgotado antes da palavra de conferência em {format_weight(h.weight)}")
        if len(words) < m:
            raise SingularSystemError(f"Palavras insuficientes para {format_weight(h.weight)}")
        C1, C2 = _dm(rows1[:m]), _dm(rows2[:m])
        block = (C2.inv() * C1).to_list()
        if check_words and m == 1 and len(words) > 1:
            second = rows1[1][0] / rows2[1][0]
            if second != block[0][0]:
                raise SingularSystemError(f"Palavras discordantes em {format_weight(h.weight)}")
        system.blocks.append(EigenBlock(h.weight, words[:m], block))
        logger.debug(f"Bloco {format_weight(h.weight)} (mult. {m}) resolvido com {search.used} aplicações")
    logger.info(f"Autossistema {tag} ({i},{j}) resolvido: {len(system.blocks)} blocos em q_s={s}")
    return system


def denominator_from_eigensystem(system: REigenSystem) -> DenPoly:
    return identify_polynomial(system.denominator_poly(), system.s)


def compute_denominator(tag: str, i: int, j: Optional[int] = None, confirm: bool = True,
                        coproduct: Optional[str] = None, budget: Optional[int] = None) -> DenPoly:
    """
    d_{i,j}(z) identificado em q_s = s e conferido em q_s = s' quando
    `confirm` (o segundo cálculo repete o pipeline inteiro).
    """
    settings = get_settings()
    system = r_eigensystem(tag, i, j, settings.qs_sample, coproduct, budget)
    candidate = denominator_from_eigensystem(system)
    if confirm:
        second = r_eigensystem(tag, i, j, settings.qs_crosscheck, coproduct, budget)
        if not confirm_identification(candidate, second.denominator_poly(), settings.qs_crosscheck):
            raise IdentificationError(f"Identificação de d_{{{i},{j}}} não confirmada em q_s={settings.qs_crosscheck}")
    logger.info(f"d_{{{i},{j}}}({tag}) = {candidate}")
    return candidate


def eigensystem_dump(system: REigenSystem) -> str:
    """JSON {lambda, multiplicity, block} em ordem canônica"""
    payload = {
        'type': system.tag,
        'i': system.i,
        'j': system.j,
        'qs': system.s,
        'coproduct': system.coproduct,
        'blocks': [
            {
                'lambda': list(b.weight),
                'multiplicity': b.multiplicity,
                'words': [format_letters(w) for w in b.words],
                'block': [[str(x.as_expr()) for x in row] for row in b.block],
            }
            for b in system.blocks
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'


# ---------------------------------------------------------------------------
# R^norm em u ⊗ f_j u


def rnorm_entry_on_pair(tag: str, i: int, j: int, system: Optional[REigenSystem] = None,
                        s: Optional[int] = None, coproduct: Optional[str] = None) -> Tuple[object, object]:
    """
    Coeficientes de R^norm(u ⊗ f_j u_z) na base {u_z ⊗ f_j u, f_j u_z ⊗ u}.
    O espaço de peso 2ϖ − α_j é gerado por Δf_j(u⊗u) e pelo vetor de peso
    máximo w, com R w = a·w.
    """
    settings = get_settings()
    s = s or (system.s if system else settings.qs_sample)
    coproduct = coproduct or (system.coproduct if system else settings.coproduct)
    if system is None:
        system = r_eigensystem(tag, i, i, s, coproduct)
    T1, T2 = _system_for(tag, i, i, s, coproduct)
    V = T1.factors[0]
    top = dominant_extremal_vector(V)
    fu = V.apply('f', j, V.basis_vector(top))
    if len(fu) != 1:
        raise SingularSystemError(f"f_{j} u não é vetor da base")
    (low, c_low), = fu.items()
    m = V.dim
    b1, b2 = top * m + low, low * m + top
    uu = {top * m + top: SPECIAL_FIELD.one}
    s1 = T1.apply('f', j, uu)
    s2 = T2.apply('f', j, uu)
    lam = sub_weights(top_weight(T1), alpha_weight(T1.aff, j))
    (w,) = highest_weight_space(T1, lam)
    a = system.block_for(lam).scalar

    # u ⊗ f_j u = c_low·b1 escrito como κ₁ s₁ + κ₂ w
    target = {b1: c_low}
    M = _dm([[s1.get(b1, 0), w.get(b1, 0)], [s1.get(b2, 0), w.get(b2, 0)]])
    rhs = _dm([[target.get(b1, 0)], [target.get(b2, 0)]])
    kappa = (M.inv() * rhs).to_list()
    k1, k2 = kappa[0][0], kappa[1][0]
    image = add_vectors({k: v * k1 for k, v in s2.items()}, {k: v * k2 * a for k, v in w.items()})
    # de volta à base {u ⊗ f_j u, f_j u ⊗ u} normalizada
    return image.get(b1, SPECIAL_FIELD.zero) / c_low, image.get(b2, SPECIAL_FIELD.zero) / c_low


def to_zrational(value, s: int) -> ZRational:
    """Elemento de Q(z) em q_s = s como ZRational (escalar já especializado)"""
    num = Poly(value.numer.as_expr(), Z, domain='QQ')
    den = Poly(value.denom.as_expr(), Z, domain='QQ')
    scalar = sympy.Rational(num.LC()) / sympy.Rational(den.LC())
    return ZRational.make(scalar, identify_polynomial(num, s), identify_polynomial(den, s))


# ---------------------------------------------------------------------------
# Cálculo dos a_{k,l}(z)


def a_from_denominators(d_kl: DenPoly, d_kstar_l: DenPoly, pstar: QMonomial) -> QPochProduct:
    """
    a_{k,l}(z) a_{k*,l}(p*⁻¹z) ≡ d_{k,l}(z)/d_{k*,l}(p* z⁻¹) resolvido como
    produto: −1 em x_ν e em p*²/x_ν, +1 em p*·y_ν e em p*/y_ν, período 2|p*|.
    """
    period = 2 * abs(int(pstar.exp))
    p2 = pstar * pstar
    atoms: Dict[QMonomial, int] = {}

    def bump(c, e):
        atoms[c] = atoms.get(c, 0) + e

    for x, mult in d_kl.roots:
        bump(x, -mult)
        bump(p2 / x, -mult)
    for y, mult in d_kstar_l.roots:
        bump(pstar * y, mult)
        bump(pstar / y, mult)
    return QPochProduct.from_atoms(period, atoms)


@dataclass(frozen=True)
class DoreyHom:
    """V(ϖ_i)_a ⊗ V(ϖ_j)_b ↠ V(ϖ_k)_c"""
    i: int
    a: QMonomial
    j: int
    b: QMonomial
    k: int
    c: QMonomial = QMonomial(0, 0)

    @property
    def u_i(self) -> QMonomial:
        return self.a / self.c

    @property
    def u_j(self) -> QMonomial:
        return self.b / self.c

    def __str__(self) -> str:
        return f"V({self.i})_{self.a} ⊗ V({self.j})_{self.b} ↠ V({self.k})_{self.c}"


def _lookup(table, w: int, i: int):
    if (w, i) in table:
        return table[(w, i)]
    return table.get((i, w))


def a_via_fusion(h: DoreyHom, known: Dict[Tuple[int, int], QPochProduct], correction: ZRational,
                 w: Optional[int] = None) -> QPochProduct:
    """
    a_{w,k}(z) = a_{w,i}(u_i z)·a_{w,j}(u_j z)·(coeficiente sobrevivente),
    com u = parâmetro/c. Por padrão w = i.
    """
    w = h.i if w is None else w
    first = _lookup(known, w, h.i)
    second = _lookup(known, w, h.j)
    if first is None or second is None:
        raise KeyError(f"a_{{{w},{h.i}}} ou a_{{{w},{h.j}}} ausente")
    out = first.shifted(h.u_i) * second.shifted(h.u_j)
    return out * poch_from_ratio(correction, out.period)


@dataclass
class ConstraintReport:
    hom: DoreyHom
    w: int
    ratio: ZRational
    unknown: Optional[Tuple[int, int]] = None
    lower: Optional[DenPoly] = None
    upper: Optional[DenPoly] = None

    def __str__(self) -> str:
        out = f"{self.hom}, W={self.w}: {self.ratio}"
        if self.lower is not None:
            out += f"; {self.lower} | d_{self.unknown}"
        if self.upper is not None:
            out += f"; d_{self.unknown} | {self.upper}"
        return out


def dorey_constraint(h: DoreyHom, w: int, d_table: Dict[Tuple[int, int], Optional[DenPoly]],
                     a_table: Dict[Tuple[int, int], QPochProduct]) -> ConstraintReport:
    """
    d_{W,i}(u_i z) d_{W,j}(u_j z) a_{W,k}(z) / (d_{W,k}(z) a_{W,i}(u_i z) a_{W,j}(u_j z))
    precisa ser um polinômio de Laurent. Um d desconhecido (None) no
    numerador gera cota inferior; no denominador, cota superior.
    """
    a_part = _lookup(a_table, w, h.k) / (_lookup(a_table, w, h.i).shifted(h.u_i) *
                                         _lookup(a_table, w, h.j).shifted(h.u_j))
    ratio = poch_to_laurent_ratio(a_part)
    num, den = ratio.num, ratio.den
    unknown = None
    unknown_shift = None
    unknown_side = None
    for key, shift, side in (((w, h.i), h.u_i, 'num'), ((w, h.j), h.u_j, 'num'), ((w, h.k), None, 'den')):
        value = _lookup(d_table, *key)
        if value is None:
            if unknown is not None and unknown != tuple(sorted(key)):
                raise InconsistentConstraintError("Mais de uma incógnita numa restrição")
            unknown = tuple(sorted(key))
            unknown_shift = shift
            unknown_side = side if unknown_side is None else 'both'
            continue
        if side == 'num':
            num = num * value.substitute(shift)
        else:
            den = den * value
    known = ZRational.make(ratio.scalar, num, den)
    report = ConstraintReport(h, w, known, unknown)
    if unknown is None or unknown_side == 'both':
        if not known.is_polynomial:
            raise InconsistentConstraintError(f"Razão não é de Laurent: {known}")
        return report
    if unknown_side == 'num':
        # den(z) | X(u z) ⇔ raízes de X contêm u·r
        report.lower = known.den.substitute(unknown_shift.inverse())
    else:
        if not known.is_polynomial:
            raise InconsistentConstraintError(f"Nenhum d_{unknown} torna a razão de Laurent: {known}")
        report.upper = known.num
    logger.debug(f"Restrição: {report}")
    return report


@dataclass
class UnknownResolution:
    lower: DenPoly
    upper: Optional[DenPoly]

    @property
    def resolved(self) -> bool:
        return self.upper is not None and self.lower == self.upper


def resolve_unknown(reports: Sequence[ConstraintReport], qdisk: bool = True) -> UnknownResolution:
    """
    Combina as cotas: mmc das inferiores, mdc das superiores (restritas ao
    q-disco quando `qdisk`).
    """
    lower = DenPoly.one()
    upper: Optional[DenPoly] = None
    for r in reports:
        if r.lower is not None:
            lower = lower.lcm(r.lower)
        if r.upper is not None:
            upper = r.upper if upper is None else upper.gcd(r.upper)
    if upper is not None and qdisk:
        upper = DenPoly.from_roots({root: m for root, m in upper.roots if root.exp > 0})
    if upper is not None and not lower.divides(upper):
        raise InconsistentConstraintError(f"Cotas incompatíveis: {lower} ∤ {upper}")
    return UnknownResolution(lower, upper)
