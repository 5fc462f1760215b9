"""
Laboratório de denominadores: a base de dados versionada (JSON), as
atribuições de parâmetros espectrais β ↦ (índice, escalar), o quiver Γ^J,
a consulta da regra de Dorey, as identidades de fatoração entre tipos e as
suítes de verificação das tabelas.
"""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from denomkit import database
from denomkit.config import get_settings
from denomkit.exceptions import DenomkitError, UnsupportedTypeError
from denomkit.services.arquiver import ARQuiver, build_ar_quiver
from denomkit.services.cartan import (
    AffineType,
    DiagramAutomorphism,
    Root,
    affine_type,
    build_root_system,
    finite_cartan,
    identity_automorphism,
    normalize_affine_tag,
    standard_automorphism,
    star_involution,
    sub_roots,
    twisted_longest_word,
)
from denomkit.services.coefficients import DenPoly, QMonomial, format_scalar, parse_scalar
from denomkit.services.statistics import distance_polynomial, max_t, minimal_pairs, theta_t
from denomkit.services.words import CommutationClass, QuiverOrientation, class_of_orientation, commutation_class, reflection_cluster

logger = logging.getLogger(__name__)

TABLE_VERSION = 1

Cell = Tuple[int, int]
Param = Tuple[int, QMonomial]

# Dynkin quivers usados como Γ_Q padrão (mesmos desenhos das figuras)
DEFAULT_ORIENTATIONS = {
    'E6': "1>3 3>4 2>4 4>5 5>6",
    'E7': "1>3 3>4 2>4 4>5 5>6 6>7",
    'E8': "1>3 3>4 2>4 4>5 5>6 6>7 7>8",
    'D4': "1>2 3>2 4>2",
}

# Representantes das órbitas na palavra de Coxeter torcida
TWISTED_COXETER = {'E6': (1, 3, 4, 2), 'D4': (2, 1)}

# tipo afim → (tipo finito da classe, ordem de σ, classe torcida?)
FAMILIES = {
    'E6~1': ('E6', 1, False),
    'E7~1': ('E7', 1, False),
    'E8~1': ('E8', 1, False),
    'D4~1': ('D4', 1, False),
    'E6~2': ('E6', 2, False),
    'D4~3': ('D4', 3, False),
    'F4~1': ('E6', 2, True),
    'G2~1': ('D4', 3, True),
}

# Fator de (−q)^p em D4⁽³⁾: δ_{i1} − δ_{i2} + δ_{i3}ω + δ_{i4}ω²
_TRIALITY_UNITS = {1: 0, 2: 6, 3: 4, 4: 8}

SUITES = ('symmetry', 'qdisk', 'distance', 'theta', 'factorization', 'computed')

# Células que o módulo rmatrix consegue calcular em tempo de mesa
COMPUTABLE_CELLS: Dict[str, Tuple[Cell, ...]] = {
    'G2~1': ((2, 2),),
    'D4~3': ((1, 1),),
    'F4~1': ((1, 1), (4, 4)),
    'E6~2': ((1, 1),),
    'E6~1': ((1, 1), (1, 2), (1, 6), (2, 2)),
    'E7~1': ((1, 1), (1, 7), (7, 7)),
    'E8~1': ((8, 8),),
}


# ---------------------------------------------------------------------------
# Tabelas


def parse_factor_group(group: Mapping) -> DenPoly:
    """
    {unit k, degree n, exps "e1,e2^m"} ↦ Π (z^n − ζ^k q_s^e)^m, fatorado em
    raízes ζ^{(k+12t)/n} q_s^{e/n}.
    """
    k = int(group.get('unit', 0))
    n = int(group.get('degree', 1))
    roots: Dict[QMonomial, int] = {}
    for token in str(group.get('exps', '')).split(','):
        token = token.strip()
        if not token:
            continue
        exp, _, mult = token.partition('^')
        e = Fraction(exp)
        for t in range(n):
            unit = k + 12 * t
            if unit % n:
                raise ValueError(f"Raiz fora de Q(ζ₁₂): z^{n} − ζ^{k}·q_s^{exp}")
            root = QMonomial(unit // n, e / n)
            roots[root] = roots.get(root, 0) + (int(mult) if mult else 1)
    return DenPoly.from_roots(roots)


def parse_factors(groups: Iterable[Mapping]) -> DenPoly:
    poly = DenPoly.one()
    for group in groups:
        poly = poly * parse_factor_group(group)
    return poly


@dataclass(frozen=True, eq=False)
class DenomTable:
    """Denominadores d_{i,j}(z) de um tipo afim, guardados com i ≤ j"""
    tag: str
    entries: Dict[Cell, DenPoly]
    provenance: Dict[Cell, str] = field(default_factory=dict)

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(sorted({i for cell in self.entries for i in cell}))

    def get(self, i: int, j: int) -> DenPoly:
        cell = (min(i, j), max(i, j))
        if cell not in self.entries:
            raise ValueError(f"Entrada d_{{{i},{j}}} ausente na tabela de {self.tag}")
        return self.entries[cell]

    def cells(self) -> List[Cell]:
        return sorted(self.entries)


@lru_cache(maxsize=4)
def _load_tables(path: str) -> Dict[str, DenomTable]:
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    if data.get('version') != TABLE_VERSION:
        raise ValueError(f"Versão de tabela não suportada: {data.get('version')!r}")
    tables = {}
    for block in data['types']:
        tag = normalize_affine_tag(block['type'])
        entries, provenance = {}, {}
        for entry in block['entries']:
            i, j = int(entry['i']), int(entry['j'])
            cell = (min(i, j), max(i, j))
            entries[cell] = parse_factors(entry['factors'])
            provenance[cell] = entry.get('provenance', 'derived')
        tables[tag] = DenomTable(tag, entries, provenance)
    logger.info(f"Tabelas carregadas de {os.path.basename(path)}: {', '.join(sorted(tables))}")
    return tables


def load_tables(path: Optional[str] = None) -> Dict[str, DenomTable]:
    return _load_tables(path or get_settings().tables_path)


def table_for(tag: str) -> DenomTable:
    norm = normalize_affine_tag(tag)
    tables = load_tables()
    if norm not in tables:
        raise UnsupportedTypeError(f"Sem tabela de denominadores para {norm}")
    return tables[norm]


def denom_lookup(tag: str, i: int, j: int, use_store: bool = False) -> DenPoly:
    """
    d_{i,j}(z) da base. Com use_store, consulta primeiro o sqlite e cai para
    o JSON quando a entrada não está lá.
    """
    table = table_for(tag)
    if i not in table.nodes or j not in table.nodes:
        raise ValueError(f"Índices ({i},{j}) fora de {table.tag}")
    if use_store:
        row = database.fetch_denominator(table.tag, i, j)
        if row:
            return parse_factors(json.loads(row['factors']))
        logger.warning(f"d_{{{i},{j}}} de {table.tag} ausente no sqlite, usando o JSON")
    return table.get(i, j)


# ---------------------------------------------------------------------------
# Atribuições espectrais


def _inverse(sigma: DiagramAutomorphism) -> DiagramAutomorphism:
    return DiagramAutomorphism(sigma.datum, tuple(sorted((j, i) for i, j in sigma.perm)), sigma.bar, sigma.folded_tag)


def _twist_unit(twist: DiagramAutomorphism, i: int) -> int:
    if twist.order == 2:
        j = twist(i)
        return 0 if i < j else (6 if i > j else 3)
    if twist.order == 3:
        return _TRIALITY_UNITS[i]
    return 0


@dataclass(frozen=True, eq=False)
class SpectralAssignment:
    """
    β ↦ (índice fundamental, parâmetro) para uma classe adaptada (V_Q^{(t)})
    ou torcida (V_𝒬, V_𝔔).
    """
    aff: AffineType
    quiver: ARQuiver
    twist: DiagramAutomorphism
    folded: bool

    @property
    def tag(self) -> str:
        return self.aff.tag

    @cached_property
    def params(self) -> Dict[Root, Param]:
        return {beta: spectral_param(self, beta) for beta in self.quiver.roots}

    def period(self, index: int) -> int:
        """Passo em unidades de ζ sob o qual V(ϖ_index)_x ≅ V(ϖ_index)_{ζ^passo x}"""
        if self.folded or self.twist.is_identity:
            return 12
        if len(self.twist.orbit_of(index)) == 1:
            return 12 // self.twist.order
        return 12

    def same_module(self, index: int, x: QMonomial, y: QMonomial) -> bool:
        ratio = x / y
        return ratio.exp == 0 and ratio.unit % self.period(index) == 0

    def shifts(self, index: int) -> List[QMonomial]:
        step = self.period(index)
        return [QMonomial(u, 0) for u in range(0, 12, step)]


def spectral_param(assignment: SpectralAssignment, beta: Root) -> Param:
    quiver = assignment.quiver
    if assignment.folded:
        k, pf = quiver.folded_coordinate(beta)
        p = pf * quiver.sigma.order
        if p.denominator != 1:
            raise ValueError(f"Coordenada dobrada fora da rede: {pf}")
        if assignment.aff.tag == 'F4~1':
            return k, QMonomial(6 * (k % 2), p)
        return k, QMonomial.minus_q(p)
    i, p = quiver.coordinate(beta)
    if p.denominator != 1:
        raise ValueError(f"Coordenada não inteira em classe adaptada: {p}")
    base = assignment.aff.minus_q(p.numerator)
    twist = assignment.twist
    if twist.is_identity:
        return i, base
    return twist.sigma_bar(i), base * QMonomial(_twist_unit(twist, i), 0)


def _family(tag: str) -> Tuple[AffineType, str, int, bool]:
    aff = affine_type(tag)
    if aff.tag not in FAMILIES:
        raise UnsupportedTypeError(f"Sem atribuição espectral para {aff.tag}")
    finite, order, folded = FAMILIES[aff.tag]
    return aff, finite, order, folded


def _fold_sigmas(finite: str, order: int) -> List[DiagramAutomorphism]:
    sigma = standard_automorphism(finite, order)
    return [sigma, _inverse(sigma)] if order == 3 else [sigma]


def _assignment(aff, finite, order, folded, c: CommutationClass, sigma=None) -> SpectralAssignment:
    datum = finite_cartan(finite)
    if folded:
        quiver = build_ar_quiver(c, sigma=sigma or standard_automorphism(finite, order))
        return SpectralAssignment(aff, quiver, identity_automorphism(datum), True)
    return SpectralAssignment(aff, build_ar_quiver(c), standard_automorphism(finite, order), False)


def default_assignment(tag: str, orientation: Optional[str] = None,
                       word: Optional[Sequence[int]] = None) -> SpectralAssignment:
    """
    Classe adaptada ao Dynkin quiver padrão (tipos simplesmente laçados e
    E6⁽²⁾/D4⁽³⁾) ou classe da palavra de Coxeter torcida (F4⁽¹⁾/G2⁽¹⁾).
    """
    aff, finite, order, folded = _family(tag)
    rs = build_root_system(finite_cartan(finite))
    if word is not None:
        c = commutation_class(rs, tuple(word))
    elif folded:
        if orientation is not None:
            raise ValueError(f"{aff.tag} usa classes torcidas, não orientações")
        c = commutation_class(rs, twisted_longest_word(TWISTED_COXETER[finite], standard_automorphism(finite, order)), check=False)
    else:
        c = class_of_orientation(rs, QuiverOrientation.parse(orientation or DEFAULT_ORIENTATIONS[finite]))
    return _assignment(aff, finite, order, folded, c)


@lru_cache(maxsize=None)
def cluster_assignments(tag: str, cap: Optional[int] = None) -> Tuple[SpectralAssignment, ...]:
    """Todas as classes do r-cluster point da classe padrão (união sobre σ e σ² no caso triplo)"""
    aff, finite, order, folded = _family(tag)
    cap = cap or get_settings().orbit_cap
    rs = build_root_system(finite_cartan(finite))
    out: List[SpectralAssignment] = []
    seen = set()
    if folded:
        seeds = [(commutation_class(rs, twisted_longest_word(TWISTED_COXETER[finite], s), check=False), s)
                 for s in _fold_sigmas(finite, order)]
    else:
        seeds = [(default_assignment(tag).quiver.commutation_class, None)]
    for seed, sigma in seeds:
        for c in reflection_cluster(seed, cap).classes:
            if c.word in seen:
                continue
            seen.add(c.word)
            out.append(_assignment(aff, finite, order, folded, c, sigma))
    logger.info(f"{len(out)} classes enumeradas para {aff.tag}")
    return tuple(out)


# ---------------------------------------------------------------------------
# Regra de Dorey


@dataclass(frozen=True)
class DoreyWitness:
    word: Tuple[int, ...]
    alpha: Root
    beta: Root
    gamma: Root
    shift: QMonomial
    swapped: bool

    def describe(self) -> str:
        form = 'injeção' if self.swapped else 'sobrejeção'
        return (f"{form}: classe [{' '.join(map(str, self.word))}], α={self.alpha}, β={self.beta}, "
                f"γ={self.gamma}, a={format_scalar(self.shift)}")


@dataclass(frozen=True)
class DoreyAnswer:
    holds: bool
    witness: Optional[DoreyWitness] = None


def _dorey_pairs(assignment: SpectralAssignment, gamma: Root) -> Iterator[Tuple[Root, Root]]:
    quiver = assignment.quiver
    if assignment.folded:
        yield from minimal_pairs(quiver, gamma)
        return
    positions = quiver.positions
    for alpha in quiver.roots:
        beta = sub_roots(gamma, alpha)
        if beta in positions and quiver.precedes(alpha, beta):
            yield alpha, beta


def _search(assignment: SpectralAssignment, left: Param, right: Param,
            target: Tuple[int, Optional[QMonomial]]) -> Optional[Tuple[Root, Root, Root, QMonomial]]:
    """left ⊗ right ↠ target com left = V(β)_a, right = V(α)_a, target = V(γ)_a"""
    params = assignment.params
    for gamma in assignment.quiver.roots:
        k, z = params[gamma]
        if k != target[0]:
            continue
        for alpha, beta in _dorey_pairs(assignment, gamma):
            jb, yb = params[beta]
            ia, xa = params[alpha]
            if jb != left[0] or ia != right[0]:
                continue
            for unit in assignment.shifts(jb):
                a = (left[1] / yb) * unit
                if not assignment.same_module(ia, xa * a, right[1]):
                    continue
                if target[1] is not None and not assignment.same_module(k, z * a, target[1]):
                    continue
                return alpha, beta, gamma, a
    return None


def dorey_query(tag: str, first: Param, second: Param, target: Tuple[int, Optional[QMonomial]],
                direction: str = 'any', cap: Optional[int] = None) -> DoreyAnswer:
    """
    Decide first ⊗ second ↠ target (sobrejeção) ou target ↪ first ⊗ second
    (injeção, isto é, second ⊗ first ↠ target). Parâmetro None no alvo
    aceita qualquer valor.
    """
    if direction not in ('surjection', 'injection', 'any'):
        raise ValueError(f"Direção inválida: {direction!r}")
    forms = []
    if direction in ('surjection', 'any'):
        forms.append((first, second, False))
    if direction in ('injection', 'any'):
        forms.append((second, first, True))
    for assignment in cluster_assignments(normalize_affine_tag(tag), cap):
        for left, right, swapped in forms:
            found = _search(assignment, left, right, target)
            if found:
                alpha, beta, gamma, a = found
                witness = DoreyWitness(assignment.quiver.word, alpha, beta, gamma, a, swapped)
                logger.debug(f"Dorey {tag}: {witness.describe()}")
                return DoreyAnswer(True, witness)
    return DoreyAnswer(False)


# ---------------------------------------------------------------------------
# Γ^J


@dataclass(frozen=True)
class GammaJQuiver:
    tag: str
    labels: Tuple[Tuple[int, int, QMonomial], ...]
    arrows: Tuple[Tuple[int, int, int], ...]
    dynkin_edges: Tuple[Tuple[int, int], ...]

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, _, _ in self.labels)

    def underlying_graph(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for u, v, _ in self.arrows)

    @property
    def is_consistent(self) -> bool:
        """d_{ij}·d_{ji} = 0"""
        pairs = {(u, v) for u, v, _ in self.arrows}
        return not any((v, u) in pairs for u, v in pairs)

    @property
    def matches_dynkin(self) -> bool:
        return self.underlying_graph() == frozenset(self.dynkin_edges) and all(m == 1 for _, _, m in self.arrows)

    def to_text(self) -> str:
        lines = [f"Γ^J de {self.tag}"]
        for v, index, x in self.labels:
            lines.append(f"  α_{v} ↦ V(ϖ_{index})_{{{format_scalar(x)}}}")
        for u, v, m in self.arrows:
            lines.append(f"  {u} -> {v}" + (f" (x{m})" if m > 1 else ''))
        lines.append(f"  grafo de Dynkin: {'sim' if self.matches_dynkin else 'não'}")
        return '\n'.join(lines)


def gamma_j(tag: str, assignment: Optional[SpectralAssignment] = None,
            parameters: Optional[Mapping[int, Param]] = None) -> GammaJQuiver:
    """
    Vértices J = Π com α_i ↦ (índice, X(i)); d_{ij} é a ordem do zero de
    d_{índice_i, índice_j}(z) em X(j)/X(i).
    """
    assignment = assignment or default_assignment(tag)
    rs = assignment.quiver.rs
    if parameters is None:
        parameters = {i: assignment.params[rs.simple(i)] for i in rs.nodes}
    table = table_for(assignment.tag)
    vertices = sorted(parameters)
    arrows = []
    for u in vertices:
        for v in vertices:
            if u == v:
                continue
            (iu, xu), (iv, xv) = parameters[u], parameters[v]
            order = table.get(iu, iv).multiplicity(xv / xu)
            if order:
                arrows.append((u, v, order))
    labels = tuple((v, parameters[v][0], parameters[v][1]) for v in vertices)
    result = GammaJQuiver(assignment.tag, labels, tuple(arrows), tuple(rs.datum.edges()))
    logger.info(f"Γ^J de {assignment.tag}: {len(arrows)} flechas, Dynkin={result.matches_dynkin}")
    return result


# ---------------------------------------------------------------------------
# Identidades de fatoração


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    expected: DenPoly
    product: DenPoly

    @property
    def passed(self) -> bool:
        return self.expected == self.product


def _twisted_identities(twisted: str, untwisted: str, finite: str, order: int) -> List[IdentityCheck]:
    """
    d^{(t)}_{a,b}(z) = Π_s d_{i,σ^s j}(c_s z), c_s = ω^s na ordem 3 e
    c_s = (±1 ou ±√−1) na ordem 2, conforme um só índice seja σ-fixo.
    """
    sigma = standard_automorphism(finite, order)
    small, big = table_for(twisted), table_for(untwisted)
    checks = []
    for a, b in small.cells():
        i, j = sigma.orbit_of(a)[0], sigma.orbit_of(b)[0]
        if order == 2:
            base = 3 if (len(sigma.orbit_of(a)) == 1) != (len(sigma.orbit_of(b)) == 1) else 0
            units = [base + 6 * s for s in range(2)]
        else:
            units = [4 * s for s in range(3)]
        product = DenPoly.one()
        for s, unit in enumerate(units):
            product = product * big.get(i, sigma.power(j, s)).substitute(QMonomial(unit, 0))
        checks.append(IdentityCheck(f"{small.tag} d{a}{b} = Π {big.tag} d{i},σ^s({j})", small.get(a, b), product))
    return checks


def _reading_identities(tag: str) -> List[IdentityCheck]:
    """d_{k,l} = D^{[Q]}_{k,l}(z)·(z − p*)^{δ_{l,k*}} lido do Γ_Q padrão"""
    assignment = default_assignment(tag)
    quiver, aff = assignment.quiver, assignment.aff
    table = table_for(tag)
    checks = []
    for k, l in table.cells():
        product = distance_polynomial(quiver, k, l)
        if l == star_involution(quiver.rs, k):
            product = product * DenPoly.from_roots({aff.pstar: 1})
        checks.append(IdentityCheck(f"{tag} d{k}{l} = D^[Q] (z-p*)^δ", table.get(k, l), product))
    return checks


def factorization_checks(tag: str) -> List[IdentityCheck]:
    return list(_factorization_checks(normalize_affine_tag(tag)))


@lru_cache(maxsize=None)
def _factorization_checks(norm: str) -> Tuple[IdentityCheck, ...]:
    if norm in ('E6~2', 'E6~1'):
        return tuple(_twisted_identities('E6~2', 'E6~1', 'E6', 2))
    if norm in ('D4~3', 'D4~1'):
        return tuple(_twisted_identities('D4~3', 'D4~1', 'D4', 3) + _reading_identities('D4~1'))
    logger.info(f"Nenhuma identidade de fatoração registrada para {norm}")
    return ()


# ---------------------------------------------------------------------------
# Verificação


@dataclass(frozen=True)
class VerificationRow:
    suite: str
    cell: Cell
    passed: bool
    detail: str = ''


@dataclass
class VerificationReport:
    tag: str
    rows: List[VerificationRow] = field(default_factory=list)

    @property
    def failures(self) -> List[VerificationRow]:
        return [r for r in self.rows if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = []
        for r in self.rows:
            status = 'ok' if r.passed else 'FALHA'
            line = f"{r.suite}\t{self.tag}\t({r.cell[0]},{r.cell[1]})\t{status}"
            lines.append(f"{line}\t{r.detail}" if r.detail else line)
        lines.append(f"{self.tag}: {len(self.rows)} verificações, {len(self.failures)} falhas")
        return '\n'.join(lines)


def applicable_suites(tag: str) -> List[str]:
    norm = normalize_affine_tag(tag)
    out = ['symmetry', 'qdisk']
    if norm in ('G2~1', 'F4~1'):
        out.append('distance')
    if norm in ('E6~1', 'E7~1', 'E8~1'):
        out.append('theta')
    if norm in ('E6~2', 'E6~1', 'D4~3', 'D4~1'):
        out.append('factorization')
    return out


def _check_symmetry(table: DenomTable, cell: Cell) -> VerificationRow:
    k, l = cell
    rs = affine_type(table.tag).root_system()
    ks, ls = star_involution(rs, k), star_involution(rs, l)
    ok = table.get(k, l) == table.get(l, k) == table.get(ks, ls)
    return VerificationRow('symmetry', cell, ok, '' if ok else f"d{k}{l} ≠ d{ks}{ls}")


def _check_qdisk(table: DenomTable, cell: Cell) -> VerificationRow:
    bad = [r for r in table.get(*cell).root_set() if r.exp <= 0]
    return VerificationRow('qdisk', cell, not bad, ', '.join(map(str, bad)))


def _check_distance(table: DenomTable, cell: Cell, classes: int) -> VerificationRow:
    i, j = cell
    aff = affine_type(table.tag)
    stored = table.get(i, j)
    for n, assignment in enumerate(cluster_assignments(table.tag)[:classes]):
        poly = distance_polynomial(assignment.quiver, i, j)
        if i == j:
            poly = poly * DenPoly.from_roots({aff.pstar: 1})
        if poly != stored:
            return VerificationRow('distance', cell, False, f"classe {n}: {poly}")
    return VerificationRow('distance', cell, True)


def _check_theta(table: DenomTable, cell: Cell) -> VerificationRow:
    k, l = cell
    assignment = default_assignment(table.tag)
    quiver, aff = assignment.quiver, assignment.aff
    stored = table.get(k, l)
    if l == star_involution(quiver.rs, k):
        try:
            stored = stored.quotient(DenPoly.from_roots({aff.pstar: 1}))
        except ValueError:
            return VerificationRow('theta', cell, False, f"(z − p*) não divide d{k}{l}")
    exps: Dict[int, int] = {}
    for root, m in stored.roots:
        if root.exp.denominator != 1 or root != QMonomial.minus_q(root.exp):
            return VerificationRow('theta', cell, False, f"raiz fora da forma (−q)^t: {root}")
        exps[root.exp.numerator] = m
    thetas = {t: theta_t(quiver, k, l, t) for t in range(1, max_t(quiver) + 1)}
    ones = {t for t, v in thetas.items() if v >= 1}
    twos = {t for t, v in thetas.items() if v >= 2}
    ok = set(exps) == ones and {t for t, m in exps.items() if m >= 2} == twos
    return VerificationRow('theta', cell, ok, '' if ok else f"θ≥1: {sorted(ones)}, θ≥2: {sorted(twos)}")


def _check_computed(table: DenomTable, cell: Cell) -> VerificationRow:
    from denomkit.services.rmatrix import compute_denominator

    computed = compute_denominator(table.tag, *cell)
    ok = computed == table.get(*cell)
    return VerificationRow('computed', cell, ok, '' if ok else f"calculado {computed}")


def _run_cells(fn: Callable[[Cell], VerificationRow], cells: Sequence[Cell], threads: int) -> List[VerificationRow]:
    if threads <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, cells))


def suite_cells(tag: str, suite: str) -> List[Cell]:
    """Células (i, j) percorridas por uma suíte, em ordem canônica"""
    table = table_for(tag)
    if suite == 'computed':
        return list(COMPUTABLE_CELLS.get(table.tag, ()))
    if suite == 'factorization':
        return [(0, n) for n in range(len(factorization_checks(table.tag)))]
    if suite not in SUITES:
        raise ValueError(f"Suíte desconhecida: {suite!r}")
    return table.cells()


def verify_cell(tag: str, suite: str, cell: Cell, classes: int = 5) -> VerificationRow:
    table = table_for(tag)
    cell = tuple(cell)
    if suite == 'symmetry':
        return _check_symmetry(table, cell)
    if suite == 'qdisk':
        return _check_qdisk(table, cell)
    if suite == 'distance':
        return _check_distance(table, cell, classes)
    if suite == 'theta':
        return _check_theta(table, cell)
    if suite == 'computed':
        return _check_computed(table, cell)
    if suite == 'factorization':
        chk = factorization_checks(table.tag)[cell[1]]
        return VerificationRow('factorization', cell, chk.passed, chk.name if chk.passed else f"{chk.name}: {chk.product}")
    raise ValueError(f"Suíte desconhecida: {suite!r}")


def verify_suite(tag: str, suite: str, threads: Optional[int] = None, classes: int = 5) -> List[VerificationRow]:
    threads = threads or get_settings().threads
    return _run_cells(lambda c: verify_cell(tag, suite, c, classes), suite_cells(tag, suite), threads)


def verify_tables(tag: str, suites: Sequence[str] = ('all',), threads: Optional[int] = None,
                  record: bool = True) -> VerificationReport:
    """
    Roda as suítes pedidas ('all' = todas as aplicáveis ao tipo, sem
    'computed') e registra o resultado em verification_runs.
    """
    norm = normalize_affine_tag(tag)
    wanted: List[str] = []
    for suite in suites:
        for s in (applicable_suites(norm) if suite == 'all' else [suite]):
            if s not in SUITES:
                raise ValueError(f"Suíte desconhecida: {s!r}")
            if s not in wanted:
                wanted.append(s)
    report = VerificationReport(norm)
    for suite in wanted:
        report.rows.extend(verify_suite(norm, suite, threads))
    if report.passed:
        logger.info(f"Tabela {norm} verificada: {len(report.rows)} verificações ({', '.join(wanted)})")
    else:
        logger.error(f"Tabela {norm}: {len(report.failures)} falhas em {', '.join(wanted)}")
    if record:
        database.record_verification(','.join(wanted), norm, len(report.rows) - len(report.failures),
                                     len(report.failures), [asdict(r) for r in report.failures])
    return report


def parse_param(tag: str, text: str) -> Tuple[int, Optional[QMonomial]]:
    """"i:escalar" ou só "i" (parâmetro livre)"""
    index, sep, scalar = text.partition(':')
    try:
        i = int(index)
    except ValueError:
        raise DenomkitError(f"Índice inválido em {text!r}")
    if not sep or scalar.strip() in ('', '*'):
        return i, None
    return i, parse_scalar(scalar, affine_type(tag).scale)

