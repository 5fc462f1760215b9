"""
Aritmética escalar exata: racionais ciclotômicos Q(ζ₁₂), funções racionais em
q_s, polinômios em z fatorados por raízes monomiais e o cálculo formal dos
símbolos q-Pochhammer ([a], ⟨a⟩, {a}).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

import sympy
from sympy import QQ, Poly, Symbol, cyclotomic_poly
from sympy.polys.fields import field

from denomkit.exceptions import (
    IdentificationError,
    InfiniteResidueError,
    NonUnitSubstitutionError,
    PeriodMismatchError,
)

logger = logging.getLogger(__name__)

Z = Symbol('z')
QS = Symbol('qs')

# Corpo ciclotômico fixo: ζ = exp(iπ/6), polinômio mínimo x⁴ − x² + 1
ZETA_EXPR = sympy.exp(sympy.I * sympy.pi / 6)
CYCLO = QQ.algebraic_field(ZETA_EXPR)

# Q(q_s): basta para as ações dos módulos (sem raízes da unidade)
MODULE_FIELD, qs = field('qs', QQ)

Exponent = Union[int, Fraction]


def cyclo_unit(k: int):
    """ζ^k como elemento de CYCLO"""
    return CYCLO.from_sympy(sympy.exp(sympy.I * sympy.pi * (k % 12) / 6))


def cyclo_is_rational(x) -> bool:
    return CYCLO.to_sympy(x).is_rational


def quantum_integer(n: int, step: int = 1):
    """[n]_i com q_i = q_s^step, como elemento de MODULE_FIELD"""
    qi = qs ** step
    return (qi ** n - qi ** (-n)) / (qi - qi ** (-1))


def specialize_scalar(x, s: int) -> Fraction:
    """Avalia um elemento de MODULE_FIELD em q_s = s"""
    num = x.numer(s) if x.numer.ring.ngens else x.numer
    den = x.denom(s) if x.denom.ring.ngens else x.denom
    num = QQ.convert(num)
    den = QQ.convert(den)
    return Fraction(int(num.numerator), int(num.denominator)) / Fraction(int(den.numerator), int(den.denominator))


def _as_fraction(e: Exponent) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


# (a, b, c) com k ≡ 6a + 3b + 4c (mod 12): ζ^k = (-1)^a · i^b · ω^c
_UNIT_PARTS: Dict[int, Tuple[int, int, int]] = {
    (6 * a + 3 * b + 4 * c) % 12: (a, b, c)
    for a in range(2) for b in range(2) for c in range(3)
}


def format_unit(k: int) -> Tuple[int, str]:
    """Separa ζ^k em sinal e parte w ∈ {1, i, -i, ω, ω², ...}"""
    k %= 12
    a, b, c = _UNIT_PARTS[k]
    if b == 1 and c == 0:
        return 0, ('-i' if a else 'i')
    parts = []
    if b:
        parts.append('i')
    if c == 1:
        parts.append('ω')
    elif c == 2:
        parts.append('ω²')
    return a, '*'.join(parts)


def format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator) if e.numerator >= 0 else '{%d}' % e.numerator
    return '{%d/%d}' % (e.numerator, e.denominator)


def format_scalar(m: 'QMonomial') -> str:
    """Gramática fixa de saída: (-1)^a * w * qs^{p/r}"""
    a, w = format_unit(m.unit)
    parts = []
    if a:
        parts.append('(-1)^1')
    if w:
        parts.append(w)
    if m.exp != 0:
        e = m.exp
        parts.append(f"qs^{{{e.numerator}}}" if e.denominator == 1 else f"qs^{{{e.numerator}/{e.denominator}}}")
    return ' * '.join(parts) if parts else '1'


_UNIT_TOKENS = {'1': 0, 'i': 3, 'sqrt(-1)': 3, 'ω': 4, 'w': 4, 'ω²': 8, 'ω^2': 8, 'w^2': 8}


def _power(text: str) -> Fraction:
    text = text.strip()
    if text.startswith('{') and text.endswith('}'):
        text = text[1:-1]
    return Fraction(text.strip())


def parse_scalar(text: str, scale: int = 1) -> 'QMonomial':
    """
    Lê a gramática de saída e variações usuais: "-qs^3", "i*qs^{-2}",
    "(-1)^1 * ω * qs^{1/2}", "(-qs)^4", "(-q)^-3" (q = q_s^scale).
    """
    unit, exp = 0, Fraction(0)
    for raw in text.replace(' ', '').split('*'):
        token = raw
        if not token:
            raise ValueError(f"Escalar malformado: {text!r}")
        if token.startswith('(-1)^'):
            a = _power(token[5:])
            if a.denominator != 1:
                raise ValueError(f"Expoente de sinal não inteiro: {text!r}")
            unit += 6 * a.numerator
            continue
        for base, factor in (('(-qs)', 1), ('(-q)', scale)):
            if token.startswith(base):
                rest = token[len(base):]
                a = _power(rest[1:]) if rest.startswith('^') else Fraction(1)
                if a.denominator != 1:
                    raise ValueError(f"(−q)^a exige a inteiro: {text!r}")
                unit += 6 * a.numerator
                exp += factor * a
                break
        else:
            if token.startswith('-'):
                unit += 6
                token = token[1:]
            if token in _UNIT_TOKENS:
                unit += _UNIT_TOKENS[token]
            elif token == 'qs' or token.startswith('qs^'):
                exp += _power(token[3:]) if token != 'qs' else 1
            elif token == 'q' or token.startswith('q^'):
                exp += scale * (_power(token[2:]) if token != 'q' else 1)
            else:
                raise ValueError(f"Fator desconhecido {raw!r} em {text!r}")
    return QMonomial(unit, exp)


@dataclass(frozen=True, order=True)
class QMonomial:
    """ζ^unit · q_s^exp"""
    unit: int
    exp: Fraction

    def __init__(self, unit: int = 0, exp: Exponent = 0):
        object.__setattr__(self, 'unit', unit % 12)
        object.__setattr__(self, 'exp', _as_fraction(exp))

    @classmethod
    def minus_q(cls, a: Exponent) -> 'QMonomial':
        """(−q_s)^a, a inteiro"""
        a = _as_fraction(a)
        if a.denominator != 1:
            raise ValueError(f"(−q_s)^a exige a inteiro: {a}")
        return cls(6 * a.numerator, a)

    @classmethod
    def one(cls) -> 'QMonomial':
        return cls(0, 0)

    def __mul__(self, other: 'QMonomial') -> 'QMonomial':
        return QMonomial(self.unit + other.unit, self.exp + other.exp)

    def __truediv__(self, other: 'QMonomial') -> 'QMonomial':
        return QMonomial(self.unit - other.unit, self.exp - other.exp)

    def __neg__(self) -> 'QMonomial':
        return QMonomial(self.unit + 6, self.exp)

    def __pow__(self, n: int) -> 'QMonomial':
        return QMonomial(self.unit * n, self.exp * n)

    def inverse(self) -> 'QMonomial':
        return QMonomial(-self.unit, -self.exp)

    def scale_exp(self, k: int) -> 'QMonomial':
        """Substituição q_s ↦ q_s^k"""
        return QMonomial(self.unit, self.exp * k)

    @property
    def is_real(self) -> bool:
        return self.unit in (0, 6)

    @property
    def sign(self) -> int:
        return -1 if self.unit == 6 else 1

    def to_expr(self, q=QS):
        return sympy.exp(sympy.I * sympy.pi * self.unit / 6) * q ** sympy.Rational(self.exp.numerator, self.exp.denominator)

    def to_cyclo(self, s: int):
        """Valor em CYCLO com q_s = s (expoente inteiro)"""
        if self.exp.denominator != 1:
            raise IdentificationError(f"Expoente fracionário não especializa em Q: {self}")
        return cyclo_unit(self.unit) * CYCLO.convert(QQ(s) ** self.exp.numerator)

    def value(self, s: int) -> Fraction:
        if not self.is_real or self.exp.denominator != 1:
            raise IdentificationError(f"Monômio não racional em q_s={s}: {self}")
        return self.sign * Fraction(s) ** self.exp.numerator

    def __str__(self) -> str:
        a, w = format_unit(self.unit)
        parts = [w] if w else []
        if self.exp != 0:
            parts.append('qs' if self.exp == 1 else f'qs^{format_exponent(self.exp)}')
        body = '*'.join(parts) if parts else '1'
        return ('-' + body) if a else body

    def __repr__(self) -> str:
        return f"QMonomial({self})"


def _counter_key(item):
    root, _ = item
    return (root.exp, root.unit)


@dataclass(frozen=True)
class DenPoly:
    """
    Polinômio mônico em z dado pelo multiconjunto de raízes: Π (z − r)^m.
    Todos os denominadores tratados aqui fatoram assim sobre Q(ζ₁₂)(q_s).
    """
    roots: Tuple[Tuple[QMonomial, int], ...] = ()

    @classmethod
    def from_roots(cls, roots: Union[Iterable[QMonomial], Dict[QMonomial, int]]) -> 'DenPoly':
        counter = Counter(roots) if not isinstance(roots, dict) else Counter(roots)
        items = tuple(sorted(((r, m) for r, m in counter.items() if m), key=_counter_key))
        for _, m in items:
            if m < 0:
                raise ValueError("Multiplicidade negativa em DenPoly")
        return cls(items)

    @classmethod
    def one(cls) -> 'DenPoly':
        return cls(())

    @classmethod
    def signed_powers(cls, sign: int, exps: Iterable[Exponent], order: int = 1) -> 'DenPoly':
        """
        Π (z^order − sign·q_s^t): raízes de ordem `order` de sign·q_s^t
        """
        roots: Counter = Counter()
        for t in exps:
            t = _as_fraction(t)
            base_unit = 0 if sign > 0 else 6
            for j in range(order):
                unit = Fraction(base_unit + 12 * j, order)
                if unit.denominator != 1:
                    raise ValueError(f"Raiz fora de Q(ζ₁₂): ordem {order}")
                roots[QMonomial(unit.numerator, t / order)] += 1
        return cls.from_roots(+roots)

    def counter(self) -> Counter:
        return Counter(dict(self.roots))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def root_set(self) -> List[QMonomial]:
        return [r for r, _ in self.roots]

    def multiplicity(self, root: QMonomial) -> int:
        return self.counter()[root]

    def __mul__(self, other: 'DenPoly') -> 'DenPoly':
        return DenPoly.from_roots(self.counter() + other.counter())

    def __pow__(self, n: int) -> 'DenPoly':
        return DenPoly.from_roots({r: m * n for r, m in self.roots})

    def lcm(self, other: 'DenPoly') -> 'DenPoly':
        return DenPoly.from_roots(self.counter() | other.counter())

    def gcd(self, other: 'DenPoly') -> 'DenPoly':
        return DenPoly.from_roots(self.counter() & other.counter())

    def divides(self, other: 'DenPoly') -> bool:
        mine, theirs = self.counter(), other.counter()
        return all(theirs[r] >= m for r, m in mine.items())

    def quotient(self, other: 'DenPoly') -> 'DenPoly':
        if not other.divides(self):
            raise ValueError("Divisão não exata de DenPoly")
        return DenPoly.from_roots(self.counter() - other.counter())

    def substitute(self, c: QMonomial) -> 'DenPoly':
        """p(c·z) normalizado mônico: raízes r ↦ r/c"""
        return DenPoly.from_roots({r / c: m for r, m in self.roots})

    def scale_exponents(self, k: int) -> 'DenPoly':
        return DenPoly.from_roots({r.scale_exp(k): m for r, m in self.roots})

    def reflect(self, c: QMonomial) -> 'DenPoly':
        """p(c·z⁻¹) a menos de unidade de k[z^±1]: raízes r ↦ c/r"""
        return DenPoly.from_roots({c / r: m for r, m in self.roots})

    def to_expr(self, z=Z, q=QS):
        return sympy.Mul(*[(z - r.to_expr(q)) ** m for r, m in self.roots])

    def cyclo_coeffs(self, s: int) -> List:
        """Coeficientes (grau decrescente) em CYCLO com q_s = s"""
        coeffs = [CYCLO.one]
        for r, m in self.roots:
            value = r.to_cyclo(s)
            for _ in range(m):
                nxt = coeffs + [CYCLO.zero]
                for idx in range(1, len(nxt)):
                    nxt[idx] = nxt[idx] - value * coeffs[idx - 1]
                coeffs = nxt
        return coeffs

    def specialize(self, s: int) -> Poly:
        """Polinômio sobre Q em q_s = s (exige raízes fechadas por conjugação)"""
        coeffs = []
        for c in self.cyclo_coeffs(s):
            expr = CYCLO.to_sympy(c)
            if not expr.is_rational:
                raise IdentificationError(f"Especialização não racional de {self}")
            coeffs.append(expr)
        return Poly(coeffs, Z, domain=QQ)

    def __str__(self) -> str:
        if not self.roots:
            return '1'
        out = []
        for r, m in self.roots:
            if r.unit == 6:
                body = f"(z+{-r})"
            else:
                body = f"(z-{r})"
            out.append(body if m == 1 else f"{body}^{m}")
        return ''.join(out)

    def __repr__(self) -> str:
        return f"DenPoly({self})"


@dataclass(frozen=True)
class ZRational:
    """escalar · num(z) / den(z), com num e den mônicos e sem raízes comuns"""
    scalar: sympy.Expr
    num: DenPoly = DenPoly.one()
    den: DenPoly = DenPoly.one()

    @classmethod
    def make(cls, scalar, num: DenPoly, den: DenPoly) -> 'ZRational':
        common = num.gcd(den)
        return cls(sympy.sympify(scalar), num.quotient(common), den.quotient(common))

    @classmethod
    def constant(cls, scalar=1) -> 'ZRational':
        return cls(sympy.sympify(scalar))

    def __mul__(self, other: 'ZRational') -> 'ZRational':
        return ZRational.make(sympy.simplify(self.scalar * other.scalar), self.num * other.num, self.den * other.den)

    def inverse(self) -> 'ZRational':
        return ZRational.make(1 / self.scalar, self.den, self.num)

    def __truediv__(self, other: 'ZRational') -> 'ZRational':
        return self * other.inverse()

    def __pow__(self, n: int) -> 'ZRational':
        if n < 0:
            return self.inverse() ** (-n)
        return ZRational.make(self.scalar ** n, self.num ** n, self.den ** n)

    def substitute(self, c: QMonomial) -> 'ZRational':
        """f(c·z); o fator c^(grau) vai para o escalar"""
        deg = self.num.degree - self.den.degree
        return ZRational.make(self.scalar * c.to_expr() ** deg, self.num.substitute(c), self.den.substitute(c))

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def equiv(self, other: 'ZRational') -> bool:
        """Igualdade a menos de unidade de k[z^±1] (≡)"""
        a = self.num.counter() + other.den.counter()
        b = self.den.counter() + other.num.counter()
        return _strip_zero_roots(a) == _strip_zero_roots(b)

    def to_expr(self, z=Z, q=QS):
        return self.scalar.subs(QS, q) * self.num.to_expr(z, q) / self.den.to_expr(z, q)

    def __str__(self) -> str:
        scalar = '' if self.scalar == 1 else f"({self.scalar})"
        num = str(self.num)
        if self.den.degree == 0:
            return f"{scalar}{num}" if scalar and num != '1' else (scalar or num)
        return f"{scalar}{num}/{self.den}"


def _strip_zero_roots(counter: Counter) -> Counter:
    return Counter({r: m for r, m in counter.items() if m})


# ---------------------------------------------------------------------------
# Símbolos q-Pochhammer


@dataclass(frozen=True)
class QPochProduct:
    """
    Produto formal Π (c·z; q_s^T)_∞^e, átomos indexados pelo monômio c.
    [a] = ((−q_s)^a z; q_s^T)_∞ corresponde a c = (−q_s)^a.
    """
    period: int
    atoms: Tuple[Tuple[QMonomial, int], ...] = ()

    def __post_init__(self):
        if self.period <= 0 or self.period % 2:
            raise PeriodMismatchError(f"Período deve ser par e positivo: {self.period}")

    @classmethod
    def from_atoms(cls, period: int, atoms: Union[Dict[QMonomial, int], Counter]) -> 'QPochProduct':
        items = tuple(sorted(((c, e) for c, e in atoms.items() if e), key=_counter_key))
        return cls(period, items)

    @classmethod
    def one(cls, period: int) -> 'QPochProduct':
        return cls(period, ())

    def atom_map(self) -> Dict[QMonomial, int]:
        return dict(self.atoms)

    def _check(self, other: 'QPochProduct') -> None:
        if self.period != other.period:
            raise PeriodMismatchError(f"Períodos diferentes: {self.period} e {other.period}")

    def __mul__(self, other: 'QPochProduct') -> 'QPochProduct':
        self._check(other)
        merged: Dict[QMonomial, int] = dict(self.atoms)
        for c, e in other.atoms:
            merged[c] = merged.get(c, 0) + e
        return QPochProduct.from_atoms(self.period, merged)

    def inverse(self) -> 'QPochProduct':
        return QPochProduct.from_atoms(self.period, {c: -e for c, e in self.atoms})

    def __truediv__(self, other: 'QPochProduct') -> 'QPochProduct':
        return self * other.inverse()

    def __pow__(self, n: int) -> 'QPochProduct':
        return QPochProduct.from_atoms(self.period, {c: e * n for c, e in self.atoms})

    @property
    def is_one(self) -> bool:
        return not self.atoms

    def shifted(self, c: QMonomial) -> 'QPochProduct':
        return QPochProduct.from_atoms(self.period, {a * c: e for a, e in self.atoms})

    def __str__(self) -> str:
        num = ''.join(_atom_str(c, e) for c, e in self.atoms if e > 0)
        den = ''.join(_atom_str(c, -e) for c, e in self.atoms if e < 0)
        if not den:
            return num or '1'
        return f"{num or '1'}/({den})"


def _atom_str(c: QMonomial, e: int) -> str:
    if c.exp.denominator == 1:
        a = c.exp.numerator
        if c == QMonomial.minus_q(a):
            body = f"[{a}]"
        elif c == -QMonomial.minus_q(a):
            body = f"⟨{a}⟩"
        else:
            body = f"[{c}]"
    else:
        body = f"[{c}]"
    return body if e == 1 else f"{body}^{e}"


def bracket(a: int, period: int) -> QPochProduct:
    """[a] = ((−q_s)^a z; q_s^T)_∞"""
    return QPochProduct.from_atoms(period, {QMonomial.minus_q(a): 1})


def angle(a: int, period: int, order: int = 2) -> QPochProduct:
    """
    ⟨a⟩: ordem 2 → (−(−q_s)^a z; q_s^T)_∞; ordem 3 → Π (1 + x + x²) com
    x = (−q_s)^{a+Ts} z, isto é, os átomos ω(−q_s)^a e ω²(−q_s)^a.
    """
    base = QMonomial.minus_q(a)
    if order == 2:
        return QPochProduct.from_atoms(period, {-base: 1})
    if order == 3:
        return QPochProduct.from_atoms(period, {base * QMonomial(4, 0): 1, base * QMonomial(8, 0): 1})
    raise ValueError(f"Ordem não suportada para ⟨a⟩: {order}")


def curly(a: int, period: int, order: int = 2) -> QPochProduct:
    """{a} = [a]⟨a⟩"""
    return bracket(a, period) * angle(a, period, order)


def poch_expr(period: int, numer: Iterable[QPochProduct] = (), denom: Iterable[QPochProduct] = ()) -> QPochProduct:
    """Monta Π numer / Π denom"""
    out = QPochProduct.one(period)
    for p in numer:
        out = out * p
    for p in denom:
        out = out / p
    return out


def poch_mul(x: QPochProduct, y: QPochProduct) -> QPochProduct:
    return x * y


def poch_substitute(x: QPochProduct, unit, invert_z: bool = False) -> QPochProduct:
    """
    z ↦ unit·z (rótulos deslocados). Com invert_z, z ↦ unit·z⁻¹: só para
    produtos com telescópio finito, e o resultado vale a menos de ≡.
    """
    if not isinstance(unit, QMonomial):
        raise NonUnitSubstitutionError(f"Substituição exige monômio unitário, recebido {unit!r}")
    if not invert_z:
        return x.shifted(unit)
    ratio = poch_to_laurent_ratio(x)
    reflected = ZRational.make(1, ratio.num.reflect(unit), ratio.den.reflect(unit))
    return poch_from_ratio(reflected, x.period)


def poch_to_laurent_ratio(x: QPochProduct) -> ZRational:
    """
    Telescopia o produto: em cada classe c·q_s^{Tℤ} a soma dos expoentes
    precisa ser zero; sobra Π (1 − c_b z)^{E_b}.
    """
    classes: Dict[Tuple[int, Fraction], List[Tuple[Fraction, int]]] = {}
    for c, e in x.atoms:
        key = (c.unit, c.exp % x.period)
        classes.setdefault(key, []).append((c.exp, e))
    num: Counter = Counter()
    den: Counter = Counter()
    scalar = sympy.Integer(1)
    for (unit, _), members in sorted(classes.items()):
        members.sort()
        total = sum(e for _, e in members)
        if total != 0:
            raise InfiniteResidueError("infinite product residue")
        exps = dict(members)
        running = 0
        b = members[0][0]
        last = members[-1][0]
        while b < last:
            running += exps.get(b, 0)
            if running:
                c = QMonomial(unit, b)
                # (1 − c z) = −c (z − c⁻¹)
                scalar = scalar * (-c.to_expr()) ** running
                target = num if running > 0 else den
                target[c.inverse()] += abs(running)
            b += x.period
    return ZRational.make(sympy.simplify(scalar), DenPoly.from_roots(num), DenPoly.from_roots(den))


def poch_from_ratio(ratio: ZRational, period: int) -> QPochProduct:
    """(z − r) ≡ (1 − r⁻¹z) = [r⁻¹]/[r⁻¹q_s^T]; escalares descartados"""
    atoms: Counter = Counter()
    shift = QMonomial(0, period)
    for roots, sign in ((ratio.num, 1), (ratio.den, -1)):
        for r, m in roots.roots:
            c = r.inverse()
            atoms[c] += sign * m
            atoms[c * shift] -= sign * m
    return QPochProduct.from_atoms(period, dict(atoms))


# ---------------------------------------------------------------------------
# Identificação de polinômios especializados


_CYCLOTOMIC_ORDERS = (1, 2, 3, 4, 6, 12)


def _exact_log(value: Fraction, s: int) -> Optional[int]:
    """e com s^e = value, ou None"""
    if value <= 0:
        return None
    e = 0
    v = Fraction(value)
    while v.numerator % s == 0 and v.numerator > 1:
        v /= s
        e += 1
    while v.denominator % s == 0 and v.denominator > 1:
        v *= s
        e -= 1
    return e if v == 1 else None


def _cyclotomic_roots(n: int) -> List[int]:
    return [12 * j // n for j in range(n) if sympy.gcd(j, n) == 1]


def identify_polynomial(poly: Poly, s: int) -> DenPoly:
    """
    Reconstrói um DenPoly a partir de um polinômio sobre Q obtido em q_s = s:
    cada fator irredutível deve ser s^{tφ(n)}·Φ_n(z/s^t).
    """
    poly = Poly(poly, Z, domain=QQ).monic()
    if poly.degree() <= 0:
        return DenPoly.one()
    _, factors = poly.factor_list()
    roots: Counter = Counter()
    for fac, mult in factors:
        fac = fac.monic()
        deg = fac.degree()
        const = Fraction(str(abs(fac.coeffs()[-1])))
        e = _exact_log(const, s)
        if e is None or e % deg:
            raise IdentificationError(f"Fator não monomial em q_s={s}: {fac.as_expr()}")
        t = e // deg
        matched = False
        for n in _CYCLOTOMIC_ORDERS:
            if sympy.totient(n) != deg:
                continue
            candidate = Poly(sympy.expand(sympy.Integer(s) ** (t * deg) * cyclotomic_poly(n, Z / sympy.Integer(s) ** t)), Z, domain=QQ)
            if candidate == fac:
                for k in _cyclotomic_roots(n):
                    roots[QMonomial(k, t)] += mult
                matched = True
                break
        if not matched:
            raise IdentificationError(f"Fator sem forma ciclotômica: {fac.as_expr()}")
    return DenPoly.from_roots(roots)


def identify_monomial(value: Fraction, s: int) -> Optional[QMonomial]:
    """±s^e → QMonomial, ou None se o valor não for monomial"""
    value = Fraction(value)
    if value == 0:
        return None
    sign = 6 if value < 0 else 0
    e = _exact_log(abs(value), s)
    if e is None:
        return None
    return QMonomial(sign, e)


def confirm_identification(candidate: DenPoly, poly: Poly, s: int) -> bool:
    """Confere a identificação num segundo valor de q_s"""
    try:
        return candidate.specialize(s) == Poly(poly, Z, domain=QQ).monic()
    except IdentificationError:
        return False


def parse_factor_spec(spec: str) -> DenPoly:
    """
    Lê a notação compacta das tabelas: "-2,8^2,12" → (z−q²)(z−q⁸)²(z−q¹²);
    "+7,11" → (z+q⁷)(z+q¹¹). Expoentes em unidades de q_s.
    """
    spec = spec.strip()
    if not spec:
        return DenPoly.one()
    sign = -1 if spec[0] == '-' else 1
    roots: Counter = Counter()
    for token in spec[1:].split(','):
        token = token.strip()
        if not token:
            continue
        exp, _, mult = token.partition('^')
        root = QMonomial(0 if sign < 0 else 6, Fraction(exp))
        roots[root] += int(mult) if mult else 1
    return DenPoly.from_roots(roots)
