"""
Aritmética exacta de la extensión bicíclica B_ω^𝓕.

Los conjuntos inductivos no vacíos de ω son colas [n) y se guardan por su
mínimo n. Un elemento es una terna (i, j, [f)) con f en la familia; si la
familia declara el vacío, el ideal {(i, j, ∅)} colapsa en un único ZERO.

Producto de ternas:
  (i1,j1,F1)·(i2,j2,F2) =
    (i1-j1+i2, j2, (j1-i2+F1) ∩ F2)   si j1 < i2
    (i1, j2, F1 ∩ F2)                 si j1 = i2
    (i1, j1-i2+j2, F1 ∩ (i2-j1+F2))   si j1 > i2

Todos los tipos son inmutables y todas las funciones son puras.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator, NamedTuple, Optional, Union

from services.errors import FamilyError, FamilyMembershipError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Conjuntos inductivos
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tail:
    """La cola [n) = {i ∈ ω : i ≥ n}."""
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Índice de cola negativo: {self.n}")

    def __str__(self) -> str:
        return f"[{self.n})"


@dataclass(frozen=True)
class EmptySet:
    def __str__(self) -> str:
        return '∅'


EMPTY = EmptySet()
InductiveSet = Union[Tail, EmptySet]


def shift_intersect(m: int, f1: InductiveSet, f2: InductiveSet) -> InductiveSet:
    """(m + f1) ∩ f2 como subconjunto de ω; el vacío absorbe."""
    if isinstance(f1, EmptySet) or isinstance(f2, EmptySet):
        return EMPTY
    # f2 ⊆ ω recorta la parte negativa de m + f1
    return Tail(max(f1.n + m, f2.n))


# ---------------------------------------------------------------------------
# Elementos
# ---------------------------------------------------------------------------

class Triple(NamedTuple):
    """Terna (i, j, [f)); f es el índice de la cola."""
    i: int
    j: int
    f: int

    @property
    def family_set(self) -> Tail:
        return Tail(self.f)

    def __str__(self) -> str:
        return f"({self.i},{self.j},[{self.f}))"


@dataclass(frozen=True)
class Zero:
    """Clase del ideal {(i, j, ∅)} en el cociente."""

    def __str__(self) -> str:
        return '0'


ZERO = Zero()
Element = Union[Triple, Zero]

UNIT = Triple(0, 0, 0)


# ---------------------------------------------------------------------------
# Familias ω-cerradas
# ---------------------------------------------------------------------------

class ClosureWitness(NamedTuple):
    """[a) ∩ (−n + [b)) = [c) con c fuera de la familia."""
    a: int
    b: int
    n: int
    c: int

    def __str__(self) -> str:
        return f"[{self.a})∩(−{self.n}+[{self.b})) = [{self.c})"


def family_witness(tails) -> Optional[ClosureWitness]:
    """
    Primer contraejemplo de ω-clausura, o None si la familia es cerrada.

    Los índices producidos por (a, b, n) son max(a, b − n): la familia es
    cerrada si y solo si sus colas forman un intervalo. En el primer hueco
    a < b consecutivos, n = 1 produce b − 1 ∉ familia.
    """
    indices = sorted(set(tails))
    if not indices:
        raise FamilyError('Se requiere al menos un índice de cola')
    if indices[0] < 0:
        raise FamilyError(f"Índices de cola negativos: {indices}")
    for a, b in zip(indices, indices[1:]):
        if b - a > 1:
            return ClosureWitness(a, b, 1, b - 1)
    return None


def validate_family(tails) -> bool:
    return family_witness(tails) is None


@dataclass(frozen=True)
class Family:
    """Familia finita ω-cerrada de colas, opcionalmente con el vacío."""
    tails: frozenset
    includes_empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'tails', frozenset(self.tails))
        witness = family_witness(self.tails)
        if witness is not None:
            raise FamilyError(f"Familia no ω-cerrada: {witness}")

    @property
    def sorted_tails(self) -> list[int]:
        return sorted(self.tails)

    def check(self, x: Element) -> None:
        if isinstance(x, Zero):
            if not self.includes_empty:
                raise FamilyMembershipError('ZERO solo existe si la familia contiene ∅')
            return
        if x.i < 0 or x.j < 0:
            raise FamilyMembershipError(f"Coordenadas negativas en {x}")
        if x.f not in self.tails:
            raise FamilyMembershipError(
                f"La cola [{x.f}) de {x} no pertenece a la familia {self.sorted_tails}"
            )

    def __contains__(self, x: object) -> bool:
        try:
            self.check(x)
        except (FamilyMembershipError, AttributeError, TypeError):
            return False
        return True


F2 = Family(frozenset({0, 1}))


# ---------------------------------------------------------------------------
# Producto, inverso, orden y relaciones de Green
# ---------------------------------------------------------------------------

def multiply(x: Element, y: Element, fam: Family = F2) -> Element:
    fam.check(x)
    fam.check(y)
    if isinstance(x, Zero) or isinstance(y, Zero):
        return ZERO
    # max(a + m, b) es shift_intersect(m, [a), [b)) sin construir conjuntos;
    # la intersección de dos colas nunca es vacía.
    if x.j < y.i:
        return Triple(x.i - x.j + y.i, y.j, max(x.f + x.j - y.i, y.f))
    if x.j == y.i:
        return Triple(x.i, y.j, max(x.f, y.f))
    return Triple(x.i, x.j - y.i + y.j, max(x.f, y.f + y.i - x.j))


def multiply_by_sets(x: Element, y: Element, fam: Family = F2) -> Element:
    """El mismo producto evaluado literalmente con shift_intersect."""
    fam.check(x)
    fam.check(y)
    if isinstance(x, Zero) or isinstance(y, Zero):
        return ZERO
    if x.j < y.i:
        f = shift_intersect(x.j - y.i, x.family_set, y.family_set)
        i, j = x.i - x.j + y.i, y.j
    elif x.j == y.i:
        f = shift_intersect(0, x.family_set, y.family_set)
        i, j = x.i, y.j
    else:
        f = shift_intersect(y.i - x.j, y.family_set, x.family_set)
        i, j = x.i, x.j - y.i + y.j
    if isinstance(f, EmptySet):
        return ZERO
    return Triple(i, j, f.n)


def inverse(x: Element) -> Element:
    if isinstance(x, Zero):
        return ZERO
    return Triple(x.j, x.i, x.f)


def is_idempotent(x: Element, fam: Family = F2) -> bool:
    return multiply(x, x, fam) == x


def natural_leq(x: Element, y: Element, fam: Family = F2) -> bool:
    """x ≼ y  ⇔  x = x·x⁻¹·y."""
    return x == multiply(multiply(x, inverse(x), fam), y, fam)


class GreenRelation(str, Enum):
    R = 'R'
    L = 'L'
    H = 'H'


def green_related(x: Element, y: Element, relation, fam: Family = F2) -> bool:
    relation = GreenRelation(relation)
    same_r = multiply(x, inverse(x), fam) == multiply(y, inverse(y), fam)
    if relation is GreenRelation.R:
        return same_r
    same_l = multiply(inverse(x), x, fam) == multiply(inverse(y), y, fam)
    if relation is GreenRelation.L:
        return same_l
    return same_r and same_l


def in_layer(x: Element, p: int) -> bool:
    """Pertenencia a B^{𝓕_p} = {(i, j, [p))}."""
    return isinstance(x, Triple) and x.f == p


# ---------------------------------------------------------------------------
# Ventanas
# ---------------------------------------------------------------------------

def window(bound: int, fam: Family = F2) -> list[Triple]:
    """Elementos con i, j ≤ bound en orden canónico (i, j, f)."""
    tails = fam.sorted_tails
    return [Triple(i, j, f) for i, j, f in product(range(bound + 1), range(bound + 1), tails)]


def idempotents(bound: int, fam: Family = F2) -> list[Triple]:
    return [Triple(i, i, f) for i in range(bound + 1) for f in fam.sorted_tails]


# ---------------------------------------------------------------------------
# Subconjuntos acotados (test de inductividad)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundedSubset:
    """
    F = finite_part ∪ [tail) en forma canónica: la parte finita no toca la
    cola y el elemento anterior a la cola no está en la parte finita.
    """
    finite_part: frozenset = frozenset()
    tail: Optional[int] = None

    def __post_init__(self):
        finite = frozenset(self.finite_part)
        if any(k < 0 for k in finite):
            raise ValueError(f"Elementos negativos en {sorted(finite)}")
        tail = self.tail
        if tail is not None:
            if tail < 0:
                raise ValueError(f"Cola negativa: {tail}")
            finite = frozenset(k for k in finite if k < tail)
            while tail > 0 and tail - 1 in finite:
                tail -= 1
                finite = finite - {tail}
        object.__setattr__(self, 'finite_part', finite)
        object.__setattr__(self, 'tail', tail)

    @classmethod
    def of(cls, inductive: InductiveSet) -> 'BoundedSubset':
        if isinstance(inductive, EmptySet):
            return cls()
        return cls(frozenset(), inductive.n)

    def contains(self, k: int) -> bool:
        return k in self.finite_part or (self.tail is not None and k >= self.tail)

    def shift(self, m: int) -> 'BoundedSubset':
        """(m + F) ∩ ω."""
        finite = frozenset(k + m for k in self.finite_part if k + m >= 0)
        tail = None if self.tail is None else max(self.tail + m, 0)
        return BoundedSubset(finite, tail)

    def intersect(self, other: 'BoundedSubset') -> 'BoundedSubset':
        horizon = max([*self.finite_part, *other.finite_part, self.tail or 0, other.tail or 0]) + 1
        finite = frozenset(k for k in range(horizon) if self.contains(k) and other.contains(k))
        if self.tail is None or other.tail is None:
            return BoundedSubset(finite, None)
        return BoundedSubset(finite, max(self.tail, other.tail))

    def is_inductive(self) -> bool:
        return all(self.contains(k + 1) for k in self.finite_part)

    def as_inductive_set(self) -> InductiveSet:
        """Todo inductivo no vacío de ω es una cola; el vacío también es inductivo."""
        if not self.is_inductive():
            raise ValueError(f"{self} no es inductivo")
        if self.tail is None:
            return EMPTY
        return Tail(self.tail)

    def __str__(self) -> str:
        parts = [str(k) for k in sorted(self.finite_part)]
        if self.tail is not None:
            parts.append(f"[{self.tail})")
        return '{' + ', '.join(parts) + '}' if parts else '∅'


def subsets_with_support(max_finite: int, max_tail: int) -> Iterator[BoundedSubset]:
    """Todas las partes finitas de {0..max_finite-1} con cola opcional ≤ max_tail."""
    tails = [None, *range(max_tail + 1)]
    for mask in range(1 << max_finite):
        finite = frozenset(k for k in range(max_finite) if mask >> k & 1)
        for tail in tails:
            yield BoundedSubset(finite, tail)


def interval_subsets(max_support: int, max_tail: int) -> Iterator[BoundedSubset]:
    """Partes finitas {low..high} ⊆ {0..max_support-1} con cola opcional ≤ max_tail."""
    tails = [None, *range(max_tail + 1)]
    for low in range(max_support):
        for high in range(low, max_support):
            finite = frozenset(range(low, high + 1))
            for tail in tails:
                yield BoundedSubset(finite, tail)
