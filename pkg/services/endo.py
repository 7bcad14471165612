"""
Cálculo simbólico de endomorfismos de B_ω^𝓕² en forma normal ε₁ϖⁿ.

Convenciones:
- Las aplicaciones actúan por la derecha: ε₁ϖⁿ significa "primero ε₁, luego ϖ n veces".
- compose(f, g) es "f y después g".
- La parte monoidal es una de α_{k,p}, β_{k,p}, γ_k, δ_k o χ_{0,0}; la identidad es α_{1,0}.
- Los anuladores se guardan como (χ_{0,0}, n) con n = 2s + q; χ_{s,q} es solo notación.

Fórmulas de ϖⁿ (n = 2m ó 2m+1):
  (i,j,[0))ϖ^{2m}   = (i+m, j+m, [0))      (i,j,[1))ϖ^{2m}   = (i+m, j+m, [1))
  (i,j,[0))ϖ^{2m+1} = (i+m, j+m, [1))      (i,j,[1))ϖ^{2m+1} = (i+m+1, j+m+1, [0))
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Callable, Mapping, NamedTuple, Optional, Union

from services.core import F2, UNIT, Triple, multiply, window
from services.errors import (
    ClassificationError,
    NotAnEndomorphismError,
    ParameterRangeError,
    WindowMapError,
)

logger = logging.getLogger(__name__)

# Imágenes suficientes para leer n, k, p y la familia de destino
SAMPLE_POINTS = (
    Triple(0, 0, 0),
    Triple(1, 1, 0),
    Triple(2, 2, 0),
    Triple(0, 0, 1),
    Triple(1, 1, 1),
    Triple(0, 1, 0),
    Triple(1, 0, 0),
)
MIN_WINDOW_BOUND = max(max(x.i, x.j) for x in SAMPLE_POINTS)


# ---------------------------------------------------------------------------
# ϖ y sus potencias
# ---------------------------------------------------------------------------

def apply_pi(x: Triple) -> Triple:
    F2.check(x)
    if x.f == 0:
        return Triple(x.i, x.j, 1)
    return Triple(x.i + 1, x.j + 1, 0)


def apply_pi_power(x: Triple, n: int) -> Triple:
    F2.check(x)
    if n < 0:
        raise ValueError(f"Potencia negativa: {n}")
    m, odd = divmod(n, 2)
    if not odd:
        return Triple(x.i + m, x.j + m, x.f)
    if x.f == 0:
        return Triple(x.i + m, x.j + m, 1)
    return Triple(x.i + m + 1, x.j + m + 1, 0)


def in_pi_power_image(n: int, x: Triple) -> bool:
    m, odd = divmod(n, 2)
    low = min(x.i, x.j)
    if not odd:
        return low >= m
    return low >= m if x.f == 1 else low >= m + 1


def pi_power_inverse(n: int, x: Triple) -> Triple:
    """(ϖⁿ)⁻¹ restringida a la imagen de ϖⁿ."""
    if not in_pi_power_image(n, x):
        raise NotAnEndomorphismError(f"{x} no está en la imagen de ϖ^{n}")
    m, odd = divmod(n, 2)
    if not odd:
        return Triple(x.i - m, x.j - m, x.f)
    if x.f == 1:
        return Triple(x.i - m, x.j - m, 0)
    return Triple(x.i - m - 1, x.j - m - 1, 1)


# ---------------------------------------------------------------------------
# Partes monoidales y formas normales
# ---------------------------------------------------------------------------

class PartKind(str, Enum):
    ALPHA = 'alpha'
    BETA = 'beta'
    GAMMA = 'gamma'
    DELTA = 'delta'
    ANN = 'chi'


@dataclass(frozen=True, order=True)
class MonoidPart:
    kind: PartKind
    k: int = 0
    p: int = 0

    def __post_init__(self):
        kind, k, p = PartKind(self.kind), self.k, self.p
        object.__setattr__(self, 'kind', kind)
        if kind is PartKind.ALPHA:
            ok = k >= 1 and 0 <= p <= k - 1
        elif kind is PartKind.BETA:
            ok = k >= 2 and 1 <= p <= k - 1
        elif kind in (PartKind.GAMMA, PartKind.DELTA):
            ok = k >= 1 and p == 0
        else:
            ok = k == 0 and p == 0
        if not ok:
            raise ParameterRangeError(f"Parámetros fuera de rango para {kind.value}: k={k}, p={p}")

    @classmethod
    def alpha(cls, k: int, p: int) -> 'MonoidPart':
        return cls(PartKind.ALPHA, k, p)

    @classmethod
    def beta(cls, k: int, p: int) -> 'MonoidPart':
        return cls(PartKind.BETA, k, p)

    @classmethod
    def gamma(cls, k: int) -> 'MonoidPart':
        return cls(PartKind.GAMMA, k)

    @classmethod
    def delta(cls, k: int) -> 'MonoidPart':
        return cls(PartKind.DELTA, k)

    @classmethod
    def ann_unit(cls) -> 'MonoidPart':
        return cls(PartKind.ANN)

    @classmethod
    def identity(cls) -> 'MonoidPart':
        return cls(PartKind.ALPHA, 1, 0)

    @property
    def is_identity(self) -> bool:
        return self.kind is PartKind.ALPHA and self.k == 1

    def __str__(self) -> str:
        if self.kind is PartKind.ANN:
            return 'chi[0,0]'
        if self.is_identity:
            return 'id'
        if self.kind in (PartKind.ALPHA, PartKind.BETA):
            return f"{self.kind.value}[{self.k},{self.p}]"
        return f"{self.kind.value}[{self.k}]"

    @property
    def coefficients(self) -> tuple[int, int, int]:
        """(K, o, t): (i,j,[0)) ↦ (Ki, Kj, [0)) y (i,j,[1)) ↦ (o+Ki, o+Kj, [t))."""
        if self.kind is PartKind.ALPHA:
            return self.k, self.p, 1
        if self.kind is PartKind.BETA:
            return self.k, self.p, 0
        if self.kind is PartKind.GAMMA:
            return self.k, 0, 0
        if self.kind is PartKind.DELTA:
            return self.k, self.k, 0
        return 0, 0, 0


def apply_part(part: MonoidPart, x: Triple) -> Triple:
    F2.check(x)
    k, p = part.k, part.p
    if part.kind is PartKind.ANN:
        return UNIT
    if x.f == 0:
        return Triple(k * x.i, k * x.j, 0)
    if part.kind is PartKind.ALPHA:
        return Triple(p + k * x.i, p + k * x.j, 1)
    if part.kind is PartKind.BETA:
        return Triple(p + k * x.i, p + k * x.j, 0)
    if part.kind is PartKind.GAMMA:
        return Triple(k * x.i, k * x.j, 0)
    return Triple(k * (x.i + 1), k * (x.j + 1), 0)


@dataclass(frozen=True, order=True)
class EndoNormalForm:
    """ε₁ϖⁿ: aplicar monoid_part y luego ϖ `power` veces."""
    monoid_part: MonoidPart
    power: int = 0

    def __post_init__(self):
        if self.power < 0:
            raise ParameterRangeError(f"Potencia de ϖ negativa: {self.power}")

    def __iter__(self):
        yield self.monoid_part
        yield self.power

    def __call__(self, x: Triple) -> Triple:
        return apply(self, x)

    def __str__(self) -> str:
        """Texto canónico: `alpha[2,1] ; w^3`, `w^4`, `id`, `chi[2,1]`."""
        part = self.monoid_part
        if part.kind is PartKind.ANN:
            s, q = divmod(self.power, 2)
            return f"chi[{s},{q}]"
        if self.power == 0:
            return str(part)
        if part.is_identity:
            return f"w^{self.power}"
        return f"{part} ; w^{self.power}"


IDENTITY = EndoNormalForm(MonoidPart.identity(), 0)


def pi_power(n: int) -> EndoNormalForm:
    return EndoNormalForm(MonoidPart.identity(), n)


def annihilating(s: int, q: int) -> EndoNormalForm:
    """χ_{s,q}: constante en (s,s,[q)), guardada como (χ_{0,0}, 2s+q)."""
    if s < 0 or q not in (0, 1):
        raise ParameterRangeError(f"Parámetros fuera de rango para chi: s={s}, q={q}")
    return EndoNormalForm(MonoidPart.ann_unit(), 2 * s + q)


def chi_params(e: EndoNormalForm) -> tuple[int, int]:
    if e.monoid_part.kind is not PartKind.ANN:
        raise ValueError(f"{e} no es anulador")
    return divmod(e.power, 2)


def apply(e: EndoNormalForm, x: Triple) -> Triple:
    return apply_pi_power(apply_part(e.monoid_part, x), e.power)


class EndoPredicates(NamedTuple):
    injective: bool
    annihilating: bool
    monoidal: bool


def predicates(e: EndoNormalForm) -> EndoPredicates:
    kind = e.monoid_part.kind
    return EndoPredicates(
        injective=kind in (PartKind.ALPHA, PartKind.BETA),
        annihilating=kind is PartKind.ANN,
        monoidal=e.power == 0,
    )


# ---------------------------------------------------------------------------
# Acción afín (camino rápido de composición)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineAction:
    """(i,j,[r)) ↦ (K·i + offsets[r], K·j + offsets[r], [tags[r]))."""
    scale: int
    offsets: tuple[int, int]
    tags: tuple[int, int]

    @classmethod
    def of(cls, e: EndoNormalForm) -> 'AffineAction':
        scale, offset, tag = e.monoid_part.coefficients
        part = cls(scale, (0, offset), (0, tag))
        return part.then(cls.of_pi_power(e.power))

    @classmethod
    def of_pi_power(cls, n: int) -> 'AffineAction':
        m, odd = divmod(n, 2)
        if not odd:
            return cls(1, (m, m), (0, 1))
        return cls(1, (m, m + 1), (1, 0))

    def apply(self, x: Triple) -> Triple:
        o, t = self.offsets[x.f], self.tags[x.f]
        return Triple(self.scale * x.i + o, self.scale * x.j + o, t)

    def then(self, other: 'AffineAction') -> 'AffineAction':
        offsets = tuple(other.scale * self.offsets[r] + other.offsets[self.tags[r]] for r in (0, 1))
        tags = tuple(other.tags[self.tags[r]] for r in (0, 1))
        return AffineAction(self.scale * other.scale, offsets, tags)

    def normal_form(self) -> EndoNormalForm:
        n = 2 * self.offsets[0] + self.tags[0]
        residual = self.then_inverse_pi(n)
        if residual.offsets[0] != 0 or residual.tags[0] != 0:
            raise ClassificationError(f"Acción no monoidal tras quitar ϖ^{n}: {residual}")
        part = _part_from_coefficients(residual.scale, residual.offsets[1], residual.tags[1])
        return EndoNormalForm(part, n)

    def then_inverse_pi(self, n: int) -> 'AffineAction':
        m, odd = divmod(n, 2)
        offsets, tags = [], []
        for o, t in zip(self.offsets, self.tags):
            if not odd:
                offsets.append(o - m)
                tags.append(t)
            elif t == 1:
                offsets.append(o - m)
                tags.append(0)
            else:
                offsets.append(o - m - 1)
                tags.append(1)
        return AffineAction(self.scale, tuple(offsets), tuple(tags))


def _part_from_coefficients(k: int, p: int, q: int) -> MonoidPart:
    """Parte monoidal con (1,1,[0)) ↦ (k,k,[0)) y (0,0,[1)) ↦ (p,p,[q))."""
    try:
        if k == 0:
            if p != 0 or q != 0:
                raise ClassificationError(f"Anulador con (0,0,[1)) ↦ ({p},{p},[{q}))")
            return MonoidPart.ann_unit()
        if q == 1:
            return MonoidPart.alpha(k, p)
        if p == 0:
            return MonoidPart.gamma(k)
        if p == k:
            return MonoidPart.delta(k)
        return MonoidPart.beta(k, p)
    except ParameterRangeError as exc:
        raise ClassificationError(f"Ninguna parte monoidal con k={k}, p={p}, q={q}: {exc}") from exc


def compose_algebraic(f: EndoNormalForm, g: EndoNormalForm) -> EndoNormalForm:
    return AffineAction.of(f).then(AffineAction.of(g)).normal_form()


# ---------------------------------------------------------------------------
# Mapas de ventana
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowMap:
    """Restricción finita de una aplicación a {(i,j,[p)) : i,j ≤ N}."""
    window_bound: int
    entries: Mapping[Triple, Triple]
    closed_form: Optional[Callable[[Triple], Triple]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        entries = {Triple(*k): Triple(*v) for k, v in dict(self.entries).items()}
        expected = set(window(self.window_bound))
        if set(entries) != expected:
            missing = len(expected - set(entries))
            extra = len(set(entries) - expected)
            raise WindowMapError(
                f"La ventana N={self.window_bound} no es total: faltan {missing}, sobran {extra}"
            )
        for source, target in entries.items():
            if target not in F2:
                raise WindowMapError(f"Imagen inválida {target} para {source}")
        object.__setattr__(self, 'entries', MappingProxyType(entries))

    @classmethod
    def from_callable(cls, fn: Callable[[Triple], Triple], bound: int) -> 'WindowMap':
        return cls(bound, {x: fn(x) for x in window(bound)}, closed_form=fn)

    @classmethod
    def from_normal_form(cls, e: EndoNormalForm, bound: int) -> 'WindowMap':
        return cls.from_callable(e, bound)

    def __getitem__(self, x: Triple) -> Triple:
        return self.entries[x]

    def __contains__(self, x: object) -> bool:
        return x in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def evaluate(self, x: Triple) -> Triple:
        """Usa la forma cerrada fuera de la ventana si existe."""
        if x in self.entries:
            return self.entries[x]
        if self.closed_form is None:
            raise KeyError(x)
        return self.closed_form(x)


# ---------------------------------------------------------------------------
# Factorización, clasificación y composición
# ---------------------------------------------------------------------------

EndoInput = Union[Callable[[Triple], Triple], WindowMap]


def factor(e: EndoInput, domain: Optional[list[Triple]] = None) -> EndoNormalForm:
    """
    Factoriza ε = ε₁ϖⁿ.

    (0,0,[0))ε = (s,s,[p)) da n = 2s + p; ε₁ = ε(ϖⁿ)⁻¹ se lee en los puntos de muestra y
    el candidato se contrasta con ε en todo `domain` (toda la ventana si ε
    es un WindowMap, window(2) si es una función).
    """
    if isinstance(e, WindowMap):
        evaluate = e.__getitem__
        domain = domain if domain is not None else list(e.entries)
        if e.window_bound < MIN_WINDOW_BOUND:
            raise ClassificationError(
                f"Ventana N={e.window_bound} demasiado pequeña; se requiere N ≥ {MIN_WINDOW_BOUND}"
            )
    else:
        evaluate = e
        domain = domain if domain is not None else window(MIN_WINDOW_BOUND)

    unit_image = evaluate(UNIT)
    if unit_image.i != unit_image.j:
        raise NotAnEndomorphismError(f"La imagen de la unidad {unit_image} no es idempotente")
    n = 2 * unit_image.i + unit_image.f

    def residual(x: Triple) -> Triple:
        return pi_power_inverse(n, evaluate(x))

    scale_image = residual(Triple(1, 1, 0))
    if scale_image.i != scale_image.j or scale_image.f != 0:
        raise ClassificationError(f"(1,1,[0)) ↦ {scale_image} no es de la forma (k,k,[0))")
    k = scale_image.i
    if k == 0:
        part = _part_from_coefficients(0, 0, 0)
    else:
        tag_image = residual(Triple(0, 0, 1))
        if tag_image.i != tag_image.j:
            raise ClassificationError(f"(0,0,[1)) ↦ {tag_image} no es idempotente")
        part = _part_from_coefficients(k, tag_image.i, tag_image.f)

    candidate = EndoNormalForm(part, n)
    for x in domain:
        if evaluate(x) != apply(candidate, x):
            raise ClassificationError(
                f"{candidate} no reproduce la aplicación en {x}: {evaluate(x)} ≠ {apply(candidate, x)}"
            )
    logger.debug("factor -> part=%s n=%s", part, n)
    return candidate


def classify_window(m: WindowMap, check_homomorphism: bool = True) -> EndoNormalForm:
    if any(x not in m for x in SAMPLE_POINTS):
        raise ClassificationError(
            f"Ventana N={m.window_bound} demasiado pequeña; se requiere N ≥ {MIN_WINDOW_BOUND}"
        )
    if check_homomorphism:
        from services.verify import check_homomorphism as _check

        report = _check(m)
        if not report.ok:
            x, y = report.violations[0][:2]
            raise NotAnEndomorphismError(
                f"La ley de homomorfismo falla en {len(report.violations)} pares, p. ej. {x}·{y}"
            )
    return factor(m)


def compose(f: EndoNormalForm, g: EndoNormalForm) -> EndoNormalForm:
    """f y después g, por evaluación puntual y factorización."""
    return factor(lambda x: apply(g, apply(f, x)))


# ---------------------------------------------------------------------------
# Subsemigrupos esquina
# ---------------------------------------------------------------------------

class CornerDescriptor(NamedTuple):
    """B(s, p) = (s,s,[p))·S·(s,s,[p))."""
    s: int
    p: int

    @property
    def idempotent(self) -> Triple:
        return Triple(self.s, self.s, self.p)

    @property
    def pi_exponent(self) -> int:
        return 2 * self.s + self.p


def corner_membership(c: CornerDescriptor, x: Triple) -> bool:
    e = c.idempotent
    return multiply(multiply(e, x), e) == x


def corner_isomorphism(c: CornerDescriptor):
    """ϖ^{2s+p}: S → B(s,p) y su inversa."""
    n = c.pi_exponent

    def forward(x: Triple) -> Triple:
        return apply_pi_power(x, n)

    def backward(x: Triple) -> Triple:
        if not corner_membership(c, x):
            raise ValueError(f"{x} no pertenece a B({c.s},{c.p})")
        return pi_power_inverse(n, x)

    return forward, backward


# ---------------------------------------------------------------------------
# Barridos y puntos fijos
# ---------------------------------------------------------------------------

def monoid_parts(max_k: int) -> list[MonoidPart]:
    parts = []
    for k in range(1, max_k + 1):
        parts.extend(MonoidPart.alpha(k, p) for p in range(k))
    for k in range(2, max_k + 1):
        parts.extend(MonoidPart.beta(k, p) for p in range(1, k))
    parts.extend(MonoidPart.gamma(k) for k in range(1, max_k + 1))
    parts.extend(MonoidPart.delta(k) for k in range(1, max_k + 1))
    parts.append(MonoidPart.ann_unit())
    return parts


def sweep(max_k: int = 4, max_n: int = 5) -> list[EndoNormalForm]:
    return [EndoNormalForm(part, n) for part in monoid_parts(max_k) for n in range(max_n + 1)]


def fixed_points(e: EndoNormalForm, bound: int) -> list[Triple]:
    return [x for x in window(bound) if apply(e, x) == x]
