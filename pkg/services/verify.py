"""
Oráculos exhaustivos sobre ventanas acotadas.

Cada comprobación devuelve un LawReport; las violaciones son datos, no
excepciones. Los oráculos no usan los caminos rápidos que validan:
- ϖⁿ se compara con ϖ iterada,
- compose se compara con la evaluación puntual,
- las esquinas se deciden solo con productos.

Los recorridos siguen el orden canónico de core.window, así que los informes
son reproducibles aunque el bucle exterior se reparta entre procesos.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import chain, product
from typing import Callable, Iterable, Optional

from services import core, endo
from services.core import F2, BoundedSubset, Family, GreenRelation, Tail, Triple
from services.endo import (
    IDENTITY,
    CornerDescriptor,
    EndoNormalForm,
    WindowMap,
)

logger = logging.getLogger(__name__)

TRIPLE_WINDOW = int(os.getenv('VERIFY_TRIPLE_WINDOW', '6'))
MAP_WINDOW = int(os.getenv('VERIFY_MAP_WINDOW', '8'))
CORNER_WINDOW = int(os.getenv('VERIFY_CORNER_WINDOW', '10'))
VERIFY_WORKERS = int(os.getenv('VERIFY_WORKERS', '1'))

# Barridos por defecto: k ≤ 4, p legal, n ≤ 5
SWEEP_MAX_K = 4
SWEEP_MAX_N = 5
ANNIHILATING_MAX_N = 10
INVERSE_SEARCH_BOUND = 12
PI_POWER_MAX_N = 12
CORNER_MAX_S = 4
FAMILY_MAX_INDEX = 8
INDUCTIVE_FINITE_SUPPORT = 10
INDUCTIVE_MAX_TAIL = 20
INDUCTIVE_INTERVAL_SUPPORT = 20
COMPOSITION_ASSOC_MAX_K = 3
COMPOSITION_ASSOC_MAX_N = 3

Multiply = Callable[..., core.Element]


@dataclass
class LawReport:
    law_name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, holds: bool, *counterexample) -> None:
        self.checked += 1
        if not holds:
            self.violations.append(tuple(counterexample))

    def merge(self, other: 'LawReport') -> None:
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.skipped += other.skipped

    def to_dict(self, max_violations: int = 20) -> dict:
        return {
            'law': self.law_name,
            'ok': self.ok,
            'checked': self.checked,
            'skipped': self.skipped,
            'violation_count': len(self.violations),
            'violations': [
                [str(item) for item in violation]
                for violation in self.violations[:max_violations]
            ],
        }


def _ordered_map(fn: Callable, items: list, workers: int) -> list:
    """map con el orden de entrada; en paralelo solo si workers > 1."""
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _merged(law_name: str, parts: Iterable[LawReport]) -> LawReport:
    report = LawReport(law_name)
    for part in parts:
        report.merge(part)
    return report


# ---------------------------------------------------------------------------
# Leyes del semigrupo
# ---------------------------------------------------------------------------

def _associativity_row(x: Triple, elements: list, fam: Family, multiply: Multiply) -> LawReport:
    report = LawReport('associativity')
    cache: dict = {}

    def mul(a, b):
        key = (a, b)
        value = cache.get(key)
        if value is None:
            value = cache[key] = multiply(a, b, fam)
        return value

    for y in elements:
        xy = mul(x, y)
        for z in elements:
            lhs = mul(xy, z)
            rhs = mul(x, mul(y, z))
            report.record(lhs == rhs, x, y, z, lhs, rhs)
    return report


def check_associativity(
    bound: int,
    fam: Family = F2,
    multiply: Multiply = None,
    workers: int = 1,
) -> LawReport:
    multiply = multiply or core.multiply
    elements = core.window(bound, fam)
    row = partial(_associativity_row, elements=elements, fam=fam, multiply=multiply)
    return _merged(f'associativity N={bound} tails={fam.sorted_tails}', _ordered_map(row, elements, workers))


def check_unit(bound: int, multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'unit N={bound}')
    for x in core.window(bound):
        left, right = multiply(core.UNIT, x), multiply(x, core.UNIT)
        report.record(left == x == right, x, left, right)
    return report


def check_inverse_uniqueness(bound: int, search_bound: int = INVERSE_SEARCH_BOUND,
                             multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'inverse uniqueness N={bound} search={search_bound}')
    candidates = core.window(search_bound)
    for x in core.window(bound):
        found = [
            y for y in candidates
            if multiply(multiply(x, y), x) == x and multiply(multiply(y, x), y) == y
        ]
        report.record(found == [core.inverse(x)], x, found)
    return report


def check_idempotent_characterization(bound: int, multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'idempotents are (i,i,[p)) N={bound}')
    for x in core.window(bound):
        by_square = multiply(x, x) == x
        report.record(by_square == (x.i == x.j), x, by_square)
    return report


def check_idempotents_commute(bound: int, multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'idempotents commute N={bound}')
    units = core.idempotents(bound)
    for e, f in product(units, units):
        ef, fe = multiply(e, f), multiply(f, e)
        report.record(ef == fe, e, f, ef, fe)
    return report


def _leq(x, y, multiply: Multiply) -> bool:
    return x == multiply(multiply(x, core.inverse(x)), y)


def check_natural_order(bound: int, multiply: Multiply = None) -> LawReport:
    """x = x·x⁻¹·y  ⇔  x = y·e para algún idempotente e (búsqueda hasta 2N)."""
    multiply = multiply or core.multiply
    report = LawReport(f'natural order closed form N={bound}')
    elements = core.window(bound)
    units = core.idempotents(2 * bound)
    for x, y in product(elements, elements):
        closed = _leq(x, y, multiply)
        exists = any(multiply(y, e) == x for e in units)
        report.record(closed == exists, x, y, closed, exists)
    return report


def check_natural_order_is_partial_order(bound: int, multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'natural order is a partial order N={bound}')
    elements = core.window(bound)
    above = {x: {y for y in elements if _leq(x, y, multiply)} for x in elements}
    for x in elements:
        report.record(x in above[x], 'reflexive', x)
        for y in sorted(above[x]):
            if y != x:
                report.record(x not in above[y], 'antisymmetric', x, y)
            for z in sorted(above[y]):
                report.record(z in above[x], 'transitive', x, y, z)
    return report


def check_green_relations(bound: int, multiply: Multiply = None) -> LawReport:
    """R, L, H son equivalencias y H es la igualdad (semigrupo combinatorio)."""
    multiply = multiply or core.multiply
    report = LawReport(f'green R/L/H equivalences N={bound}')
    elements = core.window(bound)
    keys = {
        x: (multiply(x, core.inverse(x)), multiply(core.inverse(x), x))
        for x in elements
    }
    for relation in GreenRelation:
        related = {
            x: {y for y in elements if core.green_related(x, y, relation)}
            for x in elements
        }
        for x in elements:
            report.record(x in related[x], relation.value, 'reflexive', x)
            for y in sorted(related[x]):
                report.record(x in related[y], relation.value, 'symmetric', x, y)
                report.record(related[y] == related[x], relation.value, 'transitive', x, y)
                if relation is GreenRelation.R:
                    report.record(keys[x][0] == keys[y][0], 'R', 'x·x⁻¹', x, y)
                elif relation is GreenRelation.L:
                    report.record(keys[x][1] == keys[y][1], 'L', 'x⁻¹·x', x, y)
                else:
                    report.record(x == y, 'H', 'trivial', x, y)
    return report


def check_inductive_characterization(f: BoundedSubset) -> tuple[bool, bool]:
    """((−1+F) ∩ F = F, F inductivo)."""
    lhs = f.shift(-1).intersect(f) == f
    rhs = all(f.contains(k + 1) for k in range(_horizon(f)) if f.contains(k))
    return lhs, rhs


def _horizon(f: BoundedSubset) -> int:
    return max([*f.finite_part, f.tail or 0]) + 2


def check_inductive_subsets(max_finite: int = INDUCTIVE_FINITE_SUPPORT,
                            max_tail: int = INDUCTIVE_MAX_TAIL,
                            interval_support: int = INDUCTIVE_INTERVAL_SUPPORT) -> LawReport:
    """
    Todas las partes finitas sobre {0..max_finite-1} y, además, los
    intervalos finitos sobre {0..interval_support-1}; cola opcional ≤ max_tail.
    """
    report = LawReport(
        f'inductive iff (−1+F)∩F=F finite⊆{{0..{max_finite - 1}}} '
        f'intervals⊆{{0..{interval_support - 1}}} tail≤{max_tail}'
    )
    subsets = chain(
        core.subsets_with_support(max_finite, max_tail),
        core.interval_subsets(interval_support, max_tail),
    )
    for subset in subsets:
        lhs, rhs = check_inductive_characterization(subset)
        report.record(lhs == rhs, subset, lhs, rhs)
        if rhs:
            # todo inductivo es una cola o el vacío
            as_set = subset.as_inductive_set()
            report.record(BoundedSubset.of(as_set) == subset, subset, as_set)
    return report


def check_zero_quotient(bound: int, multiply: Multiply = None) -> LawReport:
    """ZERO absorbe y las ternas de una familia con ∅ forman un subsemigrupo."""
    multiply = multiply or core.multiply
    fam = Family(frozenset({0, 1, 2}), includes_empty=True)
    report = LawReport(f'zero quotient N={bound}')
    elements = core.window(bound, fam)
    for x in elements:
        report.record(multiply(core.ZERO, x, fam) == core.ZERO == multiply(x, core.ZERO, fam), x)
        for y in elements:
            xy = multiply(x, y, fam)
            report.record(isinstance(xy, Triple) and xy.f in fam.tails, x, y, xy)
    return report


def check_layers(bound: int, multiply: Multiply = None) -> LawReport:
    multiply = multiply or core.multiply
    report = LawReport(f'layers B^(F_p) are subsemigroups N={bound}')
    for p in (0, 1):
        layer = [x for x in core.window(bound) if core.in_layer(x, p)]
        for x, y in product(layer, layer):
            xy = multiply(x, y)
            report.record(core.in_layer(xy, p), p, x, y, xy)
    return report


def _brute_closure_index(a: int, b: int, n: int) -> int:
    meet = BoundedSubset.of(Tail(a)).intersect(BoundedSubset.of(Tail(b)).shift(-n))
    return meet.as_inductive_set().n


def oracle_family_interval(max_index: int = FAMILY_MAX_INDEX) -> LawReport:
    report = LawReport(f'ω-closure oracle subsets of {{0..{max_index}}}')
    universe = range(max_index + 1)
    for mask in range(1, 1 << (max_index + 1)):
        tails = {k for k in universe if mask >> k & 1}
        brute = all(
            _brute_closure_index(a, b, n) in tails
            for a in tails for b in tails for n in universe
        )
        interval = tails == set(range(min(tails), max(tails) + 1))
        witness = core.family_witness(tails)
        fast = witness is None
        report.record(brute == interval == fast, sorted(tails), brute, interval, fast)
        if witness is not None:
            produced = _brute_closure_index(witness.a, witness.b, witness.n)
            report.record(produced == witness.c and produced not in tails, sorted(tails), witness)
    return report


# ---------------------------------------------------------------------------
# Leyes de endomorfismos
# ---------------------------------------------------------------------------

def check_homomorphism(m: WindowMap, multiply: Multiply = None) -> LawReport:
    """
    (x·y)m = (x)m·(y)m en todos los pares de la ventana.

    Con forma cerrada el producto puede salir de la ventana; sin ella esos
    pares se cuentan como omitidos.
    """
    multiply = multiply or core.multiply
    if m.window_bound < 2:
        raise ValueError(f"Se requiere una ventana N ≥ 2 (N={m.window_bound})")
    report = LawReport(f'homomorphism N={m.window_bound}')
    elements = list(m.entries)
    for x, y in product(elements, elements):
        xy = multiply(x, y)
        if xy not in m and m.closed_form is None:
            report.skipped += 1
            continue
        lhs = m.evaluate(xy)
        rhs = multiply(m[x], m[y])
        report.record(lhs == rhs, x, y, lhs, rhs)
    return report


def check_pi(bound: int, multiply: Multiply = None) -> LawReport:
    """ϖ es un endomorfismo inyectivo en la ventana."""
    pi_map = WindowMap.from_callable(endo.apply_pi, bound)
    report = check_homomorphism(pi_map, multiply)
    report.law_name = f'ϖ endomorphism and injective N={bound}'
    images = list(pi_map.entries.values())
    report.record(len(set(images)) == len(images), 'injective')
    return report


def check_pi_powers(bound: int, max_n: int = PI_POWER_MAX_N) -> LawReport:
    report = LawReport(f'ϖⁿ closed form = iteration N={bound} n≤{max_n}')
    for x in core.window(bound):
        iterated = x
        for n in range(max_n + 1):
            closed = endo.apply_pi_power(x, n)
            report.record(closed == iterated, x, n, closed, iterated)
            iterated = endo.apply_pi(iterated)
    return report


def check_corners(bound: int, max_s: int = CORNER_MAX_S, multiply: Multiply = None) -> LawReport:
    """B(s,0) = Im ϖ^{2s} y B(s,1) = Im ϖ^{2s+1}, decidido solo con productos."""
    multiply = multiply or core.multiply
    report = LawReport(f'corner B(s,p) = image of ϖ^(2s+p) N={bound} s≤{max_s}')
    for s, p in product(range(max_s + 1), (0, 1)):
        e = Triple(s, s, p)
        corner = CornerDescriptor(s, p)
        forward, backward = endo.corner_isomorphism(corner)
        for x in core.window(bound):
            member = multiply(multiply(e, x), e) == x
            image = endo.in_pi_power_image(2 * s + p, x)
            report.record(member == image, corner, x, member, image)
            if member and image:
                source = backward(x)
                report.record(forward(source) == x, corner, x, source)
    return report


def check_printed_corner_exponent() -> LawReport:
    """El exponente 2s−1 falla en s = 1: (0,0,[1)) = (0,0,[0))ϖ no está en B(1,1)."""
    report = LawReport('printed exponent 2s-1 fails at s=1')
    x = Triple(0, 0, 1)
    in_image = endo.in_pi_power_image(1, x) and endo.apply_pi(core.UNIT) == x
    member = endo.corner_membership(CornerDescriptor(1, 1), x)
    report.record(in_image and not member, x, in_image, member)
    return report


def _endomorphism_row(e: EndoNormalForm, elements: list, pairs: list, multiply: Multiply) -> LawReport:
    report = LawReport('endomorphism law')
    images = {x: endo.apply(e, x) for x in elements}
    for x, y, xy in pairs:
        lhs = endo.apply(e, xy)
        rhs = multiply(images[x], images[y])
        report.record(lhs == rhs, e, x, y, lhs, rhs)
    return report


def check_endomorphism_law(forms: list[EndoNormalForm], bound: int,
                           multiply: Multiply = None, workers: int = 1) -> LawReport:
    multiply = multiply or core.multiply
    elements = core.window(bound)
    pairs = [(x, y, multiply(x, y)) for x, y in product(elements, elements)]
    row = partial(_endomorphism_row, elements=elements, pairs=pairs, multiply=multiply)
    return _merged(f'endomorphism law N={bound} forms={len(forms)}', _ordered_map(row, forms, workers))


def check_factorization_uniqueness(forms: list[EndoNormalForm], bound: int) -> LawReport:
    report = LawReport(f'factorization round trip and uniqueness N={bound} forms={len(forms)}')
    elements = core.window(bound)
    seen: dict = {}
    for e in forms:
        images = tuple(endo.apply(e, x) for x in elements)
        factored = endo.factor(e)
        report.record(factored == e, 'round trip', e, factored)
        other = seen.setdefault(images, e)
        report.record(other == e, 'collision', e, other)
        # ε y ε₁ son a la vez inyectivos (anuladores) o no, ya en la ventana
        monoidal = tuple(endo.apply(EndoNormalForm(e.monoid_part), x) for x in elements)
        report.record(
            _is_injective(images) == _is_injective(monoidal) == endo.predicates(e).injective,
            'injective transfer', e,
        )
        report.record(
            _is_constant(images) == _is_constant(monoidal) == endo.predicates(e).annihilating,
            'annihilating transfer', e,
        )
    return report


def _is_injective(images) -> bool:
    return len(set(images)) == len(images)


def _is_constant(images) -> bool:
    return len(set(images)) == 1


def check_classification(forms: list[EndoNormalForm], bound: int) -> LawReport:
    """Cada mapa de ventana vuelve a su forma y la familia casa con inyectividad/constancia."""
    report = LawReport(f'classification completeness N={bound} forms={len(forms)}')
    for e in forms:
        m = WindowMap.from_normal_form(e, bound)
        # la ley de homomorfismo de estas formas la cubre check_endomorphism_law
        classified = endo.classify_window(m, check_homomorphism=False)
        report.record(classified == e, 'classify', e, classified)
        images = list(m.entries.values())
        injective, constant = _is_injective(images), _is_constant(images)
        flags = endo.predicates(classified)
        report.record(injective == flags.injective, 'injective', e, injective)
        report.record(constant == flags.annihilating, 'annihilating', e, constant)
    return report


def check_composition(forms: list[EndoNormalForm], bound: int,
                      associativity_forms: Optional[list[EndoNormalForm]] = None) -> LawReport:
    """
    compose = evaluación puntual y coincide con la vía afín; la asociatividad
    se comprueba con la vía afín ya contrastada sobre `associativity_forms`.
    """
    report = LawReport(f'composition coherence N={bound} forms={len(forms)}')
    elements = core.window(bound)
    images = {f: [endo.apply(f, x) for x in elements] for f in forms}
    for f, g in product(forms, forms):
        h = endo.compose(f, g)
        for x, fx in zip(elements, images[f]):
            lhs, rhs = endo.apply(h, x), endo.apply(g, fx)
            report.record(lhs == rhs, 'pointwise', f, g, x, lhs, rhs)
        fast = endo.compose_algebraic(f, g)
        report.record(fast == h, 'fast path', f, g, fast, h)
        if endo.predicates(f).injective and endo.predicates(g).injective:
            report.record(endo.predicates(h).injective, 'injective closed', f, g, h)
    triples = associativity_forms if associativity_forms is not None else forms
    for f, g, k in product(triples, triples, triples):
        left = endo.compose_algebraic(endo.compose_algebraic(f, g), k)
        right = endo.compose_algebraic(f, endo.compose_algebraic(g, k))
        report.record(left == right, 'associative', f, g, k, left, right)
    return report


def check_minimal_ideal(forms: list[EndoNormalForm], max_n: int = ANNIHILATING_MAX_N) -> LawReport:
    """Los anuladores forman un semigrupo de ceros por la derecha y son el ideal mínimo."""
    report = LawReport(f'annihilating right-zero minimal ideal n≤{max_n} forms={len(forms)}')
    ann = [EndoNormalForm(endo.MonoidPart.ann_unit(), n) for n in range(max_n + 1)]
    images = {endo.apply(a, core.UNIT) for a in ann}
    report.record(len(images) == len(ann), 'distinct', len(images))
    for a, b in product(ann, ann):
        ab = endo.compose(a, b)
        report.record(ab == b, 'right zero', a, b, ab)
    for e, a in product(forms, ann):
        ea = endo.compose(e, a)
        report.record(ea == a, 'e;a = a', e, a, ea)
        ae = endo.compose(a, e)
        value = endo.apply(e, endo.apply(a, core.UNIT))
        expected = EndoNormalForm(endo.MonoidPart.ann_unit(), 2 * value.i + value.f)
        report.record(ae == expected, 'a;e = χ of (s,s,[q))e', a, e, ae, expected)
    return report


def check_injectivity_dichotomy(forms: list[EndoNormalForm], bound: int) -> LawReport:
    report = LawReport(f'injectivity dichotomy N={bound} forms={len(forms)}')
    elements = core.window(bound)
    for e in forms:
        images = [endo.apply(e, x) for x in elements]
        injective = len(set(images)) == len(images)
        report.record(injective == endo.predicates(e).injective, e, injective)
    return report


def check_fixed_point_criterion(forms: list[EndoNormalForm], bound: int) -> LawReport:
    """Un endomorfismo inyectivo con un punto fijo no idempotente es la identidad."""
    report = LawReport(f'non-idempotent fixed point iff identity N={bound}')
    for e in forms:
        if not endo.predicates(e).injective:
            continue
        moving = [x for x in endo.fixed_points(e, bound) if x.i != x.j]
        report.record(bool(moving) == (e == IDENTITY), e, moving[:1])
    return report


def check_pi_cyclic_monoid(max_n: int = PI_POWER_MAX_N) -> LawReport:
    report = LawReport(f'⟨ϖ⟩¹ cyclic monoid n≤{max_n}')
    for a, b in product(range(max_n + 1), range(max_n + 1)):
        h = endo.compose(endo.pi_power(a), endo.pi_power(b))
        report.record(h == endo.pi_power(a + b), a, b, h)
    return report


# ---------------------------------------------------------------------------
# Suite por defecto
# ---------------------------------------------------------------------------

def run_default_suite(
    triple_window: int = TRIPLE_WINDOW,
    map_window: int = MAP_WINDOW,
    corner_window: int = CORNER_WINDOW,
    workers: int = VERIFY_WORKERS,
    multiply: Optional[Multiply] = None,
) -> list[LawReport]:
    """Todas las leyes en orden canónico; `multiply` permite inyectar mutaciones."""
    multiply = multiply or core.multiply
    forms = endo.sweep(SWEEP_MAX_K, SWEEP_MAX_N)
    associativity_forms = endo.sweep(COMPOSITION_ASSOC_MAX_K, COMPOSITION_ASSOC_MAX_N)

    laws = [
        lambda: check_associativity(triple_window, F2, multiply, workers),
        lambda: check_associativity(min(triple_window, 4), Family(frozenset({0, 1, 2})), multiply, workers),
        lambda: check_unit(triple_window, multiply),
        lambda: check_inverse_uniqueness(triple_window, max(INVERSE_SEARCH_BOUND, 2 * triple_window), multiply),
        lambda: check_idempotent_characterization(triple_window, multiply),
        lambda: check_idempotents_commute(triple_window, multiply),
        lambda: check_natural_order(triple_window, multiply),
        lambda: check_natural_order_is_partial_order(triple_window, multiply),
        lambda: check_green_relations(triple_window, multiply),
        lambda: check_layers(triple_window, multiply),
        lambda: check_zero_quotient(min(triple_window, 4), multiply),
        lambda: check_inductive_subsets(),
        lambda: oracle_family_interval(FAMILY_MAX_INDEX),
        lambda: check_pi(triple_window, multiply),
        lambda: check_pi_powers(triple_window),
        lambda: check_corners(corner_window, CORNER_MAX_S, multiply),
        check_printed_corner_exponent,
        lambda: check_endomorphism_law(forms, triple_window, multiply, workers),
        lambda: check_factorization_uniqueness(forms, map_window),
        lambda: check_classification(forms, map_window),
        lambda: check_injectivity_dichotomy(forms, map_window),
        lambda: check_composition(forms, map_window, associativity_forms),
        lambda: check_minimal_ideal(forms, ANNIHILATING_MAX_N),
        lambda: check_fixed_point_criterion(forms, triple_window),
        lambda: check_pi_cyclic_monoid(),
    ]

    reports = []
    for law in laws:
        report = law()
        logger.info(
            "Law %s checked=%s violations=%s skipped=%s",
            report.law_name, report.checked, len(report.violations), report.skipped,
        )
        if not report.ok:
            logger.warning("Law violated: %s first=%s", report.law_name, report.to_dict(1)['violations'])
        reports.append(report)
    return reports
