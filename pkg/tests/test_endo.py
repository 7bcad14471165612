import pytest
from hypothesis import given, strategies as st

from services import endo
from services.core import UNIT, Triple, multiply, window
from services.endo import (
    IDENTITY,
    AffineAction,
    CornerDescriptor,
    EndoNormalForm,
    MonoidPart,
    PartKind,
    WindowMap,
    annihilating,
    apply,
    apply_pi,
    apply_pi_power,
    chi_params,
    classify_window,
    compose,
    compose_algebraic,
    corner_isomorphism,
    corner_membership,
    factor,
    fixed_points,
    in_pi_power_image,
    pi_power,
    pi_power_inverse,
    predicates,
)
from services.errors import (
    ClassificationError,
    NotAnEndomorphismError,
    ParameterRangeError,
    WindowMapError,
)
from tests.strategies import normal_forms, triples


# ---------------------------------------------------------------------------
# ϖ
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("x, expected", [
    (Triple(5, 0, 0), Triple(5, 0, 1)),
    (Triple(3, 2, 1), Triple(4, 3, 0)),
])
def test_apply_pi(x, expected):
    assert apply_pi(x) == expected


@pytest.mark.parametrize("x, n, expected", [
    (Triple(0, 0, 1), 3, Triple(2, 2, 0)),
    (Triple(1, 2, 0), 4, Triple(3, 4, 0)),
    (Triple(4, 1, 1), 0, Triple(4, 1, 1)),
])
def test_apply_pi_power(x, n, expected):
    assert apply_pi_power(x, n) == expected


@given(triples(), st.integers(min_value=0, max_value=12))
def test_pi_power_matches_iteration(x, n):
    iterated = x
    for _ in range(n):
        iterated = apply_pi(iterated)
    assert apply_pi_power(x, n) == iterated


@given(triples(), triples())
def test_pi_is_a_homomorphism(x, y):
    assert apply_pi(multiply(x, y)) == multiply(apply_pi(x), apply_pi(y))


@given(triples(), st.integers(min_value=0, max_value=12))
def test_pi_power_inverse_round_trip(x, n):
    y = apply_pi_power(x, n)
    assert in_pi_power_image(n, y)
    assert pi_power_inverse(n, y) == x


def test_pi_power_inverse_outside_image():
    assert not in_pi_power_image(1, Triple(0, 0, 0))
    with pytest.raises(NotAnEndomorphismError):
        pi_power_inverse(1, Triple(0, 0, 0))


# ---------------------------------------------------------------------------
# Partes monoidales y formas normales
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("factory, args", [
    (MonoidPart.beta, (2, 0)),
    (MonoidPart.beta, (1, 0)),
    (MonoidPart.alpha, (2, 2)),
    (MonoidPart.alpha, (0, 0)),
    (MonoidPart.gamma, (0,)),
])
def test_monoid_part_ranges(factory, args):
    with pytest.raises(ParameterRangeError):
        factory(*args)


def test_negative_power_is_rejected():
    with pytest.raises(ParameterRangeError):
        EndoNormalForm(MonoidPart.identity(), -1)


@pytest.mark.parametrize("e, x, expected", [
    (EndoNormalForm(MonoidPart.alpha(2, 1)), Triple(1, 2, 1), Triple(3, 5, 1)),
    (EndoNormalForm(MonoidPart.delta(2)), Triple(1, 2, 1), Triple(4, 6, 0)),
    (EndoNormalForm(MonoidPart.gamma(2)), Triple(1, 2, 1), Triple(2, 4, 0)),
    (EndoNormalForm(MonoidPart.beta(3, 2)), Triple(1, 0, 1), Triple(5, 2, 0)),
    (EndoNormalForm(MonoidPart.ann_unit(), 5), Triple(7, 3, 0), Triple(2, 2, 1)),
])
def test_apply(e, x, expected):
    assert apply(e, x) == expected


@pytest.mark.parametrize("e, text", [
    (EndoNormalForm(MonoidPart.alpha(2, 1), 3), "alpha[2,1] ; w^3"),
    (pi_power(4), "w^4"),
    (IDENTITY, "id"),
    (annihilating(2, 1), "chi[2,1]"),
    (EndoNormalForm(MonoidPart.gamma(6)), "gamma[6]"),
    (EndoNormalForm(MonoidPart.delta(3), 1), "delta[3] ; w^1"),
])
def test_normal_form_text(e, text):
    assert str(e) == text


def test_annihilating_parameters():
    assert annihilating(2, 1) == EndoNormalForm(MonoidPart.ann_unit(), 5)
    assert chi_params(EndoNormalForm(MonoidPart.ann_unit(), 7)) == (3, 1)
    with pytest.raises(ParameterRangeError):
        annihilating(1, 2)
    with pytest.raises(ValueError):
        chi_params(IDENTITY)


@pytest.mark.parametrize("e, expected", [
    (EndoNormalForm(MonoidPart.beta(3, 2), 4), (True, False, False)),
    (EndoNormalForm(MonoidPart.gamma(1), 0), (False, False, True)),
    (EndoNormalForm(MonoidPart.ann_unit(), 0), (False, True, True)),
])
def test_predicates(e, expected):
    assert tuple(predicates(e)) == expected


@given(normal_forms(), triples())
def test_normal_forms_are_endomorphisms(e, x):
    y = Triple(x.j, x.i + 1, 1 - x.f)
    assert apply(e, multiply(x, y)) == multiply(apply(e, x), apply(e, y))


@given(normal_forms(), triples(8))
def test_affine_action_matches_apply(e, x):
    assert AffineAction.of(e).apply(x) == apply(e, x)


# ---------------------------------------------------------------------------
# Factorización y composición
# ---------------------------------------------------------------------------

def test_factor_reads_power_from_unit_image():
    e = EndoNormalForm(MonoidPart.alpha(2, 1), 3)
    assert apply(e, UNIT) == Triple(1, 1, 1)
    part, n = factor(e)
    assert (part, n) == (MonoidPart.alpha(2, 1), 3)
    assert factor(lambda x: x) == IDENTITY
    assert factor(lambda x: Triple(2, 2, 1)) == EndoNormalForm(MonoidPart.ann_unit(), 5)


@given(normal_forms())
def test_factor_round_trip(e):
    assert factor(e) == e


def test_factor_rejects_non_idempotent_unit_image():
    with pytest.raises(NotAnEndomorphismError):
        factor(lambda x: Triple(0, 1, 0))


def test_factor_rejects_maps_without_monoid_part():
    with pytest.raises(ClassificationError):
        factor(lambda x: x if x == UNIT else Triple(x.i, x.j, 1))


@pytest.mark.parametrize("f, g, expected", [
    (pi_power(2), pi_power(3), pi_power(5)),
    (EndoNormalForm(MonoidPart.gamma(2)), EndoNormalForm(MonoidPart.gamma(3)),
     EndoNormalForm(MonoidPart.gamma(6))),
    (EndoNormalForm(MonoidPart.ann_unit(), 4), pi_power(1), EndoNormalForm(MonoidPart.ann_unit(), 5)),
    (EndoNormalForm(MonoidPart.alpha(3, 2), 1), annihilating(1, 0), annihilating(1, 0)),
])
def test_compose_examples(f, g, expected):
    assert compose(f, g) == expected


@given(normal_forms(4, 5), normal_forms(4, 5))
def test_compose_is_pointwise_and_matches_fast_path(f, g):
    h = compose(f, g)
    for x in window(3):
        assert apply(h, x) == apply(g, apply(f, x))
    assert compose_algebraic(f, g) == h


@given(normal_forms(3, 4), normal_forms(3, 4), normal_forms(3, 4))
def test_compose_is_associative(f, g, k):
    assert compose(compose(f, g), k) == compose(f, compose(g, k))


@given(normal_forms(), st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=1))
def test_annihilating_forms_are_right_zeros(e, s, q):
    chi = annihilating(s, q)
    assert compose(e, chi) == chi


@given(normal_forms(), normal_forms())
def test_injective_forms_are_closed_under_composition(f, g):
    if predicates(f).injective and predicates(g).injective:
        assert predicates(compose(f, g)).injective


# ---------------------------------------------------------------------------
# Mapas de ventana y clasificación
# ---------------------------------------------------------------------------

def _window_map(fn, bound=8):
    return WindowMap(bound, {x: fn(x) for x in window(bound)})


def test_classify_alpha_window():
    def alpha_2_1(x):
        if x.f == 0:
            return Triple(2 * x.i, 2 * x.j, 0)
        return Triple(1 + 2 * x.i, 1 + 2 * x.j, 1)

    assert classify_window(_window_map(alpha_2_1)) == EndoNormalForm(MonoidPart.alpha(2, 1))


def test_classify_constant_window():
    m = _window_map(lambda x: Triple(3, 3, 1))
    assert classify_window(m) == EndoNormalForm(MonoidPart.ann_unit(), 7)


def test_classify_delta_window():
    def delta_2(x):
        if x.f == 0:
            return Triple(2 * x.i, 2 * x.j, 0)
        return Triple(2 * x.i + 2, 2 * x.j + 2, 0)

    e = classify_window(_window_map(delta_2))
    assert e == EndoNormalForm(MonoidPart.delta(2))
    assert e.monoid_part.kind is PartKind.DELTA


def test_classify_rejects_non_homomorphism():
    m = _window_map(lambda x: Triple(0, 0, 0) if x == Triple(0, 0, 1) else x, bound=4)
    with pytest.raises(NotAnEndomorphismError):
        classify_window(m)


def test_classify_rejects_small_window():
    m = WindowMap(1, {x: x for x in window(1)})
    with pytest.raises(ClassificationError):
        classify_window(m)


def test_window_map_must_be_total():
    entries = {x: x for x in window(2)}
    entries.pop(Triple(2, 2, 1))
    with pytest.raises(WindowMapError, match="no es total"):
        WindowMap(2, entries)


def test_window_map_rejects_invalid_targets():
    entries = {x: x for x in window(2)}
    entries[UNIT] = Triple(0, 0, 2)
    with pytest.raises(WindowMapError):
        WindowMap(2, entries)


def test_window_map_evaluates_outside_window_with_closed_form():
    m = WindowMap.from_normal_form(pi_power(1), 2)
    assert len(m) == 18
    assert m.evaluate(Triple(5, 5, 1)) == Triple(6, 6, 0)
    raw = WindowMap(2, dict(m.entries))
    with pytest.raises(KeyError):
        raw.evaluate(Triple(5, 5, 1))


# ---------------------------------------------------------------------------
# Esquinas, barridos y puntos fijos
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("corner, x, member", [
    (CornerDescriptor(0, 1), Triple(0, 0, 1), True),
    (CornerDescriptor(0, 1), Triple(0, 0, 0), False),
    (CornerDescriptor(1, 0), Triple(1, 1, 1), True),
    (CornerDescriptor(1, 0), Triple(0, 0, 1), False),
])
def test_corner_membership(corner, x, member):
    assert corner_membership(corner, x) is member


@pytest.mark.parametrize("s", range(4))
@pytest.mark.parametrize("p", (0, 1))
def test_corner_is_image_of_pi_power(s, p):
    corner = CornerDescriptor(s, p)
    for x in window(6):
        assert corner_membership(corner, x) == in_pi_power_image(corner.pi_exponent, x)


def test_printed_exponent_fails_at_s_1():
    x = apply_pi(UNIT)
    assert x == Triple(0, 0, 1)
    assert not corner_membership(CornerDescriptor(1, 1), x)


def test_corner_isomorphism_round_trip():
    corner = CornerDescriptor(2, 1)
    forward, backward = corner_isomorphism(corner)
    for x in window(3):
        y = forward(x)
        assert corner_membership(corner, y)
        assert backward(y) == x
    with pytest.raises(ValueError):
        backward(UNIT)


def test_sweep_size_and_order():
    forms = endo.sweep(2, 1)
    # alpha[1,0], alpha[2,0], alpha[2,1], beta[2,1], gamma[1], gamma[2], delta[1], delta[2], chi
    assert len(forms) == 9 * 2
    assert forms[0] == IDENTITY
    assert forms[1] == pi_power(1)
    assert len(set(endo.sweep(4, 5))) == len(endo.sweep(4, 5))


def test_fixed_points():
    assert len(fixed_points(IDENTITY, 2)) == 18
    assert fixed_points(pi_power(1), 3) == []
    gamma = EndoNormalForm(MonoidPart.gamma(2))
    assert fixed_points(gamma, 2) == [Triple(0, 0, 0)]
