"""
Gramáticas de texto y JSON compartidas por la CLI y la API HTTP.

- Elementos: "(i,j,[p))" y "0" para ZERO (solo si la familia tiene ∅).
- Familias: índices de cola separados por comas, "0,1"; el token "empty" (o "∅") añade el vacío.
- Endomorfismos: alpha[k,p], beta[k,p], gamma[k], delta[k], chi[s,q], w^n, id,
  encadenados de izquierda a derecha con ";" (f;g = f y después g).
"""
import re

from services.core import F2, ZERO, Element, Family, Triple, Zero
from services.endo import (
    IDENTITY,
    EndoNormalForm,
    MonoidPart,
    annihilating,
    chi_params,
    compose,
    factor,
    pi_power,
    predicates,
)
from services.errors import NotationError

MAX_NUMERAL = 2 ** 63 - 1

_ELEMENT_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*\[\s*(\d+)\s*\)\s*\)")
_TERM_RE = re.compile(
    r"""
      (?P<name>alpha|beta|gamma|delta|chi)\s*\[(?P<args>[^\]]*)\]
    | (?P<pi>[wϖ])\s*\^\s*(?P<power>\d+)
    | (?P<id>id)
    """,
    re.VERBOSE,
)
_ARITY = {'alpha': 2, 'beta': 2, 'chi': 2, 'gamma': 1, 'delta': 1}
_EMPTY_TOKENS = {'empty', '∅'}


def _numeral(token: str, text: str, position: int | None = None) -> int:
    token = token.strip()
    if not token.isdigit():
        raise NotationError(f"Se esperaba un natural, se obtuvo {token!r}", text, position)
    value = int(token)
    if value > MAX_NUMERAL:
        raise NotationError(f"overflow: {token} supera 2^63-1", text, position)
    return value


# ---------------------------------------------------------------------------
# Elementos
# ---------------------------------------------------------------------------

def parse_element(text: str, fam: Family = F2) -> Element:
    stripped = text.strip()
    if stripped == '0':
        x = ZERO
    else:
        match = _ELEMENT_RE.fullmatch(stripped)
        if not match:
            raise NotationError('Elemento mal formado, se esperaba "(i,j,[p))"', text)
        i, j, f = (_numeral(group, text) for group in match.groups())
        x = Triple(i, j, f)
    fam.check(x)
    return x


def format_element(x: Element) -> str:
    return str(x)


def element_to_json(x: Element) -> dict:
    if isinstance(x, Zero):
        return {'zero': True}
    return {'i': x.i, 'j': x.j, 'f': x.f}


def element_from_json(value, fam: Family = F2) -> Element:
    """Acepta el texto "(i,j,[p))" o el objeto {"i","j","f"} / {"zero": true}."""
    if isinstance(value, str):
        return parse_element(value, fam)
    if not isinstance(value, dict):
        raise NotationError(f"Elemento JSON inválido: {value!r}")
    if value.get('zero') is True:
        fam.check(ZERO)
        return ZERO
    try:
        coords = [value[key] for key in ('i', 'j', 'f')]
    except KeyError as exc:
        raise NotationError(f"Falta el campo {exc.args[0]!r} en {value!r}") from exc
    if not all(isinstance(c, int) and not isinstance(c, bool) for c in coords):
        raise NotationError(f"Coordenadas no enteras en {value!r}")
    if any(c > MAX_NUMERAL for c in coords):
        raise NotationError(f"overflow en {value!r}")
    x = Triple(*coords)
    fam.check(x)
    return x


# ---------------------------------------------------------------------------
# Familias
# ---------------------------------------------------------------------------

def parse_tails(text: str) -> tuple[set[int], bool]:
    """Índices de cola y presencia del vacío, sin exigir ω-clausura."""
    tails: set[int] = set()
    includes_empty = False
    for token in text.split(','):
        token = token.strip()
        if not token:
            raise NotationError('Índice de cola vacío', text)
        if token in _EMPTY_TOKENS:
            includes_empty = True
            continue
        tails.add(_numeral(token, text))
    if not tails:
        raise NotationError('Se requiere al menos un índice de cola', text)
    return tails, includes_empty


def parse_family(text: str) -> Family:
    tails, includes_empty = parse_tails(text)
    return Family(frozenset(tails), includes_empty)


def format_family(fam: Family) -> str:
    tokens = [str(t) for t in fam.sorted_tails]
    if fam.includes_empty:
        tokens.append('empty')
    return ','.join(tokens)


# ---------------------------------------------------------------------------
# Expresiones de endomorfismos
# ---------------------------------------------------------------------------

def _parse_term(term: str, text: str, position: int) -> EndoNormalForm:
    match = _TERM_RE.fullmatch(term)
    if not match:
        raise NotationError(f"Término desconocido {term!r}", text, position)
    if match.group('id'):
        return IDENTITY
    if match.group('pi'):
        return pi_power(_numeral(match.group('power'), text, position))
    name = match.group('name')
    args = [_numeral(arg, text, position) for arg in match.group('args').split(',')]
    if len(args) != _ARITY[name]:
        raise NotationError(f"{name} espera {_ARITY[name]} parámetros", text, position)
    if name == 'chi':
        return annihilating(*args)
    factory = getattr(MonoidPart, name)
    return EndoNormalForm(factory(*args))


def parse_endo_expression(text: str) -> EndoNormalForm:
    """Forma normal de una cadena con `;`, plegada de izquierda a derecha con compose."""
    if not text.strip():
        raise NotationError('Expresión vacía', text)
    result = None
    position = 0
    for chunk in text.split(';'):
        term = chunk.strip()
        offset = position + len(chunk) - len(chunk.lstrip())
        if not term:
            raise NotationError('Término vacío', text, offset)
        value = _parse_term(term, text, offset)
        result = value if result is None else compose(result, value)
        position += len(chunk) + 1
    return result


def format_endo(e: EndoNormalForm) -> str:
    return str(e)


def endo_to_json(e: EndoNormalForm) -> dict:
    part = e.monoid_part
    return {
        'monoid_part': {'kind': part.kind.value, 'k': part.k, 'p': part.p},
        'power': e.power,
        'text': format_endo(e),
    }


def factorization_to_json(e: EndoNormalForm) -> dict:
    """ε = ε₁ϖⁿ leída de la acción de ε, con n = 2s + p; chi[s,q] si es anulador."""
    form = factor(e)
    s, p = divmod(form.power, 2)
    reply = {**endo_to_json(form), 's': s, 'p': p, 'n': form.power}
    if predicates(form).annihilating:
        chi_s, chi_q = chi_params(form)
        reply['chi'] = {'s': chi_s, 'q': chi_q}
    return reply
