"""
Helpers HTTP: lectura del payload JSON y de sus campos tipados.
"""
from services.core import F2, Family
from services.errors import NotationError
from utils.notation import element_from_json, parse_endo_expression, parse_family


class PayloadError(ValueError):
    """Payload ausente o campo requerido faltante."""


def require_json(req) -> dict:
    payload = req.get_json(silent=True)
    if not isinstance(payload, dict):
        raise PayloadError("Se requiere un objeto JSON")
    return payload


def require_field(payload: dict, name: str):
    if name not in payload:
        raise PayloadError(f'Se requiere el campo "{name}"')
    return payload[name]


def family_field(payload: dict) -> Family:
    """Campo opcional "family": texto "0,1,empty" o lista de colas. Por defecto 𝓕²."""
    value = payload.get('family')
    if value is None:
        return F2
    if isinstance(value, str):
        return parse_family(value)
    if isinstance(value, list):
        return parse_family(','.join(str(v) for v in value))
    raise NotationError(f"Familia inválida: {value!r}")


def element_field(payload: dict, name: str, fam: Family = F2):
    return element_from_json(require_field(payload, name), fam)


def endo_field(payload: dict, name: str):
    value = require_field(payload, name)
    if not isinstance(value, str):
        raise NotationError(f'El campo "{name}" debe ser una expresión de texto')
    return parse_endo_expression(value)
