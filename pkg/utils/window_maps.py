"""
Lectura de mapas de ventana en JSON: [{"from": [i,j,p], "to": [i,j,p]}, ...].
"""
import json
import os

from services.core import Triple
from services.endo import WindowMap
from services.errors import WindowMapError

MAX_WINDOW_MAP_ENTRIES = int(os.getenv('MAX_WINDOW_MAP_ENTRIES', '20000'))


def _as_triple(value, where):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in value)
    ):
        raise WindowMapError(f"Se esperaba [i,j,p] con naturales en {where}, se obtuvo {value!r}")
    return Triple(*value)


def window_map_from_payload(payload) -> WindowMap:
    """
    Construye un WindowMap; la cota N se infiere como el mayor i o j del dominio.
    WindowMap valida totalidad e imágenes.
    """
    if not isinstance(payload, list):
        raise WindowMapError('El mapa debe ser una lista JSON de pares {"from", "to"}')
    if len(payload) > MAX_WINDOW_MAP_ENTRIES:
        raise WindowMapError(
            f"El mapa tiene {len(payload)} entradas; el máximo es {MAX_WINDOW_MAP_ENTRIES}"
        )
    if not payload:
        raise WindowMapError('El mapa está vacío')

    entries = {}
    for idx, item in enumerate(payload):
        if not isinstance(item, dict) or 'from' not in item or 'to' not in item:
            raise WindowMapError(f"Entrada {idx} sin campos 'from' y 'to'")
        source = _as_triple(item['from'], f"entrada {idx}.from")
        target = _as_triple(item['to'], f"entrada {idx}.to")
        if source in entries and entries[source] != target:
            raise WindowMapError(f"Imágenes distintas para {source}")
        entries[source] = target

    bound = max(max(x.i, x.j) for x in entries)
    return WindowMap(bound, entries)


def load_window_map(path) -> WindowMap:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            payload = json.load(f)
    except OSError as exc:
        raise WindowMapError(f"No se pudo leer {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise WindowMapError(f"JSON inválido en {path}: {exc}") from exc
    return window_map_from_payload(payload)
