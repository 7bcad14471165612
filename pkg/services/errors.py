"""
Errores del dominio.

Todos derivan de ValueError: la capa HTTP los traduce a 400 y la CLI al
código de salida 2, igual que cualquier otra entrada inválida.
"""


class FamilyError(ValueError):
    """Familia de colas inválida o no ω-cerrada."""


class FamilyMembershipError(FamilyError):
    """Elemento cuya cola no pertenece a la familia ambiente."""


class NotationError(ValueError):
    """Texto mal formado (elemento, familia o expresión de endomorfismo)."""

    def __init__(self, message: str, text: str = '', position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (posición {position} en {text!r})"
        elif text:
            message = f"{message}: {text!r}"
        super().__init__(message)


class ParameterRangeError(NotationError):
    """Parámetros fuera de rango, p. ej. beta[2,0]."""


class NotAnEndomorphismError(ValueError):
    """La aplicación dada no es un endomorfismo de B_ω^𝓕²."""


class ClassificationError(ValueError):
    """El mapa residual no coincide con ninguna parte monoidal."""


class WindowMapError(ValueError):
    """Archivo o payload de WindowMap mal formado."""
