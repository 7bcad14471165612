"""
CLI de B_ω^𝓕²: aritmética de elementos, álgebra de endomorfismos,
clasificación de mapas de ventana y suite de verificación.

Códigos de salida: 0 ok, 1 ley violada (verify), 2 error de uso o de parseo.
"""
import argparse
import json
import logging
import sys

from services import core, endo, verify
from services.core import Family, GreenRelation, family_witness
from utils.logging_setup import configure_logging
from utils.notation import (
    element_to_json,
    endo_to_json,
    factorization_to_json,
    format_element,
    format_endo,
    format_family,
    parse_element,
    parse_endo_expression,
    parse_family,
    parse_tails,
)
from utils.window_maps import load_window_map

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

logger = logging.getLogger("bicyclic_endo_cli")


def _emit(args, text, payload):
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _family(args):
    return parse_family(args.family) if args.family else core.F2


def _emit_element(args, x):
    _emit(args, format_element(x), {'result': element_to_json(x), 'text': format_element(x)})


def _emit_bool(args, value):
    _emit(args, 'true' if value else 'false', {'value': value})


# ---------------------------------------------------------------------------
# Comandos
# ---------------------------------------------------------------------------

def _cmd_mul(args):
    fam = _family(args)
    x, y = parse_element(args.x, fam), parse_element(args.y, fam)
    _emit_element(args, core.multiply(x, y, fam))
    return EXIT_OK


def _cmd_inv(args):
    _emit_element(args, core.inverse(parse_element(args.x, _family(args))))
    return EXIT_OK


def _cmd_idem(args):
    fam = _family(args)
    _emit_bool(args, core.is_idempotent(parse_element(args.x, fam), fam))
    return EXIT_OK


def _cmd_leq(args):
    fam = _family(args)
    _emit_bool(args, core.natural_leq(parse_element(args.x, fam), parse_element(args.y, fam), fam))
    return EXIT_OK


def _cmd_green(args):
    fam = _family(args)
    x, y = parse_element(args.x, fam), parse_element(args.y, fam)
    _emit_bool(args, core.green_related(x, y, args.relation, fam))
    return EXIT_OK


def _cmd_endo_apply(args):
    e = parse_endo_expression(args.expr)
    _emit_element(args, endo.apply(e, parse_element(args.x)))
    return EXIT_OK


def _cmd_endo_compose(args):
    h = endo.compose(parse_endo_expression(args.f), parse_endo_expression(args.g))
    _emit(args, format_endo(h), endo_to_json(h))
    return EXIT_OK


def _cmd_endo_factor(args):
    payload = factorization_to_json(parse_endo_expression(args.expr))
    text = f"{payload['text']}\ns={payload['s']} p={payload['p']} n={payload['n']}"
    _emit(args, text, payload)
    return EXIT_OK


def _cmd_endo_classify(args):
    e = endo.classify_window(load_window_map(args.map))
    _emit(args, format_endo(e), endo_to_json(e))
    return EXIT_OK


def _cmd_family_check(args):
    tails, includes_empty = parse_tails(args.tails)
    witness = family_witness(tails)
    if witness is None:
        text = 'ω-closed'
    else:
        text = f"not ω-closed: witness {witness}"
    payload = {
        'closed': witness is None,
        'includes_empty': includes_empty,
        'witness': None if witness is None else str(witness),
    }
    if witness is None:
        payload['family'] = format_family(Family(frozenset(tails), includes_empty))
    _emit(args, text, payload)
    return EXIT_OK


def _cmd_verify(args):
    windows = {}
    if args.window is not None:
        if args.window < endo.MIN_WINDOW_BOUND:
            raise ValueError(f"--window debe ser ≥ {endo.MIN_WINDOW_BOUND}")
        windows = {'triple_window': args.window, 'map_window': args.window, 'corner_window': args.window}
    workers = args.workers if args.workers is not None else verify.VERIFY_WORKERS
    reports = verify.run_default_suite(workers=workers, **windows)

    for report in reports:
        if args.json:
            print(json.dumps(report.to_dict(), ensure_ascii=False))
            continue
        status = 'ok  ' if report.ok else 'FAIL'
        line = f"{status} {report.law_name} checked={report.checked}"
        if report.skipped:
            line += f" skipped={report.skipped}"
        print(line)
        for violation in report.to_dict(3)['violations']:
            print('     ' + ' '.join(violation))

    failed = [r.law_name for r in reports if not r.ok]
    if failed:
        logger.warning("verify: %s leyes violadas", len(failed))
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', default=argparse.SUPPRESS,
                        help='Salida JSON en lugar de notación de texto')

    family_opt = argparse.ArgumentParser(add_help=False)
    family_opt.add_argument('--family', metavar='TAILS',
                            help='Familia de colas, p. ej. "0,1" o "0,1,2,empty" (por defecto 0,1)')

    parser = argparse.ArgumentParser(
        prog='bicyclic-endo', parents=[common],
        description='Aritmética y endomorfismos de la extensión bicíclica B_ω^𝓕²')
    sub = parser.add_subparsers(dest='verb', metavar='VERB', required=True)

    def add(name, handler, help_text, parents=()):
        p = sub.add_parser(name, parents=[common, *parents], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add('mul', _cmd_mul, 'Producto x·y', [family_opt])
    p.add_argument('x')
    p.add_argument('y')

    p = add('inv', _cmd_inv, 'Inverso x⁻¹', [family_opt])
    p.add_argument('x')

    p = add('idem', _cmd_idem, '¿x es idempotente?', [family_opt])
    p.add_argument('x')

    p = add('leq', _cmd_leq, '¿x ≼ y en el orden natural?', [family_opt])
    p.add_argument('x')
    p.add_argument('y')

    p = add('green', _cmd_green, 'Relaciones de Green R, L, H', [family_opt])
    p.add_argument('x')
    p.add_argument('y')
    p.add_argument('--relation', choices=[r.value for r in GreenRelation], default='H')

    p = add('endo-apply', _cmd_endo_apply, 'Aplica un endomorfismo a un elemento')
    p.add_argument('--expr', required=True)
    p.add_argument('x')

    p = add('endo-compose', _cmd_endo_compose, 'f y después g, en forma normal')
    p.add_argument('f')
    p.add_argument('g')

    p = add('endo-factor', _cmd_endo_factor, 'Factorización ε = ε₁ϖⁿ')
    p.add_argument('--expr', required=True)

    p = add('endo-classify', _cmd_endo_classify, 'Clasifica un mapa de ventana JSON')
    p.add_argument('--map', required=True, metavar='PATH')

    p = add('family-check', _cmd_family_check, 'Comprueba la ω-clausura de una familia')
    p.add_argument('tails')

    p = add('verify', _cmd_verify, 'Ejecuta la suite de leyes')
    p.add_argument('--window', type=int, metavar='N')
    p.add_argument('--workers', type=int, metavar='W')

    return parser


def main(argv=None) -> int:
    configure_logging(default="WARNING", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.json = getattr(args, 'json', False)

    try:
        return args.handler(args)
    except ValueError as exc:
        logger.debug("%s falló: %s", args.verb, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
