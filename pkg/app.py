import logging
import os

from flask import Flask, jsonify, request

from services import core, endo, verify
from services.core import Family, family_witness
from services.endo import MIN_WINDOW_BOUND
from utils.http_helpers import (
    element_field,
    endo_field,
    family_field,
    require_field,
    require_json,
)
from utils.logging_setup import configure_logging
from utils.notation import (
    element_to_json,
    endo_to_json,
    factorization_to_json,
    format_element,
    format_endo,
    format_family,
    parse_tails,
)
from utils.window_maps import window_map_from_payload

MAX_HTTP_WINDOW = int(os.getenv("MAX_HTTP_WINDOW", "8"))

LOG_LEVEL = configure_logging("INFO")

app = Flask(__name__)
app.logger.setLevel(getattr(logging, LOG_LEVEL))
logging.getLogger("werkzeug").setLevel(getattr(logging, LOG_LEVEL))
service_logger = logging.getLogger("bicyclic_endo_service")
service_logger.setLevel(getattr(logging, LOG_LEVEL))


@app.before_request
def log_request_start():
    service_logger.info(
        "Request start method=%s path=%s remote=%s",
        request.method,
        request.path,
        request.remote_addr,
    )


@app.after_request
def log_request_end(response):
    service_logger.info(
        "Request end method=%s path=%s status=%s",
        request.method,
        request.path,
        response.status_code,
    )
    return response


def _handle(label, compute):
    """ValueError -> 400; cualquier otro error -> 500 tras loguearlo."""
    try:
        return jsonify(compute()), 200
    except ValueError as exc:
        return jsonify({"error": str(exc)}), 400
    except Exception as exc:
        service_logger.exception("%s error: %s", label, exc)
        return jsonify({"error": f"Error interno en {label}: {str(exc)}"}), 500


def _element_reply(x):
    return {"result": element_to_json(x), "text": format_element(x)}


# ---------------------------------------------------------------------------
# Elementos
# ---------------------------------------------------------------------------

@app.route("/mul", methods=["POST"])
def mul():
    def compute():
        payload = require_json(request)
        fam = family_field(payload)
        x = element_field(payload, "x", fam)
        y = element_field(payload, "y", fam)
        return _element_reply(core.multiply(x, y, fam))

    return _handle("mul", compute)


@app.route("/inv", methods=["POST"])
def inv():
    def compute():
        payload = require_json(request)
        return _element_reply(core.inverse(element_field(payload, "x", family_field(payload))))

    return _handle("inv", compute)


@app.route("/idem", methods=["POST"])
def idem():
    def compute():
        payload = require_json(request)
        fam = family_field(payload)
        return {"value": core.is_idempotent(element_field(payload, "x", fam), fam)}

    return _handle("idem", compute)


@app.route("/leq", methods=["POST"])
def leq():
    def compute():
        payload = require_json(request)
        fam = family_field(payload)
        x = element_field(payload, "x", fam)
        y = element_field(payload, "y", fam)
        return {"value": core.natural_leq(x, y, fam)}

    return _handle("leq", compute)


@app.route("/green", methods=["POST"])
def green():
    def compute():
        payload = require_json(request)
        fam = family_field(payload)
        x = element_field(payload, "x", fam)
        y = element_field(payload, "y", fam)
        relation = require_field(payload, "relation")
        return {"value": core.green_related(x, y, relation, fam)}

    return _handle("green", compute)


# ---------------------------------------------------------------------------
# Endomorfismos
# ---------------------------------------------------------------------------

@app.route("/endo/apply", methods=["POST"])
def endo_apply():
    def compute():
        payload = require_json(request)
        e = endo_field(payload, "expr")
        return _element_reply(endo.apply(e, element_field(payload, "x")))

    return _handle("endo/apply", compute)


@app.route("/endo/compose", methods=["POST"])
def endo_compose():
    def compute():
        payload = require_json(request)
        h = endo.compose(endo_field(payload, "f"), endo_field(payload, "g"))
        return {"normal_form": endo_to_json(h), "text": format_endo(h)}

    return _handle("endo/compose", compute)


@app.route("/endo/factor", methods=["POST"])
def endo_factor():
    def compute():
        payload = require_json(request)
        return factorization_to_json(endo_field(payload, "expr"))

    return _handle("endo/factor", compute)


@app.route("/endo/classify", methods=["POST"])
def endo_classify():
    def compute():
        payload = require_json(request)
        m = window_map_from_payload(require_field(payload, "map"))
        if m.window_bound > MAX_HTTP_WINDOW:
            raise ValueError(f"Ventana N={m.window_bound} supera MAX_HTTP_WINDOW={MAX_HTTP_WINDOW}")
        e = endo.classify_window(m)
        service_logger.info("Classify window=%s -> %s", m.window_bound, e)
        return {"normal_form": endo_to_json(e), "text": format_endo(e)}

    return _handle("endo/classify", compute)


@app.route("/family/check", methods=["POST"])
def family_check():
    def compute():
        payload = require_json(request)
        tails = require_field(payload, "tails")
        if isinstance(tails, list):
            tails = ",".join(str(t) for t in tails)
        indices, includes_empty = parse_tails(str(tails))
        witness = family_witness(indices)
        reply = {"closed": witness is None, "includes_empty": includes_empty}
        if witness is None:
            reply["family"] = format_family(Family(frozenset(indices), includes_empty))
        else:
            reply["witness"] = str(witness)
        return reply

    return _handle("family/check", compute)


# ---------------------------------------------------------------------------
# Verificación
# ---------------------------------------------------------------------------

@app.route("/verify", methods=["GET"])
def run_verify():
    raw_window = request.args.get("window")
    windows = {}
    if raw_window is not None:
        try:
            window_bound = int(raw_window)
        except ValueError:
            return jsonify({"error": '"window" debe ser un entero'}), 400
        if not MIN_WINDOW_BOUND <= window_bound <= MAX_HTTP_WINDOW:
            return jsonify(
                {"error": f'"window" debe estar entre {MIN_WINDOW_BOUND} y {MAX_HTTP_WINDOW}'}
            ), 400
        windows = {
            "triple_window": window_bound,
            "map_window": window_bound,
            "corner_window": window_bound,
        }

    try:
        reports = verify.run_default_suite(**windows)
    except Exception as exc:
        service_logger.exception("Verify error: %s", exc)
        return jsonify({"error": f"Error al ejecutar la suite: {str(exc)}"}), 500

    ok = all(report.ok for report in reports)
    body = {"ok": ok, "reports": [report.to_dict() for report in reports]}
    return jsonify(body), 200 if ok else 409


if __name__ == "__main__":
    port = int(os.getenv("PORT", "5000"))
    debug = os.getenv("FLASK_DEBUG", "0") == "1"
    app.run(host="0.0.0.0", port=port, debug=debug)
