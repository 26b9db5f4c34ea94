"""Command-line front end: a thin client over the height service.

By default requests are served in-process (no network); pass --server URL
to talk to a running instance instead.  Curve coefficients and polynomials
are comma-separated lists, constant term first for polynomials; points are
"O", "x,y" (rationals allowed), or "alpha,beta,delta".

Exit codes: 0 ok, 1 input/other, 2 curve, 3 point, 4 hypothesis violation,
5 precision failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import httpx

from .curve import CurvePoint
from .exactmath import DEFAULT_PRECISION, DEFAULT_TRIAL_BOUND

EXIT_CODES = {"curve": 2, "point": 3, "hypothesis": 4, "precision": 5, "input": 1}


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(part.strip()) for part in text.split(",")]
    except ValueError as exc:
        raise SystemExit(f"error: expected comma-separated integers, got {text!r}") from exc


def _parse_point(text: str):
    if text.strip().upper() == "O":
        return "O"
    parts = [part.strip() for part in text.split(",")]
    if len(parts) == 2:
        x, y = (Fraction(p) for p in parts)
        return CurvePoint.from_xy(x, y).serialize()
    if len(parts) == 3:
        return [int(p) for p in parts]
    raise SystemExit(f"error: point must be 'O', 'x,y' or 'alpha,beta,delta', got {text!r}")


class Client:
    """HTTP client; in-process ASGI by default, remote when --server given."""

    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(path, json=payload)


def _common_payload(args) -> dict:
    return {
        "precision": args.prec,
        "trial_bound": args.trial_bound,
        "strict": args.strict,
    }


def _family_payload(args) -> dict:
    payload = _common_payload(args)
    if args.seed:
        payload["seed"] = _parse_ints(args.seed)
    if args.f:
        payload["f"] = _parse_ints(args.f)
    if args.F:
        payload["F"] = _parse_ints(args.F)
    return payload


def _emit(args, data: dict, text_renderer) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        text_renderer(data)


def _render_kv(pairs) -> None:
    width = max(len(key) for key, _ in pairs)
    for key, value in pairs:
        print(f"{key.ljust(width)}  {value}")


def _run(args) -> int:
    client = Client(args.server)

    if args.command == "curve-info":
        response = client.post(
            "/curve/info", {**_common_payload(args), "coefficients": _parse_ints(args.coefficients)}
        )
        return _finish(args, response, _render_curve_info)

    if args.command == "height":
        payload = {
            **_common_payload(args),
            "coefficients": _parse_ints(args.coefficients),
            "point": _parse_point(args.point),
        }
        return _finish(args, client.post("/height", payload), _render_height)

    if args.command == "lower-bound":
        payload = {**_common_payload(args), "coefficients": _parse_ints(args.coefficients)}
        if args.d is not None:
            payload["d"] = args.d
        if args.d_sign is not None:
            payload["d_sign"] = args.d_sign
        return _finish(args, client.post("/lower-bound", payload), _render_lower_bound)

    if args.command == "family":
        if args.family_command == "make":
            return _finish(args, client.post("/family/make", _family_payload(args)), _render_family)
        if args.family_command == "instantiate":
            payload = {**_family_payload(args), "t": args.t}
            return _finish(args, client.post("/family/instantiate", payload), _render_instance)
        if args.family_command == "scan":
            payload = {**_family_payload(args), "t_min": args.range[0], "t_max": args.range[1]}
            return _finish(args, client.post("/family/scan", payload), _render_scan)

    if args.command == "primitivity":
        payload = {
            **_common_payload(args),
            "coefficients": _parse_ints(args.coefficients),
            "d": args.d,
            "point": _parse_point(args.point),
        }
        return _finish(args, client.post("/primitivity", payload), _render_certificate)

    if args.command == "threshold-scan":
        payload = {**_common_payload(args), "t_min": args.range[0], "t_max": args.range[1]}
        return _finish(args, client.post("/threshold-scan", payload), _render_threshold)

    raise SystemExit(f"error: unknown command {args.command!r}")


def _finish(args, response: httpx.Response, renderer) -> int:
    if response.status_code != 200:
        try:
            data = response.json()
        except ValueError:
            print(f"error: service returned {response.status_code}", file=sys.stderr)
            return 1
        error_class = data.get("error_class", "input")
        message = data.get("message") or data.get("detail") or "request failed"
        print(f"error ({error_class}): {message}", file=sys.stderr)
        return EXIT_CODES.get(error_class, 1)
    _emit(args, response.json(), renderer)
    return 0


# ---------------------------------------------------------------------------
# text renderers


def _factor_string(entries) -> str:
    return " * ".join(
        f"{e['p']}^{e['exponent']}" if e["exponent"] > 1 else str(e["p"]) for e in entries
    )


def _render_curve_info(data: dict) -> None:
    sign = "-" if data["disc"] < 0 else ""
    _render_kv(
        [
            ("curve", str(data["coefficients"])),
            ("short form", "yes" if data["short_form"] else "no"),
            ("b2,b4,b6,b8", f"{data['b2']}, {data['b4']}, {data['b6']}, {data['b8']}"),
            ("c4,c6", f"{data['c4']}, {data['c6']}"),
            ("disc", f"{data['disc']} = {sign}{_factor_string(data['disc_factors'])}"),
            ("6th-power-free", "yes" if data["sixth_power_free"] else "no"),
            ("minimal (v_p(disc) < 12)", "yes" if data["minimal_everywhere"] else "no"),
        ]
    )
    for entry in data["disc_factors"]:
        print(f"  p={entry['p']:<8} v_p(disc)={entry['exponent']:<3} minimal={'yes' if entry['minimal'] else 'no'}")


def _render_height(data: dict) -> None:
    _render_kv(
        [
            ("hhat", f"{data['hhat']} +- {data['error']}"),
            ("torsion", "yes" if data["torsion"] else "no"),
            ("archimedean", f"{data['archimedean']} ({data['method']})"),
            ("precision", str(data["precision"])),
        ]
    )
    if data["entries"]:
        print("finite places:")
        for e in data["entries"]:
            num, den = e["lambda_multiplier"]
            print(
                f"  p={e['place']:<8} lambda={num}/{den}*log(p) = {e['value']}"
                f"  case={e['case']} A={e['A']} B={e['B']} C={e['C']} N={e['N']}"
            )


def _render_lower_bound(data: dict) -> None:
    pairs = [
        ("sign(D)", "+" if data["sign_d"] > 0 else "-"),
        ("constant", f"{data['constant']} +- {data['error']}"),
        ("|q|", data["q_abs"]),
        ("omega", data["omega"]),
        ("prime sum term", data["prime_sum_term"]),
        ("p=2 term", data["two_term"]),
    ]
    if data["d"] is not None:
        pairs.append(("D", str(data["d"])))
        pairs.append(("square-free", data["square_free"]))
        pairs.append(("bound(D)", data["bound"]))
    _render_kv(pairs)


def _render_family(data: dict) -> None:
    _render_kv(
        [
            ("f", str(data["f"])),
            ("F", str(data["F"])),
            ("f1", str(data["f1"])),
            ("D", str(data["D"])),
            ("m (F' = m f)", str(data["m"])),
            ("lower bound applies", "yes" if data["lower_bound_applicable"] else "no"),
        ]
    )


def _render_instance(data: dict) -> None:
    _render_kv(
        [
            ("t", str(data["t"])),
            ("D(t)", str(data["d"])),
            ("square-free", data["square_free"] + (f" (p={data['square_free_witness']})" if data["square_free_witness"] else "")),
            ("curve", str(data["curve"])),
            ("point", str(data["point"])),
        ]
    )


def _render_scan(data: dict) -> None:
    for record in data["records"]:
        if record["status"] == "certified":
            verdict = record["certificate"]["verdict"]
            extra = f"hhat={record['certificate']['hhat']}" if record["certificate"]["hhat"] else ""
            print(f"t={record['t']:<8} {verdict:<14} {extra}")
        else:
            print(f"t={record['t']:<8} {record['status']:<14} {record['reason']}")


def _render_certificate(data: dict) -> None:
    _render_kv(
        [
            ("verdict", data["verdict"]),
            ("hhat", str(data["hhat"])),
            ("lower bound", str(data["lower_bound"])),
            ("m_max", str(data["m_max"])),
            ("notes", data["notes"]),
        ]
    )


def _render_threshold(data: dict) -> None:
    _render_kv(
        [
            ("range", f"[{data['t_min']}, {data['t_max']}]"),
            ("threshold (t > 0)", str(data["positive_threshold"])),
            ("threshold (t < 0)", str(data["negative_threshold"])),
            ("combined |t|", str(data["combined_threshold"])),
            ("constant used", data["constant"]),
        ]
    )


# ---------------------------------------------------------------------------
# argument parsing


def _add_family_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", help="A,B for the cubic seed f = t^3+At+B")
    parser.add_argument("--f", help="cubic f coefficients, constant first")
    parser.add_argument("--F", help="F coefficients, constant first (F' = m f)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistheights",
        description="Canonical heights on quadratic twists of elliptic curves",
    )
    parser.add_argument("--prec", type=int, default=DEFAULT_PRECISION, help="working precision in bits (default 128)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--trial-bound", type=int, default=DEFAULT_TRIAL_BOUND, dest="trial_bound")
    parser.add_argument("--strict", action="store_true", help="reject unknown square-free verdicts")
    parser.add_argument("--server", help="remote service URL (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-info", help="quantities, disc factorization, minimality")
    p.add_argument("coefficients", help="a1,a2,a3,a4,a6 or short-form a2,a4,a6")

    p = sub.add_parser("height", help="canonical height with local breakdown")
    p.add_argument("coefficients")
    p.add_argument("point", help="'O', 'x,y', or 'alpha,beta,delta'")

    p = sub.add_parser("lower-bound", help="twist height lower bound report")
    p.add_argument("coefficients")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--d", type=int, help="twisting integer")
    group.add_argument("--d-sign", choices=("+", "-"), dest="d_sign", help="sign-only query")

    p = sub.add_parser("family", help="twist family operations")
    fam_sub = p.add_subparsers(dest="family_command", required=True)
    p_make = fam_sub.add_parser("make", help="construct and validate a family")
    _add_family_arguments(p_make)
    p_inst = fam_sub.add_parser("instantiate", help="curve and point at integer t")
    _add_family_arguments(p_inst)
    p_inst.add_argument("--t", type=int, required=True)
    p_scan = fam_sub.add_parser("scan", help="primitivity scan over a t-range")
    _add_family_arguments(p_scan)
    p_scan.add_argument("--range", type=int, nargs=2, required=True, metavar=("T_MIN", "T_MAX"))

    p = sub.add_parser("primitivity", help="primitivity certificate for a twist point")
    p.add_argument("coefficients", help="short-form base curve a2,a4,a6 (or 5-tuple)")
    p.add_argument("point")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("threshold-scan", help="minimal |t| with bound ratio < 4")
    p.add_argument("--range", type=int, nargs=2, required=True, metavar=("T_MIN", "T_MAX"))

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        return _run(args)
    except SystemExit:
        raise
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service ({exc})", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
