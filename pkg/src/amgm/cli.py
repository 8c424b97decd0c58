"""Command-line client for the amgm service.

Every subcommand builds a request, sends it to the service, and formats the
response as CSV or JSON.  By default the requests run against an in-process
instance of the app (no server needed); pass ``--server URL`` to talk to a
running one instead.  Numeric list arguments accept plain floats or simple
fractions, e.g. ``--alpha 2/3,1/6,1/6``.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from fractions import Fraction

import httpx

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _parse_number(token: str) -> float:
    token = token.strip()
    if "/" in token:
        return float(Fraction(token))
    return float(token)


def _parse_numbers(text: str) -> list[float]:
    return [_parse_number(tok) for tok in text.split(",") if tok.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


async def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://amgm.internal", timeout=None
    ) as client:
        return await client.post(path, json=payload)


def call_service(path: str, payload: dict, server: str | None = None) -> dict:
    """POST to the service (in-process unless a server URL is given)."""
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            resp = client.post(path, json=payload)
    else:
        resp = asyncio.run(_post_in_process(path, payload))
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise SystemExit(f"error: {detail}")
    return resp.json()


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _csv_table(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_record(record: dict, fields: list[str], args) -> None:
    if args.format == "json":
        _emit(json.dumps(record, indent=2) + "\n", args.out)
    else:
        _emit(_csv_table(fields, [[record.get(f) for f in fields]]), args.out)


def _flatten_gap(resp: dict) -> dict:
    flat = {k: v for k, v in resp.items() if k != "profile"}
    flat["min_quotient"] = resp["profile"]["min_quotient"]
    flat["max_quotient"] = resp["profile"]["max_quotient"]
    return flat


def cmd_gap(args) -> int:
    payload = {
        "alpha": _parse_numbers(args.alpha),
        "beta": _parse_numbers(args.beta) if args.beta else None,
        "x": _parse_numbers(args.x),
        "renormalize": args.renormalize,
    }
    resp = call_service("/gap", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp, indent=2) + "\n", args.out)
    else:
        flat = _flatten_gap(resp)
        fields = [
            "n", "am_alpha", "gm_alpha", "gap_alpha", "variance_lower_bound",
            "am_beta", "gm_beta", "gap_beta", "min_quotient", "max_quotient",
            "lower", "upper",
        ]
        _emit(_csv_table(fields, [[flat[f] for f in fields]]), args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    payload = {
        "alpha": _parse_numbers(args.alpha),
        "x": _parse_numbers(args.x),
        "renormalize": args.renormalize,
    }
    resp = call_service("/ratio-bounds", payload, args.server)
    fields = ["lower", "upper", "ratio", "equal_weights_ratio", "exponent_max", "exponent_min"]
    _emit_record(resp, fields, args)
    return EXIT_OK


def cmd_equality(args) -> int:
    payload = {
        "alpha": _parse_numbers(args.alpha),
        "beta": _parse_numbers(args.beta) if args.beta else None,
        "x": _parse_numbers(args.x),
        "tol": args.tol,
        "kind": args.kind,
        "renormalize": args.renormalize,
    }
    resp = call_service("/gap/equality", payload, args.server)
    fields = ["kind", "left_equal", "right_equal", "forced_value_left", "forced_value_right"]
    _emit_record(resp, fields, args)
    return EXIT_OK


def cmd_young(args) -> int:
    payload = {"u": args.u, "v": args.v, "p": args.p, "beta": args.beta}
    resp = call_service("/young", payload, args.server)
    _emit_record(resp, ["p", "q", "beta", "lower", "mid", "upper"], args)
    return EXIT_OK


def _read_atoms_csv(path: str) -> tuple[list[float], list[list[float]]]:
    """CSV with a 'mass' column followed by one column per function."""
    import csv as _csv

    with open(path, "r", encoding="utf-8") as fh:
        reader = _csv.reader(fh)
        header = next(reader)
        if not header or header[0].strip().lower() != "mass":
            raise SystemExit("error: atoms CSV must start with a 'mass' column")
        k = len(header) - 1
        if k < 1:
            raise SystemExit("error: atoms CSV needs at least one value column")
        masses: list[float] = []
        columns: list[list[float]] = [[] for _ in range(k)]
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            masses.append(_parse_number(row[0]))
            for j in range(k):
                columns[j].append(_parse_number(row[1 + j]))
    return masses, columns


def cmd_holder(args) -> int:
    masses, columns = _read_atoms_csv(args.csv)
    ps = _parse_numbers(args.p)
    if len(ps) == 1:
        if len(columns) < 2:
            raise SystemExit("error: two value columns (f, g) are required")
        payload = {
            "masses": masses,
            "f": columns[0],
            "g": columns[1],
            "p": ps[0],
            "beta": args.beta,
            "include_angular": args.angular,
        }
        resp = call_service("/holder", payload, args.server)
        fields = ["p", "q", "beta", "classical", "lower", "upper", "inner",
                  "coupling", "angular_distance"]
    else:
        if len(columns) < len(ps):
            raise SystemExit(
                f"error: {len(ps)} exponents but only {len(columns)} value columns"
            )
        payload = {"masses": masses, "fs": columns[: len(ps)], "ps": ps}
        resp = call_service("/holder/multi", payload, args.server)
        resp["ps"] = ";".join(_fmt(p) for p in resp["ps"])
        fields = ["ps", "classical", "lower", "upper", "inner", "coupling"]
    _emit_record(resp, fields, args)
    return EXIT_OK


def cmd_jensen(args) -> int:
    payload = {
        "alpha": _parse_numbers(args.alpha),
        "beta": _parse_numbers(args.beta) if args.beta else None,
        "x": _parse_numbers(args.x),
        "function": args.function,
        "tol": args.tol,
        "renormalize": args.renormalize,
    }
    resp = call_service("/jensen", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp, indent=2) + "\n", args.out)
    else:
        flat = {
            "function": resp["function"],
            "gap_alpha": resp["gap_alpha"],
            "gap_beta": resp["gap_beta"],
            "lower": resp["lower"],
            "upper": resp["upper"],
            "min_quotient": resp["profile"]["min_quotient"],
            "max_quotient": resp["profile"]["max_quotient"],
            "left_equal": resp["equality"]["left_equal"],
            "right_equal": resp["equality"]["right_equal"],
        }
        _emit(_csv_table(list(flat), [list(flat.values())]), args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    payload = {
        "kind": args.kind,
        "n": args.n,
        "draws": args.trials,
        "lambda": args.lam,
        "seed": args.seed,
        "stream_index": args.stream_index,
    }
    resp = call_service("/sample", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp, indent=2) + "\n", args.out)
    else:
        header = ["draw"] + [f"x{i}" for i in range(resp["n"])]
        rows = [[idx] + vec for idx, vec in zip(resp["stream_indices"], resp["draws"])]
        _emit(_csv_table(header, rows), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    scheme = args.scheme
    if args.weights_file and scheme == "uniform":
        scheme = "explicit"
    payload = {
        "n": _parse_ints(args.n),
        "trials": args.trials,
        "epsilon": args.epsilon,
        "lambda": args.lam,
        "seed": args.seed,
        "scheme": scheme,
    }
    if args.weights_file:
        from .experiments import load_weights_file

        payload["weights"] = [float(w) for w in load_weights_file(args.weights_file)]
    resp = call_service(f"/experiment/{args.kind}", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp["results"], indent=2) + "\n", args.out)
    else:
        _emit(resp["csv"], args.out)
    return EXIT_OK


def cmd_suite(args) -> int:
    payload = {
        "trials": args.trials,
        "seed": args.seed,
        "inject_bug": args.inject_bug,
    }
    resp = call_service("/suite", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp, indent=2) + "\n", args.out)
    else:
        header = ["name", "evaluations", "violations", "worst_slack"]
        rows = [[c[h] for h in header] for c in resp["checks"]]
        _emit(_csv_table(header, rows), args.out)
    total = resp["total_violations"]
    print(
        f"suite: {resp['trials']} trials, {total} violation(s)",
        file=sys.stderr,
    )
    return EXIT_OK if total == 0 else EXIT_CHECK_FAILED


def cmd_selfcheck(args) -> int:
    payload = {"n": args.n, "trials": args.trials, "seed": args.seed}
    resp = call_service("/selfcheck", payload, args.server)
    if args.format == "json":
        _emit(json.dumps(resp, indent=2) + "\n", args.out)
    else:
        rows = []
        for e in resp["equivalence"]:
            rows.append(["sampler_equivalence", _fmt(e["u"]), _fmt(e["difference"]),
                         _fmt(e["four_se"]), _fmt(e["ok"])])
        for b in resp["ball_volume"]:
            rows.append(["ball_volume", str(b["n"]), _fmt(abs(b["estimate"] - b["expected"])),
                         _fmt(b["three_se"]), _fmt(b["ok"])])
        for g in resp["geometry"]:
            rows.append(["geometry_identity", str(g["n"]), _fmt(g["identity_error"]),
                         _fmt(1e-12), _fmt(g["ok"])])
        _emit(_csv_table(["check", "case", "discrepancy", "allowance", "ok"], rows), args.out)
    print(
        "selfcheck: " + ("PASS" if resp["passed"] else "FAIL"),
        file=sys.stderr,
    )
    return EXIT_OK if resp["passed"] else EXIT_CHECK_FAILED


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("amgm.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the result to this path instead of stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--server", help="base URL of a running service (default: in-process)")


def _add_weight_data_options(p: argparse.ArgumentParser, with_beta: bool = True) -> None:
    p.add_argument("--alpha", required=True, help="comma-separated weights, e.g. 2/3,1/6,1/6")
    if with_beta:
        p.add_argument("--beta", help="second weight vector (default: uniform)")
    p.add_argument("--x", required=True, help="comma-separated nonnegative data values")
    p.add_argument("--renormalize", action="store_true",
                   help="repair weight sums within 1e-6 of 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amgm",
        description="Weighted AM-GM gap comparisons, refined Young/Holder/Jensen "
        "bounds, and seeded concentration experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="two-sided envelope between the AM-GM gaps of two weightings")
    _add_weight_data_options(p)
    _add_output_options(p)
    p.set_defaults(fn=cmd_gap)

    p = sub.add_parser("bounds", help="equal-weights-ratio bounds on the weighted GM/AM ratio")
    _add_weight_data_options(p, with_beta=False)
    _add_output_options(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("equality", help="diagnose equality on either side of the envelope")
    _add_weight_data_options(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--kind", choices=["amgm", "jensen"], default="amgm")
    _add_output_options(p)
    p.set_defaults(fn=cmd_equality)

    p = sub.add_parser("young", help="two-sided refinement of the Young defect")
    p.add_argument("--u", type=_parse_number, required=True)
    p.add_argument("--v", type=_parse_number, required=True)
    p.add_argument("--p", type=_parse_number, required=True)
    p.add_argument("--beta", type=_parse_number, default=0.5)
    _add_output_options(p)
    p.set_defaults(fn=cmd_young)

    p = sub.add_parser("holder", help="refined Holder envelope from a CSV of atoms")
    p.add_argument("--csv", required=True,
                   help="atom list: header mass,f,g,... one atom per row")
    p.add_argument("--p", required=True,
                   help="exponent p (conjugate q implied) or a comma list with sum(1/p)=1")
    p.add_argument("--beta", type=_parse_number, default=0.5)
    p.add_argument("--angular", action=argparse.BooleanOptionalAction, default=True,
                   help="include the angular distance (two-function case)")
    _add_output_options(p)
    p.set_defaults(fn=cmd_holder)

    p = sub.add_parser("jensen", help="two-sided envelope between Jensen gaps")
    _add_weight_data_options(p)
    p.add_argument("--function", default="exp",
                   choices=["exp", "square", "quartic", "neg-log", "xlogx"])
    p.add_argument("--tol", type=float, default=1e-9)
    _add_output_options(p)
    p.set_defaults(fn=cmd_jensen)

    p = sub.add_parser("sample", help="emit seeded draws, one CSV row per draw")
    p.add_argument("kind", choices=["exponential", "sphere"])
    p.add_argument("--n", type=int, required=True, help="coordinates per draw")
    p.add_argument("--trials", type=int, default=1, help="number of draws")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream-index", type=int, default=0)
    _add_output_options(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("experiment", help="run a concentration experiment")
    p.add_argument("kind", choices=["ratio", "gap", "wratio"])
    p.add_argument("--n", required=True, help="comma-separated dimensions, e.g. 100,10000")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", default="uniform",
                   help="uniform | dirichlet_random | geometric_decay(rho) | explicit")
    p.add_argument("--weights-file", help="one weight per line for the explicit scheme")
    _add_output_options(p)
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("suite", help="randomized verification of every supported inequality")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-bug", action="store_true",
                   help="flip the sandwich constants to prove the harness notices")
    _add_output_options(p)
    p.set_defaults(fn=cmd_suite)

    p = sub.add_parser("selfcheck", help="sampler-equivalence, ball-volume and geometry checks")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _add_output_options(p)
    p.set_defaults(fn=cmd_selfcheck)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
