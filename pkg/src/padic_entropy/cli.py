"""Thin command-line client over the dispatch layer.

Payloads are JSON documents (file or stdin); ``newton`` and ``heisenberg`` can
also be driven entirely by flags.  By default computations run in-process;
with ``--server URL`` the same request is POSTed to a running service.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 non-stabilization.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dispatch
from .errors import PadicEntropyError, ParseError

_KIND_EXIT = {"parse": 2, "validation": 3, "non_stabilization": 4}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-entropy",
        description="Exact entropy and scale of endomorphisms of p-adic groups",
    )
    parser.add_argument("--server", help="base URL of a running service (remote mode)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, with_file=True, with_oracle_opts=True):
        cmd = sub.add_parser(name, help=help_text)
        if with_file:
            cmd.add_argument(
                "-f", "--file", help="JSON payload file ('-' for stdin)"
            )
        if with_oracle_opts:
            cmd.add_argument("--window", type=int, help="stabilization window")
            cmd.add_argument("--cap", type=int, help="stabilization step cap")
        cmd.add_argument(
            "--format", choices=("json", "text"), default="text", dest="output_format"
        )
        return cmd

    add("entropy", "entropy of a matrix, block endomorphism, or per-prime family")
    scale = add("scale", "scale by formula and Moeller oracle")
    scale.add_argument("--search-lo", type=int, help="minimizing-search exponent lower bound")
    scale.add_argument("--search-hi", type=int, help="minimizing-search exponent upper bound")
    newton = add("newton", "Newton polygon and root valuations", with_oracle_opts=False)
    newton.add_argument("--poly", help="monic polynomial, e.g. 'X^2-10/3X+1'")
    newton.add_argument("--p", type=int, help="prime")
    add("oracle", "cotrajectory entropy oracle with diagnostics")
    add("check-at", "additivity check for a block lower-triangular map")
    add("classify", "E0 / EFiniteNotE0 classification", with_oracle_opts=False)
    heis = add("heisenberg", "Heisenberg group entropy and classification")
    heis.add_argument("--ring", choices=("zp", "qp"))
    heis.add_argument("--s", help="first diagonal parameter (rational string)")
    heis.add_argument("--t", help="second diagonal parameter (rational string)")
    heis.add_argument("--p", type=int, help="prime")
    heis.add_argument("--oracle", action="store_true", help="also run the box oracle")
    heis.add_argument("--classify", action="store_true", help="include the evidence report")
    return parser


def _load_payload(args) -> dict:
    source = getattr(args, "file", None)
    if source is None:
        return {}
    try:
        text = sys.stdin.read() if source == "-" else open(source).read()
    except OSError as exc:
        raise ParseError(f"cannot read payload: {exc}") from None
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"payload is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError("payload must be a JSON object")
    return payload


def _merge_flags(args, payload: dict) -> dict:
    merged = dict(payload)
    for flag, key in (
        ("window", "window"),
        ("cap", "cap"),
        ("poly", "poly"),
        ("p", "p"),
        ("ring", "ring"),
        ("s", "s"),
        ("t", "t"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "oracle", False):
        merged["oracle"] = True
    if getattr(args, "classify", False):
        merged["classify"] = True
    lo, hi = getattr(args, "search_lo", None), getattr(args, "search_hi", None)
    if lo is not None or hi is not None:
        if lo is None or hi is None:
            raise ParseError("--search-lo and --search-hi must be given together")
        merged["search_range"] = [lo, hi]
    return merged


def _render_entropy_field(doc: dict) -> str:
    terms = doc.get("terms", {})
    if not terms:
        return "0"
    body = " + ".join(
        (f"log({p})" if m == 1 else f"{m}*log({p})") for p, m in sorted(terms.items(), key=lambda kv: int(kv[0]))
    )
    return f"{body}  (~ {doc.get('approx_nats', 0.0):.6f} nats)"


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    provenance = report.get("provenance", {})

    def walk(prefix: str, value):
        if isinstance(value, dict):
            if set(value) == {"terms", "approx_nats"}:
                lines.append(f"{prefix}: {_render_entropy_field(value)}")
                return
            for key, nested in value.items():
                walk(f"{prefix}.{key}" if prefix else key, nested)
        else:
            lines.append(f"{prefix}: {value}")

    walk("", report.get("results", {}))
    if provenance:
        lines.append("provenance:")
        for key, text in provenance.items():
            lines.append(f"  {key}: {text}")
    return "\n".join(lines)


def _emit(report: dict, output_format: str):
    if output_format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_render_text(report))


def _run_remote(server: str, command: str, payload: dict, output_format: str) -> int:
    import httpx

    url = f"{server.rstrip('/')}/v1/{command}"
    response = httpx.post(url, json=payload, timeout=300.0)
    try:
        body = response.json()
    except ValueError:
        print(f"error: non-JSON response from {url}", file=sys.stderr)
        return 1
    if response.status_code == 200:
        _emit(body, output_format)
        return 0
    detail = body.get("detail", {})
    kind = detail.get("kind", "error") if isinstance(detail, dict) else "error"
    message = detail.get("message", str(detail)) if isinstance(detail, dict) else str(detail)
    print(f"error ({kind}): {message}", file=sys.stderr)
    return _KIND_EXIT.get(kind, 1)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload = _merge_flags(args, _load_payload(args))
        if args.server:
            return _run_remote(args.server, args.command, payload, args.output_format)
        report = dispatch.run(args.command, payload)
    except PadicEntropyError as exc:
        print(f"error ({exc.kind}): {exc}", file=sys.stderr)
        for violation in getattr(exc, "violations", []) or []:
            print(f"  - {violation}", file=sys.stderr)
        return exc.exit_code
    _emit(report, args.output_format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
