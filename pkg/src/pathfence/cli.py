"""Command line front end.

A thin client over the service handlers: flags become request models from
pathfence.service.schemas, the handler runs in process, and the response
document is printed as JSON (default) or CSV.  `pathfence serve` starts the
same handlers behind uvicorn.

Output is deterministic: identical invocations produce byte-identical
documents.  Version and timestamp live in a sidecar (written next to --out
targets), never in the payload.  Exit statuses: 0 success, 2 malformed
input, 3 domain violations or failed mathematical checks, 4 lost precision.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from pydantic import ValidationError

from pathfence.errors import DomainError, ParseError, PathfenceError, PrecisionFault
from pathfence.service import schemas
from pathfence.service.app import (
    error_envelope,
    handle_appell_check,
    handle_certify,
    handle_closed_form,
    handle_count,
    handle_decompose_check,
    handle_meta,
    handle_parking,
    handle_rect,
    handle_sections,
    handle_tennis,
    package_version,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_PRECISION = 4


def _int_pair(text: str, flag: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("%s takes two comma-separated integers" % flag)
    try:
        return [int(p.strip()) for p in parts]
    except ValueError:
        raise ParseError("%s takes two comma-separated integers" % flag) from None


def _boundary_spec(args) -> schemas.BoundarySpec:
    fields = {}
    if getattr(args, "boundary", None) is not None:
        try:
            fields["boundary"] = json.loads(args.boundary)
        except json.JSONDecodeError as exc:
            raise ParseError("--boundary is not valid JSON: %s" % exc) from None
    if getattr(args, "tennis", None) is not None:
        fields["tennis"] = _int_pair(args.tennis, "--tennis")
    if getattr(args, "arith", None) is not None:
        fields["arith"] = _int_pair(args.arith, "--arith")
    if getattr(args, "staircase", None) is not None:
        fields["staircase"] = args.staircase
    return schemas.BoundarySpec(**fields)


def _shape(args) -> list[int] | None:
    if getattr(args, "shape", None) is None:
        return None
    return _int_pair(args.shape, "--shape")


def _build_request(args):
    name = args.subcommand
    if name == "count":
        return handle_count, schemas.CountRequest(
            boundary=_boundary_spec(args),
            kind=args.kind,
            shape=_shape(args),
            sigma=args.sigma,
            n=args.n,
            oracle=args.oracle,
        )
    if name == "rect":
        return handle_rect, schemas.RectRequest(
            x=args.x, n=args.n, shape=_shape(args), sigma=args.sigma
        )
    if name == "appell-check":
        return handle_appell_check, schemas.AppellCheckRequest(
            boundary=_boundary_spec(args),
            shape=_shape(args),
            sigma=args.sigma,
            order=args.order,
        )
    if name == "sections":
        return handle_sections, schemas.SectionsRequest(
            boundary=_boundary_spec(args),
            shape=_shape(args),
            sigma=args.sigma,
            order=args.order,
            section=args.section,
            oracle=args.oracle,
        )
    if name == "tennis":
        return handle_tennis, schemas.TennisRequest(
            k=args.k, l=args.l, section=args.section, order=args.order,
            oracle=args.oracle,
        )
    if name == "closed-form":
        return handle_closed_form, schemas.ClosedFormRequest(
            arith=_int_pair(args.arith, "--arith"),
            shape=_shape(args),
            n=args.n,
            order=args.order,
        )
    if name == "parking":
        return handle_parking, schemas.ParkingRequest(
            boundary=_boundary_spec(args), n=args.n, oracle=args.oracle
        )
    if name == "certify":
        return handle_certify, schemas.CertifyRequest(
            boundary=_boundary_spec(args),
            shape=_shape(args),
            sigma=args.sigma,
            section=args.section,
            dz=args.dz,
            dy=args.dy,
        )
    if name == "decompose-check":
        return handle_decompose_check, schemas.DecomposeCheckRequest(
            boundary=_boundary_spec(args), x=args.x, n=args.n, shape=_shape(args)
        )
    raise ParseError("unknown subcommand %r" % name)  # pragma: no cover


def _csv_cell(value) -> str:
    if isinstance(value, list):
        return ";".join(value)
    return value


def _csv_rows(resp):
    if isinstance(resp, (schemas.CountResponse, schemas.ParkingResponse,
                         schemas.ClosedFormResponse)):
        yield ["n", "value"]
        for i, v in enumerate(resp.values):
            yield [str(i), _csv_cell(v)]
    elif isinstance(resp, schemas.TennisResponse):
        yield ["q", "value"]
        for q, v in enumerate(resp.values):
            yield [str(q), _csv_cell(v)]
    elif isinstance(resp, schemas.SectionsResponse):
        yield ["section", "q", "value"]
        for sec in resp.sections:
            for q, v in enumerate(sec.values):
                yield [str(sec.index), str(q), _csv_cell(v)]
    else:
        raise ParseError("csv output is only for the table subcommands")


def render(resp, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(resp.model_dump(), indent=2, sort_keys=True) + "\n"
    lines = [",".join(row) for row in _csv_rows(resp)]
    return "\n".join(lines) + "\n"


def _emit(document: str, args) -> None:
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(document)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(document)
    sidecar = {
        "tool": "pathfence",
        "version": package_version(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "subcommand": args.subcommand,
    }
    with open(out + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _add_boundary_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("boundary (choose exactly one)")
    group.add_argument("--boundary", metavar="JSON",
                       help='raw document {"prefix": [...], "period": [...]}')
    group.add_argument("--tennis", metavar="K,L", help="tennis family: k blocks of width l")
    group.add_argument("--arith", metavar="C,D", help="arithmetic family c + i*d")
    group.add_argument("--staircase", metavar="P/Q", help="staircase of rational slope")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", metavar="FILE",
                        help="write the document here plus a FILE.meta.json sidecar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathfence",
        description="Exact enumeration over periodic boundaries, with "
                    "generating-function sections and algebraicity certificates.",
    )
    parser.add_argument("--version", action="version",
                        version="pathfence " + package_version())
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", help="count tables by the triangular recursions")
    _add_boundary_flags(p)
    p.add_argument("--kind", choices=("auto", "lp", "sp", "parking"), default="auto")
    p.add_argument("--shape", metavar="A,B", help="diagonal step shape")
    p.add_argument("--sigma", metavar="VALUE", help="'symbolic' or a rational weight")
    p.add_argument("--n", type=int, required=True, help="largest index to report")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against direct dynamic programming")
    _add_output_flags(p)

    p = sub.add_parser("rect", help="single rectangle count by dynamic programming")
    p.add_argument("--x", type=int, required=True, help="rectangle width")
    p.add_argument("--n", type=int, required=True, help="rectangle height")
    p.add_argument("--shape", metavar="A,B")
    p.add_argument("--sigma", metavar="VALUE")
    _add_output_flags(p)

    p = sub.add_parser("appell-check", help="verify the functional relation to an order")
    _add_boundary_flags(p)
    p.add_argument("--shape", metavar="A,B")
    p.add_argument("--sigma", metavar="VALUE")
    p.add_argument("--order", type=int, required=True)
    _add_output_flags(p)

    p = sub.add_parser("sections", help="solve for the section generating functions")
    _add_boundary_flags(p)
    p.add_argument("--shape", metavar="A,B")
    p.add_argument("--sigma", metavar="VALUE")
    p.add_argument("--order", type=int, required=True, help="series order per section")
    p.add_argument("--section", type=int, help="report a single section")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check each section against the recursion")
    _add_output_flags(p)

    p = sub.add_parser("tennis", help="tennis ball sections and product formulas")
    p.add_argument("--k", type=int, required=True, help="blocks per period")
    p.add_argument("--l", type=int, required=True, help="block width")
    p.add_argument("--section", type=int, default=0)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against dynamic programming and the product formula")
    _add_output_flags(p)

    p = sub.add_parser("closed-form", help="closed forms over arithmetic boundaries")
    p.add_argument("--arith", metavar="C,D", required=True)
    p.add_argument("--shape", metavar="A,B")
    p.add_argument("--n", type=int, help="table through this index")
    p.add_argument("--order", type=int, help="series through this order (shape 1,1)")
    _add_output_flags(p)

    p = sub.add_parser("parking", help="parking function counts")
    _add_boundary_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check small indices against brute force")
    _add_output_flags(p)

    p = sub.add_parser("certify", help="guess and verify an annihilating polynomial")
    _add_boundary_flags(p)
    p.add_argument("--shape", metavar="A,B")
    p.add_argument("--sigma", metavar="VALUE")
    p.add_argument("--section", type=int, help="certify one section instead of the full series")
    p.add_argument("--dz", type=int, default=6, help="z-degree budget")
    p.add_argument("--dy", type=int, default=6, help="y-degree budget")
    _add_output_flags(p)

    p = sub.add_parser("decompose-check", help="verify the rectangle decomposition identity")
    _add_boundary_flags(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--shape", metavar="A,B")
    _add_output_flags(p)

    p = sub.add_parser("meta", help="tool name, version, and subcommands")
    _add_output_flags(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _print_error(exc: PathfenceError) -> None:
    doc, _ = error_envelope(exc)
    sys.stderr.write(json.dumps({"error": doc.model_dump()}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.subcommand == "serve":
        import uvicorn

        from pathfence.service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    try:
        if args.subcommand == "meta":
            resp = handle_meta()
        else:
            handler, request = _build_request(args)
            resp = handler(request)
        _emit(render(resp, args.format), args)
    except ValidationError as exc:
        first = exc.errors()[0]
        _print_error(ParseError(first.get("msg", "invalid request")))
        return EXIT_PARSE
    except ParseError as exc:
        _print_error(exc)
        return EXIT_PARSE
    except DomainError as exc:
        _print_error(exc)
        return EXIT_DOMAIN
    except PrecisionFault as exc:
        _print_error(exc)
        return EXIT_PRECISION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
