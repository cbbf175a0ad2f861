"""Service handlers and the FastAPI application.

Each handler is a plain function from a request model to a response model,
so the command line can call them in process with zero HTTP overhead, and
`create_app` mounts the same functions as POST routes for `pathfence serve`.

Failures map onto three families and stay structured all the way out:
ParseError means the request itself is malformed (HTTP 400), DomainError
means a well-formed request left an operation's domain or a mathematical
check failed (HTTP 422), and PrecisionFault means a computation could not
be pushed to the promised truncation order (HTTP 500).
"""
from __future__ import annotations

from importlib import metadata

from pathfence.appell import (
    appell_data,
    appell_residual,
    counts_for,
    lp_recursion,
    parking_recursion,
    sp_recursion,
)
from pathfence.boundary import (
    Boundary,
    StepShape,
    make_arithmetic,
    make_staircase,
    make_tennis,
)
from pathfence.certify import (
    counts_series_provider,
    find_annihilator,
    section_series_provider,
)
from pathfence.closed_forms import lp_arith_closed, sp11_closed_series, sp1b_closed
from pathfence.converter import section_gfs, tennis_q0_product
from pathfence.errors import (
    DomainError,
    OracleMismatch,
    ParseError,
    PathfenceError,
    PrecisionFault,
    ResidualNonzero,
    TooLarge,
)
from pathfence.oracles import (
    count_lp_table,
    count_parking_bf,
    count_rect_ab,
    count_rect_lattice,
    count_sp_table,
    decomposition_check,
)
from pathfence.rings import SigmaPoly, rat, scalar_str
from pathfence.service import schemas

SUBCOMMANDS = [
    "count",
    "rect",
    "appell-check",
    "sections",
    "tennis",
    "closed-form",
    "parking",
    "certify",
    "decompose-check",
]

# Guard rails for a shared service: generous enough for every documented
# experiment, small enough that one request cannot pin a core for minutes.
N_CAP = 600
ORDER_CAP = 600
SECTION_ORDER_CAP = 48
DEGREE_CAP = 12
BRUTE_FORCE_CAP = 5


def package_version() -> str:
    try:
        return metadata.version("pathfence")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "0.0.0"


def build_boundary(spec: schemas.BoundarySpec) -> Boundary:
    """Realize a boundary spec; structural junk is a ParseError."""
    if spec.boundary is not None:
        return Boundary(spec.boundary.prefix, spec.boundary.period)
    if spec.tennis is not None:
        if len(spec.tennis) != 2:
            raise ParseError("tennis takes two integers: block count, block width")
        return make_tennis(*spec.tennis)
    if spec.arith is not None:
        if len(spec.arith) != 2:
            raise ParseError("arith takes two integers: start, difference")
        return make_arithmetic(*spec.arith)
    try:
        return make_staircase(spec.staircase)
    except (ValueError, ZeroDivisionError):
        raise ParseError("staircase slope must be a positive rational like 2/3") from None


def parse_shape(pair) -> StepShape | None:
    if pair is None:
        return None
    if len(pair) != 2:
        raise ParseError("shape takes two integers: a, b")
    return StepShape(pair[0], pair[1])


def parse_sigma(text):
    """None or "symbolic" keeps sigma a formal variable; otherwise a rational."""
    if text is None or text == "symbolic":
        return None
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError("sigma must be 'symbolic' or a rational like 3/2") from None


def boundary_doc(bnd: Boundary) -> schemas.BoundaryDoc:
    return schemas.BoundaryDoc(**bnd.to_json_dict())


def format_value(value) -> schemas.Value:
    if isinstance(value, SigmaPoly):
        return [scalar_str(c) for c in value.coeffs]
    return scalar_str(value)


def _cap(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise TooLarge("%s is limited to %d per request, got %d" % (what, cap, value))


def handle_count(req: schemas.CountRequest) -> schemas.CountResponse:
    bnd = build_boundary(req.boundary)
    shape = parse_shape(req.shape)
    sigma = parse_sigma(req.sigma)
    kind = req.kind
    if kind == "auto":
        kind = "sp" if shape is not None else "lp"
    if kind == "sp" and shape is None:
        raise ParseError("weighted counts need a shape")
    if kind != "sp" and shape is not None:
        raise ParseError("a shape only makes sense for weighted counts")
    if kind != "sp" and sigma is not None:
        raise ParseError("sigma only makes sense for weighted counts")
    _cap(req.n, N_CAP, "n")

    if kind == "lp":
        values = lp_recursion(bnd, req.n)
        if req.oracle:
            dp = count_lp_table(bnd, req.n)
            if dp != values:
                raise OracleMismatch("recursion disagrees with dynamic programming")
    elif kind == "sp":
        values = sp_recursion(bnd, shape, req.n, sigma)
        if req.oracle:
            dp = count_sp_table(bnd, shape, req.n, sigma)
            if dp != values:
                raise OracleMismatch("recursion disagrees with dynamic programming")
    else:
        values = parking_recursion(bnd, req.n)
        if req.oracle:
            limit = min(req.n, BRUTE_FORCE_CAP)
            for i in range(limit + 1):
                if count_parking_bf(bnd, i) != values[i]:
                    raise OracleMismatch("recursion disagrees with brute force at n=%d" % i)

    return schemas.CountResponse(
        boundary=boundary_doc(bnd),
        kind=kind,
        n=req.n,
        sigma=req.sigma if kind == "sp" else None,
        values=[format_value(v) for v in values],
        oracle_checked=req.oracle,
    )


def handle_rect(req: schemas.RectRequest) -> schemas.RectResponse:
    shape = parse_shape(req.shape)
    sigma = parse_sigma(req.sigma)
    _cap(req.x, N_CAP, "x")
    _cap(req.n, N_CAP, "n")
    if shape is None:
        if sigma is not None:
            raise ParseError("sigma only makes sense with a shape")
        value = count_rect_lattice(req.x, req.n)
    else:
        value = count_rect_ab(shape, req.x, req.n, sigma)
    return schemas.RectResponse(
        x=req.x, n=req.n, shape=req.shape, sigma=req.sigma, value=format_value(value)
    )


def handle_appell_check(req: schemas.AppellCheckRequest) -> schemas.AppellCheckResponse:
    bnd = build_boundary(req.boundary)
    shape = parse_shape(req.shape)
    sigma = parse_sigma(req.sigma)
    _cap(req.order, ORDER_CAP, "order")
    residual_zero = True
    first = None
    try:
        appell_residual(bnd, req.order, shape, sigma)
    except ResidualNonzero as exc:
        residual_zero = False
        first = exc.order
    return schemas.AppellCheckResponse(
        boundary=boundary_doc(bnd),
        shape=req.shape,
        sigma=req.sigma,
        order=req.order,
        residual_zero=residual_zero,
        first_nonzero=first,
    )


def _oracle_check_sections(bnd, shape, sigma, sgf, picked, order) -> None:
    k = sgf.height
    r = sgf.prefix_len
    counts = counts_for(bnd, r + k * order + k - 1, shape, sigma)
    for j, series in picked:
        for q in range(order + 1):
            if counts[r + k * q + j] != series.coefficient(q):
                raise OracleMismatch(
                    "section %d disagrees with the recursion at z^%d" % (j, q)
                )


def handle_sections(req: schemas.SectionsRequest) -> schemas.SectionsResponse:
    bnd = build_boundary(req.boundary)
    shape = parse_shape(req.shape)
    sigma = parse_sigma(req.sigma)
    _cap(req.order, SECTION_ORDER_CAP, "order")
    data = appell_data(bnd, 1, shape, sigma)
    if req.section is not None and req.section >= data.height:
        raise DomainError(
            "section %d does not exist, the period has height %d"
            % (req.section, data.height)
        )
    sgf = section_gfs(data, req.order)
    picked = list(enumerate(sgf.sections))
    if req.section is not None:
        picked = [picked[req.section]]
    if req.oracle:
        _oracle_check_sections(bnd, shape, sigma, sgf, picked, req.order)
    return schemas.SectionsResponse(
        boundary=boundary_doc(bnd),
        height=data.height,
        prefix_len=data.prefix_len,
        width=data.width,
        order=req.order,
        shape=req.shape,
        sigma=req.sigma,
        sections=[
            schemas.SectionDoc(
                index=j,
                values=[format_value(s.coefficient(q)) for q in range(req.order + 1)],
            )
            for j, s in picked
        ],
        oracle_checked=req.oracle,
    )


def handle_tennis(req: schemas.TennisRequest) -> schemas.TennisResponse:
    _cap(req.order, SECTION_ORDER_CAP, "order")
    bnd = make_tennis(req.k, req.l)
    data = appell_data(bnd, 1)
    if req.section >= data.height:
        raise DomainError(
            "section %d does not exist, the period has height %d"
            % (req.section, data.height)
        )
    sgf = section_gfs(data, req.order)
    series = sgf.sections[req.section]
    if req.oracle:
        k = sgf.height
        r = sgf.prefix_len
        counts = count_lp_table(bnd, max(r + k * req.order + req.section,
                                         1 + req.k * req.order))
        for q in range(req.order + 1):
            if counts[r + k * q + req.section] != series.coefficient(q):
                raise OracleMismatch(
                    "section disagrees with dynamic programming at z^%d" % q
                )
        if req.section == 0:
            # The product formula indexes from the original prefix of length
            # one, which canonicalization can absorb (k = l = 1), so compare
            # it against the count table rather than the solved section.
            product = tennis_q0_product(req.k, req.l, req.order)
            for q in range(req.order + 1):
                if counts[1 + req.k * q] != product.coefficient(q):
                    raise OracleMismatch(
                        "product formula disagrees with dynamic programming at z^%d" % q
                    )
    return schemas.TennisResponse(
        k=req.k,
        l=req.l,
        boundary=boundary_doc(bnd),
        section=req.section,
        order=req.order,
        values=[format_value(series.coefficient(q)) for q in range(req.order + 1)],
        oracle_checked=req.oracle,
    )


def handle_closed_form(req: schemas.ClosedFormRequest) -> schemas.ClosedFormResponse:
    if len(req.arith) != 2:
        raise ParseError("arith takes two integers: start, difference")
    c, d = req.arith
    make_arithmetic(c, d)  # domain check only
    shape = parse_shape(req.shape)
    if req.n is not None and req.order is not None:
        raise ParseError("give n for a table or order for a series, not both")

    if shape is None:
        if req.n is None:
            raise ParseError("the plain count formula needs n")
        _cap(req.n, N_CAP, "n")
        family = "lp-arith"
        values = [format_value(lp_arith_closed(c, d, i)) for i in range(req.n + 1)]
    elif req.order is not None:
        if tuple(shape) != (1, 1) or d != 1:
            raise DomainError(
                "the weighted series expansion is for shape (1, 1) over c + i"
            )
        _cap(req.order, ORDER_CAP, "order")
        family = "sp11"
        series = sp11_closed_series(c, req.order)
        values = [format_value(series.coefficient(i)) for i in range(req.order + 1)]
    else:
        if req.n is None:
            raise ParseError("the weighted formula needs n")
        if shape.a != 1:
            raise DomainError("the weighted per-n formula is for shapes (1, b)")
        _cap(req.n, N_CAP, "n")
        family = "sp1b"
        values = [format_value(sp1b_closed(shape.b, c, d, i)) for i in range(req.n + 1)]

    return schemas.ClosedFormResponse(
        family=family,
        arith=req.arith,
        shape=req.shape,
        n=req.n,
        order=req.order,
        values=values,
    )


def handle_parking(req: schemas.ParkingRequest) -> schemas.ParkingResponse:
    bnd = build_boundary(req.boundary)
    _cap(req.n, N_CAP, "n")
    values = parking_recursion(bnd, req.n)
    oracle_n = None
    if req.oracle:
        oracle_n = min(req.n, BRUTE_FORCE_CAP)
        for i in range(oracle_n + 1):
            if count_parking_bf(bnd, i) != values[i]:
                raise OracleMismatch("recursion disagrees with brute force at n=%d" % i)
    return schemas.ParkingResponse(
        boundary=boundary_doc(bnd),
        n=req.n,
        values=[format_value(v) for v in values],
        oracle_checked=req.oracle,
        oracle_n=oracle_n,
    )


def handle_certify(req: schemas.CertifyRequest) -> schemas.CertifyResponse:
    bnd = build_boundary(req.boundary)
    shape = parse_shape(req.shape)
    sigma = parse_sigma(req.sigma)
    if shape is not None and sigma is None:
        raise ParseError("certifying weighted counts needs a numeric sigma")
    _cap(req.dz, DEGREE_CAP, "dz")
    _cap(req.dy, DEGREE_CAP, "dy")
    if req.section is None:
        provider = counts_series_provider(bnd, shape, sigma)
    else:
        if req.section >= bnd.height:
            raise DomainError(
                "section %d does not exist, the period has height %d"
                % (req.section, bnd.height)
            )
        provider = section_series_provider(bnd, req.section, shape, sigma)
    cand = find_annihilator(provider, req.dz, req.dy)
    return schemas.CertifyResponse(
        boundary=boundary_doc(bnd),
        section=req.section,
        dz_budget=req.dz,
        dy_budget=req.dy,
        found=cand is not None,
        certificate=None if cand is None else schemas.CertificateDoc(**cand.to_json_dict()),
    )


def handle_decompose_check(
    req: schemas.DecomposeCheckRequest,
) -> schemas.DecomposeCheckResponse:
    bnd = build_boundary(req.boundary)
    shape = parse_shape(req.shape)
    _cap(req.x, N_CAP, "x")
    _cap(req.n, N_CAP, "n")
    holds = decomposition_check(bnd, req.x, req.n, shape)
    return schemas.DecomposeCheckResponse(
        boundary=boundary_doc(bnd), x=req.x, n=req.n, shape=req.shape, holds=holds
    )


def handle_meta() -> schemas.MetaResponse:
    return schemas.MetaResponse(
        name="pathfence", version=package_version(), subcommands=list(SUBCOMMANDS)
    )


def error_envelope(exc: PathfenceError) -> tuple[schemas.ErrorDoc, int]:
    """Structured error document plus the HTTP status it travels under."""
    if isinstance(exc, ParseError):
        family, status = "parse", 400
    elif isinstance(exc, DomainError):
        family, status = "domain", 422
    elif isinstance(exc, PrecisionFault):
        family, status = "precision", 500
    else:  # pragma: no cover
        family, status = "domain", 422
    doc = schemas.ErrorDoc(family=family, kind=type(exc).__name__, message=str(exc))
    return doc, status


def create_app():
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse

    app = FastAPI(title="pathfence", version=package_version())

    @app.exception_handler(PathfenceError)
    async def _pathfence_error(request: Request, exc: PathfenceError):
        doc, status = error_envelope(exc)
        return JSONResponse(status_code=status, content={"error": doc.model_dump()})

    @app.get("/meta", response_model=schemas.MetaResponse)
    def meta():
        return handle_meta()

    @app.post("/count", response_model=schemas.CountResponse)
    def count(req: schemas.CountRequest):
        return handle_count(req)

    @app.post("/rect", response_model=schemas.RectResponse)
    def rect(req: schemas.RectRequest):
        return handle_rect(req)

    @app.post("/appell-check", response_model=schemas.AppellCheckResponse)
    def appell_check(req: schemas.AppellCheckRequest):
        return handle_appell_check(req)

    @app.post("/sections", response_model=schemas.SectionsResponse)
    def sections(req: schemas.SectionsRequest):
        return handle_sections(req)

    @app.post("/tennis", response_model=schemas.TennisResponse)
    def tennis(req: schemas.TennisRequest):
        return handle_tennis(req)

    @app.post("/closed-form", response_model=schemas.ClosedFormResponse)
    def closed_form(req: schemas.ClosedFormRequest):
        return handle_closed_form(req)

    @app.post("/parking", response_model=schemas.ParkingResponse)
    def parking(req: schemas.ParkingRequest):
        return handle_parking(req)

    @app.post("/certify", response_model=schemas.CertifyResponse)
    def certify(req: schemas.CertifyRequest):
        return handle_certify(req)

    @app.post("/decompose-check", response_model=schemas.DecomposeCheckResponse)
    def decompose_check(req: schemas.DecomposeCheckRequest):
        return handle_decompose_check(req)

    return app
