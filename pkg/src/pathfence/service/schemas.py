"""Request and response documents for the service layer.

The command line builds these models directly and calls the handlers in
process; `pathfence serve` exposes the same handlers over HTTP.  Wire
conventions, chosen so documents survive any JSON round trip:

- counts travel as decimal strings (they outgrow 64-bit integers fast),
  and non-integer rationals as "p/q" strings;
- sigma-polynomials travel as arrays of such strings, lowest degree first,
  with trailing zeros stripped (so the zero polynomial is the empty array);
- every response that involves a boundary embeds its canonical
  prefix/period document, which re-parses to an equal boundary.

Certificate coefficients are the one exception: they stay JSON integers,
since exactness there is the entire point and JSON integers are unbounded.
"""
from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Value = Union[str, list[str]]


class BoundaryDoc(BaseModel):
    """Canonical wire form of a boundary: prefix terms plus one period block."""

    model_config = ConfigDict(extra="forbid")

    prefix: list[int] = Field(default_factory=list)
    period: list[int] = Field(min_length=1)


class BoundarySpec(BaseModel):
    """One boundary, specified in exactly one of four ways.

    Mirrors the command line flags: a raw prefix/period document, or a named
    family (tennis [k, l], arithmetic [c, d], staircase "p/q").
    """

    model_config = ConfigDict(extra="forbid")

    boundary: Optional[BoundaryDoc] = None
    tennis: Optional[list[int]] = None
    arith: Optional[list[int]] = None
    staircase: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [
            name
            for name in ("boundary", "tennis", "arith", "staircase")
            if getattr(self, name) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                "specify exactly one of boundary/tennis/arith/staircase"
                + (", got " + " and ".join(given) if given else "")
            )
        return self


class CountRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    kind: Literal["auto", "lp", "sp", "parking"] = "auto"
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    n: int = Field(ge=0)
    oracle: bool = False


class CountResponse(BaseModel):
    boundary: BoundaryDoc
    kind: Literal["lp", "sp", "parking"]
    n: int
    sigma: Optional[str] = None
    values: list[Value]
    oracle_checked: bool = False


class RectRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: int = Field(ge=0)
    n: int = Field(ge=0)
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None


class RectResponse(BaseModel):
    x: int
    n: int
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    value: Value


class AppellCheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    order: int = Field(ge=0)


class AppellCheckResponse(BaseModel):
    boundary: BoundaryDoc
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    order: int
    residual_zero: bool
    first_nonzero: Optional[int] = None


class SectionDoc(BaseModel):
    index: int
    values: list[Value]


class SectionsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    order: int = Field(ge=0)
    section: Optional[int] = Field(default=None, ge=0)
    oracle: bool = False


class SectionsResponse(BaseModel):
    boundary: BoundaryDoc
    height: int
    prefix_len: int
    width: int
    order: int
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    sections: list[SectionDoc]
    oracle_checked: bool = False


class TennisRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int = Field(ge=1)
    l: int = Field(ge=1)
    section: int = Field(default=0, ge=0)
    order: int = Field(ge=0)
    oracle: bool = False


class TennisResponse(BaseModel):
    k: int
    l: int
    boundary: BoundaryDoc
    section: int
    order: int
    values: list[Value]
    oracle_checked: bool = False


class ClosedFormRequest(BaseModel):
    """Closed-form evaluation over an arithmetic boundary c + i*d.

    Which closed form runs is inferred: no shape asks for the plain count
    formula (needs n); shape [1, b] with n asks for the per-n weighted
    formula; shape [1, 1] with order asks for the weighted series expansion.
    """

    model_config = ConfigDict(extra="forbid")

    arith: list[int]
    shape: Optional[list[int]] = None
    n: Optional[int] = Field(default=None, ge=0)
    order: Optional[int] = Field(default=None, ge=0)


class ClosedFormResponse(BaseModel):
    family: Literal["lp-arith", "sp11", "sp1b"]
    arith: list[int]
    shape: Optional[list[int]] = None
    n: Optional[int] = None
    order: Optional[int] = None
    values: list[Value]


class ParkingRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    n: int = Field(ge=0)
    oracle: bool = False


class ParkingResponse(BaseModel):
    boundary: BoundaryDoc
    n: int
    values: list[Value]
    oracle_checked: bool = False
    oracle_n: Optional[int] = None


class CertificateDoc(BaseModel):
    """An annihilating polynomial: coeffs[i][j] multiplies z^i y^j."""

    dz: int
    dy: int
    coeffs: list[list[int]]
    verified_order: int


class CertifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    shape: Optional[list[int]] = None
    sigma: Optional[str] = None
    section: Optional[int] = Field(default=None, ge=0)
    dz: int = Field(default=6, ge=0)
    dy: int = Field(default=6, ge=1)


class CertifyResponse(BaseModel):
    boundary: BoundaryDoc
    section: Optional[int] = None
    dz_budget: int
    dy_budget: int
    found: bool
    certificate: Optional[CertificateDoc] = None


class DecomposeCheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boundary: BoundarySpec
    x: int = Field(ge=0)
    n: int = Field(ge=0)
    shape: Optional[list[int]] = None


class DecomposeCheckResponse(BaseModel):
    boundary: BoundaryDoc
    x: int
    n: int
    shape: Optional[list[int]] = None
    holds: bool


class MetaResponse(BaseModel):
    name: str
    version: str
    subcommands: list[str]


class ErrorDoc(BaseModel):
    family: Literal["parse", "domain", "precision"]
    kind: str
    message: str
