"""
FastAPI application exposing the checker over HTTP.

Endpoints mirror the CLI: GET /catalog lists the built-in functions,
POST /verify and POST /identity run one check and return the same report
objects the CLI writes as JSON.

Usage:
    python -m ineqcheck serve -p 8000

    Or run directly with uvicorn:
    uvicorn ineqcheck.main:get_app --factory --host 127.0.0.1 --port 8000
"""

import asyncio
import logging
from typing import Any, Dict, Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from ineqcheck.bounds import FORMULA_IDS
from ineqcheck.config import (
    DEFAULT_QUADRATURE_TOLERANCE,
    DEFAULT_VERDICT_TOLERANCE,
    ToleranceSpec,
    tolerance_from_env,
)
from ineqcheck.exceptions import IneqCheckError
from ineqcheck.function_catalog import ClassKind, ConvexityClass, builtin_catalog, catalog_lookup
from ineqcheck.quadrature import IntegralProblem
from ineqcheck.report import report_to_dict
from ineqcheck.utils import to_jsonable
from ineqcheck.verifier import check_identity, verify

logger = logging.getLogger("ineqcheck")


class IdentityRequest(BaseModel):
    fn: str
    a: float = 0.0
    b: float = 1.0
    p: float = 1.0
    q: float = 1.0


class VerifyRequest(IdentityRequest):
    model_config = ConfigDict(populate_by_name=True)

    cls: str = Field(alias="class")
    s: Optional[float] = None


def create_app(
    verdict_tolerance: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
    quadrature_tolerance: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
) -> FastAPI:
    """
    Create and configure the FastAPI application.

    Args:
        verdict_tolerance: Tolerance applied to every verdict.
        quadrature_tolerance: Tolerance and subdivision budget for integrals.

    Returns:
        Configured FastAPI application instance.
    """
    app = FastAPI(
        title="Weighted-product inequality checker",
        description="Quadrature against closed-form bounds for convexity-class integral inequalities.",
        version="0.1.0",
    )

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(IneqCheckError)
    async def ineqcheck_error_handler(request: Request, exc: IneqCheckError):
        error_code = exc.error_code or "INTERNAL_ERROR"
        logger.warning("%s - %s [%s]", error_code, exc.message, request.url.path)
        return JSONResponse(
            status_code=exc.status_code,
            content={
                "error": error_code,
                "message": exc.message,
                "path": str(request.url.path),
            },
        )

    @app.get("/health", summary="Health check endpoint")
    async def health_check():
        return {"status": "healthy", "service": "weighted-ineq-verifier"}

    @app.get("/", summary="Service information")
    async def root():
        return {
            "service": "weighted-ineq-verifier",
            "classes": [k.value for k in ClassKind],
            "formula_ids": list(FORMULA_IDS),
            "tolerance": {
                "atol": verdict_tolerance.atol,
                "rtol": verdict_tolerance.rtol,
                "max_subdivisions": quadrature_tolerance.max_subdivisions,
            },
            "endpoints": {
                "health": "/health",
                "catalog": "/catalog",
                "verify": "/verify",
                "identity": "/identity",
            },
        }

    @app.get("/catalog", summary="List the built-in test functions")
    async def catalog(a: float = Query(0.0), b: float = Query(1.0)):
        specs = builtin_catalog(a, b)
        return {"functions": to_jsonable([spec.describe() for spec in specs])}

    @app.post("/verify", summary="Check one class bound")
    async def verify_endpoint(body: VerifyRequest) -> Dict[str, Any]:
        cls = ConvexityClass.parse(body.cls, body.s)
        spec = catalog_lookup(body.fn, body.a, body.b)
        problem = IntegralProblem(body.a, body.b, body.p, body.q, spec)
        report = await asyncio.to_thread(
            verify, spec, cls, problem, None, verdict_tolerance, quadrature_tolerance
        )
        return report_to_dict(report)

    @app.post("/identity", summary="Compare the integral with its substituted form")
    async def identity_endpoint(body: IdentityRequest) -> Dict[str, Any]:
        spec = catalog_lookup(body.fn, body.a, body.b)
        problem = IntegralProblem(body.a, body.b, body.p, body.q, spec)
        report = await asyncio.to_thread(
            check_identity, problem, verdict_tolerance, quadrature_tolerance
        )
        return report_to_dict(report)

    return app


def get_app() -> FastAPI:
    """
    Factory for uvicorn. Reads INEQ_ATOL / INEQ_RTOL for the verdict tolerance.

    Usage:
        uvicorn ineqcheck.main:get_app --factory
    """
    logging.basicConfig(level=logging.INFO, format="%(levelname)s:\t[SERVICE] %(message)s")
    tolerance = tolerance_from_env()
    logger.info("Verdict tolerance: atol=%g rtol=%g", tolerance.atol, tolerance.rtol)
    return create_app(verdict_tolerance=tolerance)
