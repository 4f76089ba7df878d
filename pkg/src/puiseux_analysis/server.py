"""
================================================================================
CONTEXT BLOCK
================================================================================
File: server.py
Module: puiseux_analysis.server
Purpose: MCP tool server exposing the analysis commands

Description:
    Implements a Model Context Protocol server over stdio. Each tool runs
    the matching AnalysisExecutor command and returns its JSON result;
    errors come back as {"error": ...} payloads instead of exceptions.

MCP Tools Provided:
    - expand: Puiseux roots with multiplicities
    - polygon: Newton polygon at 0 or at a given series
    - tree: Kuo-Lu tree and blurred critical points
    - truncate: Puiseux root truncation (and root deformation family)
    - stability: Morse stability verdict of a family or deformation
    - contact: Canonical coordinates, valuations and bar-edge pairs
    - pairs: Puiseux pairs per geometric branch

Usage:
    # Start server directly
    python -m puiseux_analysis.server

    # Or via entry point
    puiseux-mcp

Environment Variables:
    PUISEUX_PRECISION: Starting ball precision in bits (default: 128)

Created: 2025-12-14
================================================================================
"""

import asyncio
import json
import logging
from dataclasses import replace
from typing import Optional

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from .analysis import AnalysisExecutor
from .models import RunConfig, parse_depth

logger = logging.getLogger(__name__)

# Server instance
server = Server("puiseux-mcp")

_executor: Optional[AnalysisExecutor] = None

_POLYNOMIAL = {
    "type": "string",
    "description": "Polynomial in x, y (and t for families), e.g. '(x^2-y^3)^2-4*x*y^5'",
}
_DEPTH = {
    "type": "string",
    "description": "Expansion depth as p/q (default: separation depth + 4 Newton steps)",
}


def get_executor() -> AnalysisExecutor:
    """Get or create the shared executor."""
    global _executor
    if _executor is None:
        _executor = AnalysisExecutor(RunConfig.from_env())
    return _executor


def executor_for(arguments: dict) -> AnalysisExecutor:
    """The shared executor, or a fresh one when the call overrides the depth."""
    if not arguments.get("depth"):
        return get_executor()
    config = replace(get_executor().config, depth=parse_depth(arguments["depth"]))
    return AnalysisExecutor(config)


def format_result(data: dict) -> str:
    """Format an analysis result for output."""
    return json.dumps(data, indent=2, ensure_ascii=False, default=str)


def _schema(extra: Optional[dict] = None, required: tuple = ("polynomial",)) -> dict:
    return {
        "type": "object",
        "properties": {"polynomial": _POLYNOMIAL, "depth": _DEPTH, **(extra or {})},
        "required": list(required),
    }


# =============================================================================
# TOOL DEFINITIONS
# =============================================================================

@server.list_tools()
async def list_tools() -> list[Tool]:
    """List all available tools."""
    return [
        Tool(
            name="expand",
            description="Puiseux roots of f(x, y) in x as series in y, with multiplicities "
                        "and the depth at which each root separates from the others.",
            inputSchema=_schema(),
        ),
        Tool(
            name="polygon",
            description="Newton polygon of f at x = 0 or at a series alpha(y): vertices, "
                        "co-slopes, Lojasiewicz exponents and associated polynomials.",
            inputSchema=_schema({
                "center": {
                    "type": "string",
                    "description": "Series in y to recentre at, e.g. 'y^(3/2)'",
                },
            }),
        ),
        Tool(
            name="tree",
            description="Kuo-Lu tree of f: bars with their heights and polynomials, "
                        "and the blurred critical points with multiplicities.",
            inputSchema=_schema(),
        ),
        Tool(
            name="truncate",
            description="Puiseux root truncation of f: every root cut just past its "
                        "maximal contact, multiplied back into a polynomial.",
            inputSchema=_schema({
                "with_family": {
                    "type": "boolean",
                    "description": "Also return the root deformation family F_root(x, y, t)",
                },
            }),
        ),
        Tool(
            name="stability",
            description="Morse stability verdict. Input in x and t is a polynomial family, "
                        "in x, y and t a deformation, in x and y its root deformation family.",
            inputSchema=_schema({
                "lemma": {
                    "type": "boolean",
                    "description": "Also recompute the critical structure at sampled t",
                },
            }),
        ),
        Tool(
            name="contact",
            description="Canonical coordinate, valuation, Lojasiewicz exponent and "
                        "bar-edge pairs of one or two series; contact order of two series.",
            inputSchema=_schema({
                "series": {
                    "type": "array",
                    "items": {"type": "string"},
                    "description": "One or two series in y, e.g. ['y^(3/2) + y^(7/4)']",
                },
            }, required=("polynomial", "series")),
        ),
        Tool(
            name="pairs",
            description="Puiseux pairs of every geometric branch of f, read from the "
                        "series and recomputed from the Newton polygons.",
            inputSchema=_schema(),
        ),
    ]


# =============================================================================
# TOOL IMPLEMENTATIONS
# =============================================================================

@server.call_tool()
async def call_tool(name: str, arguments: dict) -> list[TextContent]:
    """Handle tool calls."""
    try:
        executor = executor_for(arguments)
        polynomial = arguments["polynomial"]
        result = {}

        if name == "expand":
            result = executor.run(name, polynomial)

        elif name == "polygon":
            result = executor.run(name, polynomial, center=arguments.get("center"))

        elif name == "tree":
            result = executor.run(name, polynomial)

        elif name == "truncate":
            result = executor.run(name, polynomial, with_family=arguments.get("with_family", False))

        elif name == "stability":
            result = executor.run(name, polynomial, lemma=arguments.get("lemma", False))

        elif name == "contact":
            result = executor.run(name, polynomial, series=arguments["series"])

        elif name == "pairs":
            result = executor.run(name, polynomial)

        else:
            result = {"error": f"Unknown tool: {name}"}

        return [TextContent(type="text", text=format_result(result))]

    except Exception as e:
        logger.error(f"Error executing tool {name}: {e}")
        return [TextContent(
            type="text",
            text=json.dumps({"error": str(e)})
        )]


def main():
    """Main entry point for the MCP server."""
    import argparse

    parser = argparse.ArgumentParser(description="Newton-Puiseux analysis MCP server")
    parser.add_argument(
        "--precision",
        type=int,
        help="Starting ball precision in bits (overrides PUISEUX_PRECISION)"
    )
    args = parser.parse_args()

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    global _executor
    _executor = AnalysisExecutor(RunConfig.from_env(precision_bits=args.precision))

    logger.info("Starting Puiseux MCP Server...")
    asyncio.run(run_server())


async def run_server():
    """Run the MCP server with stdio transport."""
    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options()
        )


if __name__ == "__main__":
    main()
