"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_server.py
Module: tests.test_server
Purpose: BDD tests for the MCP tool server

Description:
    Calls the registered list_tools/call_tool handlers directly and
    decodes the JSON text content they return.

Test Scenarios:
    - Tool listing and schemas
    - Polygon tool, with and without a centre
    - Depth overrides and the startup settings they keep
    - Error payloads

Dependencies:
    - pytest-bdd: BDD test framework
    - mcp: Tool and TextContent types
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

import asyncio
import json

from pytest_bdd import given, parsers, scenario, then, when

from puiseux_analysis import server
from puiseux_analysis.algebra import format_exponent
from puiseux_analysis.analysis import AnalysisExecutor
from puiseux_analysis.models import RunConfig
from puiseux_analysis.server import call_tool, executor_for, list_tools


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/server.feature", "All analysis tools are listed")
def test_list_tools():
    """Test the tool listing."""
    pass


@scenario("features/server.feature", "Polygon tool returns co-slopes")
def test_polygon_tool():
    """Test the polygon tool."""
    pass


@scenario("features/server.feature", "Polygon tool recentres at a series")
def test_polygon_tool_center():
    """Test the polygon tool with a centre."""
    pass


@scenario("features/server.feature", "Depth override is honoured")
def test_depth_override():
    """Test the depth argument."""
    pass


@scenario("features/server.feature", "Depth override keeps the startup settings")
def test_depth_override_settings():
    """Test that a per-call depth keeps the server precision."""
    pass


@scenario("features/server.feature", "Unknown tools answer with an error payload")
def test_unknown_tool():
    """Test unknown tool names."""
    pass


@scenario("features/server.feature", "Malformed polynomials answer with an error payload")
def test_bad_polynomial():
    """Test parse errors through the server."""
    pass


# =============================================================================
# WHEN STEPS
# =============================================================================

def _call(name: str, arguments: dict) -> dict:
    content = asyncio.run(call_tool(name, arguments))
    assert len(content) == 1
    assert content[0].type == "text"
    return json.loads(content[0].text)


@given(
    parsers.parse("the server started with {bits:d} bits and {steps:d} extra steps"),
    target_fixture="startup",
)
def started_server(bits, steps, monkeypatch):
    executor = AnalysisExecutor(RunConfig(precision_bits=bits, extra_steps=steps))
    monkeypatch.setattr(server, "_executor", executor)
    return executor


@when(parsers.parse('I pick the executor for depth "{depth}"'), target_fixture="picked")
def pick_executor(startup, depth):
    """
    When: I resolve the executor for a call with a depth argument
    """
    return executor_for({"polynomial": "x^2 - y^3", "depth": depth})


@when("I list the server tools", target_fixture="tools")
def tools():
    """
    When: I ask the server for its tools
    """
    return asyncio.run(list_tools())


@when(parsers.parse('I call the "{name}" tool on "{polynomial}"'), target_fixture="result")
def call_plain(name, polynomial):
    """
    When: I call a tool with a polynomial
    """
    return _call(name, {"polynomial": polynomial})


@when(parsers.parse('I call the "{name}" tool on "{polynomial}" at "{center}"'),
      target_fixture="result")
def call_centered(name, polynomial, center):
    """
    When: I call a tool with a polynomial and a centre
    """
    return _call(name, {"polynomial": polynomial, "center": center})


@when(parsers.parse('I call the "{name}" tool on "{polynomial}" with depth "{depth}"'),
      target_fixture="result")
def call_with_depth(name, polynomial, depth):
    """
    When: I call a tool with an explicit expansion depth
    """
    return _call(name, {"polynomial": polynomial, "depth": depth})


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse('it should run at {bits:d} bits with {steps:d} extra steps and depth "{depth}"'))
def verify_picked(picked, startup, bits, steps, depth):
    assert picked is not startup
    assert picked.config.precision_bits == bits
    assert picked.config.extra_steps == steps
    assert format_exponent(picked.config.depth) == depth


@then(parsers.parse('the tools should be "{expected}"'))
def verify_tool_names(tools, expected):
    assert ", ".join(tool.name for tool in tools) == expected


@then("every tool should require a polynomial")
def verify_required(tools):
    for tool in tools:
        assert "polynomial" in tool.inputSchema["required"]
        assert tool.description


@then(parsers.parse('the result field "{field}" should be "{value}"'))
def verify_field(result, field, value):
    assert result[field] == value


@then(parsers.parse('the result co-slopes should be "{expected}"'))
def verify_coslopes(result, expected):
    assert ", ".join(result["polygon"]["coslopes"]) == expected


@then(parsers.parse("the result should list {count:d} roots"))
def verify_root_count(result, count):
    assert len(result["branches"]) == count


@then(parsers.parse('the result should be an error mentioning "{fragment}"'))
def verify_error(result, fragment):
    assert set(result) == {"error"}
    assert fragment in result["error"]
