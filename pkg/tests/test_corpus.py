"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_corpus.py
Module: tests.test_corpus
Purpose: BDD tests for batch corpus runs

Description:
    Loads the bundled truncation corpus and small temporary CSV files
    and runs them through CorpusLoader.

Test Scenarios:
    - Loading and validation
    - Running rows with verdicts, errors and expectations
    - A sample of the bundled curves

Dependencies:
    - pytest-bdd: BDD test framework
    - pandas: Result frames
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

from pathlib import Path

import pytest
from pytest_bdd import given, parsers, scenario, then, when

from puiseux_analysis.corpus import DEFAULT_CORPUS, CorpusLoader, run_row, summarize
from puiseux_analysis.errors import PuiseuxError

BUNDLED = Path(__file__).resolve().parent.parent / DEFAULT_CORPUS


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/corpus.feature", "The bundled corpus loads")
def test_bundled_corpus_loads():
    """Test the bundled CSV."""
    pass


@scenario("features/corpus.feature", "Blank rows are skipped")
def test_blank_rows():
    """Test blank polynomial cells."""
    pass


@scenario("features/corpus.feature", "Missing columns are rejected")
def test_missing_columns():
    """Test column validation."""
    pass


@scenario("features/corpus.feature", "Running a small corpus")
def test_run_small_corpus():
    """Test a run with an error row."""
    pass


@scenario("features/corpus.feature", "Bundled curves are Morse stable")
def test_bundled_sample():
    """Test a sample of bundled rows."""
    pass


# =============================================================================
# GIVEN STEPS
# =============================================================================

def _write(tmp_path, text: str) -> Path:
    path = tmp_path / "corpus.csv"
    path.write_text(text, encoding="utf-8")
    return path


@given("a corpus file with a blank polynomial cell", target_fixture="corpus_path")
def corpus_with_blank(tmp_path):
    return _write(tmp_path, "name,polynomial\nnode,x^2 - y^2\nempty,\ncusp,x^2 - y^3\n")


@given("a corpus file without a polynomial column", target_fixture="corpus_path")
def corpus_without_column(tmp_path):
    return _write(tmp_path, "name,curve\nnode,x^2 - y^2\n")


@given("a corpus file with a node, a cusp and a malformed row", target_fixture="corpus_path")
def corpus_with_error(tmp_path):
    return _write(
        tmp_path,
        "name,polynomial,expected\n"
        "node,x^2 - y^2,MorseStable\n"
        "cusp,x^2 - y^3,MorseStable\n"
        "broken,x^2 +* y,\n",
    )


# =============================================================================
# WHEN STEPS
# =============================================================================

@when("I load the bundled corpus", target_fixture="frame")
def load_bundled(run_config):
    """
    When: I load the CSV shipped with the package data
    """
    return CorpusLoader(str(BUNDLED), run_config).load()


@when("I load that corpus", target_fixture="frame")
def load_corpus(corpus_path, run_config):
    """
    When: I load a temporary corpus
    """
    return CorpusLoader(str(corpus_path), run_config).load()


@when("I run that corpus", target_fixture="results")
def run_corpus(corpus_path, run_config):
    """
    When: I run every row of a temporary corpus sequentially
    """
    return CorpusLoader(str(corpus_path), run_config).run(jobs=1)


@when(parsers.parse('I run the bundled rows "{names}"'), target_fixture="rows")
def run_bundled_rows(names, run_config):
    """
    When: I run selected rows of the bundled corpus
    """
    frame = CorpusLoader(str(BUNDLED), run_config).load().set_index("name")
    wanted = [name.strip() for name in names.split(",")]
    return [run_row(name, frame.loc[name, "polynomial"], run_config) for name in wanted]


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse("it should hold at least {count:d} polynomials"))
def verify_min_rows(frame, count):
    assert len(frame) >= count


@then(parsers.parse("it should hold {count:d} polynomials"))
def verify_rows(frame, count):
    assert len(frame) == count
    assert "" not in set(frame["polynomial"])


@then(parsers.parse('every row should expect "{verdict}"'))
def verify_expected(frame, verdict):
    assert set(frame["expected"]) == {verdict}


@then(parsers.parse('loading it should fail mentioning "{fragment}"'))
def verify_load_fails(corpus_path, run_config, fragment):
    with pytest.raises(PuiseuxError, match=fragment):
        CorpusLoader(str(corpus_path), run_config).load()


@then(parsers.parse('row "{name}" should have verdict "{verdict}" and match its expectation'))
def verify_row_match(results, name, verdict):
    row = results.set_index("name").loc[name]
    assert row["verdict"] == verdict
    assert row["matches"] == True  # noqa: E712


@then(parsers.parse('row "{name}" should have verdict "{verdict}"'))
def verify_row_verdict(results, name, verdict):
    row = results.set_index("name").loc[name]
    assert row["verdict"] == verdict
    assert "PolynomialSyntaxError" in row["error"]
    assert row["matches"] is None


@then(parsers.parse(
    "the summary should count {rows:d} rows with {stable:d} MorseStable and {errors:d} Error"
))
def verify_summary(results, rows, stable, errors):
    summary = summarize(results)
    assert summary["rows"] == rows
    assert summary["MorseStable"] == stable
    assert summary["Error"] == errors
    assert summary["mismatches"] == 0


@then(parsers.parse('every verdict should be "{verdict}"'))
def verify_all_verdicts(rows, verdict):
    assert [row["verdict"] for row in rows] == [verdict] * len(rows)
    assert all(row["fhat"] for row in rows)


@then("every lemma check should hold")
def verify_lemma(rows):
    assert all(row["lemma"] is True for row in rows)
