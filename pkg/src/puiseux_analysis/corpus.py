"""
================================================================================
CONTEXT BLOCK
================================================================================
File: corpus.py
Module: puiseux_analysis.corpus
Purpose: Batch runs of the truncation and stability checks over a CSV corpus

Description:
    CorpusLoader reads a CSV of named polynomials and, for every row,
    builds the Puiseux root truncation, the root deformation family, its
    stability verdict and the sampled fundamental-lemma check. Rows are
    independent, so they can be spread over a process pool.

CSV Columns:
    - name: Short label
    - polynomial: f(x, y) in the input grammar
    - expected (optional): Expected verdict, compared when present

Created: 2025-12-14
================================================================================
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import pandas as pd

from .analysis import AnalysisExecutor
from .errors import PuiseuxError, is_inconclusive
from .models import RunConfig

logger = logging.getLogger(__name__)

DEFAULT_CORPUS = os.path.join("data", "corpus", "truncation_corpus.csv")


def _text(value, default: str = "") -> str:
    """Cell as stripped text, handling NaN and None."""
    if value is None or pd.isna(value):
        return default
    return str(value).strip()


def run_row(name: str, polynomial: str, config: RunConfig) -> dict:
    """
    Truncate one polynomial and check its root deformation family.

    Returns:
        Row dict with the verdict, the lemma outcome and any error text
    """
    executor = AnalysisExecutor(config)
    row = {
        "name": name,
        "polynomial": polynomial,
        "fhat": None,
        "verdict": None,
        "lemma": None,
        "error": None,
    }
    try:
        row["fhat"] = executor.truncate(polynomial)["fhat"]
        result = executor.stability(polynomial, lemma=True)
        row["verdict"] = result["verdict"]
        if "lemma" in result:
            row["lemma"] = result["lemma"]["consistent"]
    except PuiseuxError as e:
        row["verdict"] = "Inconclusive" if is_inconclusive(e) else "Error"
        row["error"] = f"{type(e).__name__}: {e}"
        logger.warning(f"Corpus row {name} failed: {row['error']}")
    return row


def _run_packed(args: tuple) -> dict:
    return run_row(*args)


class CorpusLoader:
    """
    Loads a polynomial corpus from CSV and runs it.

    The loader handles:
    - Missing or blank cells (rows without a polynomial are skipped)
    - Optional expected verdicts
    - Sequential or process-pool execution
    """

    def __init__(self, path: str = DEFAULT_CORPUS, config: Optional[RunConfig] = None):
        """
        Initialize the corpus loader.

        Args:
            path: CSV file with name and polynomial columns
            config: Run settings shared by every row
        """
        self.path = path
        self.config = config or RunConfig.from_env()

    def load(self) -> pd.DataFrame:
        """
        Read the corpus.

        Raises:
            FileNotFoundError: When the CSV does not exist
            PuiseuxError: When a required column is missing
        """
        if not os.path.exists(self.path):
            raise FileNotFoundError(f"corpus not found: {self.path}")
        df = pd.read_csv(self.path, dtype=str, comment="#")
        missing = {"name", "polynomial"} - set(df.columns)
        if missing:
            raise PuiseuxError(f"corpus is missing columns: {sorted(missing)}")
        df["polynomial"] = df["polynomial"].map(_text)
        df = df[df["polynomial"] != ""].reset_index(drop=True)
        if "expected" not in df.columns:
            df["expected"] = ""
        df["expected"] = df["expected"].map(_text)
        df["name"] = [_text(n, default=f"row{i}") for i, n in enumerate(df["name"])]
        logger.info(f"Loaded {len(df)} corpus polynomials from {self.path}")
        return df

    def run(self, jobs: Optional[int] = None) -> pd.DataFrame:
        """
        Run every row.

        Args:
            jobs: Worker processes; defaults to config.jobs

        Returns:
            DataFrame with one result row per polynomial and a `matches`
            column comparing against `expected` where given
        """
        df = self.load()
        jobs = jobs or self.config.jobs
        work = [(row["name"], row["polynomial"], self.config) for _, row in df.iterrows()]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_run_packed, work))
        else:
            rows = [_run_packed(item) for item in work]
        results = pd.DataFrame(rows)
        results["expected"] = df["expected"]
        results["matches"] = [
            None if not expected else expected == verdict
            for expected, verdict in zip(results["expected"], results["verdict"])
        ]
        logger.info(f"Corpus run complete: {summarize(results)}")
        return results


def summarize(results: pd.DataFrame) -> dict:
    """Counts per verdict, lemma failures and expectation mismatches."""
    summary = {
        "rows": int(len(results)),
        **{str(k): int(v) for k, v in results["verdict"].value_counts().sort_index().items()},
        "lemma_failures": int((results["lemma"] == False).sum()),  # noqa: E712
    }
    if "matches" in results.columns:
        summary["mismatches"] = int((results["matches"] == False).sum())  # noqa: E712
    return summary
