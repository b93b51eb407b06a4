"""Shared fixtures: corpus loading and the one big fuzz campaign.

The 10,000-trial campaign is expensive (tens of seconds), so it runs once
per session and every test that needs campaign-wide evidence shares it.
"""

import time
from pathlib import Path

import pytest

from foldcost.harness import ProbeConfig, fuzz_campaign
from foldcost.parser import parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

CORPUS_NAMES = ["case_if", "ins", "ins_sort", "map", "list_fold"]

# The campaign configuration the acceptance gate pins down: 10,000 closed
# base-type programs, depth at most 6, literal ints in [-9, 9], fixed seed.
CAMPAIGN_CONFIG = ProbeConfig(
    trials=10_000, depth=6, max_list=8, int_lo=-9, int_hi=9, seed=0)


def corpus_source(name: str) -> str:
    return (CORPUS / f"{name}.tgt").read_text(encoding="utf-8")


def corpus_expr(name: str):
    return parse(corpus_source(name))


@pytest.fixture(scope="session")
def campaign_10k():
    """The campaign summary plus its wall-clock runtime in seconds."""
    start = time.perf_counter()
    summary = fuzz_campaign(CAMPAIGN_CONFIG)
    return summary, time.perf_counter() - start
