import sys
from pathlib import Path

import numpy as np
import pytest

from fitrank.rankers import ORDER_ONLY_PARTIAL, ORDER_ONLY_TOTAL, RankerOutput

TOY = Path(__file__).resolve().parent.parent / "src" / "fitrank" / "data" / "toy"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def toy_dir():
    return TOY


def random_ensemble(rng, n_terms, n_scored, n_order, int_scores=False):
    """Terms t0..t{n-1} plus a mix of scored and order-only rankers."""
    terms = [f"t{i}" for i in range(n_terms)]
    rankers = []
    for a in range(n_scored):
        if int_scores:
            vals = rng.integers(0, 6, n_terms).astype(float)
        else:
            vals = rng.random(n_terms)
        rankers.append(RankerOutput.from_scores(f"s{a}", dict(zip(terms, vals.tolist()))))
    for b in range(n_order):
        if rng.random() < 0.5:
            domain = [t for t in terms if rng.random() < 0.7]
            kind = ORDER_ONLY_PARTIAL
        else:
            domain = terms
            kind = ORDER_ONLY_TOTAL
        pref = [t for t in domain if rng.random() < 0.4]
        rest = [t for t in domain if t not in pref]
        rankers.append(RankerOutput.from_blocks(f"o{b}", pref, rest, kind=kind))
    return terms, rankers


def unanimous_ensemble(rng, order, n_scored=3, n_order=2):
    """Rankers that all agree with ``order`` (best first), strictly."""
    n = len(order)
    rankers = []
    for a in range(n_scored):
        vals = np.sort(rng.random(n) * rng.uniform(0.5, 10))[::-1] + np.arange(n, 0, -1) * 1e-3
        rankers.append(RankerOutput.from_scores(f"s{a}", dict(zip(order, vals.tolist()))))
    for b in range(n_order):
        ranks = {t: i + 1 for i, t in enumerate(order)}
        rankers.append(RankerOutput(f"o{b}", ORDER_ONLY_TOTAL, ranks))
    return rankers




def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
