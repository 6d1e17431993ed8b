"""Acceptance gate: one test per criterion, each printing its pass/fail line
and the residual of every sub-check. Criteria 6 and 9 run in literal mode,
with every threshold pinned exactly, including the two that cannot be met."""

import time

import numpy as np
import pytest

from heisgeo import verification as ver

TIME_LIMIT = 60.0
SEED = 20240


def _criteria():
    return [
        (1, lambda rng: ver.criterion_1(rng, n=50)),
        (2, lambda rng: ver.criterion_2(rng, n=20)),
        (3, lambda rng: ver.criterion_3(rng, n=100)),
        (4, lambda rng: ver.criterion_4(rng, n=100)),
        (5, lambda rng: ver.criterion_5(rng, n=10)),
        (6, lambda rng: ver.criterion_6(literal=True)),
        (7, lambda rng: ver.criterion_7()),
        (8, lambda rng: ver.criterion_8()),
        (9, lambda rng: ver.criterion_9(rng, literal=True)),
        (10, lambda rng: ver.criterion_10()),
        (11, lambda rng: ver.criterion_11(rng, n=10)),
    ]


@pytest.mark.parametrize("number,fn", _criteria(), ids=[f"criterion_{k}" for k, _ in _criteria()])
def test_criterion(number, fn, capsys):
    rng = np.random.default_rng([SEED, number])
    start = time.perf_counter()
    result = fn(rng)
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        print()
        print(result.report())
        print(f"  elapsed {elapsed:.1f} s")
    assert result.number == number
    assert elapsed < TIME_LIMIT
    assert result.passed, result.report()
