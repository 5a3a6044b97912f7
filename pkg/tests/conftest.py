import numpy as np
import pytest

from structprobe.synth import random_tree

ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    """Collect a one-line verdict per acceptance criterion for the summary."""
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(
            ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])
        ):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_corpus(n_trees, n_min, n_max, seed):
    rng = np.random.default_rng(seed)
    trees = []
    for i in range(n_trees):
        n = int(rng.integers(n_min, n_max + 1))
        trees.append(random_tree(n, int(rng.integers(0, 2**31)), sentence_id=f"s{i}"))
    return trees


def spearman_bruteforce(x, y):
    """Independent re-implementation: sort, assign average ranks, explicit Pearson."""

    def ranks(v):
        idx = sorted(range(len(v)), key=lambda i: v[i])
        out = [0.0] * len(v)
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[idx[j + 1]] == v[idx[i]]:
                j += 1
            avg = (i + j) / 2.0 + 1.0
            for t in range(i, j + 1):
                out[idx[t]] = avg
            i = j + 1
        return out

    rx, ry = ranks(list(x)), ranks(list(y))
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = sum((a - mx) ** 2 for a in rx)
    dy = sum((b - my) ** 2 for b in ry)
    if dx == 0 or dy == 0:
        return None
    return num / (dx * dy) ** 0.5
