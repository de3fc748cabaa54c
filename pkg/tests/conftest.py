import functools
import itertools

import numpy as np
import pytest

from profree import groups as gr
from profree.chartable import character_degrees
from profree.productfree import is_product_free
from profree.spectral import alpha_within_gowers


@functools.lru_cache(maxsize=None)
def psl2(q):
    return gr.build_psl2(q)


@functools.lru_cache(maxsize=None)
def named(name):
    """Small catalog of test groups, each built once per session."""
    kind, num = name[0], int(name[1:]) if name[1:].isdigit() else None
    if name.startswith("PSL2_"):
        return psl2(int(name[5:]))[0]
    if kind == "Z":
        return gr.build_cyclic(num)
    if kind == "D":
        return gr.build_dihedral(num)
    if kind == "Q":
        return gr.build_dicyclic(num)
    if kind == "S":
        return gr.build_symmetric(num)[0]
    if kind == "A":
        return gr.build_alternating(num)[0]
    if kind == "K":
        return gr.build_abelian((2, 2))
    raise KeyError(name)


SMALL_CATALOG = ["Z1", "Z2", "Z5", "Z6", "Z12", "K4", "S3", "D8", "Q8", "D10", "A4", "Q12", "S4"]


_delta_groups = {}


def delta_of(g):
    key = id(g)
    if key not in _delta_groups:
        _delta_groups[key] = (g, character_degrees(g).delta)
    return _delta_groups[key][1]


def check_witness(s):
    """Every product-free witness must pass the checker and the Gowers size bound."""
    g = s.group
    assert is_product_free(s)
    assert 0 not in s
    if g.n > 1:
        assert alpha_within_gowers(s.card, g.n, delta_of(g))


def brute_force_alpha(g):
    """Largest product-free subset by trying subsets from the largest size down.

    Combinations come out in lexicographic order, so the set returned is the
    lexicographically least maximum set.
    """
    n = g.n
    mul = g.mul.tolist()
    elems = range(1, n)
    for size in range(n - 1, 0, -1):
        for combo in itertools.combinations(elems, size):
            s = set(combo)
            if all(mul[a][b] not in s for a in combo for b in combo):
                return size, combo
    return 0, ()


@pytest.fixture
def rng():
    return np.random.default_rng(8675309)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("AC")[1].split()[0])):
            terminalreporter.write_line(line)
