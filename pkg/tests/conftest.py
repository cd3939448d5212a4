import os
import sys

import pytest

# add project root to sys.path so the package can be imported by pytest
ROOT = os.path.dirname(os.path.dirname(__file__))
sys.path.insert(0, ROOT)

from arcradius.digraph import from_arcs, is_strongly_connected


@pytest.fixture(scope="session")
def strong_digraphs():
    """Every strongly connected digraph on 2 to 4 labelled vertices."""
    found = []
    for n in range(2, 5):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for mask in range(1, 1 << len(pairs)):
            d = from_arcs(n, [p for bit, p in enumerate(pairs) if mask >> bit & 1])
            if is_strongly_connected(d):
                found.append(d)
    return found
