import math
import os
import sys
from functools import reduce

import pytest

ROOT = os.path.dirname(os.path.dirname(__file__))
sys.path.insert(0, ROOT)

from arcradius.digraph import (
    CanonicalForm,
    canonical_form,
    complete_digraph,
    expand_canonical,
    from_arcs,
    is_member_dss,
)
from arcradius.enumeration import (
    ShardTask,
    SweepResult,
    _sweep_shard,
    brute_max_rho,
    enumerate_dss,
    merge_sweeps,
    sweep_dss,
    vertex_range,
)
from arcradius.errors import BudgetExceededError, PreconditionError
from arcradius.extremal import build_dsharp, decompose_arcs, rho_dsharp
from arcradius.spectral import DEFAULT_MAX_ITER, DEFAULT_TOL

GOLDEN = (1 + math.sqrt(5)) / 2


def test_vertex_range():
    assert list(vertex_range(2)) == [2]
    assert list(vertex_range(8)) == [4, 5, 6]
    assert list(vertex_range(8, max_vertices=5)) == [4, 5]
    assert list(vertex_range(6)) == [3, 4, 5]


def test_enumerate_smallest_counts():
    assert list(enumerate_dss(2)) == [CanonicalForm((2, 1))]
    # the oriented triangle is the only strong digraph with 3 arcs and it is not prefix-nested
    assert list(enumerate_dss(3)) == []
    with pytest.raises(PreconditionError):
        list(enumerate_dss(1))


def test_enumerated_forms_are_distinct_members():
    for e in range(2, 15):
        forms = list(enumerate_dss(e))
        assert forms == sorted(forms, key=lambda f: (f.n, f.m))
        arc_sets = set()
        for form in forms:
            d = expand_canonical(form)
            assert d.arc_count == e
            assert is_member_dss(d), str(form)
            assert canonical_form(d) == form
            arc_sets.add(d.arc_set())
        assert len(arc_sets) == len(forms)


def test_dsharp_is_enumerated():
    for e in range(2, 21):
        if decompose_arcs(e).t == 1:
            continue
        assert canonical_form(build_dsharp(e)) in set(enumerate_dss(e)), e


def test_sweep_small_values():
    assert sweep_dss(2).rho_max == pytest.approx(1.0)
    assert sweep_dss(3).rho_max is None
    assert sweep_dss(3).n_candidates == 0
    assert sweep_dss(5).rho_max == pytest.approx(GOLDEN, abs=1e-9)

    result = sweep_dss(6)
    assert result.rho_max == pytest.approx(2.0)
    assert [expand_canonical(f) for f in result.argmax] == [complete_digraph(3)]

    assert sweep_dss(8).rho_max == pytest.approx(rho_dsharp(8), abs=1e-9)


def test_merge_is_associative_and_order_free():
    e = 14
    shards = [_sweep_shard(ShardTask(e, first, None, DEFAULT_TOL, DEFAULT_MAX_ITER, 1e-9)) for first in range(2, 9)]
    forward = reduce(merge_sweeps, shards, SweepResult())
    backward = reduce(merge_sweeps, reversed(shards), SweepResult())
    paired = merge_sweeps(
        reduce(merge_sweeps, shards[:3], SweepResult()),
        reduce(merge_sweeps, shards[3:], SweepResult()),
    )
    assert forward == backward == paired
    assert forward == sweep_dss(e)
    assert forward.n_candidates == len(list(enumerate_dss(e)))


def test_parallel_sweep_matches_serial():
    assert sweep_dss(15, jobs=2) == sweep_dss(15)
    with pytest.raises(PreconditionError):
        sweep_dss(8, jobs=0)


def test_vertex_cap_does_not_hide_the_maximum():
    for e in range(4, 13):
        capped = sweep_dss(e)
        uncapped = sweep_dss(e, max_vertices=e)
        assert uncapped.n_candidates >= capped.n_candidates
        assert capped.rho_max == pytest.approx(uncapped.rho_max, abs=1e-12)
        assert capped.argmax == uncapped.argmax


def test_brute_force_examples():
    result = brute_max_rho(6, 3)
    assert result.n_digraphs == 1
    assert result.rho_max == pytest.approx(2.0)
    assert result.argmax == (complete_digraph(3),)

    result = brute_max_rho(5, 3)
    assert result.rho_max == pytest.approx(GOLDEN, abs=1e-9)
    assert len(result.argmax) == 6

    result = brute_max_rho(3, 3)
    assert result.rho_max == pytest.approx(1.0)
    assert len(result.argmax) == 14
    assert from_arcs(3, [(0, 1), (1, 2), (2, 0)]) in result.argmax
    assert from_arcs(3, [(0, 1), (1, 0), (0, 2)]) in result.argmax

    empty = brute_max_rho(7, 3)
    assert empty.n_digraphs == 0 and empty.rho_max is None


def test_brute_force_budget():
    with pytest.raises(BudgetExceededError) as excinfo:
        brute_max_rho(9, 6, budget=1000)
    assert excinfo.value.required == math.comb(30, 9)


@pytest.mark.parametrize("e", [2, 5, 6, 8, 9])
def test_sweep_agrees_with_brute_force(e):
    oracle = max(
        (r.rho_max for r in (brute_max_rho(e, n) for n in range(2, 5)) if r.rho_max is not None),
    )
    assert sweep_dss(e).rho_max == pytest.approx(oracle, abs=1e-9)


def test_three_arcs_tie_between_families():
    # the strong class is empty, while the brute force maximum is shared by both shapes
    oracle = brute_max_rho(3, 3)
    assert oracle.rho_max == pytest.approx(sweep_dss(2).rho_max)
    assert sweep_dss(3).rho_max is None
