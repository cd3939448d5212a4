import logging
import math
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(__file__))
sys.path.insert(0, ROOT)

from arcradius.digraph import complete_digraph, is_member_dss, is_strongly_connected
from arcradius.errors import PreconditionError
from arcradius.extremal import (
    COMPLETE,
    COMPLETE_MINUS_ARC,
    COMPLETE_MINUS_PAIR,
    COMPLETE_PLUS_ARC,
    ORIENTED_TRIANGLE,
    build_dsharp,
    build_family,
    build_split,
    decompose_arcs,
    dsharp_spec,
    rho_closed_form,
    rho_dsharp,
    split_family_rho,
)
from arcradius.spectral import perron_root

K3_ARCS = {(i, j) for i in range(3) for j in range(3) if i != j}


def test_decompose_arcs_examples():
    assert decompose_arcs(6) == (6, 3, 0)
    assert decompose_arcs(7) == (7, 3, 1)
    assert decompose_arcs(11) == (11, 3, 5)
    assert decompose_arcs(12) == (12, 4, 0)
    assert decompose_arcs(1) == (1, 1, 1)
    with pytest.raises(PreconditionError):
        decompose_arcs(0)


def test_decompose_arcs_covers_every_count():
    for e in range(1, 2001):
        _, k, t = decompose_arcs(e)
        assert k * (k - 1) + t == e
        assert 0 <= t <= 2 * k - 1


def test_build_dsharp_examples():
    assert build_dsharp(6) == complete_digraph(3)
    assert build_dsharp(8).arc_set() == K3_ARCS | {(0, 3), (3, 0)}
    assert build_dsharp(11).arc_set() == K3_ARCS | {(0, 3), (1, 3), (2, 3), (3, 0), (3, 1)}

    spec = dsharp_spec(11)
    assert (spec.k, spec.t, spec.p, spec.q) == (3, 5, 2, 3)

    with pytest.raises(PreconditionError):
        build_dsharp(1)


def test_build_dsharp_warns_for_pendant_arc(caplog):
    with caplog.at_level(logging.WARNING, logger="arcradius.extremal"):
        d = build_dsharp(7)
    assert not is_strongly_connected(d)
    assert any("t=1" in r.getMessage() for r in caplog.records)


def test_build_dsharp_is_a_member():
    for e in range(2, 201):
        d = build_dsharp(e)
        assert d.arc_count == e
        if decompose_arcs(e).t != 1:
            assert is_member_dss(d), e


def test_rho_dsharp_examples():
    assert rho_dsharp(6) == pytest.approx(2.0)
    assert rho_dsharp(8) == pytest.approx(2.170086, abs=1e-6)
    assert rho_dsharp(5) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-10)
    with pytest.raises(PreconditionError):
        rho_dsharp(1)


def test_rho_dsharp_is_monotone_and_transpose_invariant():
    previous = 0.0
    for e in range(2, 200):
        value = rho_dsharp(e)
        assert value >= previous - 1e-12
        previous = value
    for e in (8, 9, 11, 17, 23):
        d = build_dsharp(e)
        assert perron_root(d.transpose()) == pytest.approx(perron_root(d), abs=1e-9)


def test_rho_closed_form_examples():
    assert rho_closed_form(7).value == 2.0
    assert rho_closed_form(7).case == COMPLETE_PLUS_ARC
    assert rho_closed_form(10).value == pytest.approx((1 + math.sqrt(17)) / 2)
    assert rho_closed_form(10).case == COMPLETE_MINUS_PAIR
    assert rho_closed_form(9) is None
    assert rho_closed_form(3).families == (ORIENTED_TRIANGLE, COMPLETE_PLUS_ARC)
    assert rho_closed_form(11).case == COMPLETE_MINUS_ARC


def test_closed_forms_match_dsharp():
    for k in range(2, 12):
        for t in (0, 2 * k - 2, 2 * k - 1):
            e = k * (k - 1) + t
            assert rho_closed_form(e).value == pytest.approx(rho_dsharp(e), abs=1e-9), e


def test_closed_form_families_by_power_iteration():
    for k in range(2, 11):
        for t in (0, 1, 2 * k - 2, 2 * k - 1):
            e = k * (k - 1) + t
            form = rho_closed_form(e)
            for label in form.families:
                d = build_family(label, k)
                assert d.arc_count == e
                assert perron_root(d) == pytest.approx(form.value, abs=1e-9), (k, t, label)


def test_build_family_rejects_unknown():
    assert build_family(COMPLETE, 3) == complete_digraph(3)
    with pytest.raises(PreconditionError):
        build_family("complete-plus-two", 3)
    with pytest.raises(PreconditionError):
        build_family(COMPLETE_MINUS_PAIR, 1)


def test_split_family_peaks_at_balanced_split():
    for k in range(3, 9):
        for t in range(2, 2 * k):
            p, q = t // 2, t - t // 2
            balanced = split_family_rho(k, p, q)
            assert balanced == pytest.approx(rho_dsharp(k * (k - 1) + t), abs=1e-9)
            for low in range(0, p):
                high = t - low
                if high > k:
                    continue
                assert split_family_rho(k, low, high) < balanced - 1e-12
                assert split_family_rho(k, high, low) < balanced - 1e-12


def test_split_family_matches_matrix():
    for k in range(2, 7):
        for p in range(0, k + 1):
            for q in range(0, k + 1):
                expected = perron_root(build_split(k, p, q))
                assert split_family_rho(k, p, q) == pytest.approx(expected, abs=1e-9), (k, p, q)

    with pytest.raises(PreconditionError):
        split_family_rho(3, 4, 0)
