import logging
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(__file__))
sys.path.insert(0, ROOT)

from arcradius.digraph import complete_digraph, expand_canonical, from_arcs
from arcradius import bounds, extremal
from arcradius.errors import ConsistencyError, PreconditionError
from arcradius.extremal import build_dsharp, decompose_arcs, rho_dsharp
from arcradius.verify import (
    BOUND_CHAIN,
    CONJECTURE,
    ENUMERATION,
    case_label,
    deficient_sizes,
    group_classes,
    same_class,
    verify_closed_forms,
    verify_conjecture,
    verify_large_clique,
)


def test_same_class_up_to_reversal():
    d = build_dsharp(9)
    assert same_class(d, d.transpose())
    assert same_class(d, d.relabel([3, 2, 1, 0]))
    # same arc count, extra vertex only receives
    sink = complete_digraph(3).arc_set() | {(0, 3), (1, 3), (2, 3)}
    assert not same_class(d, from_arcs(4, sink))

    classes = group_classes([d, d.transpose(), complete_digraph(4).with_arcs(remove=[(0, 1), (1, 0), (2, 3)])])
    assert [len(c) for c in classes] == [2, 1]


def test_case_label():
    assert case_label(8) == CONJECTURE
    assert case_label(10) == "closed-form:complete-minus-pair"
    assert case_label(6) == "closed-form:complete"
    assert case_label(7) == "closed-form:complete-plus-arc"


def test_verify_conjecture_for_eight_arcs():
    report = verify_conjecture(8)
    assert report.case == CONJECTURE
    assert report.conjecture_holds is True
    assert report.argmax_classes == 1
    assert report.rho_max == pytest.approx(2.170086, abs=1e-6)
    assert report.dsharp_rho == pytest.approx(report.rho_max, abs=1e-9)
    assert report.max_vertices == 6
    assert report.cap_certified


def test_verify_closed_form_cases():
    report = verify_conjecture(10)
    assert report.case == "closed-form:complete-minus-pair"
    assert report.conjecture_holds is True

    report = verify_conjecture(30)
    assert report.rho_max == pytest.approx(5.0)
    assert [expand_canonical(f) for f in report.argmax] == [complete_digraph(6)]


def test_verify_conjecture_pendant_case_has_no_verdict():
    report = verify_conjecture(7)
    assert report.conjecture_holds is None
    assert report.rho_max < 2.0
    with pytest.raises(PreconditionError):
        verify_conjecture(1)


def test_conjecture_holds_up_to_thirty_arcs():
    checked = 0
    for e in range(4, 31):
        _, k, t = decompose_arcs(e)
        if not 1 < t < 2 * k - 2:
            continue
        report = verify_conjecture(e)
        assert report.conjecture_holds, e
        assert report.cap_certified, e
        checked += 1
    assert checked == 12


def test_max_rho_is_monotone_outside_pendant_cases():
    previous = 0.0
    for e in range(2, 21):
        if decompose_arcs(e).t == 1:
            continue
        report = verify_conjecture(e)
        assert report.rho_max >= previous - 1e-12
        previous = report.rho_max


def test_verify_closed_forms_small_k(caplog):
    with caplog.at_level(logging.WARNING, logger="arcradius.verify"):
        checks = verify_closed_forms(3)
    assert len(checks) == 8
    assert all(c.passed for c in checks)
    assert {c.source for c in checks if c.t == 1} == {"oracle"}
    assert {c.source for c in checks if c.t != 1} == {"enumeration"}
    assert not [r for r in caplog.records if "failed" in r.getMessage()]

    triangle = next(c for c in checks if c.e == 3)
    assert triangle.families == ("oriented-triangle", "complete-plus-arc")


def test_verify_closed_forms_family_only():
    checks = verify_closed_forms(10, sweep_limit=0)
    assert all(c.passed for c in checks)
    assert {c.source for c in checks} == {"family-only"}
    with pytest.raises(PreconditionError):
        verify_closed_forms(1)


def test_large_clique_bound_chain():
    record = verify_large_clique(4694)
    assert record.mode == BOUND_CHAIN
    assert (record.k, record.t) == (69, 2)
    assert record.passed
    assert [link.s for link in record.chain] == [1, 2]
    assert record.dsharp_rho == pytest.approx(rho_dsharp(4694))
    assert list(deficient_sizes(2)) == [1, 2]


def test_large_clique_falls_back_to_enumeration():
    record = verify_large_clique(8)
    assert record.mode == ENUMERATION
    assert record.passed
    assert record.report.conjecture_holds

    record = verify_large_clique(7)
    assert record.mode == ENUMERATION
    assert record.passed


def test_group_classes_of_triangle_and_pendant():
    triangle = from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    pendant = from_arcs(3, [(0, 1), (1, 0), (0, 2)])
    assert len(group_classes([triangle, pendant, pendant.transpose()])) == 2


@pytest.mark.parametrize("e", [0, 1, -3])
def test_verify_conjecture_needs_two_arcs(e):
    with pytest.raises(PreconditionError, match="verification needs at least 2 arcs"):
        verify_conjecture(e)


def test_closed_forms_need_the_cubic_certificate(monkeypatch):
    monkeypatch.setattr(bounds, "dsharp_cubic_at_sqrt", lambda k: 1.0)
    checks = verify_closed_forms(4, sweep_limit=0)
    assert [c.passed for c in checks if c.t == 2 * c.k - 1] == [False, False, False]
    assert all(c.passed for c in checks if c.t != 2 * c.k - 1)


def test_large_clique_cross_checks_the_split_family(monkeypatch):
    monkeypatch.setattr(extremal, "split_family_rho", lambda k, p, q: k + 1.0)
    with pytest.raises(ConsistencyError, match="disagree for e=4694"):
        verify_large_clique(4694)
