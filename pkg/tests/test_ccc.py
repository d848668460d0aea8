from fractions import Fraction

import pytest

from ccc_forge.ccc import (
    build_subcode,
    ccc_report,
    composition_of,
    corollary1_sum,
    lfvc_bound,
    measure_ccc,
    proposition1_check,
    subcode_distance_bruteforce,
    theorem2_case,
    theorem2_prediction,
    verify_corollary1,
    verify_lfvc_inapplicable,
    verify_theorem2,
)
from ccc_forge.characters import eta_prime
from ccc_forge.codes import codeword, fiber_count_closed_form
from ccc_forge.field import ExtField, ParameterError, Parameters
from ccc_forge.report import DEGENERATE, INAPPLICABLE, MATCH, MISMATCH

EVEN = [(3, 2), (3, 4), (5, 2), (5, 4), (7, 2)]


def _scalar_words(sub):
    return [codeword(sub.field, sub.supercode, sub.field.from_index(int(a))) for a in sub.members]


@pytest.mark.parametrize("p,m", [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)])
def test_measure_matches_scalar_oracle(p, m):
    F = ExtField(p, m)
    for alpha in range(1, p):
        for gamma in range(p):
            sub = build_subcode(F, alpha, gamma)
            got = measure_ccc(sub)
            words = _scalar_words(sub)
            comps = {composition_of(w, p) for w in words}
            assert got.M == len(words)
            assert got.d == subcode_distance_bruteforce(words)
            if words:
                assert got.constant == (len(comps) == 1)
                assert got.omega == composition_of(words[0], p)


def test_bulk_codewords_equal_scalar_ones():
    sub = build_subcode(ExtField(3, 4), 1, 2)
    assert [w.symbols for w in sub.codewords()] == [w.symbols for w in _scalar_words(sub)]


@pytest.mark.parametrize("p,m", EVEN)
def test_derived_variant_matches_everywhere(p, m):
    F = ExtField(p, m)
    for alpha in range(1, p):
        for gamma in range(p):
            e = verify_theorem2(F, alpha, gamma)
            if e.measured["M"] == 0:
                assert e.verdict == INAPPLICABLE
                assert e.detail["M_verdict"] == MATCH
                continue
            assert e.detail["theorem2_derived"] == MATCH, e.to_dict()
            assert e.detail["constant"] and e.detail["omega_sum_is_n"] and e.detail["M_matches_fiber_count"]
            assert e.verdict == MATCH


def test_printed_variant_mismatch_is_reported():
    e = verify_theorem2(ExtField(3, 2), 1, 1)
    assert e.measured["omega"] == [0, 1, 1]
    assert e.predicted["as_printed"]["prediction"]["omega"][0] == 2
    assert e.detail["theorem2_printed"] == MISMATCH
    assert e.detail["theorem2_derived"] == MATCH
    assert "degenerate" in e.detail


def test_printed_variant_agrees_when_gamma_is_zero():
    for p, m in [(3, 4), (5, 4), (7, 2)]:
        assert verify_theorem2(ExtField(p, m), 1, 0).detail["theorem2_printed"] == MATCH


def test_prediction_sums_to_length():
    for p, m in EVEN + [(11, 2), (3, 8)]:
        prm = Parameters(p, m)
        for alpha in range(1, p):
            for gamma in range(p):
                pred = theorem2_prediction(prm, alpha, gamma)
                assert sum(pred.omega) == pred.n


def test_cases_and_rejections():
    prm = Parameters(5, 2)
    assert theorem2_case(prm, 1, 0) == 1
    assert theorem2_case(prm, 1, 4) == 2
    assert theorem2_case(prm, 1, 2) == 3
    with pytest.raises(ParameterError):
        theorem2_prediction(Parameters(3, 3), 1, 1)
    with pytest.raises(ParameterError):
        build_subcode(ExtField(3, 2), 0, 1)
    with pytest.raises(ParameterError):
        theorem2_prediction(prm, 1, 1, "other")


def test_empty_subcode():
    F = ExtField(5, 2)
    assert fiber_count_closed_form(F.params, 0) == 1
    got = measure_ccc(build_subcode(F, 1, 0))
    assert (got.M, got.d, got.omega) == (0, None, ())


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_corollary1(p):
    values = {corollary1_sum(p, t) for t in range(1, p)}
    assert values == {-eta_prime(-1, p)}
    e = verify_corollary1(p)
    assert e.detail["constant_in_t"]
    assert e.detail["flipped_verdict"] == MATCH
    assert e.detail["printed_verdict"] == MISMATCH


@pytest.mark.parametrize("p,m", EVEN)
def test_proposition1_residuals(p, m):
    F = ExtField(p, m)
    for alpha in range(1, p):
        for gamma in range(1, p):
            omega = measure_ccc(build_subcode(F, alpha, gamma)).omega
            e = proposition1_check(F.params, alpha, gamma, omega)
            if eta_prime(alpha * gamma, p) == 1:
                assert e.residual == -2 * p ** (m - 2)
            else:
                assert e.residual == 0 and e.verdict == MATCH


def test_lfvc_evaluator():
    # one word, one symbol: denominator n*d, bound exactly 1
    for n, d in [(4, 1), (4, 4), (7, 3)]:
        single = lfvc_bound(n=n, d=d, omega=(n, 0, 0), M=1)
        assert single.denominator == n * d
        assert single.bound == Fraction(1) and single.optimal
    assert not lfvc_bound(30, 18, (12, 9, 9), 20).applicable
    assert lfvc_bound(30, 18, (12, 9, 9), 20).denominator == -54


@pytest.mark.parametrize("p,m", [(3, 4), (5, 2), (5, 4), (7, 2)])
def test_lfvc_inapplicable_off_the_degenerate_field(p, m):
    F = ExtField(p, m)
    for alpha in range(1, p):
        for gamma in range(p):
            got = measure_ccc(build_subcode(F, alpha, gamma))
            e = verify_lfvc_inapplicable(F.params, alpha, gamma, got)
            assert e.verdict in (MATCH, INAPPLICABLE)


def test_lfvc_degenerate_field_is_flagged():
    F = ExtField(3, 2)
    got = measure_ccc(build_subcode(F, 1, 1))
    e = verify_lfvc_inapplicable(F.params, 1, 1, got)
    assert e.verdict == DEGENERATE
    assert e.measured == 2
    assert e.detail["formal_verdict"] == MISMATCH


def test_report_record_shape():
    rec = ccc_report(ExtField(3, 4), 1, 0)["record"]
    assert rec["omega"] == [12, 9, 9]
    assert (rec["n"], rec["M"], rec["d"]) == (30, 20, 18)
    assert rec["verdicts"]["theorem2_derived"] == MATCH
    assert rec["verdicts"]["prop1_residual"] is None
    odd = ccc_report(ExtField(3, 3), 1, 1)
    assert odd["entries"] == [] and "note" in odd["record"]["verdicts"]
