from fractions import Fraction

import pytest

from factoromata import linrep, oracles
from factoromata.automata import make_less_equal, make_universal
from factoromata.linrep import (
    POW2_FORMULA,
    THREE_POW2_FORMULA,
    CaseFormula,
    LinearRepresentation,
    check_formula,
    counting_linrep,
    counting_relation,
    eval_linrep,
    pow2_sequences,
    reduce,
    sbar_linrep,
    scaling_identity_check,
    solve_constants,
    theta_linrep,
    value_3pow2,
    value_pow2,
)
from factoromata.seeds import all_theta_triples


@pytest.fixture(scope="module")
def scan():
    return oracles.scan_members(1 << 14)


def test_sbar_linrep_matches_scan(scan):
    rep = sbar_linrep()
    assert rep.is_nonnegative_integer()
    for n in list(range(0, 300)) + [1000, 4096, 12345, 1 << 14]:
        assert eval_linrep(rep, n) == scan.count(n)


def test_eight_triples_partition_counts():
    for n in (1, 7, 100, 1000, 2047):
        total = sum(eval_linrep(theta_linrep(*t), n) for t in all_theta_triples())
        assert total == n
    counts = oracles.triple_counts(2047)
    for t in all_theta_triples():
        assert eval_linrep(theta_linrep(*t), 2047) == counts[t]


def test_counting_universal_predicate():
    rep = counting_linrep(counting_relation(make_universal(("m",))))
    assert [eval_linrep(rep, n) for n in range(10)] == list(range(10))


def test_counting_relation_checks():
    with pytest.raises(ValueError):
        counting_relation(make_less_equal())


def test_pow2_helpers_agree():
    rep = sbar_linrep()
    at2, at3 = pow2_sequences(rep, 30)
    for k in (0, 1, 5, 17, 30):
        assert at2[k] == value_pow2(rep, k) == eval_linrep(rep, 2**k)
        assert at3[k] == value_3pow2(rep, k) == eval_linrep(rep, 3 * 2**k)


def test_published_values():
    rep = sbar_linrep()
    assert value_pow2(rep, 27) == 16773120
    assert value_3pow2(rep, 51) == 844424913354753
    assert eval_linrep(rep, 0) == 0


def test_reduction_preserves_values():
    rep = sbar_linrep()
    red = reduce(rep)
    assert red.dim == 39
    assert reduce(red).dim == 39
    for n in list(range(0, 200)) + [2**20, 3 * 2**27 + 5]:
        assert eval_linrep(red, n) == eval_linrep(rep, n)


def test_reduce_zero_representation():
    z = [[0, 0], [0, 0]]
    red = reduce(LinearRepresentation.build([0, 0], z, z, [1, 0]))
    assert red.dim == 1 and eval_linrep(red, 5) == 0


def test_text_roundtrip():
    rep = sbar_linrep()
    assert linrep.loads(linrep.dumps(rep)) == rep
    red = reduce(rep)
    again = linrep.loads(linrep.dumps(red))
    assert [eval_linrep(again, n) for n in range(64)] == [eval_linrep(red, n) for n in range(64)]


@pytest.mark.parametrize(
    "text",
    ["", "linrep/2\n", "linrep/1\nsize: 1\n", "linrep/1\ndim: 1\n1\n1\n1\n"],
)
def test_malformed_linrep(text):
    with pytest.raises(ValueError):
        linrep.loads(text)


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearRepresentation.build([1], [[1]], [[1]], [1, 2])
    with pytest.raises(ValueError):
        LinearRepresentation.build([1, 0], [[1, 0]], [[1, 0], [0, 1]], [1, 0])


def test_closed_forms():
    at2, at3 = pow2_sequences(sbar_linrep(), 60)
    assert check_formula(at2, POW2_FORMULA, 60).ok
    assert check_formula(at3, THREE_POW2_FORMULA, 60).ok


def test_closed_form_labels_and_bounds():
    assert POW2_FORMULA.label(24) == "2^(k-3) - 2^((k-4)/2)"
    assert THREE_POW2_FORMULA.evaluate(27) == 50327553
    with pytest.raises(ValueError):
        POW2_FORMULA.evaluate(1)


def test_formula_table_rejects_duplicates():
    with pytest.raises(ValueError):
        linrep._table([((1, 2), 1, 1), ((2,), 1, 1)])


def test_formula_report_tsv():
    at2, _ = pow2_sequences(sbar_linrep(), 10)
    tsv = check_formula(at2, POW2_FORMULA, 10).tsv()
    assert tsv.splitlines()[0] == "k\texpected\tgot\tcase"
    assert len(tsv.splitlines()) == 10


def test_formula_mismatch_is_reported():
    wrong = CaseFormula("wrong", 2, 1, 1, {})
    at2, _ = pow2_sequences(sbar_linrep(), 10)
    assert not check_formula(at2, wrong, 10).ok


def test_solve_constants():
    assert solve_constants([0, 16773120, 281474959933440]) == (Fraction(1, 8), 0, -1)
    with pytest.raises(ValueError):
        linrep.constant_system([1, 2, 3], (3, 4, 5))


def test_scaling_identity_where_formula_applies():
    assert scaling_identity_check(sbar_linrep(), range(0, 3), range(2, 24)).ok
    # s = 0 and s = 1 lie below the closed form's range
    rep = scaling_identity_check(sbar_linrep(), range(0, 2), range(0, 2))
    assert {(k, s) for k, s, _, _ in rep.failures} == {(1, 0), (1, 1)}
