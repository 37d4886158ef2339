from factoromata import automata, queries
from factoromata.automata import is_language_equal, state_counts
from factoromata.dsl import compile_formula
from factoromata.oracles import scan_gaps

SBAR_GAPS = [*range(1, 24), 25, 26, 28, 30, 31, 33, 34, 35, 37, 38, 42]


def test_gap_sets():
    assert queries.gap_length_set(queries.gaps_dfa(), 64) == SBAR_GAPS
    assert queries.gap_length_set(queries.sgaps_dfa(), 64) == [1, 2, 3, 4]


def test_literal_formula_admits_zero():
    # n paired with itself satisfies the formula vacuously
    assert queries.gaps_dfa().accepts(10, 0)
    assert not queries.gaps_dfa().accepts(11, 0)


def test_gap_relation_against_scan():
    limit = 1 << 13
    scan = scan_gaps(limit)
    d = queries.gaps_dfa()
    for g, start in scan.first["Sbar"].items():
        assert d.accepts(start, g)


def test_registry_gaps_are_positive():
    reg = queries.default_registry()
    lengths = compile_formula("E n $gaps(n, r)", reg)
    assert automata.enumerate_accepted(lengths, 64) == SBAR_GAPS
    lengths_s = compile_formula("E n $sgaps(n, r)", reg)
    assert automata.enumerate_accepted(lengths_s, 64) == [1, 2, 3, 4]


def test_state_counts_published_under_trim_convention():
    report = queries.state_count_report()
    assert report["gaps"] == {"sink": 320, "trim": 319}
    assert report["sgaps"] == {"sink": 204, "trim": 203}
    assert report["factauto"] == state_counts(queries.factauto())


def test_compilation_is_deterministic():
    again = compile_formula(queries.GAPS_QUERY, queries.seed_registry(), free=["n", "r"])
    assert again == queries.gaps_dfa()
    assert automata.dumps(again) == automata.dumps(queries.gaps_dfa())


def test_gap_relation_padding_invariant():
    assert queries.gaps_dfa().is_padding_invariant()
    assert queries.sgaps_dfa().is_padding_invariant()


def test_theta_predicates_registered():
    reg = queries.seed_registry()
    d = compile_formula("$factauto001(n)", reg)
    assert is_language_equal(d, queries.factauto())
    assert "factauto110" in reg.names()
