import pytest

from factoromata.automata import accepts_many, state_counts
from factoromata.oracles import alpha3, alpha5, nu2_factorial, theta_direct
from factoromata.seeds import (
    ALPHA3,
    WindowSpec,
    all_theta_triples,
    alpha3_parity_dfa,
    alpha5_parity_dfa,
    factauto,
    gamma_parity_dfa,
    theta_dfa,
    window_parity_dfa,
)

N = range(0, 4096)


def test_gamma_parity():
    d = gamma_parity_dfa()
    assert state_counts(d)["sink"] == 3
    assert all(d.accepts(n) == (nu2_factorial(n) % 2 == 0) for n in N)


def test_alpha_parities():
    a3, a5 = alpha3_parity_dfa(), alpha5_parity_dfa()
    assert all(a3.accepts(n) == (alpha3(n) % 2 == 0) for n in N)
    assert all(a5.accepts(n) == (alpha5(n) % 2 == 0) for n in N)


def test_window_counts_small_cases():
    # 4 = 100b: windows (from k=0) are 4, 2, 1 -> one hit for {3, 4}
    assert alpha3(4) == 1
    # 6 = 110b: windows 6, 3, 1 -> hits 3 for alpha3 and 6 for alpha5
    assert (alpha3(6), alpha5(6)) == (1, 1)


def test_seeds_padding_invariant():
    for d in (gamma_parity_dfa(), alpha3_parity_dfa(), alpha5_parity_dfa(), factauto()):
        assert d.is_padding_invariant()


def test_theta_partition():
    import numpy as np

    n = np.arange(4096)
    hits = sum(accepts_many(theta_dfa(*t), n).astype(int) for t in all_theta_triples())
    assert (hits == 1).all()


def test_theta_matches_direct():
    for t in all_theta_triples():
        d = theta_dfa(*t)
        assert all(d.accepts(n) == (theta_direct(n) == t) for n in range(1024))


def test_factauto_small_members():
    members = [n for n in range(100) if factauto().accepts(n)]
    assert members[:10] == [10, 12, 24, 25, 48, 49, 54, 60, 78, 91]


def test_factauto_known_gap_start():
    d = factauto()
    assert d.accepts(23268) and d.accepts(23268 + 42)
    assert not any(d.accepts(23268 + j) for j in range(1, 42))


def test_window_spec_validation():
    with pytest.raises(ValueError):
        WindowSpec(frozenset({0, 3}))
    with pytest.raises(ValueError):
        WindowSpec(frozenset({8}))
    with pytest.raises(ValueError):
        WindowSpec(frozenset())
    with pytest.raises(ValueError):
        theta_dfa(2, 0, 0)


def test_track_names():
    assert window_parity_dfa(ALPHA3, "m").tracks == ("m",)
    assert factauto("j").tracks == ("j",)


def test_factauto_state_count_is_stable():
    # the published figure is 33; this construction gives 35 (see ledger)
    assert state_counts(factauto()) == {"sink": 35, "trim": 35}
