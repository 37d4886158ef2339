"""Gap queries over S and S-bar, and the default predicate registry."""

from __future__ import annotations

from functools import lru_cache

from .automata import Dfa, determinize, enumerate_accepted, minimize, project, state_counts
from .dsl import PredicateRegistry, compile_formula
from .seeds import (
    alpha3_parity_dfa,
    alpha5_parity_dfa,
    all_theta_triples,
    factauto,
    gamma_parity_dfa,
    theta_dfa,
)

GAPS_QUERY = "?lsd_2 $factauto(n) & $factauto(n+r) & (Aj (j < r-1) => ~$factauto(n+j+1))"
SGAPS_QUERY = "?lsd_2 ~$factauto(n) & ~$factauto(n+r) & (Aj (j < r-1) => $factauto(n+j+1))"
COUNT_QUERY = "?lsd_2 (j>=1) & (j<=n) & $factauto(j)"

# reported alongside our own counts; exact equality is convention dependent
PUBLISHED_STATE_COUNTS = {"factauto": 33, "gaps": 319, "sgaps": 203}


def seed_registry() -> PredicateRegistry:
    reg = PredicateRegistry()
    reg.add_lazy("gamma", gamma_parity_dfa)
    reg.add_lazy("a3", alpha3_parity_dfa)
    reg.add_lazy("a5", alpha5_parity_dfa)
    reg.add_lazy("factauto", factauto)
    for t in all_theta_triples():
        reg.add_lazy("factauto" + "".join(map(str, t)), lambda t=t: theta_dfa(*t))
    return reg


def default_registry() -> PredicateRegistry:
    """Seed predicates plus the two gap relations, restricted to r >= 1."""
    reg = seed_registry()
    reg.add_lazy("gaps", lambda: positive_gaps(gaps_dfa()))
    reg.add_lazy("sgaps", lambda: positive_gaps(sgaps_dfa()))
    return reg


def positive_gaps(d: Dfa) -> Dfa:
    """Drop the r = 0 pairs that the literal gap formula admits."""
    reg = PredicateRegistry()
    reg.add("g", d)
    return compile_formula("$g(n,r) & r>=1", reg, free=["n", "r"])


def _cached(fn):
    cache = {}

    def wrapper(reg: PredicateRegistry | None = None) -> Dfa:
        if reg is not None:
            return fn(reg)
        if "d" not in cache:
            cache["d"] = fn(seed_registry())
        return cache["d"]

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_cached
def gaps_dfa(reg: PredicateRegistry) -> Dfa:
    """(n, r): n and n + r are consecutive members of S-bar."""
    return compile_formula(GAPS_QUERY, reg, free=["n", "r"])


@_cached
def sgaps_dfa(reg: PredicateRegistry) -> Dfa:
    """(n, r): n and n + r are consecutive members of S."""
    return compile_formula(SGAPS_QUERY, reg, free=["n", "r"])


def gap_lengths_dfa(d: Dfa, start_track: str = "n") -> Dfa:
    """One-track automaton of the r with some start n."""
    return minimize(determinize(project(d, start_track)))


def gap_length_set(d: Dfa, bound: int = 64) -> list[int]:
    """Gap lengths accepted by a (n, r) gap relation, up to ``bound``.

    The literal gap formula is also satisfied by r = 0 (n paired with
    itself); a gap is a positive difference, so 0 is dropped.
    """
    if d.tracks != ("n", "r"):
        raise ValueError(f"expected tracks ('n', 'r'), got {d.tracks}")
    return [r for r in enumerate_accepted(gap_lengths_dfa(d), bound) if r > 0]


@lru_cache(maxsize=None)
def state_count_report() -> dict[str, dict[str, int]]:
    return {
        "factauto": state_counts(factauto()),
        "gaps": state_counts(gaps_dfa()),
        "sgaps": state_counts(sgaps_dfa()),
    }
