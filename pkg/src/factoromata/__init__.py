"""Automata and exact linear algebra for n! as a sum of three squares.

``factauto`` recognizes the n for which n! is *not* a sum of three squares;
the counting function of that set is exposed through a linear
representation in :mod:`factoromata.linrep`.
"""

from .automata import Dfa, Nfa, accepts, load, save
from .linrep import eval_linrep, sbar_linrep
from .oracles import in_sbar, theta_direct
from .seeds import factauto, theta_dfa

__all__ = [
    "Dfa",
    "Nfa",
    "accepts",
    "eval_linrep",
    "factauto",
    "in_sbar",
    "load",
    "save",
    "sbar_linrep",
    "theta_dfa",
    "theta_direct",
]
__version__ = "0.1.0"
