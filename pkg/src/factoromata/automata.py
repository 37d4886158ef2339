"""Multi-track automata over LSD-first binary encodings.

A symbol over ``w`` tracks is stored as an integer in ``range(2**w)`` whose
bit ``i`` is the digit on track ``i``.  Numbers are read least significant
digit first; a tuple of numbers is encoded by zero padding every track to
the longest binary length.  Every constructor here returns automata that
are *padding invariant*: acceptance never changes when all-zero symbols are
appended, so the automata recognise tuples of numbers rather than strings.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_STATES = 1_000_000


class AutomatonError(ValueError):
    pass


class StateBudgetExceeded(AutomatonError):
    pass


def max_states_budget() -> int:
    env = os.environ.get("FACTOROMATA_MAX_STATES")
    return int(env) if env else DEFAULT_MAX_STATES


# ---------------------------------------------------------------------------
# symbols and encoding


def symbol_index(bits: Sequence[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise AutomatonError(f"bit must be 0 or 1, got {b!r}")
        out |= b << i
    return out


def symbol_bits(sym: int, width: int) -> tuple[int, ...]:
    return tuple((sym >> i) & 1 for i in range(width))


def canonical_length(values: Sequence[int]) -> int:
    return max((int(v).bit_length() for v in values), default=0)


def encode(values: Sequence[int], length: int | None = None) -> list[tuple[int, ...]]:
    """LSD-first digit strings of ``values`` zipped into bit-tuple symbols."""
    values = [int(v) for v in values]
    if any(v < 0 for v in values):
        raise AutomatonError("only natural numbers can be encoded")
    need = canonical_length(values)
    if length is None:
        length = need
    if length < need:
        raise AutomatonError(f"length {length} is below the canonical length {need}")
    return [tuple((v >> k) & 1 for v in values) for k in range(length)]


# ---------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Dfa:
    """Complete DFA; ``delta[q][sym]`` is the successor of ``q`` on ``sym``."""

    tracks: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        width = len(self.tracks)
        if width < 1:
            raise AutomatonError("an automaton needs at least one track")
        if len(set(self.tracks)) != width:
            raise AutomatonError(f"duplicate track names in {self.tracks}")
        n = len(self.delta)
        if n < 1 or not 0 <= self.initial < n:
            raise AutomatonError("bad initial state")
        for row in self.delta:
            if len(row) != 1 << width:
                raise AutomatonError("transition function is not total")
            if any(not 0 <= t < n for t in row):
                raise AutomatonError("transition target out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise AutomatonError("accepting state out of range")

    @property
    def width(self) -> int:
        return len(self.tracks)

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def run(self, symbols: Iterable[int], start: int | None = None) -> int:
        q = self.initial if start is None else start
        delta = self.delta
        for s in symbols:
            q = delta[q][s]
        return q

    def accepts(self, *values: int) -> bool:
        return accepts(self, values)

    def is_padding_invariant(self) -> bool:
        acc = self.accepting
        return all((q in acc) == (self.delta[q][0] in acc) for q in reachable_states(self))


def accepts(d: Dfa, values: Sequence[int]) -> bool:
    if len(values) != d.width:
        raise AutomatonError(f"automaton has {d.width} tracks, got {len(values)} values")
    return d.run(symbol_index(s) for s in encode(values)) in d.accepting


def accepts_many(d: Dfa, *columns) -> np.ndarray:
    """Vectorised membership for arrays of values, one array per track."""
    if len(columns) != d.width:
        raise AutomatonError(f"automaton has {d.width} tracks, got {len(columns)} columns")
    cols = [np.asarray(c, dtype=np.int64) for c in columns]
    cols = np.broadcast_arrays(*cols)
    if any((c < 0).any() for c in cols):
        raise AutomatonError("only natural numbers can be encoded")
    table = np.asarray(d.delta, dtype=np.int64)
    states = np.full(cols[0].shape, d.initial, dtype=np.int64)
    length = max((int(c.max()).bit_length() for c in cols if c.size), default=0)
    for k in range(length):
        sym = np.zeros(cols[0].shape, dtype=np.int64)
        for i, c in enumerate(cols):
            sym |= ((c >> k) & 1) << i
        states = table[states, sym]
    acc = np.zeros(d.state_count, dtype=bool)
    acc[list(d.accepting)] = True
    return acc[states]


@dataclass(frozen=True)
class Nfa:
    """Automaton with non-negative integer transition multiplicities.

    ``delta[q][sym]`` is a tuple of ``(target, multiplicity)`` pairs.  The
    weight of an input is the number of accepting paths, counted with
    multiplicity.
    """

    tracks: tuple[str, ...]
    initial: tuple[int, ...]
    delta: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]
    accepting: frozenset[int]

    @property
    def width(self) -> int:
        return len(self.tracks)

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def path_count(self, values: Sequence[int], length: int | None = None) -> int:
        vec = list(self.initial)
        for bits in encode(values, length):
            s = symbol_index(bits)
            nxt = [0] * self.state_count
            for q, wq in enumerate(vec):
                if wq:
                    for t, m in self.delta[q][s]:
                        nxt[t] += wq * m
            vec = nxt
        return sum(vec[q] for q in self.accepting)

    def accepts(self, *values: int) -> bool:
        # padding invariance (zero-tail saturation) makes the canonical length enough
        return self.path_count(values) > 0


# ---------------------------------------------------------------------------
# base relations


def make_add(tracks: Sequence[str] = ("x", "y", "z")) -> Dfa:
    """x + y = z.  States: carry 0, carry 1, sink."""
    rows = [[2] * 8, [2] * 8, [2] * 8]
    for carry in (0, 1):
        for sym in range(8):
            x, y, z = symbol_bits(sym, 3)
            total = x + y + carry
            if total & 1 == z:
                rows[carry][sym] = total >> 1
    return Dfa(tuple(tracks), tuple(map(tuple, rows)), 0, frozenset({0}))


def _comparison(tracks, accept_eq, accept_lt, accept_gt) -> Dfa:
    # states: 0 = equal so far, 1 = x < y, 2 = x > y; the latest differing bit decides
    rows = []
    for q in range(3):
        row = []
        for sym in range(4):
            x, y = symbol_bits(sym, 2)
            row.append(q if x == y else (1 if x < y else 2))
        rows.append(tuple(row))
    acc = {q for q, ok in zip(range(3), (accept_eq, accept_lt, accept_gt)) if ok}
    return minimize(Dfa(tuple(tracks), tuple(rows), 0, frozenset(acc)))


def make_less_equal(tracks: Sequence[str] = ("x", "y")) -> Dfa:
    return _comparison(tracks, True, True, False)


def make_less_than(tracks: Sequence[str] = ("x", "y")) -> Dfa:
    return _comparison(tracks, False, True, False)


def make_eq(tracks: Sequence[str] = ("x", "y")) -> Dfa:
    return _comparison(tracks, True, False, False)


def make_const(c: int, track: str = "n") -> Dfa:
    """Accepts exactly the number ``c``."""
    if c < 0:
        raise AutomatonError("constants must be natural numbers")
    bits = [(c >> k) & 1 for k in range(c.bit_length())]
    size = len(bits)
    sink = size + 1
    rows = []
    for i, b in enumerate(bits):
        row = [sink, sink]
        row[b] = i + 1
        rows.append(tuple(row))
    rows.append((size, sink))
    rows.append((sink, sink))
    return Dfa((track,), tuple(rows), 0, frozenset({size}))


def make_universal(tracks: Sequence[str]) -> Dfa:
    return Dfa(tuple(tracks), ((0,) * (1 << len(tracks)),), 0, frozenset({0}))


def make_empty(tracks: Sequence[str]) -> Dfa:
    return Dfa(tuple(tracks), ((0,) * (1 << len(tracks)),), 0, frozenset())


# ---------------------------------------------------------------------------
# boolean algebra


def complement(d: Dfa) -> Dfa:
    return Dfa(d.tracks, d.delta, d.initial, frozenset(range(d.state_count)) - d.accepting)


def align_tracks(d: Dfa, tracks: Sequence[str]) -> Dfa:
    """Cylindrify ``d`` onto ``tracks`` (a superset of its own, any order)."""
    tracks = tuple(tracks)
    missing = [t for t in d.tracks if t not in tracks]
    if missing:
        raise AutomatonError(f"unknown track(s) {missing} for target {tracks}")
    if tracks == d.tracks:
        return d
    pos = [tracks.index(t) for t in d.tracks]
    old_sym = []
    for sym in range(1 << len(tracks)):
        o = 0
        for i, p in enumerate(pos):
            o |= ((sym >> p) & 1) << i
        old_sym.append(o)
    delta = tuple(tuple(row[o] for o in old_sym) for row in d.delta)
    return Dfa(tracks, delta, d.initial, d.accepting)


_OPS = {
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "xor": lambda a, b: a != b,
    "implies": lambda a, b: (not a) or b,
    "iff": lambda a, b: a == b,
}


def product(d1: Dfa, d2: Dfa, op: str = "and") -> Dfa:
    if op not in _OPS:
        raise AutomatonError(f"unknown boolean operation {op!r}")
    fn = _OPS[op]
    tracks = d1.tracks + tuple(t for t in d2.tracks if t not in d1.tracks)
    a, b = align_tracks(d1, tracks), align_tracks(d2, tracks)
    nsym = 1 << len(tracks)
    index = {(a.initial, b.initial): 0}
    pairs = [(a.initial, b.initial)]
    rows = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        ra, rb = a.delta[p], b.delta[q]
        row = []
        for s in range(nsym):
            key = (ra[s], rb[s])
            j = index.get(key)
            if j is None:
                j = index[key] = len(pairs)
                pairs.append(key)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    acc = frozenset(
        k for k, (p, q) in enumerate(pairs) if fn(p in a.accepting, q in b.accepting)
    )
    return Dfa(tracks, tuple(rows), 0, acc)


def conjoin(*ds: Dfa) -> Dfa:
    out = ds[0]
    for d in ds[1:]:
        out = minimize(product(out, d, "and"))
    return out


# ---------------------------------------------------------------------------
# projection and determinisation


def project(d: Dfa, track: str) -> Nfa:
    """Existentially drop ``track``, keeping transition multiplicities.

    Acceptance is zero-tail saturated: a state accepts when an accepting
    state is reachable through symbols that are zero on every remaining
    track, so witnesses longer than the free variables are found.
    """
    if track not in d.tracks:
        raise AutomatonError(f"unknown track {track!r}")
    if d.width < 2:
        raise AutomatonError("cannot project away the only track")
    k = d.tracks.index(track)
    rest = tuple(t for t in d.tracks if t != track)
    low = (1 << k) - 1
    delta = []
    for row in d.delta:
        merged: list[dict[int, int]] = [dict() for _ in range(1 << len(rest))]
        for sym, t in enumerate(row):
            s = (sym & low) | ((sym >> (k + 1)) << k)
            merged[s][t] = merged[s].get(t, 0) + 1
        delta.append(tuple(tuple(sorted(m.items())) for m in merged))

    # backward search along symbols zero on the remaining tracks
    preds: list[set[int]] = [set() for _ in range(d.state_count)]
    for q, row in enumerate(d.delta):
        preds[row[0]].add(q)
        preds[row[1 << k]].add(q)
    sat = set(d.accepting)
    todo = list(sat)
    while todo:
        q = todo.pop()
        for p in preds[q]:
            if p not in sat:
                sat.add(p)
                todo.append(p)
    initial = tuple(1 if q == d.initial else 0 for q in range(d.state_count))
    return Nfa(rest, initial, tuple(delta), frozenset(sat))


def determinize(a: Nfa, max_states: int | None = None) -> Dfa:
    """Subset construction; multiplicities collapse to reachability."""
    cap = max_states_budget() if max_states is None else max_states
    nsym = 1 << a.width
    start = frozenset(q for q, w in enumerate(a.initial) if w)
    index = {start: 0}
    subsets = [start]
    rows = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        row = []
        for s in range(nsym):
            nxt = frozenset(t for q in cur for t, m in a.delta[q][s] if m)
            j = index.get(nxt)
            if j is None:
                if len(subsets) >= cap:
                    raise StateBudgetExceeded(
                        f"determinisation exceeded {cap} states; "
                        "raise FACTOROMATA_MAX_STATES to allow more"
                    )
                j = index[nxt] = len(subsets)
                subsets.append(nxt)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    acc = frozenset(i for i, sub in enumerate(subsets) if sub & a.accepting)
    return Dfa(a.tracks, tuple(rows), 0, acc)


def exists(d: Dfa, track: str) -> Dfa:
    return minimize(determinize(project(d, track)))


# ---------------------------------------------------------------------------
# minimisation and comparison


def reachable_states(d: Dfa) -> list[int]:
    """Reachable states in canonical BFS order (symbols ascending)."""
    seen = {d.initial: 0}
    order = [d.initial]
    i = 0
    while i < len(order):
        for t in d.delta[order[i]]:
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
        i += 1
    return order


def _renumber(d: Dfa, order: list[int]) -> Dfa:
    new = {q: i for i, q in enumerate(order)}
    delta = tuple(tuple(new[t] for t in d.delta[q]) for q in order)
    acc = frozenset(new[q] for q in d.accepting if q in new)
    return Dfa(d.tracks, delta, 0, acc)


def minimize(d: Dfa) -> Dfa:
    """Canonical minimal complete DFA (Moore refinement, BFS numbering)."""
    d = _renumber(d, reachable_states(d))
    n = d.state_count
    block = [1 if q in d.accepting else 0 for q in range(n)]
    nblocks = len(set(block))
    while True:
        sigs: dict[tuple, int] = {}
        new_block = []
        for q in range(n):
            key = (block[q], tuple(block[t] for t in d.delta[q]))
            new_block.append(sigs.setdefault(key, len(sigs)))
        block = new_block
        if len(sigs) == nblocks:
            break
        nblocks = len(sigs)
    # one representative per block, then canonical BFS order
    rep: dict[int, int] = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    delta = tuple(tuple(block[t] for t in d.delta[rep[b]]) for b in range(nblocks))
    acc = frozenset(b for b in range(nblocks) if rep[b] in d.accepting)
    quotient = Dfa(d.tracks, delta, block[d.initial], acc)
    return _renumber(quotient, reachable_states(quotient))


def dead_states(d: Dfa) -> set[int]:
    """States from which no accepting state is reachable."""
    preds: list[set[int]] = [set() for _ in range(d.state_count)]
    for q, row in enumerate(d.delta):
        for t in row:
            preds[t].add(q)
    live = set(d.accepting)
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in preds[q]:
            if p not in live:
                live.add(p)
                todo.append(p)
    return set(range(d.state_count)) - live


def state_counts(d: Dfa) -> dict[str, int]:
    """Minimal state count with the sink kept and with it trimmed."""
    m = minimize(d)
    return {"sink": m.state_count, "trim": m.state_count - len(dead_states(m))}


def is_language_equal(d1: Dfa, d2: Dfa) -> bool:
    if d1.width != d2.width:
        raise AutomatonError(f"arity mismatch: {d1.width} vs {d2.width}")
    m1, m2 = minimize(d1), minimize(d2)
    return m1.delta == m2.delta and m1.accepting == m2.accepting


def rename_tracks(d: Dfa, mapping: dict[str, str]) -> Dfa:
    return Dfa(tuple(mapping.get(t, t) for t in d.tracks), d.delta, d.initial, d.accepting)


def enumerate_accepted(d: Dfa, bound: int) -> list:
    """All accepted tuples with every component <= bound, ascending.

    One-track automata yield plain integers, two-track automata pairs.
    """
    if d.width not in (1, 2):
        raise AutomatonError("enumeration supports one or two tracks")
    values = np.arange(bound + 1, dtype=np.int64)
    if d.width == 1:
        hits = accepts_many(d, values)
        return [int(v) for v in values[hits]]
    xs, ys = np.meshgrid(values, values, indexing="ij")
    hits = accepts_many(d, xs.ravel(), ys.ravel())
    return [(int(x), int(y)) for x, y in zip(xs.ravel()[hits], ys.ravel()[hits])]


# ---------------------------------------------------------------------------
# automaton/1 text format


def dumps(a: Dfa | Nfa) -> str:
    width = a.width
    lines = ["automaton/1", "tracks: " + " ".join(a.tracks), f"states: {a.state_count}"]
    if isinstance(a, Dfa):
        lines.append(f"initial: {a.initial}")
    else:
        lines.append(
            "initial: "
            + " ".join(str(q) if w == 1 else f"{q}:{w}" for q, w in enumerate(a.initial) if w)
        )
    lines.append("accepting: " + " ".join(map(str, sorted(a.accepting))))
    for q, row in enumerate(a.delta):
        for sym, t in enumerate(row):
            label = "".join(str(b) for b in symbol_bits(sym, width))
            if isinstance(a, Dfa):
                lines.append(f"{q} {label} {t}")
            else:
                for target, mult in t:
                    lines.append(f"{q} {label} {target} {mult}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Dfa | Nfa:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "automaton/1":
        raise AutomatonError("missing 'automaton/1' header")
    try:
        head = {}
        for ln, key in zip(lines[1:5], ("tracks", "states", "initial", "accepting")):
            name, _, rest = ln.partition(":")
            if name.strip() != key:
                raise AutomatonError(f"expected '{key}:' line, got {ln!r}")
            head[key] = rest.split()
        tracks = tuple(head["tracks"])
        n = int(head["states"][0])
        width = len(tracks)
        edges = [ln.split() for ln in lines[5:]]
        weighted = any(len(e) == 4 for e in edges) or any(":" in x for x in head["initial"])
        accepting = frozenset(int(x) for x in head["accepting"])
        if not weighted and len(head["initial"]) == 1:
            rows = [[None] * (1 << width) for _ in range(n)]
            for e in edges:
                if len(e) != 3 or len(e[1]) != width:
                    raise AutomatonError(f"malformed transition {' '.join(e)!r}")
                rows[int(e[0])][symbol_index([int(c) for c in e[1]])] = int(e[2])
            if any(t is None for row in rows for t in row):
                raise AutomatonError("transition function is not total")
            return Dfa(tracks, tuple(map(tuple, rows)), int(head["initial"][0]), accepting)
        initial = [0] * n
        for item in head["initial"]:
            q, _, w = item.partition(":")
            initial[int(q)] = int(w) if w else 1
        cells: list[list[dict[int, int]]] = [[{} for _ in range(1 << width)] for _ in range(n)]
        for e in edges:
            if len(e) not in (3, 4) or len(e[1]) != width:
                raise AutomatonError(f"malformed transition {' '.join(e)!r}")
            m = int(e[3]) if len(e) == 4 else 1
            cell = cells[int(e[0])][symbol_index([int(c) for c in e[1]])]
            cell[int(e[2])] = cell.get(int(e[2]), 0) + m
        delta = tuple(tuple(tuple(sorted(c.items())) for c in row) for row in cells)
        return Nfa(tracks, tuple(initial), delta, accepting)
    except (IndexError, KeyError, ValueError) as exc:
        if isinstance(exc, AutomatonError):
            raise
        raise AutomatonError(f"malformed automaton file: {exc}") from exc


def save(a: Dfa | Nfa, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(a))


def load(path) -> Dfa | Nfa:
    with open(path, encoding="ascii") as fh:
        return loads(fh.read())
