"""Finite automata and rational transducers over the walk alphabet.

States may be any hashable values.  Operations that build new automata
renumber states to consecutive integers so results stay small and printable.
Edge labels are signed letters, or ``None`` for an epsilon move.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .errors import BudgetExceeded, DimensionError
from .limits import DEFAULT, Limits
from .words import Word, bar, letters, phi

EPS = None


def _sort_key(x):
    return (type(x).__name__, repr(x))


def _sorted(xs: Iterable) -> list:
    xs = list(xs)
    try:
        return sorted(xs)
    except TypeError:
        return sorted(xs, key=_sort_key)


@dataclass(frozen=True, eq=False)
class Nfa:
    dim: int
    states: frozenset
    edges: frozenset
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        for s, x, t in self.edges:
            if s not in self.states or t not in self.states:
                raise ValueError(f"edge ({s!r}, {x!r}, {t!r}) uses an undeclared state")
            if x is not None and (x == 0 or abs(x) > self.dim):
                raise DimensionError(f"label {x} outside alphabet of dimension {self.dim}")
        if not (self.initial <= self.states and self.final <= self.states):
            raise ValueError("initial/final states must be declared")

    @staticmethod
    def build(dim: int, edges: Iterable, initial: Iterable, final: Iterable,
              states: Iterable = ()) -> "Nfa":
        edges = frozenset((s, x, t) for s, x, t in edges)
        initial, final = frozenset(initial), frozenset(final)
        all_states = set(states) | initial | final
        for s, _, t in edges:
            all_states.add(s)
            all_states.add(t)
        return Nfa(dim, frozenset(all_states), edges, initial, final)

    # -- adjacency -----------------------------------------------------------

    @cached_property
    def succ(self) -> dict:
        out: dict = {s: {} for s in self.states}
        for s, x, t in self.edges:
            out[s].setdefault(x, set()).add(t)
        return out

    @cached_property
    def _closure_cache(self) -> dict:
        return {}

    def closure_of(self, s) -> frozenset:
        cache = self._closure_cache
        got = cache.get(s)
        if got is None:
            seen = {s}
            stack = [s]
            while stack:
                p = stack.pop()
                for q in self.succ[p].get(EPS, ()):
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            got = cache[s] = frozenset(seen)
        return got

    def closure(self, states: Iterable) -> frozenset:
        out: set = set()
        for s in states:
            out |= self.closure_of(s)
        return frozenset(out)

    def step(self, states: Iterable, x: int) -> frozenset:
        """States reachable from ``states`` (assumed closed) by reading ``x``."""
        out: set = set()
        for s in states:
            for t in self.succ[s].get(x, ()):
                out |= self.closure_of(t)
        return frozenset(out)

    def run(self, w: Sequence[int], start: Iterable | None = None) -> frozenset:
        cur = self.closure(self.initial if start is None else start)
        for x in w:
            cur = self.step(cur, x)
            if not cur:
                break
        return cur

    def accepts(self, w: Sequence[int]) -> bool:
        return bool(self.run(w) & self.final)

    @property
    def alphabet(self) -> list[int]:
        return letters(self.dim)

    def is_deterministic(self) -> bool:
        if len(self.initial) > 1:
            return False
        for s, out in self.succ.items():
            if EPS in out or any(len(ts) > 1 for ts in out.values()):
                return False
        return True

    def __repr__(self):
        return (f"Nfa(dim={self.dim}, states={len(self.states)}, "
                f"edges={len(self.edges)}, initial={len(self.initial)}, final={len(self.final)})")


# -- small constructors --------------------------------------------------------


def empty_nfa(dim: int) -> Nfa:
    return Nfa.build(dim, [], [0], [])


def universal(dim: int) -> Nfa:
    return Nfa.build(dim, [(0, x, 0) for x in letters(dim)], [0], [0])


def from_words(dim: int, words: Iterable[Sequence[int]]) -> Nfa:
    """Trie automaton accepting exactly the given finite set of words."""
    edges = []
    final = set()
    ids: dict = {(): 0}
    for w in words:
        w = tuple(w)
        for i in range(len(w)):
            if w[: i + 1] not in ids:
                ids[w[: i + 1]] = len(ids)
                edges.append((ids[w[:i]], w[i], ids[w[: i + 1]]))
        final.add(ids[w])
    return Nfa.build(dim, edges, [0], final, states=ids.values())


def from_regex(dim: int, text: str) -> Nfa:
    """Thompson construction for a small regular-expression syntax.

    Atoms are signed letters (``1``, ``-2``) or ``e`` for the empty word.
    Juxtaposition is concatenation, ``|`` is union, and ``*``, ``+`` and
    ``?`` are postfix operators.  Example: ``"(1 -1)* 1+"``.
    """
    tokens = text.replace("(", " ( ").replace(")", " ) ").replace("|", " | ")
    for op in "*+?":
        tokens = tokens.replace(op, f" {op} ")
    toks = tokens.split()
    pos = 0
    counter = iter(range(10**9))
    edges: list = []

    def new():
        return next(counter)

    def parse_union():
        nonlocal pos
        parts = [parse_concat()]
        while pos < len(toks) and toks[pos] == "|":
            pos += 1
            parts.append(parse_concat())
        if len(parts) == 1:
            return parts[0]
        s, t = new(), new()
        for a, b in parts:
            edges.append((s, EPS, a))
            edges.append((b, EPS, t))
        return s, t

    def parse_concat():
        frags = []
        while pos < len(toks) and toks[pos] not in ("|", ")"):
            frags.append(parse_postfix())
        if not frags:
            s = new()
            return s, s
        s, t = frags[0]
        for a, b in frags[1:]:
            edges.append((t, EPS, a))
            t = b
        return s, t

    def parse_postfix():
        nonlocal pos
        frag = parse_atom()
        while pos < len(toks) and toks[pos] in ("*", "+", "?"):
            op = toks[pos]
            pos += 1
            a, b = frag
            s, t = new(), new()
            edges.append((s, EPS, a))
            edges.append((b, EPS, t))
            if op in "*?":
                edges.append((s, EPS, t))
            if op in "*+":
                edges.append((b, EPS, a))
            frag = (s, t)
        return frag

    def parse_atom():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        if tok == "(":
            frag = parse_union()
            if pos >= len(toks) or toks[pos] != ")":
                raise ValueError("unbalanced parenthesis in regex")
            pos += 1
            return frag
        s, t = new(), new()
        edges.append((s, EPS if tok == "e" else int(tok), t))
        return s, t

    s, t = parse_union()
    if pos != len(toks):
        raise ValueError(f"unexpected token {toks[pos]!r} in regex")
    return remove_epsilons(trim(Nfa.build(dim, edges, [s], [t])))


# -- structural helpers --------------------------------------------------------


def relabel(a: Nfa) -> Nfa:
    """Renumber states 0..N-1 in breadth-first order from the initial states."""
    order: dict = {}
    queue = deque()
    for s in _sorted(a.initial):
        order[s] = len(order)
        queue.append(s)
    while queue:
        s = queue.popleft()
        out = a.succ[s]
        for x in _sorted(out):
            for t in _sorted(out[x]):
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
    for s in _sorted(a.states - order.keys()):
        order[s] = len(order)
    return Nfa(a.dim, frozenset(order.values()),
               frozenset((order[s], x, order[t]) for s, x, t in a.edges),
               frozenset(order[s] for s in a.initial),
               frozenset(order[s] for s in a.final))


def reachable_states(a: Nfa) -> set:
    seen = set(a.initial)
    stack = list(a.initial)
    while stack:
        s = stack.pop()
        for ts in a.succ[s].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


def coreachable_states(a: Nfa) -> set:
    pred: dict = {s: set() for s in a.states}
    for s, _, t in a.edges:
        pred[t].add(s)
    seen = set(a.final)
    stack = list(a.final)
    while stack:
        t = stack.pop()
        for s in pred[t]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def restrict(a: Nfa, keep: set) -> Nfa:
    keep = set(keep)
    return Nfa(a.dim, frozenset(keep),
               frozenset(e for e in a.edges if e[0] in keep and e[2] in keep),
               a.initial & keep, a.final & keep)


def trim(a: Nfa) -> Nfa:
    """Remove states that are unreachable or cannot reach a final state."""
    keep = reachable_states(a) & coreachable_states(a)
    return restrict(a, keep)


def remove_epsilons(a: Nfa) -> Nfa:
    edges = set()
    for s in a.states:
        cl = a.closure_of(s)
        for p in cl:
            for x, ts in a.succ[p].items():
                if x is EPS:
                    continue
                for t in ts:
                    edges.add((s, x, t))
    final = {s for s in a.states if a.closure_of(s) & a.final}
    return relabel(trim(Nfa(a.dim, a.states, frozenset(edges), a.initial, frozenset(final))))


def _check_same_dim(a: Nfa, b: Nfa) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


# -- boolean operations --------------------------------------------------------


def intersect(a: Nfa, b: Nfa, limits: Limits = DEFAULT) -> Nfa:
    _check_same_dim(a, b)
    start = [(p, q) for p in _sorted(a.initial) for q in _sorted(b.initial)]
    seen = set(start)
    queue = deque(start)
    edges = []
    while queue:
        p, q = queue.popleft()
        moves = []
        for t in a.succ[p].get(EPS, ()):
            moves.append((EPS, (t, q)))
        for t in b.succ[q].get(EPS, ()):
            moves.append((EPS, (p, t)))
        for x, ts in a.succ[p].items():
            if x is EPS:
                continue
            for t in ts:
                for u in b.succ[q].get(x, ()):
                    moves.append((x, (t, u)))
        for x, dst in moves:
            edges.append(((p, q), x, dst))
            if dst not in seen:
                if len(seen) >= limits.max_states:
                    raise BudgetExceeded("product states", limits.max_states)
                seen.add(dst)
                queue.append(dst)
    final = {(p, q) for p, q in seen if p in a.final and q in b.final}
    return relabel(Nfa(a.dim, frozenset(seen), frozenset(edges), frozenset(start), frozenset(final)))


def union_(a: Nfa, b: Nfa) -> Nfa:
    _check_same_dim(a, b)
    return union_all([a, b], a.dim)


def union_all(autos: Sequence[Nfa], dim: int) -> Nfa:
    """Disjoint union of several automata of the same dimension."""
    edges, states, initial, final = [], set(), set(), set()
    for i, a in enumerate(autos):
        if a.dim != dim:
            raise DimensionError(f"dimension mismatch: {a.dim} vs {dim}")
        states |= {(i, s) for s in a.states}
        edges += [((i, s), x, (i, t)) for s, x, t in a.edges]
        initial |= {(i, s) for s in a.initial}
        final |= {(i, s) for s in a.final}
    if not states:
        return empty_nfa(dim)
    return relabel(Nfa(dim, frozenset(states), frozenset(edges), frozenset(initial), frozenset(final)))


def concat(a: Nfa, b: Nfa) -> Nfa:
    _check_same_dim(a, b)
    edges = [((0, s), x, (0, t)) for s, x, t in a.edges]
    edges += [((1, s), x, (1, t)) for s, x, t in b.edges]
    edges += [((0, f), EPS, (1, i)) for f in a.final for i in b.initial]
    states = {(0, s) for s in a.states} | {(1, s) for s in b.states}
    return relabel(Nfa(a.dim, frozenset(states), frozenset(edges),
                       frozenset((0, s) for s in a.initial), frozenset((1, s) for s in b.final)))


def determinize(a: Nfa, limits: Limits = DEFAULT) -> Nfa:
    """Subset construction; the result is complete over the full alphabet."""
    start = a.closure(a.initial)
    ids = {start: 0}
    queue = deque([start])
    edges = []
    alphabet = a.alphabet
    while queue:
        S = queue.popleft()
        for x in alphabet:
            T = a.step(S, x)
            if T not in ids:
                if len(ids) >= limits.max_states:
                    raise BudgetExceeded("subset construction states", limits.max_states)
                ids[T] = len(ids)
                queue.append(T)
            edges.append((ids[S], x, ids[T]))
    final = {i for S, i in ids.items() if S & a.final}
    return Nfa(a.dim, frozenset(ids.values()), frozenset(edges), frozenset([0]), frozenset(final))


def complement(a: Nfa, limits: Limits = DEFAULT) -> Nfa:
    d = determinize(a, limits)
    return Nfa(d.dim, d.states, d.edges, d.initial, d.states - d.final)


def difference(a: Nfa, b: Nfa, limits: Limits = DEFAULT) -> Nfa:
    _check_same_dim(a, b)
    return intersect(a, complement(b, limits), limits)


def minimize(a: Nfa, limits: Limits = DEFAULT) -> Nfa:
    """Minimal DFA for L(a), with the dead state removed (so possibly partial)."""
    d = determinize(a, limits)
    alphabet = d.alphabet
    delta = {s: {x: next(iter(d.succ[s][x])) for x in alphabet} for s in d.states}
    block = {s: int(s in d.final) for s in d.states}
    while True:
        sig = {s: (block[s],) + tuple(block[delta[s][x]] for x in alphabet) for s in d.states}
        ids: dict = {}
        new_block = {}
        for s in sorted(d.states):
            new_block[s] = ids.setdefault(sig[s], len(ids))
        stable = len(ids) == len(set(block.values()))
        block = new_block
        if stable:
            break
    edges = {(block[s], x, block[delta[s][x]]) for s in d.states for x in alphabet}
    m = Nfa.build(d.dim, edges, [block[s] for s in d.initial],
                  [block[s] for s in d.final], states=block.values())
    return relabel(trim(m)) if m.final else empty_nfa(d.dim)


# -- emptiness and inclusion ---------------------------------------------------


def _trace(parent: dict, key) -> Word:
    out = []
    while parent[key] is not None:
        key, x = parent[key]
        out.append(x)
    return tuple(reversed(out))


def is_empty(a: Nfa) -> tuple[bool, Word | None]:
    """Emptiness test with the shortest accepted word as witness.

    Among shortest words the least one in lexicographic order of the
    signed-integer letters is returned.
    """
    parent: dict = {}
    queue = deque()
    for s in _sorted(a.closure(a.initial)):
        parent[s] = None
        queue.append(s)
    for s in queue:
        if s in a.final:
            return False, ()
    alphabet = a.alphabet
    while queue:
        s = queue.popleft()
        for x in alphabet:
            for t in _sorted(a.step([s], x)):
                if t not in parent:
                    parent[t] = (s, x)
                    if t in a.final:
                        return False, _trace(parent, t)
                    queue.append(t)
    return True, None


def includes(a: Nfa, b: Nfa, limits: Limits = DEFAULT) -> tuple[bool, Word | None]:
    """Decide ``L(b) <= L(a)``; on failure return a shortest word of ``L(b) - L(a)``.

    Explores pairs (state of b, subset of a) on the fly, so the subset
    construction of ``a`` is only expanded where ``b`` can go.
    """
    _check_same_dim(a, b)
    start_a = a.closure(a.initial)
    parent: dict = {}
    queue = deque()
    for q in _sorted(b.closure(b.initial)):
        key = (q, start_a)
        parent[key] = None
        queue.append(key)
        if q in b.final and not (start_a & a.final):
            return False, ()
    alphabet = b.alphabet
    while queue:
        q, S = queue.popleft()
        for x in alphabet:
            targets = b.step([q], x)
            if not targets:
                continue
            S2 = a.step(S, x)
            for q2 in _sorted(targets):
                key = (q2, S2)
                if key in parent:
                    continue
                if len(parent) >= limits.max_states:
                    raise BudgetExceeded("inclusion pairs", limits.max_states)
                parent[key] = ((q, S), x)
                if q2 in b.final and not (S2 & a.final):
                    return False, _trace(parent, key)
                queue.append(key)
    return True, None


def equivalent(a: Nfa, b: Nfa, limits: Limits = DEFAULT) -> bool:
    return includes(a, b, limits)[0] and includes(b, a, limits)[0]


def enumerate_words(a: Nfa, max_len: int) -> list[Word]:
    """All accepted words of length at most ``max_len``, shortest first then lexicographic."""
    out = []
    live = _live(a)
    layer = {(): a.closure(a.initial)}
    for length in range(max_len + 1):
        for w in sorted(layer):
            if layer[w] & a.final:
                out.append(w)
        if length == max_len:
            break
        nxt = {}
        for w, S in layer.items():
            for x in a.alphabet:
                T = a.step(S, x)
                if T & live:
                    nxt[w + (x,)] = T
        layer = nxt
    return out


def _live(a: Nfa) -> frozenset:
    return frozenset(coreachable_states(a))


def find_run(a: Nfa, w: Sequence[int]) -> list[tuple] | None:
    """An accepting run on ``w`` as a list of edges (epsilon moves included)."""
    start = [(s, 0) for s in _sorted(a.initial)]
    parent: dict = {c: None for c in start}
    queue = deque(start)
    goal = None
    while queue:
        s, i = queue.popleft()
        if i == len(w) and s in a.final:
            goal = (s, i)
            break
        out = a.succ[s]
        moves = [((s, EPS, t), (t, i)) for t in _sorted(out.get(EPS, ()))]
        if i < len(w):
            moves += [((s, w[i], t), (t, i + 1)) for t in _sorted(out.get(w[i], ()))]
        for edge, cfg in moves:
            if cfg not in parent:
                parent[cfg] = (edge, (s, i))
                queue.append(cfg)
    if goal is None:
        return None
    path = []
    cur = goal
    while parent[cur] is not None:
        edge, cur = parent[cur]
        path.append(edge)
    return path[::-1]


# -- morphisms -----------------------------------------------------------------


def _image_of(h: Mapping[int, Sequence[int]], x: int) -> tuple:
    return tuple(h[x]) if x > 0 else bar(h[-x])


def morphism_image(h: Mapping[int, Sequence[int]], a: Nfa, dst_dim: int) -> Nfa:
    """Automaton for ``h(L(a))``; ``h`` maps each positive letter to a word."""
    edges = []
    states = set(a.states)
    fresh = 0
    for s, x, t in _sorted(a.edges):
        img = () if x is EPS else _image_of(h, x)
        if len(img) <= 1:
            edges.append((("q", s), img[0] if img else EPS, ("q", t)))
            continue
        prev = ("q", s)
        for j, y in enumerate(img):
            nxt = ("q", t) if j == len(img) - 1 else ("m", fresh, j)
            edges.append((prev, y, nxt))
            prev = nxt
        fresh += 1
    all_states = {("q", s) for s in states} | {e[0] for e in edges} | {e[2] for e in edges}
    return relabel(Nfa(dst_dim, frozenset(all_states), frozenset(edges),
                       frozenset(("q", s) for s in a.initial), frozenset(("q", s) for s in a.final)))


def morphism_preimage(h: Mapping[int, Sequence[int]], a: Nfa, src_dim: int) -> Nfa:
    """Automaton for ``h^{-1}(L(a))`` over the alphabet of dimension ``src_dim``."""
    edges = []
    for s in a.states:
        start = a.closure_of(s)
        for x in letters(src_dim):
            for t in a.run(_image_of(h, x), start):
                edges.append((s, x, t))
    initial = a.closure(a.initial)
    final = {s for s in a.states if a.closure_of(s) & a.final}
    return relabel(Nfa(src_dim, a.states, frozenset(edges), initial, frozenset(final)))


def projection_morphism(i: int, n: int) -> dict:
    """The morphism keeping axis ``i`` (renamed to axis 1) and erasing the rest."""
    return {j: ((1,) if j == i else ()) for j in range(1, n + 1)}


def reverse_bar(a: Nfa) -> Nfa:
    edges = frozenset((t, EPS if x is EPS else -x, s) for s, x, t in a.edges)
    return Nfa(a.dim, a.states, edges, a.final, a.initial)


# -- transducers ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Transducer:
    states: frozenset
    edges: frozenset            # (src, input word, output word, dst)
    initial: Hashable
    final: Hashable
    in_dim: int
    out_dim: int

    def __post_init__(self):
        for s, u, v, t in self.edges:
            if s not in self.states or t not in self.states:
                raise ValueError("transducer edge uses an undeclared state")
            for x in u:
                if x == 0 or abs(x) > self.in_dim:
                    raise DimensionError(f"input letter {x} outside dimension {self.in_dim}")
            for x in v:
                if x == 0 or abs(x) > self.out_dim:
                    raise DimensionError(f"output letter {x} outside dimension {self.out_dim}")
        if self.initial not in self.states or self.final not in self.states:
            raise ValueError("initial/final must be declared states")

    @staticmethod
    def build(in_dim: int, out_dim: int, edges: Iterable, initial, final) -> "Transducer":
        edges = frozenset((s, tuple(u), tuple(v), t) for s, u, v, t in edges)
        states = {initial, final} | {e[0] for e in edges} | {e[3] for e in edges}
        return Transducer(frozenset(states), edges, initial, final, in_dim, out_dim)


def identity_transducer(n: int) -> Transducer:
    return Transducer.build(n, n, [(0, (x,), (x,), 0) for x in letters(n)], 0, 0)


def morphism_transducer(h: Mapping[int, Sequence[int]], in_dim: int, out_dim: int) -> Transducer:
    return Transducer.build(in_dim, out_dim,
                            [(0, (x,), _image_of(h, x), 0) for x in letters(in_dim)], 0, 0)


def normalize(T: Transducer) -> Transducer:
    """Equivalent transducer whose edges read and write at most one letter each."""
    edges = []
    fresh = 0
    for s, u, v, t in _sorted(T.edges):
        steps = max(len(u), len(v), 1)
        if steps == 1:
            edges.append((("q", s), u, v, ("q", t)))
            continue
        prev = ("q", s)
        for j in range(steps):
            nxt = ("q", t) if j == steps - 1 else ("m", fresh, j)
            edges.append((prev, u[j:j + 1], v[j:j + 1], nxt))
            prev = nxt
        fresh += 1
    return Transducer.build(T.in_dim, T.out_dim, edges, ("q", T.initial), ("q", T.final))


def invert(T: Transducer) -> Transducer:
    return Transducer(T.states, frozenset((s, v, u, t) for s, u, v, t in T.edges),
                      T.initial, T.final, T.out_dim, T.in_dim)


def compose(S: Transducer, T: Transducer) -> Transducer:
    """The relation ``S o T``: first apply ``T``, then ``S``."""
    if T.out_dim != S.in_dim:
        raise DimensionError("compose: output dimension of T must equal input dimension of S")
    Sn, Tn = normalize(S), normalize(T)
    edges = []
    s_by_src: dict = {}
    for e in Sn.edges:
        s_by_src.setdefault(e[0], []).append(e)
    t_by_src: dict = {}
    for e in Tn.edges:
        t_by_src.setdefault(e[0], []).append(e)
    start = (Tn.initial, Sn.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        moves = []
        for _, u, v, p2 in t_by_src.get(p, []):
            if not v:
                moves.append((u, (), (p2, q)))
            else:
                for _, u2, v2, q2 in s_by_src.get(q, []):
                    if u2 == v:
                        moves.append((u, v2, (p2, q2)))
        for _, u2, v2, q2 in s_by_src.get(q, []):
            if not u2:
                moves.append(((), v2, (p, q2)))
        for u, v, dst in moves:
            edges.append(((p, q), u, v, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    final = (Tn.final, Sn.final)
    seen.add(final)
    return Transducer(frozenset(seen), frozenset(edges), start, final, T.in_dim, S.out_dim)


def apply_transducer(T: Transducer, a: Nfa, limits: Limits = DEFAULT) -> Nfa:
    """Automaton for ``T L(a)``: all outputs of ``T`` on inputs from ``L(a)``."""
    if a.dim != T.in_dim:
        raise DimensionError("apply_transducer: automaton dimension must match the input dimension")
    Tn = normalize(T)
    by_src: dict = {}
    for e in Tn.edges:
        by_src.setdefault(e[0], []).append(e)
    start = [(Tn.initial, q) for q in _sorted(a.initial)]
    seen = set(start)
    queue = deque(start)
    edges = []
    while queue:
        t, q = queue.popleft()
        moves = [(EPS, (t, q2)) for q2 in a.succ[q].get(EPS, ())]
        for _, u, v, t2 in by_src.get(t, []):
            out = v[0] if v else EPS
            if not u:
                moves.append((out, (t2, q)))
            else:
                for q2 in a.succ[q].get(u[0], ()):
                    moves.append((out, (t2, q2)))
        for x, dst in moves:
            edges.append(((t, q), x, dst))
            if dst not in seen:
                if len(seen) >= limits.max_states:
                    raise BudgetExceeded("transducer product states", limits.max_states)
                seen.add(dst)
                queue.append(dst)
    final = {(t, q) for t, q in seen if t == Tn.final and q in a.final}
    return relabel(Nfa(T.out_dim, frozenset(seen), frozenset(edges), frozenset(start), frozenset(final)))


def transducer_pairs(T: Transducer, max_in: int, max_out: int) -> set[tuple[Word, Word]]:
    """All pairs of the relation with bounded input and output lengths."""
    Tn = normalize(T)
    by_src: dict = {}
    for e in Tn.edges:
        by_src.setdefault(e[0], []).append(e)
    start = (Tn.initial, (), ())
    seen = {start}
    stack = [start]
    out = set()
    while stack:
        s, u, v = stack.pop()
        if s == Tn.final:
            out.add((u, v))
        for _, du, dv, t in by_src.get(s, []):
            cfg = (t, u + du, v + dv)
            if len(cfg[1]) <= max_in and len(cfg[2]) <= max_out and cfg not in seen:
                seen.add(cfg)
                stack.append(cfg)
    return out


# -- decomposition and cycles --------------------------------------------------


def state_graph(a: Nfa) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(a.states)
    for s, _, t in a.edges:
        g.add_edge(s, t)
    return g


def is_linear(a: Nfa) -> bool:
    """Trim automaton whose SCC condensation is a path, entered only at its
    first component and left only from its last one."""
    a2 = trim(a)
    if not a2.states:
        return False
    cond = nx.condensation(state_graph(a2))
    order = list(nx.topological_sort(cond))
    for x, y in zip(order, order[1:]):
        if not cond.has_edge(x, y):
            return False
    if cond.number_of_edges() != len(order) - 1:
        return False
    first = cond.nodes[order[0]]["members"]
    last = cond.nodes[order[-1]]["members"]
    return a2.initial <= first and a2.final <= last


def linear_decomposition(a: Nfa) -> list[Nfa]:
    """Linear automata whose languages together make up ``L(a)``.

    One component per path of the SCC condensation that starts in a
    component holding an initial state and ends in one holding a final state.
    Inside a component every accepting run passes through every SCC.
    """
    a = trim(a)
    if not a.final:
        return []
    if is_linear(a):
        return [relabel(a)]
    g = state_graph(a)
    cond = nx.condensation(g)
    members = {c: cond.nodes[c]["members"] for c in cond.nodes}
    starts = [c for c in cond.nodes if members[c] & a.initial]
    ends = {c for c in cond.nodes if members[c] & a.final}
    paths = []
    for c0 in sorted(starts, key=lambda c: min(_sort_key(s) for s in members[c])):
        for c1 in sorted(ends, key=lambda c: min(_sort_key(s) for s in members[c])):
            if c0 == c1:
                paths.append([c0])
            else:
                paths.extend(nx.all_simple_paths(cond, c0, c1))
    comps = []
    for path in paths:
        keep = set().union(*(members[c] for c in path))
        index = {s: i for i, c in enumerate(path) for s in members[c]}
        edges = frozenset(
            (s, x, t) for s, x, t in a.edges
            if s in keep and t in keep and index[t] - index[s] in (0, 1)
        )
        comp = Nfa(a.dim, frozenset(keep), edges,
                   frozenset(a.initial & members[path[0]]), frozenset(a.final & members[path[-1]]))
        comps.append(relabel(trim(comp)))
    return comps


@dataclass(frozen=True)
class Cycle:
    anchor: Hashable
    word: Word
    effect: tuple


def simple_cycles(a: Nfa, limits: Limits = DEFAULT) -> list[Cycle]:
    """One representative word for every (simple cycle, effect) combination."""
    labels: dict = {}
    for s, x, t in a.edges:
        labels.setdefault((s, t), set()).add(x)
    g = state_graph(a)
    out: list[Cycle] = []
    seen = set()
    count = 0
    for cyc in nx.simple_cycles(g):
        count += 1
        if count > limits.max_cycles:
            raise BudgetExceeded("simple cycles", limits.max_cycles)
        # rotate so the anchor is the smallest state for determinism
        k = min(range(len(cyc)), key=lambda i: _sort_key(cyc[i]))
        cyc = cyc[k:] + cyc[:k]
        hops = list(zip(cyc, cyc[1:] + cyc[:1]))
        options = [([EPS] if EPS in labels[h] else []) + _sorted(labels[h] - {EPS})
                   for h in hops]
        combos = 1
        for o in options:
            combos *= len(o)
        if combos > limits.max_cycles:
            raise BudgetExceeded("simple cycles", limits.max_cycles)
        by_effect = {}
        for choice in product(*options):
            w = tuple(x for x in choice if x is not EPS)
            eff = phi(w, a.dim)
            if eff not in by_effect or (len(w), w) < (len(by_effect[eff]), by_effect[eff]):
                by_effect[eff] = w
        for eff, w in by_effect.items():
            key = (tuple(cyc), eff)
            if key not in seen:
                seen.add(key)
                out.append(Cycle(cyc[0], w, eff))
    return out


def simple_cycle_effects(a: Nfa, limits: Limits = DEFAULT) -> set[tuple]:
    return {c.effect for c in simple_cycles(a, limits)}


def closed_walk(a: Nfa, start, via) -> Word:
    """A word labelling some walk ``start -> via -> start`` (both in one SCC)."""
    return _path_word(a, start, via) + _path_word(a, via, start)


def _path_word(a: Nfa, s, t) -> Word:
    parent = {s: None}
    queue = deque([s])
    while queue:
        p = queue.popleft()
        if p == t:
            break
        for x in [EPS] + a.alphabet:
            for q in _sorted(a.succ[p].get(x, ())):
                if q not in parent:
                    parent[q] = (p, x)
                    queue.append(q)
    if t not in parent:
        raise ValueError("no path between the given states")
    w = []
    cur = t
    while parent[cur] is not None:
        p, x = parent[cur]
        if x is not EPS:
            w.append(x)
        cur = p
    return tuple(reversed(w))
