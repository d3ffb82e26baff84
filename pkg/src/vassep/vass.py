"""Vector addition systems with states, their relations, and Karp-Miller trees.

A ``Vass`` reads letters of the walk alphabet (or moves silently) while
adding an integer effect to ``d`` counters.  Its language depends on the
semantics mode:

* ``reach``: counters stay non-negative and the run ends at the target with all counters 0,
* ``cover``: counters stay non-negative and the run ends at the target with any values,
* ``int``:   counters range over the integers and the run ends at the target with all counters 0.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Hashable, Iterable, Sequence

from . import automata as au
from .automata import EPS, Nfa, Transducer, _sorted
from .errors import BudgetExceeded, DimensionError, InputError
from .limits import DEFAULT, Limits
from .words import Word, letters, phi, word_for_vector

OMEGA = math.inf


class Mode(str, Enum):
    REACH = "reach"
    COVER = "cover"
    INT = "int"


@dataclass(frozen=True)
class Transition:
    src: Hashable
    label: int | None
    effect: tuple
    dst: Hashable


@dataclass(frozen=True, eq=False)
class Vass:
    states: frozenset
    transitions: tuple
    source: Hashable
    target: Hashable
    dim_counters: int
    dim_alphabet: int
    mode: Mode = Mode.REACH

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        for t in self.transitions:
            if t.src not in self.states or t.dst not in self.states:
                raise InputError(f"transition {t} uses an undeclared state")
            if len(t.effect) != self.dim_counters:
                raise DimensionError(f"effect {t.effect} does not have length {self.dim_counters}")
            if t.label is not None and (t.label == 0 or abs(t.label) > self.dim_alphabet):
                raise DimensionError(f"label {t.label} outside alphabet of dimension {self.dim_alphabet}")
        if self.source not in self.states or self.target not in self.states:
            raise InputError("source/target must be declared states")

    @staticmethod
    def build(d: int, n: int, transitions: Iterable, source, target,
              mode: Mode | str = Mode.REACH, states: Iterable = ()) -> "Vass":
        ts = tuple(Transition(s, x, tuple(e), t) for s, x, e, t in transitions)
        all_states = {source, target} | set(states)
        for t in ts:
            all_states.add(t.src)
            all_states.add(t.dst)
        return Vass(frozenset(all_states), ts, source, target, d, n, Mode(mode))

    def with_mode(self, mode: Mode | str) -> "Vass":
        return replace(self, mode=Mode(mode))

    @property
    def by_src(self) -> dict:
        out: dict = {}
        for t in self.transitions:
            out.setdefault(t.src, []).append(t)
        return out

    def __repr__(self):
        return (f"Vass(states={len(self.states)}, transitions={len(self.transitions)}, "
                f"d={self.dim_counters}, n={self.dim_alphabet}, mode={self.mode.value})")


def relabel_vass(v: Vass) -> Vass:
    """Renumber states 0..N-1 (breadth-first from the source)."""
    order = {v.source: 0}
    queue = deque([v.source])
    by_src = v.by_src
    while queue:
        s = queue.popleft()
        for t in by_src.get(s, []):
            if t.dst not in order:
                order[t.dst] = len(order)
                queue.append(t.dst)
    for s in _sorted(v.states - order.keys()):
        order[s] = len(order)
    ts = tuple(Transition(order[t.src], t.label, t.effect, order[t.dst]) for t in v.transitions)
    return Vass(frozenset(order.values()), ts, order[v.source], order[v.target],
                v.dim_counters, v.dim_alphabet, v.mode)


def _fires(counters: tuple, effect: tuple, mode: Mode) -> tuple | None:
    new = tuple(c + e for c, e in zip(counters, effect))
    if mode is not Mode.INT and any(c < 0 for c in new):
        return None
    return new


def _accepting(v: Vass, state, counters, mode: Mode) -> bool:
    if state != v.target:
        return False
    return mode is Mode.COVER or not any(counters)


def _dead_filter(v: Vass, mode: Mode):
    """Predicate on configurations that can never reach an accepting one.

    With exact acceptance, a positive counter must still be decremented (and
    in integer mode a negative one incremented) by some transition reachable
    from the current state; otherwise the run is dead.  Coverability
    acceptance never rules anything out this way.
    """
    if mode is Mode.COVER:
        return lambda s, c: False
    succ: dict = {}
    down: dict = {s: set() for s in v.states}
    up: dict = {s: set() for s in v.states}
    for t in v.transitions:
        succ.setdefault(t.src, set()).add(t.dst)
        for i, e in enumerate(t.effect):
            if e < 0:
                down[t.src].add(i)
            elif e > 0:
                up[t.src].add(i)
    changed = True
    while changed:
        changed = False
        for s in v.states:
            for q in succ.get(s, ()):
                if not (down[q] <= down[s] and up[q] <= up[s]):
                    down[s] |= down[q]
                    up[s] |= up[q]
                    changed = True

    def dead(s, c):
        ds, us = down[s], up[s]
        return any((x > 0 and i not in ds) or (x < 0 and i not in us) for i, x in enumerate(c))
    return dead


def bounded_language(v: Vass, mode: Mode | str | None = None, max_steps: int = 8,
                     limits: Limits = DEFAULT) -> set[Word]:
    """Words of accepting runs that use at most ``max_steps`` transitions."""
    mode = v.mode if mode is None else Mode(mode)
    by_src = v.by_src
    dead = _dead_filter(v, mode)
    start = (v.source, (0,) * v.dim_counters, ())
    layer = {start}
    seen_total = 1
    out = set()
    for step in range(max_steps + 1):
        for s, c, w in layer:
            if _accepting(v, s, c, mode):
                out.add(w)
        if step == max_steps:
            break
        nxt = set()
        for s, c, w in layer:
            for t in by_src.get(s, []):
                c2 = _fires(c, t.effect, mode)
                if c2 is None or dead(t.dst, c2):
                    continue
                nxt.add((t.dst, c2, w if t.label is None else w + (t.label,)))
        seen_total += len(nxt)
        if seen_total > limits.max_steps:
            raise BudgetExceeded("configurations", limits.max_steps)
        layer = nxt
    return out


def language_upto(v: Vass, max_len: int, counter_cap: int, mode: Mode | str | None = None,
                  limits: Limits = DEFAULT) -> set[Word]:
    """Words of length at most ``max_len`` accepted by runs whose counters
    never exceed ``counter_cap`` in absolute value.

    Unlike ``bounded_language`` the number of silent steps is unrestricted,
    so the result is exact for machines whose accepting runs on short words
    keep counters small.
    """
    mode = v.mode if mode is None else Mode(mode)
    by_src = v.by_src
    dead = _dead_filter(v, mode)
    start = (v.source, (0,) * v.dim_counters, ())
    seen = {start}
    stack = [start]
    out = set()
    while stack:
        s, c, w = stack.pop()
        if _accepting(v, s, c, mode):
            out.add(w)
        for t in by_src.get(s, []):
            if t.label is not None and len(w) >= max_len:
                continue
            c2 = _fires(c, t.effect, mode)
            if c2 is None or any(abs(x) > counter_cap for x in c2) or dead(t.dst, c2):
                continue
            cfg = (t.dst, c2, w if t.label is None else w + (t.label,))
            if cfg not in seen:
                if len(seen) >= limits.max_steps:
                    raise BudgetExceeded("configurations", limits.max_steps)
                seen.add(cfg)
                stack.append(cfg)
    return out


def accepts_word(v: Vass, w: Sequence[int], counter_cap: int, mode: Mode | str | None = None,
                 limits: Limits = DEFAULT) -> bool:
    """Membership of a single word, searching runs with counters bounded by ``counter_cap``."""
    mode = v.mode if mode is None else Mode(mode)
    w = tuple(w)
    by_src = v.by_src
    dead = _dead_filter(v, mode)
    start = (v.source, (0,) * v.dim_counters, 0)
    seen = {start}
    stack = [start]
    while stack:
        s, c, i = stack.pop()
        if i == len(w) and _accepting(v, s, c, mode):
            return True
        for t in by_src.get(s, []):
            if t.label is not None and (i >= len(w) or w[i] != t.label):
                continue
            c2 = _fires(c, t.effect, mode)
            if c2 is None or any(abs(x) > counter_cap for x in c2) or dead(t.dst, c2):
                continue
            cfg = (t.dst, c2, i + (t.label is not None))
            if cfg not in seen:
                if len(seen) >= limits.max_steps:
                    raise BudgetExceeded("configurations", limits.max_steps)
                seen.add(cfg)
                stack.append(cfg)
    return False


# -- conversions ---------------------------------------------------------------


def to_generator(v: Vass) -> Transducer:
    """Transducer ``T`` with ``L(v) = T(G)`` for the generator ``G`` matching the mode.

    Each transition reads ``a_1^{u_1} ... a_d^{u_d}`` for its effect ``u`` and
    writes its label.
    """
    edges = [(t.src, word_for_vector(t.effect), () if t.label is None else (t.label,), t.dst)
             for t in v.transitions]
    return Transducer(frozenset(v.states), frozenset(edges), v.source, v.target,
                      v.dim_counters, v.dim_alphabet)


def from_generator(T: Transducer, n: int | None = None, mode: Mode | str = Mode.REACH) -> Vass:
    """VASS whose language is ``T(G)`` where ``G`` is the generator of ``mode``
    in dimension ``n`` (the transducer's input dimension)."""
    n = T.in_dim if n is None else n
    if n != T.in_dim:
        raise DimensionError("transducer input dimension must equal the counter dimension")
    Tn = au.normalize(T)
    ts = [(s, out[0] if out else None, phi(inp, n), t) for s, inp, out, t in Tn.edges]
    return relabel_vass(Vass.build(n, T.out_dim, ts, Tn.initial, Tn.final, mode, states=Tn.states))


def vass_from_nfa(a: Nfa) -> Vass:
    """Zero-counter VASS with the same language as ``a``."""
    src, tgt = ("src",), ("tgt",)
    ts = [(("q", s), x, (), ("q", t)) for s, x, t in a.edges]
    ts += [(src, None, (), ("q", s)) for s in a.initial]
    ts += [(("q", s), None, (), tgt) for s in a.final]
    states = {("q", s) for s in a.states}
    return relabel_vass(Vass.build(0, a.dim, ts, src, tgt, Mode.REACH, states=states))


def nfa_from_vass(v: Vass) -> Nfa:
    """The finite automaton underlying a VASS without counters."""
    if v.dim_counters != 0:
        raise InputError("only counter-free VASS are finite automata")
    return Nfa.build(v.dim_alphabet, [(t.src, t.label, t.dst) for t in v.transitions],
                     [v.source], [v.target], states=v.states)


def vass_intersect_nfa(v: Vass, a: Nfa) -> Vass:
    """VASS for ``L(v)`` intersected with ``L(a)`` (same mode)."""
    if v.dim_alphabet != a.dim:
        raise DimensionError("alphabet dimensions differ")
    zero = (0,) * v.dim_counters
    src, tgt = ("src",), ("tgt",)
    ts = [(src, None, zero, (v.source, p)) for p in a.initial]
    ts += [((v.target, f), None, zero, tgt) for f in a.final]
    by_src = v.by_src
    start = [(v.source, p) for p in a.initial]
    seen = set(start)
    queue = deque(start)
    while queue:
        q, p = queue.popleft()
        moves = [(None, zero, (q, p2)) for p2 in a.succ[p].get(EPS, ())]
        for t in by_src.get(q, []):
            if t.label is None:
                moves.append((None, t.effect, (t.dst, p)))
            else:
                for p2 in a.succ[p].get(t.label, ()):
                    moves.append((t.label, t.effect, (t.dst, p2)))
        for x, e, dst in moves:
            ts.append(((q, p), x, e, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return relabel_vass(Vass.build(v.dim_counters, v.dim_alphabet, ts, src, tgt, v.mode, states=seen))


def vass_apply_transducer(T: Transducer, v: Vass) -> Vass:
    """VASS for ``T L(v)`` (same mode)."""
    if T.in_dim != v.dim_alphabet:
        raise DimensionError("transducer input dimension must equal the VASS alphabet dimension")
    Tn = au.normalize(T)
    t_by_src: dict = {}
    for e in Tn.edges:
        t_by_src.setdefault(e[0], []).append(e)
    zero = (0,) * v.dim_counters
    by_src = v.by_src
    start = (Tn.initial, v.source)
    seen = {start}
    queue = deque([start])
    ts = []
    while queue:
        r, q = queue.popleft()
        moves = [(None, t.effect, (r, t.dst)) for t in by_src.get(q, []) if t.label is None]
        for _, u, out, r2 in t_by_src.get(r, []):
            y = out[0] if out else None
            if not u:
                moves.append((y, zero, (r2, q)))
                continue
            for t in by_src.get(q, []):
                if t.label == u[0]:
                    moves.append((y, t.effect, (r2, t.dst)))
        for y, e, dst in moves:
            ts.append(((r, q), y, e, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    target = (Tn.final, v.target)
    seen.add(target)
    return relabel_vass(Vass.build(v.dim_counters, T.out_dim, ts, start, target, v.mode, states=seen))


# -- relations -----------------------------------------------------------------


@dataclass(frozen=True)
class VasRelation:
    """Relation ``{(w, u) : (source, 0, 0) --w--> (target, 0, u)}``.

    The last ``m`` counters of ``vass`` are outputs; the others are hidden and
    must return to 0.
    """
    vass: Vass
    m: int

    @property
    def hidden(self) -> int:
        return self.vass.dim_counters - self.m


def relation_pairs(R: VasRelation, max_steps: int, limits: Limits = DEFAULT) -> set[tuple[Word, tuple]]:
    v = R.vass
    by_src = v.by_src
    h = R.hidden
    layer = {(v.source, (0,) * v.dim_counters, ())}
    out = set()
    total = 1
    for step in range(max_steps + 1):
        for s, c, w in layer:
            if s == v.target and not any(c[:h]):
                out.add((w, c[h:]))
        if step == max_steps:
            break
        nxt = set()
        for s, c, w in layer:
            for t in by_src.get(s, []):
                c2 = _fires(c, t.effect, Mode.REACH)
                if c2 is not None:
                    nxt.add((t.dst, c2, w if t.label is None else w + (t.label,)))
        total += len(nxt)
        if total > limits.max_steps:
            raise BudgetExceeded("configurations", limits.max_steps)
        layer = nxt
    return out


def _prefix_max_relation(letter: int = 1, n: int = 1, extra_start: tuple | None = None) -> VasRelation:
    """``{(w, m) : m <= mu(projection of w on axis letter)}``; the machine of R1.

    While in ``p`` the counter follows the walk (and so must stay non-negative);
    the switch to ``q`` freezes it at some height reached by a prefix that
    never went below 0.  Letters of other axes are read with zero effect.
    """
    others = [x for x in letters(n) if abs(x) != letter]
    ts = [("p", letter, (1,), "p"), ("p", -letter, (-1,), "p"), ("p", None, (0,), "q"),
          ("q", letter, (0,), "q"), ("q", -letter, (0,), "q")]
    ts += [(s, x, (0,), s) for s in ("p", "q") for x in others]
    return VasRelation(Vass.build(1, n, ts, "p", "q"), 1)


def builtin_relations() -> dict[str, VasRelation]:
    """The relations R1, R2, R3 and the shifted variants R1', R3'.

    * R1  = {(w, m)         : m <= mu(w)}
    * R2  = {(w, r, s)      : r - s = phi(w)}
    * R3  = {(w, n)         : n <= mu(revbar(w))}
    * R1' = {(w, m, m + 1)  : m <= mu(w)}
    * R3' = {(w, n + 1, n)  : n <= mu(revbar(w))}
    """
    r1 = _prefix_max_relation()
    r2 = VasRelation(Vass.build(2, 1, [
        ("p", 1, (1, 0), "p"), ("p", -1, (0, 1), "p"), ("p", None, (0, 0), "q"),
        ("q", None, (1, 1), "q"), ("q", None, (-1, -1), "q")], "p", "q"), 2)
    # R3: first counter hidden, second is the output
    r3 = VasRelation(Vass.build(2, 1, [
        ("p", 1, (0, 0), "p"), ("p", -1, (0, 0), "p"), ("p", None, (0, 0), "q"),
        ("q", None, (1, 1), "q"), ("q", None, (0, 0), "r"),
        ("r", 1, (1, 0), "r"), ("r", -1, (-1, 0), "r")], "p", "r"), 1)
    r1p = VasRelation(Vass.build(2, 1, [
        ("o", None, (0, 1), "p"),
        ("p", 1, (1, 1), "p"), ("p", -1, (-1, -1), "p"), ("p", None, (0, 0), "q"),
        ("q", 1, (0, 0), "q"), ("q", -1, (0, 0), "q")], "o", "q"), 2)
    r3p = VasRelation(Vass.build(3, 1, [
        ("o", None, (0, 1, 0), "p"),
        ("p", 1, (0, 0, 0), "p"), ("p", -1, (0, 0, 0), "p"), ("p", None, (0, 0, 0), "q"),
        ("q", None, (1, 1, 1), "q"), ("q", None, (0, 0, 0), "r"),
        ("r", 1, (1, 0, 0), "r"), ("r", -1, (-1, 0, 0), "r")], "o", "r"), 2)
    return {"R1": r1, "R2": r2, "R3": r3, "R1'": r1p, "R3'": r3p}


def relation_product(R: VasRelation, S: VasRelation) -> VasRelation:
    """``{(w, u, v) : (w, u) in R and (w, v) in S}``.

    Counter layout: hidden counters of R, hidden of S, outputs of R, outputs of S.
    """
    a, b = R.vass, S.vass
    if a.dim_alphabet != b.dim_alphabet:
        raise DimensionError("relations over different alphabets")
    hr, hs = R.hidden, S.hidden

    def lay(er, es):
        return tuple(er[:hr]) + tuple(es[:hs]) + tuple(er[hr:]) + tuple(es[hs:])

    zr, zs = (0,) * a.dim_counters, (0,) * b.dim_counters
    ts = []
    for p in a.states:
        for q in b.states:
            for t in a.by_src.get(p, []):
                if t.label is None:
                    ts.append(((p, q), None, lay(t.effect, zs), (t.dst, q)))
                else:
                    for t2 in b.by_src.get(q, []):
                        if t2.label == t.label:
                            ts.append(((p, q), t.label, lay(t.effect, t2.effect), (t.dst, t2.dst)))
            for t2 in b.by_src.get(q, []):
                if t2.label is None:
                    ts.append(((p, q), None, lay(zr, t2.effect), (p, t2.dst)))
    states = {(p, q) for p in a.states for q in b.states}
    v = Vass.build(a.dim_counters + b.dim_counters, a.dim_alphabet, ts,
                   (a.source, b.source), (a.target, b.target), Mode.REACH, states=states)
    return VasRelation(_prune(v), R.m + S.m)


def _prune(v: Vass) -> Vass:
    """Drop states that are unreachable from the source or cannot reach the target."""
    fwd = {v.source}
    stack = [v.source]
    by_src = v.by_src
    while stack:
        s = stack.pop()
        for t in by_src.get(s, []):
            if t.dst not in fwd:
                fwd.add(t.dst)
                stack.append(t.dst)
    pred: dict = {}
    for t in v.transitions:
        pred.setdefault(t.dst, set()).add(t.src)
    bwd = {v.target}
    stack = [v.target]
    while stack:
        s = stack.pop()
        for p in pred.get(s, ()):
            if p not in bwd:
                bwd.add(p)
                stack.append(p)
    keep = (fwd & bwd) | {v.source, v.target}
    ts = tuple(t for t in v.transitions if t.src in keep and t.dst in keep)
    return relabel_vass(Vass(frozenset(keep), ts, v.source, v.target, v.dim_counters,
                             v.dim_alphabet, v.mode))


def relation_result(L: Vass, R: VasRelation) -> Vass:
    """VASS for ``{a_1^{x_1} ... a_m^{x_m} : some w in L(L) has (w, x) in R}``.

    The machine first simulates ``L`` and ``R`` in lockstep on a hidden
    word (all moves silent), then drains the output counters, emitting
    ``a_i`` for each unit taken from output ``i`` in the order 1..m.
    Draining only decreases counters, so doing it after the simulation
    accepts the same words as interleaving it.
    """
    if L.mode is not Mode.REACH:
        raise InputError("relation_result expects a reachability-semantics VASS")
    rv = R.vass
    if L.dim_alphabet != rv.dim_alphabet:
        raise DimensionError("alphabet dimensions differ")
    dl, dr, m = L.dim_counters, rv.dim_counters, R.m
    zl, zr = (0,) * dl, (0,) * dr
    ts = []
    for p in L.states:
        for q in rv.states:
            src = ("sim", p, q)
            for t in L.by_src.get(p, []):
                if t.label is None:
                    ts.append((src, None, t.effect + zr, ("sim", t.dst, q)))
                else:
                    for t2 in rv.by_src.get(q, []):
                        if t2.label == t.label:
                            ts.append((src, None, t.effect + t2.effect, ("sim", t.dst, t2.dst)))
            for t2 in rv.by_src.get(q, []):
                if t2.label is None:
                    ts.append((src, None, zl + t2.effect, ("sim", p, t2.dst)))
    zero = zl + zr
    first = ("emit", 1 if m else 0)
    ts.append((("sim", L.target, rv.target), None, zero, first))
    for j in range(1, m + 1):
        drain = list(zero)
        drain[dl + dr - m + j - 1] = -1
        ts.append((("emit", j), j, tuple(drain), ("emit", j)))
        if j < m:
            ts.append((("emit", j), None, zero, ("emit", j + 1)))
    states = {("sim", p, q) for p in L.states for q in rv.states}
    v = Vass.build(dl + dr, m, ts, ("sim", L.source, rv.source), ("emit", m), Mode.REACH,
                   states=states)
    return _prune(v)


def rename_letters(v: Vass, mapping: dict[int, int], n: int) -> Vass:
    ts = tuple(Transition(t.src, None if t.label is None else mapping[t.label], t.effect, t.dst)
               for t in v.transitions)
    return Vass(v.states, ts, v.source, v.target, v.dim_counters, n, v.mode)


HAT_BLOCKS = {1: 1, 2: -1, 3: 1, 4: -1, 5: 1, 6: -1}


def hat_bounded_blocks(L: Vass) -> Vass:
    """VASS over six unary letters for ``{a1^m a2^(m+1) a3^r a4^s a5^(n+1) a6^n}``
    where some ``w`` in ``L`` has ``m <= mu(w)``, ``r - s = phi(w)`` and ``n <= mu(revbar(w))``."""
    if L.dim_alphabet != 1:
        raise DimensionError("hat_bounded expects a one-dimensional alphabet")
    rel = builtin_relations()
    R = relation_product(relation_product(rel["R1'"], rel["R2"]), rel["R3'"])
    return relation_result(L, R)


def hat_bounded(L: Vass) -> Vass:
    """The bounded replacement of ``L``: words ``a^m abar^(m+1) a^r abar^s a^(n+1) abar^n``."""
    return rename_letters(hat_bounded_blocks(L), HAT_BLOCKS, 1)


def hat_sup(L: Vass) -> Vass:
    """VASS for ``{a_1^{x_1} ... a_n^{x_n} : some w in L has x_i <= mu(lambda_i(w)) for all i}``."""
    n = L.dim_alphabet
    rels = [_prefix_max_relation(i, n) for i in range(1, n + 1)]
    R = rels[0]
    for S in rels[1:]:
        R = relation_product(R, S)
    return relation_result(L, R)


def sup_tilde(L: Vass) -> Vass:
    """VASS for ``{a_1^{x_1} abar_1^{x_1+1} ... a_n^{x_n} abar_n^{x_n+1} : a_1^{x_1}...a_n^{x_n} in L}``.

    ``L`` must only use the positive letters; words of ``L`` that are not of
    the form ``a_1* ... a_n*`` are dropped by the block structure.
    """
    if any(t.label is not None and t.label < 0 for t in L.transitions):
        raise InputError("sup_tilde expects a language over the positive letters only")
    n, d = L.dim_alphabet, L.dim_counters
    zc = (0,) * n
    ts = []

    def bump(i: int, s: int) -> tuple:
        c = [0] * n
        c[i - 1] = s
        return tuple(c)

    for k in range(1, n + 1):
        for q in L.states:
            for mode in ("read", "drain"):
                for t in L.by_src.get(q, []):
                    if t.label is None:
                        ts.append(((q, k, mode), None, t.effect + zc, (t.dst, k, mode)))
                    elif mode == "read" and t.label == k:
                        ts.append(((q, k, mode), k, t.effect + bump(k, 1), (t.dst, k, mode)))
            ts.append(((q, k, "read"), None, (0,) * d + zc, (q, k, "drain")))
            ts.append(((q, k, "drain"), -k, (0,) * d + bump(k, -1), (q, k, "drain")))
            ts.append(((q, k, "drain"), -k, (0,) * d + zc, (q, k + 1, "read")))
    for q in L.states:
        for t in L.by_src.get(q, []):
            if t.label is None:
                ts.append(((q, n + 1, "read"), None, t.effect + zc, (t.dst, n + 1, "read")))
    target = (L.target, n + 1, "read")
    mode = L.mode
    if mode is Mode.COVER:
        # keep the new counters exact: leftover L-counters are drained before accepting
        ts.append((target, None, (0,) * (d + n), "accept"))
        for i in range(d):
            c = [0] * (d + n)
            c[i] = -1
            ts.append(("accept", None, tuple(c), "accept"))
        target, mode = "accept", Mode.REACH
    v = Vass.build(d + n, n, ts, (L.source, 1, "read"), target, mode)
    return _prune(v)


def commutative_closure(a: Nfa) -> Vass:
    """Reachability VASS for the commutative closure of ``L(a)``.

    One counter per letter (``2n`` in total): the first phase runs ``a``
    silently and credits the counter of every letter read, the second phase
    emits letters in any order while debiting them.
    """
    n = a.dim
    d = 2 * n

    def slot(x: int) -> int:
        return x - 1 if x > 0 else n - x - 1

    def credit(x: int, s: int) -> tuple:
        c = [0] * d
        c[slot(x)] = s
        return tuple(c)

    zero = (0,) * d
    ts = [("start", None, zero, ("run", q)) for q in a.initial]
    for s, x, t in a.edges:
        ts.append((("run", s), None, zero if x is None else credit(x, 1), ("run", t)))
    ts += [(("run", f), None, zero, "emit") for f in a.final]
    ts += [("emit", x, credit(x, -1), "emit") for x in letters(n)]
    return relabel_vass(Vass.build(d, n, ts, "start", "emit", Mode.REACH,
                                   states={("run", q) for q in a.states}))


def kl_bar_product(K: Nfa, L: Nfa) -> Nfa:
    """Automaton for ``K . bar(L)`` with ``K`` and ``L`` over the positive letters."""
    for a in (K, L):
        if any(x is not None and x < 0 for _, x, _ in a.edges):
            raise InputError("kl_bar_product expects languages over the positive letters only")
    flipped = Nfa(L.dim, L.states, frozenset((s, None if x is None else -x, t) for s, x, t in L.edges),
                  L.initial, L.final)
    return au.concat(K, flipped)


# -- Karp-Miller ---------------------------------------------------------------


@dataclass
class KMNode:
    state: Hashable
    marking: tuple
    parent: int | None
    via: Transition | None
    children: list = field(default_factory=list)
    covered: bool = False


@dataclass
class KMTree:
    nodes: list

    def markings_at(self, state) -> list[tuple]:
        return [nd.marking for nd in self.nodes if nd.state == state]


def _leq(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def karp_miller(v: Vass, limits: Limits = DEFAULT) -> KMTree:
    """Karp-Miller coverability tree (counters non-negative, omega = ``math.inf``).

    A node whose marking is covered by an already expanded node with the same
    state is kept as a leaf: everything below it is covered by the subtree of
    the larger node, so the set of coverable configurations is unchanged.
    """
    root = KMNode(v.source, (0,) * v.dim_counters, None, None)
    nodes = [root]
    queue = deque([0])
    by_src = v.by_src
    expanded: dict = {}
    while queue:
        i = queue.popleft()
        node = nodes[i]
        if any(_leq(node.marking, m) for m in expanded.get(node.state, ())):
            node.covered = True
            continue
        expanded.setdefault(node.state, []).append(node.marking)
        ancestors = []
        j = node.parent
        while j is not None:
            ancestors.append(j)
            j = nodes[j].parent
        line = [i] + ancestors
        for t in by_src.get(node.state, []):
            new = tuple(m + e for m, e in zip(node.marking, t.effect))
            if any(x < 0 for x in new):
                continue
            changed = True
            while changed:
                changed = False
                for j in line:
                    anc = nodes[j]
                    if anc.state == t.dst and _leq(anc.marking, new) and anc.marking != new:
                        acc = tuple(OMEGA if a < b else b for a, b in zip(anc.marking, new))
                        if acc != new:
                            new = acc
                            changed = True
            if len(nodes) >= limits.max_nodes:
                raise BudgetExceeded("Karp-Miller nodes", limits.max_nodes)
            nodes.append(KMNode(t.dst, new, i, t))
            node.children.append(len(nodes) - 1)
            queue.append(len(nodes) - 1)
    return KMTree(nodes)


def cover_witness(v: Vass, limits: Limits = DEFAULT) -> Word | None:
    """Breadth-first search for a run reaching the target with non-negative counters."""
    by_src = v.by_src
    start = (v.source, (0,) * v.dim_counters)
    word = {start: ()}
    queue = deque([start])
    while queue:
        s, c = queue.popleft()
        if s == v.target:
            return word[(s, c)]
        for t in by_src.get(s, []):
            c2 = _fires(c, t.effect, Mode.COVER)
            if c2 is None:
                continue
            cfg = (t.dst, c2)
            if cfg not in word:
                if len(word) >= limits.max_steps:
                    raise BudgetExceeded("configurations", limits.max_steps)
                word[cfg] = word[(s, c)] + (() if t.label is None else (t.label,))
                queue.append(cfg)
    return None


def cover_nonempty(v: Vass, limits: Limits = DEFAULT) -> tuple[bool, Word | None]:
    """Is the coverability language nonempty?  The witness may be ``None`` if
    its concrete search runs out of budget after the tree says yes."""
    tree = karp_miller(v, limits)
    if not any(nd.state == v.target for nd in tree.nodes):
        return False, None
    try:
        return True, cover_witness(v, limits)
    except BudgetExceeded:
        return True, None


def _with_letter_counters(v: Vass) -> Vass:
    n = v.dim_alphabet
    ts = []
    for t in v.transitions:
        extra = [0] * n
        if t.label is not None:
            if t.label < 0:
                raise InputError("expected a language over the positive letters only")
            extra[t.label - 1] = 1
        ts.append(Transition(t.src, t.label, t.effect + tuple(extra), t.dst))
    return Vass(v.states, tuple(ts), v.source, v.target, v.dim_counters + n, n, v.mode)


def sup_coverability(v: Vass, limits: Limits = DEFAULT) -> bool:
    """Simultaneous unboundedness of the coverability language of ``v``
    (a language over the positive letters ``a_1 .. a_n``)."""
    ext = _with_letter_counters(v)
    tree = karp_miller(ext, limits)
    d = v.dim_counters
    return any(nd.state == v.target and all(x == OMEGA for x in nd.marking[d:])
               for nd in tree.nodes)


def sup_oracle(v: Vass, limits: Limits = DEFAULT) -> bool | None:
    """SUP for either semantics; ``None`` means unknown.

    Coverability semantics is decided exactly.  For reachability semantics
    only the negative answer is certain: the reachability language sits
    inside the coverability language, so if the latter is not simultaneously
    unbounded neither is the former.
    """
    if v.mode is Mode.COVER:
        return sup_coverability(v, limits)
    if v.mode is Mode.REACH:
        return False if not sup_coverability(v.with_mode(Mode.COVER), limits) else None
    raise InputError("SUP is only defined here for reachability and coverability semantics")
