"""Basic separator languages: direct predicates and automaton constructions.

Every family is described by a small frozen dataclass (a *spec*).  The
predicate ``sep_member`` evaluates the defining condition on a word without
automata, and ``build_separator`` produces an automaton for the same
language.  Tests cross-check the two exhaustively on short words.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence, Union

from . import automata as au
from .automata import Nfa
from .errors import DimensionError, InputError
from .geometry import dist2_to_hyperplane
from .words import (in_Cn, in_Dn, lambda_, min_infix, mu, phi, prefix_values, revbar,
                    scalar_walk, word_dim)


@dataclass(frozen=True)
class Mod:
    """Walks whose displacement is not zero modulo ``k`` in some coordinate."""
    k: int
    n: int

    @property
    def dim(self):
        return self.n


@dataclass(frozen=True)
class Bounded1:
    """One-dimensional walks outside D_1 that stay at most ``k`` high before first dropping below 0."""
    k: int
    dim = 1


@dataclass(frozen=True)
class RevBounded1:
    """Reverse-bar image of ``Bounded1(k)``."""
    k: int
    dim = 1


@dataclass(frozen=True)
class BoundedPrime:
    """One-dimensional walks that drop below 0 after staying at most ``k`` high."""
    k: int
    dim = 1


@dataclass(frozen=True)
class CoverBounded:
    """Walks whose projection on axis ``i`` lies in ``BoundedPrime(k)``."""
    i: int
    k: int
    n: int

    @property
    def dim(self):
        return self.n


@dataclass(frozen=True)
class Infix1:
    """One-dimensional walks in which no infix goes down by more than ``k``."""
    k: int
    dim = 1


@dataclass(frozen=True)
class Drift1:
    """``Infix1(k)`` walks with nonzero displacement."""
    k: int
    dim = 1


@dataclass(frozen=True)
class Drift:
    """Walks that drift in direction ``u``: nonzero final u-height, no infix below ``-k``."""
    u: tuple
    k: int

    @property
    def dim(self):
        return len(self.u)

    @property
    def n(self):
        return len(self.u)


@dataclass(frozen=True)
class NearSubspaceReturn:
    """Walks that stay within distance ``p`` of the first ``m`` axes and end on them."""
    m: int
    n: int
    p: int

    @property
    def dim(self):
        return self.n


SeparatorSpec = Union[Mod, Bounded1, RevBounded1, BoundedPrime, CoverBounded, Infix1,
                      Drift1, Drift, NearSubspaceReturn]

_TYPE_NAMES = {
    Mod: "mod", Bounded1: "bounded1", RevBounded1: "rev_bounded1", BoundedPrime: "bounded_prime",
    CoverBounded: "cover_bounded", Infix1: "infix1", Drift1: "drift1", Drift: "drift",
    NearSubspaceReturn: "near_subspace_return",
}
_BY_NAME = {v: k for k, v in _TYPE_NAMES.items()}


def validate(s: SeparatorSpec) -> None:
    def need(cond, msg):
        if not cond:
            raise InputError(f"invalid {type(s).__name__}: {msg}")

    if isinstance(s, Mod):
        need(s.k >= 1 and s.n >= 0, "need k >= 1")
    elif isinstance(s, (Bounded1, RevBounded1, BoundedPrime, Infix1)):
        need(s.k >= 0, "need k >= 0")
    elif isinstance(s, Drift1):
        need(s.k >= 1, "need k >= 1")
    elif isinstance(s, CoverBounded):
        need(1 <= s.i <= s.n and s.k >= 0, "need 1 <= i <= n and k >= 0")
    elif isinstance(s, Drift):
        need(any(s.u) and s.k >= 1, "need u != 0 and k >= 1")
    elif isinstance(s, NearSubspaceReturn):
        need(0 <= s.m <= s.n and s.p >= 0, "need 0 <= m <= n and p >= 0")
    else:
        raise InputError(f"unknown separator spec {s!r}")


def spec_to_json(s: SeparatorSpec) -> dict:
    d = {"type": _TYPE_NAMES[type(s)]}
    if isinstance(s, Drift):
        d.update(u=list(s.u), k=s.k)
    else:
        for name in s.__dataclass_fields__:
            d[name] = getattr(s, name)
    return d


def spec_from_json(d: dict) -> SeparatorSpec:
    try:
        cls = _BY_NAME[d["type"]]
    except KeyError:
        raise InputError(f"unknown separator type {d.get('type')!r}") from None
    args = {k: v for k, v in d.items() if k != "type"}
    if cls is Drift:
        args.pop("n", None)
        args["u"] = tuple(int(x) for x in args["u"])
    try:
        s = cls(**args)
    except TypeError as exc:
        raise InputError(f"bad fields for {d['type']}: {exc}") from None
    validate(s)
    return s


def describe(s: SeparatorSpec) -> str:
    return f"{type(s).__name__}({', '.join(f'{k}={v}' for k, v in spec_to_json(s).items() if k != 'type')})"


# -- predicates ----------------------------------------------------------------


def sep_member(s: SeparatorSpec, w: Sequence[int]) -> bool:
    w = tuple(w)
    if word_dim(w) > s.dim:
        raise DimensionError(f"word uses letters beyond dimension {s.dim}")
    if isinstance(s, Mod):
        return any(x % s.k for x in phi(w, s.n))
    if isinstance(s, Bounded1):
        return not in_Dn(w, 1) and mu(w) <= s.k
    if isinstance(s, RevBounded1):
        return not in_Dn(w, 1) and mu(revbar(w)) <= s.k
    if isinstance(s, BoundedPrime):
        return not in_Cn(w, 1) and mu(w) <= s.k
    if isinstance(s, CoverBounded):
        return sep_member(BoundedPrime(s.k), lambda_(s.i, w, s.n))
    if isinstance(s, Infix1):
        return min_infix(prefix_values(w)) >= -s.k
    if isinstance(s, Drift1):
        return phi(w, 1)[0] != 0 and min_infix(prefix_values(w)) >= -s.k
    if isinstance(s, Drift):
        vals = scalar_walk(w, s.u)
        return vals[-1] != 0 and min_infix(vals) >= -s.k
    if isinstance(s, NearSubspaceReturn):
        pos = [0] * s.n
        for x in w:
            pos[abs(x) - 1] += 1 if x > 0 else -1
            if sum(c * c for c in pos[s.m:]) > s.p * s.p:
                return False
        return not any(pos[s.m:])
    raise InputError(f"unknown separator spec {s!r}")


@dataclass(frozen=True)
class SubspaceBand:
    """Walks whose every prefix stays within distance ``ell`` of a subspace.

    The subspace is either the hyperplane orthogonal to ``normal`` or the span
    of the first ``m`` coordinate axes.
    """
    ell: int
    normal: tuple | None = None
    m: int | None = None


def in_band(b: SubspaceBand, w: Sequence[int], n: int | None = None) -> bool:
    if b.normal is not None:
        if not any(b.normal):
            raise DimensionError("normal vector must be nonzero")
        n = len(b.normal)
    elif n is None:
        n = word_dim(w)
    pos = [0] * n
    bound = b.ell * b.ell
    for x in w:
        pos[abs(x) - 1] += 1 if x > 0 else -1
        if b.normal is not None:
            if dist2_to_hyperplane(pos, b.normal) > bound:
                return False
        elif sum(c * c for c in pos[b.m:]) > bound:
            return False
    return True


# -- automata ------------------------------------------------------------------


def _bounded_automaton(k: int, accept_positive: bool) -> Nfa:
    sink = "sink"
    edges = [(sink, 1, sink), (sink, -1, sink)]
    for j in range(k + 1):
        if j < k:
            edges.append((j, 1, j + 1))
        edges.append((j, -1, j - 1 if j > 0 else sink))
    final = {sink} | (set(range(1, k + 1)) if accept_positive else set())
    return au.relabel(Nfa.build(1, edges, [0], final, states=range(k + 1)))


def infix_automaton(k: int) -> Nfa:
    """States ``0..k`` record how far the walk sits below its running maximum."""
    edges = [(0, 1, 0)]
    for j in range(k + 1):
        if j > 0:
            edges.append((j, 1, j - 1))
        if j < k:
            edges.append((j, -1, j + 1))
    return Nfa.build(1, edges, [0], range(k + 1), states=range(k + 1))


def direction_automaton(k: int) -> Nfa:
    """Heights ``-k..k`` plus an absorbing ``top`` state; accepts unless the height ends at 0."""
    top = "top"
    edges = [(top, 1, top), (top, -1, top)]
    for j in range(-k, k + 1):
        edges.append((j, 1, j + 1 if j < k else top))
        if j > -k:
            edges.append((j, -1, j - 1))
    final = {top} | {j for j in range(-k, k + 1) if j != 0}
    return Nfa.build(1, edges, [0], final, states=range(-k, k + 1))


def drift_morphism(u: Sequence[int]) -> dict:
    """Letter ``i`` goes to ``a1^{u_i}`` (barred when ``u_i`` is negative)."""
    return {i + 1: (1,) * c if c >= 0 else (-1,) * (-c) for i, c in enumerate(u)}


def _mod_automaton(k: int, n: int) -> Nfa:
    states = list(product(range(k), repeat=n))
    edges = []
    for s in states:
        for x in range(1, n + 1):
            for sign in (1, -1):
                t = list(s)
                t[x - 1] = (t[x - 1] + sign) % k
                edges.append((s, sign * x, tuple(t)))
    zero = (0,) * n
    return au.relabel(Nfa.build(n, edges, [zero], [s for s in states if s != zero], states=states))


def _near_return_automaton(m: int, n: int, p: int) -> Nfa:
    d = n - m
    radius2 = p * p
    states = [v for v in product(range(-p, p + 1), repeat=d) if sum(c * c for c in v) <= radius2]
    live = set(states)
    edges = []
    for s in states:
        for x in range(1, n + 1):
            for sign in (1, -1):
                if x <= m:
                    edges.append((s, sign * x, s))
                    continue
                t = list(s)
                t[x - m - 1] += sign
                t = tuple(t)
                if t in live:
                    edges.append((s, sign * x, t))
    zero = (0,) * d
    return au.relabel(Nfa.build(n, edges, [zero], [zero], states=states))


@lru_cache(maxsize=256)
def build_separator(s: SeparatorSpec) -> Nfa:
    validate(s)
    if isinstance(s, Mod):
        return _mod_automaton(s.k, s.n)
    if isinstance(s, Bounded1):
        return _bounded_automaton(s.k, accept_positive=True)
    if isinstance(s, BoundedPrime):
        return _bounded_automaton(s.k, accept_positive=False)
    if isinstance(s, RevBounded1):
        return au.reverse_bar(build_separator(Bounded1(s.k)))
    if isinstance(s, CoverBounded):
        return au.morphism_preimage(au.projection_morphism(s.i, s.n),
                                    build_separator(BoundedPrime(s.k)), s.n)
    if isinstance(s, Infix1):
        return infix_automaton(s.k)
    if isinstance(s, Drift1):
        return au.intersect(direction_automaton(s.k), infix_automaton(s.k))
    if isinstance(s, Drift):
        return au.morphism_preimage(drift_morphism(s.u), build_separator(Drift1(s.k)), len(s.u))
    if isinstance(s, NearSubspaceReturn):
        return _near_return_automaton(s.m, s.n, s.p)
    raise InputError(f"unknown separator spec {s!r}")


def drift_projection(u: Sequence[int], w: Sequence[int]) -> tuple:
    """The one-dimensional word ``h_u(w)``."""
    h = drift_morphism(u)
    out: list[int] = []
    for x in w:
        out.extend(h[x] if x > 0 else tuple(-y for y in h[-x]))
    return tuple(out)
