"""Certificate-producing separability deciders and the reductions behind them.

Three targets are supported for regular inputs: ``Z_n`` (walks returning to
the origin), ``D_1`` (one-dimensional walks staying non-negative and
returning to 0) and ``C_n`` (walks staying in the non-negative orthant).  A
regular language is separable from such a target exactly when it is disjoint
from it, and every positive answer carries a finite cover by basic separator
languages that is re-verified before it is returned.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import networkx as nx

from . import automata as au
from . import geometry as geo
from .automata import Nfa, Transducer
from .errors import BudgetExceeded, InputError, VassepError
from .limits import DEFAULT, Limits
from .separators import (Bounded1, CoverBounded, Drift, Mod, NearSubspaceReturn, RevBounded1,
                         build_separator, describe, sep_member, spec_from_json,
                         spec_to_json)
from .vass import (Mode, Vass, bounded_language, cover_nonempty, nfa_from_vass, to_generator,
                   vass_apply_transducer, vass_from_nfa, vass_intersect_nfa)
from .words import (Word, bar, in_Cn, in_Dn, in_Zn, letters, mu, parikh, phi, revbar,
                    word_for_vector)

log = logging.getLogger(__name__)


class InternalError(VassepError):
    """A self-check failed; this indicates a bug, never a property of the input."""


# -- result types --------------------------------------------------------------


@dataclass(frozen=True)
class Target:
    kind: str   # "Z", "D" or "C"
    n: int

    def contains(self, w: Sequence[int]) -> bool:
        return {"Z": in_Zn, "D": in_Dn, "C": in_Cn}[self.kind](w, self.n)

    def to_json(self) -> dict:
        return {"type": self.kind, "n": self.n}

    @staticmethod
    def from_json(d: dict) -> "Target":
        kind = d["type"]
        if kind not in ("Z", "D", "C"):
            raise InputError(f"unknown target {kind!r}")
        return Target(kind, int(d.get("n", 1)))


def Zn(n: int) -> Target:
    return Target("Z", n)


def Cn(n: int) -> Target:
    return Target("C", n)


D1 = Target("D", 1)


@dataclass(frozen=True)
class Certificate:
    cover: tuple
    target: Target
    notes: tuple = ()

    def to_json(self) -> dict:
        return {"kind": "certificate", "target": self.target.to_json(),
                "cover": [spec_to_json(s) for s in self.cover], "notes": list(self.notes)}

    @staticmethod
    def from_json(d: dict) -> "Certificate":
        return Certificate(tuple(spec_from_json(s) for s in d.get("cover", [])),
                           Target.from_json(d["target"]), tuple(d.get("notes", ())))


@dataclass(frozen=True)
class Separable:
    certificate: Certificate | None


@dataclass(frozen=True)
class NotSeparable:
    witness: Word | None
    verified: bool = True


@dataclass(frozen=True)
class Unknown:
    reason: str


DecisionOutcome = Separable | NotSeparable | Unknown


def _dedupe(specs: Iterable) -> tuple:
    out = []
    for s in specs:
        if s not in out:
            out.append(s)
    return tuple(out)


def combine_union(certs: Sequence[Certificate], target: Target | None = None) -> Certificate:
    """Union of covers sharing one target: a cover for the union of the languages."""
    if not certs:
        if target is None:
            raise InputError("combine_union needs a target when no certificates are given")
        return Certificate((), target)
    t = certs[0].target
    if any(c.target != t for c in certs) or (target is not None and target != t):
        raise InputError("certificates have different targets")
    return Certificate(_dedupe(s for c in certs for s in c.cover), t,
                       _dedupe(x for c in certs for x in c.notes))


# -- bounded intersection oracle -------------------------------------------------


def bounded_target_intersection(a: Nfa, target: Target, max_len: int,
                                limits: Limits = DEFAULT) -> Word | None:
    """Shortest word of length ``<= max_len`` in ``L(a)`` and the target, if any.

    Breadth-first search over (state, displacement) pairs; this is the
    brute-force reference used to cross-check the deciders.
    """
    n = target.n
    if a.dim > n:
        raise InputError("automaton dimension exceeds target dimension")
    stay_nonneg = target.kind in ("C", "D")
    end_zero = target.kind in ("Z", "D")
    zero = (0,) * n
    start = [(s, zero) for s in au._sorted(a.closure(a.initial))]
    word = {c: () for c in start}
    queue = deque(start)
    alphabet = letters(a.dim)
    while queue:
        s, pos = queue.popleft()
        w = word[(s, pos)]
        if s in a.final and (not end_zero or pos == zero):
            return w
        if len(w) >= max_len:
            continue
        remaining = max_len - len(w) - 1
        for x in alphabet:
            i = abs(x) - 1
            p2 = list(pos)
            p2[i] += 1 if x > 0 else -1
            if stay_nonneg and p2[i] < 0:
                continue
            if end_zero and sum(abs(c) for c in p2) > remaining:
                continue
            p2 = tuple(p2)
            for t in au._sorted(a.step([s], x)):
                cfg = (t, p2)
                if cfg not in word:
                    if len(word) >= limits.max_states:
                        raise BudgetExceeded("oracle configurations", limits.max_states)
                    word[cfg] = w + (x,)
                    queue.append(cfg)
    return None


# -- certificate verification --------------------------------------------------


def verify_certificate(a: Nfa, cert: Certificate, max_len: int = 10,
                       limits: Limits = DEFAULT) -> tuple[bool, list[str]]:
    """Check that the cover includes ``L(a)`` and that each component avoids
    the target on all words up to ``max_len``."""
    diagnostics = []
    n = cert.target.n
    if a.dim != n:
        return False, [f"automaton dimension {a.dim} differs from target dimension {n}"]
    for s in cert.cover:
        if s.dim != n:
            return False, [f"component {describe(s)} has dimension {s.dim}, expected {n}"]
    union = au.union_all([build_separator(s) for s in cert.cover], n)
    ok, cex = au.includes(union, a, limits)
    if not ok:
        diagnostics.append(f"cover misses the accepted word {list(cex)}")
    else:
        diagnostics.append("cover includes the language")
    for s in cert.cover:
        bad = bounded_target_intersection(build_separator(s), cert.target, max_len, limits)
        if bad is not None:
            ok = False
            diagnostics.append(f"{describe(s)} meets the target on {list(bad)}")
    if ok:
        diagnostics.append(f"every component avoids the target up to length {max_len}")
    return ok, diagnostics


def _covers(a: Nfa, cover: Sequence, n: int, limits: Limits) -> bool:
    return au.includes(au.union_all([build_separator(c) for c in cover], n), a, limits)[0]


def _prune_cover(a: Nfa, cover: Sequence, n: int, limits: Limits,
                 largest_first: bool = True) -> tuple:
    """Greedily drop components while the rest still includes ``L(a)``.

    By default larger automata are tried first since they dominate the cost
    of later checks; otherwise removal goes from the last component backwards.
    """
    cover = list(cover)
    if largest_first:
        order = sorted(cover, key=lambda c: -len(build_separator(c).states))
    else:
        order = list(reversed(cover))
    for s in order:
        rest = [c for c in cover if c != s]
        if _covers(a, rest, n, limits):
            cover = rest
    return tuple(cover)


# -- transduction reductions ---------------------------------------------------


def movetrans_reduce(T: Transducer, L: Nfa, limits: Limits = DEFAULT) -> Nfa:
    """Regular side of the equivalence ``L | T K  iff  T^{-1} L | K``."""
    return au.apply_transducer(au.invert(T), L, limits)


def reduce_vass_query(R: Nfa, v: Vass, limits: Limits = DEFAULT) -> tuple[Nfa, Target]:
    """Rewrite "is regular ``R`` separable from ``L(v)``" as a query against the
    generator of the VASS's semantics."""
    T = to_generator(v)
    kind = {Mode.INT: "Z", Mode.COVER: "C", Mode.REACH: "D"}[v.mode]
    return movetrans_reduce(T, R, limits), Target(kind, v.dim_counters)


# -- dimension reduction -------------------------------------------------------


def _project(w: Sequence[int], m: int) -> tuple:
    return tuple(x for x in w if abs(x) <= m)


def subspace_transducer(cc: geo.CoordinateChange, p: int) -> Transducer:
    """The transduction that applies the letter morphism of ``cc``, keeps only
    walks that stay within ``p`` of the first ``m`` axes and end on them, and
    erases the letters of the remaining axes."""
    n, m = cc.n, cc.m
    band = build_separator(NearSubspaceReturn(m, n, p))
    images = cc.letter_images()
    (start,) = band.initial
    edges = []
    for r in band.states:
        for x in letters(n):
            img = images[x] if x > 0 else bar(images[-x])
            for r2 in band.run(img, [r]):
                edges.append((r, (x,), _project(img, m), r2))
    return Transducer.build(n, m, edges, start, start)


def pull_back_certificate(cover: Sequence, cc: geo.CoordinateChange, p: int) -> tuple:
    """Turn a cover of the reduced language (dimension ``m``) into one for the
    original walks (dimension ``n``)."""
    n, m = cc.n, cc.m
    out = []
    for s in cover:
        if isinstance(s, Mod):
            out.append(Mod(s.k, n))
        elif isinstance(s, Drift):
            padded = tuple(s.u) + (0,) * (n - m)
            out.append(Drift(tuple(int(x) for x in geo.mat_vec(geo.transpose(cc.A), padded)), s.k))
        else:
            raise InternalError(f"unexpected component {describe(s)} in a Z-certificate")
    if m < n:
        out.append(Mod(p + 1, n))
    return _dedupe(out)


# -- regular vs Z_n ------------------------------------------------------------


def _pump_fullspace(A: Nfa, w: Word, k: int, limits: Limits) -> Word:
    """Turn an accepted word with displacement divisible by ``k`` into an
    accepted word with displacement 0 by inserting cycles."""
    n = A.dim
    run = au.find_run(A, w)
    if run is None:
        raise InternalError("counterexample word is not accepted")
    seq = [run[0][0] if run else next(iter(au._sorted(A.closure(A.initial) & A.final)))]
    seq += [e[2] for e in run]
    g = au.state_graph(A)
    scc_of = {}
    for idx, comp in enumerate(nx.strongly_connected_components(g)):
        for s in comp:
            scc_of[s] = idx
    first_index = {}
    for i, s in enumerate(seq):
        first_index.setdefault(s, i)
    # tours: for each state off the run, a closed walk from a run state of its SCC
    tours = {}
    for s in au._sorted(A.states):
        if s in first_index:
            continue
        i = next(i for i, r in enumerate(seq) if scc_of[r] == scc_of[s])
        r = seq[i]
        tours[s] = (i, au._path_word(A, r, s), au._path_word(A, s, r))
    cone = geo.cone_of(A, limits)
    combos = geo.integer_combinations(cone, k)
    cycles = {}
    for c in au.simple_cycles(A, limits):
        cycles.setdefault(c.effect, c)
    base = list(w)
    for s, (i, P, Q) in tours.items():
        base += list(P + Q) * k
    residual = phi(tuple(base), n)  # displacement before the balancing cycles
    if any(x % k for x in residual):
        raise InternalError("residual displacement is not divisible by k")
    mult = [0] * len(cone.generators)
    for i, x in enumerate(residual):
        if x == 0:
            continue
        coeffs = combos[(i, -1 if x > 0 else 1)]
        for j, c in enumerate(coeffs):
            mult[j] += c * (abs(x) // k)
    extra: dict = {}
    for j, g_eff in enumerate(cone.generators):
        if mult[j]:
            cyc = cycles[g_eff]
            extra.setdefault(cyc.anchor, []).append(cyc.word * mult[j])
    inserts: dict = {}
    for s in set(extra) | set(tours):
        stuff = tuple(x for piece in extra.get(s, []) for x in piece)
        if s in first_index:
            inserts.setdefault(first_index[s], []).append(stuff)
        else:
            i, P, Q = tours[s]
            inserts.setdefault(i, []).append((P + Q) * (k - 1) + P + stuff + Q)
    out = []
    for i in range(len(run) + 1):
        for piece in inserts.get(i, []):
            out.extend(piece)
        if i < len(run) and run[i][1] is not None:
            out.append(run[i][1])
    out = tuple(out)
    if not (A.accepts(out) and in_Zn(out, n)):
        raise InternalError("pumped word failed verification")
    return out


def _lift_witness(T: Transducer, Aprime: Nfa, z: Word, limits: Limits) -> Word:
    pre = au.apply_transducer(au.invert(T), au.from_words(T.out_dim, [z]), limits)
    empty, w = au.is_empty(au.intersect(Aprime, pre, limits))
    if empty:
        raise InternalError("reduced witness has no preimage")
    return w


def _decide_z(a: Nfa, limits: Limits, notes: list, depth: int = 0) -> Separable | NotSeparable:
    n = a.dim
    a = au.trim(a)
    if not a.final:
        return Separable(Certificate((), Zn(n)))
    if n == 0:
        return NotSeparable(())
    cover: list = []
    for ci, comp in enumerate(au.linear_decomposition(a)):
        got = _decide_z_component(comp, ci, limits, notes, depth)
        if isinstance(got, NotSeparable):
            return got
        if not _covers(comp, got, n, limits):
            raise InternalError(f"cover of component {ci} misses some word")
        cover.extend(_prune_cover(comp, got, n, limits))
    return Separable(Certificate(_dedupe(cover), Zn(n)))


def _decide_z_component(comp: Nfa, ci: int, limits: Limits, notes: list,
                    depth: int) -> list | NotSeparable:
    n = comp.dim
    pad = "  " * depth
    cone = geo.cone_of(comp, limits)
    d = geo.dichotomy(cone, n)
    if isinstance(d, geo.FullSpace):
        k = geo.modulus_for_fullspace(cone, n)
        notes.append(f"{pad}dim {n} component {ci}: cone is the full space, modulus {k}")
        bad = au.intersect(comp, au.complement(build_separator(Mod(k, n)), limits), limits)
        empty, w = au.is_empty(bad)
        if not empty:
            return NotSeparable(_pump_fullspace(comp, w, k, limits))
        return [Mod(k, n)]
    u = d.u
    k, ell = geo.halfspace_constants(comp, u, limits)
    drift = Drift(tuple(u), k)
    notes.append(f"{pad}dim {n} component {ci}: cone in half-space {list(u)}, k={k}, l={ell}")
    rest = au.trim(au.intersect(comp, au.complement(build_separator(drift), limits), limits))
    if not rest.final:
        return [drift]
    cc = geo.gram_schmidt_extend(normal=u)
    images = cc.letter_images()
    p = geo.shift_bound(cc, ell, [len(v) for v in images.values()])
    T = subspace_transducer(cc, p)
    reduced = au.apply_transducer(T, rest, limits)
    reduced = au.minimize(reduced, limits) if reduced.dim > 0 else au.trim(reduced)
    notes.append(f"{pad}  reduce to dim {n - 1} with band {p}")
    sub = _decide_z(reduced, limits, notes, depth + 1)
    if isinstance(sub, NotSeparable):
        return NotSeparable(_lift_witness(T, rest, sub.witness, limits))
    return list(pull_back_certificate(sub.certificate.cover, cc, p)) + [drift]


def decide_regular_vs_Z(a: Nfa, n: int | None = None, limits: Limits = DEFAULT,
                        prune: bool = True) -> DecisionOutcome:
    """Is ``L(a)`` separable from ``Z_n`` (equivalently, disjoint from it)?"""
    if n is not None and n != a.dim:
        raise InputError(f"automaton has dimension {a.dim}, not {n}")
    notes: list = []
    try:
        res = _decide_z(a, limits, notes)
        if isinstance(res, NotSeparable):
            w = res.witness
            if not (a.accepts(w) and in_Zn(w, a.dim)):
                raise InternalError(f"witness {w} failed verification")
            return res
    except BudgetExceeded as exc:
        return Unknown(str(exc))
    # every linear component was checked against its own cover already; the
    # whole-language pass below only shrinks the cover and double-checks it
    cover = res.certificate.cover
    try:
        if prune:
            cover = _prune_cover(a, cover, a.dim, limits)
        ok, diag = verify_certificate(a, Certificate(cover, Zn(a.dim)), max_len=6, limits=limits)
    except BudgetExceeded:
        cover = res.certificate.cover
        notes.append("whole-language inclusion skipped: budget exhausted")
        diag = [describe(s) for s in cover
                if bounded_target_intersection(build_separator(s), Zn(a.dim), 6, limits) is not None]
        ok = not diag
    if not ok:
        raise InternalError("certificate failed verification: " + "; ".join(diag))
    return Separable(Certificate(cover, Zn(a.dim), tuple(notes)))


# -- regular vs D_1 ------------------------------------------------------------


def _first_passages(vals: Sequence[int], levels: int) -> list[int]:
    """Indices at which ``vals`` first reaches 1, 2, ..., levels."""
    out = []
    nxt = 1
    for i, v in enumerate(vals):
        while nxt <= levels and v >= nxt:
            if v == nxt:
                out.append(i)
            nxt += 1
    return out


def _pump_d1(a: Nfa, w: Word, n: int, modulus: int) -> Word:
    run = au.find_run(a, w)
    if run is None:
        raise InternalError("counterexample word is not accepted")
    # state after consuming t letters (first run index with t letters read)
    seq = [run[0][0] if run else None] + [e[2] for e in run]
    pos_state = {0: seq[0]}
    consumed = 0
    for idx, e in enumerate(run, start=1):
        if e[1] is not None:
            consumed += 1
            pos_state.setdefault(consumed, seq[idx])
    L = len(w)
    heights = [0]
    for x in w:
        heights.append(heights[-1] + x)
    # shortest prefix u reaching mu(w), shortest suffix v reaching -mu(revbar w)
    top = mu(w)
    u_len = heights.index(top)
    back = [0]
    for x in reversed(w):
        back.append(back[-1] - x)          # -phi(suffix of length j)
    bottom = mu(revbar(w))
    v_len = back.index(bottom)
    if u_len + v_len > L:
        raise InternalError("prefix and suffix overlap")
    # cycle in u: two first-passage points at levels within n of each other
    up = _first_passages(heights[: u_len + 1], n + 1)
    seen: dict = {}
    cut_u = None
    for i in up:
        s = pos_state[i]
        if s in seen:
            cut_u = (seen[s], i)
            break
        seen[s] = i
    down = _first_passages(back[: v_len + 1], n + 1)
    seen = {}
    cut_v = None
    for j in down:
        s = pos_state[L - j]
        if s in seen:
            cut_v = (L - j, L - seen[s])
            break
        seen[s] = j
    if cut_u is None or cut_v is None:
        raise InternalError("pigeonhole failed to find cycles")
    (i1, i2), (j1, j2) = cut_u, cut_v
    u1, u2, mid, v2, v3 = w[:i1], w[i1:i2], w[i2:j1], w[j1:j2], w[j2:]
    du, dv = sum(u2), -sum(v2)            # both in [1, n]
    total = sum(w)
    p = -total // du if total < 0 else 0
    q = total // dv if total > 0 else 0
    if total + p * du - q * dv != 0:
        raise InternalError("cannot balance the displacement")
    for r in range(0, 4 * L + 4):
        cand = u1 + u2 * (p + r * dv) + mid + v2 * (q + r * du) + v3
        if in_Dn(cand, 1):
            if not a.accepts(cand):
                raise InternalError("pumped word left the language")
            return cand
    raise InternalError("pumping did not reach D_1")


def decide_regular_vs_D1(a: Nfa, limits: Limits = DEFAULT, use_lcm: bool = False,
                         prune: bool = True) -> DecisionOutcome:
    """Is ``L(a)`` (one-dimensional) separable from ``D_1``?"""
    if a.dim != 1:
        raise InputError("decide_regular_vs_D1 expects a one-dimensional automaton")
    a = au.trim(a)
    if not a.final:
        return Separable(Certificate((), D1, ("empty language",)))
    try:
        small = au.minimize(a, limits)
        if len(small.states) < len(a.states):
            a = small
    except BudgetExceeded:
        pass
    n = len(a.states)
    if n > limits.factorial_cap:
        return Unknown(f"{n} states exceeds the factorial cap {limits.factorial_cap}")
    modulus = math.lcm(*range(1, n + 1)) if use_lcm else math.factorial(n)
    cover = (Mod(modulus, 1), Bounded1(n), RevBounded1(n))
    try:
        union = au.union_all([build_separator(s) for s in cover], 1)
        ok, w = au.includes(union, a, limits)
        if ok:
            if prune:
                cover = _prune_cover(a, cover, 1, limits, largest_first=False)
            cert = Certificate(cover, D1, (f"{n} states, modulus {modulus}",))
            good, diag = verify_certificate(a, cert, max_len=8, limits=limits)
            if not good:
                raise InternalError("certificate failed verification: " + "; ".join(diag))
            return Separable(cert)
    except BudgetExceeded as exc:
        return Unknown(str(exc))
    if in_Dn(w, 1):
        return NotSeparable(w)
    return NotSeparable(_pump_d1(a, w, n, modulus))


# -- sigma triples -------------------------------------------------------------


@dataclass(frozen=True)
class SigmaTriple:
    mu: int
    phi: int
    mu_revbar: int

    def as_tuple(self) -> tuple:
        return (self.mu, self.phi, self.mu_revbar)


def sigma(w: Sequence[int]) -> SigmaTriple:
    return SigmaTriple(mu(w), phi(w, 1)[0], mu(revbar(w)))


def sigma_separable(S: Iterable, k: int) -> bool:
    """Every triple has a small first or third entry, or a middle entry not divisible by ``k``."""
    for t in S:
        x1, x2, x3 = t.as_tuple() if isinstance(t, SigmaTriple) else t
        if not (x1 <= k or x3 <= k or x2 % k != 0):
            return False
    return True


# -- regular vs C_n ------------------------------------------------------------


def counter_product(a: Nfa, n: int) -> Vass:
    """Coverability VASS that runs ``a`` while tracking the walk in ``n`` counters."""
    base = vass_from_nfa(a)
    ts = [(t.src, t.label, (0,) * n if t.label is None else phi((t.label,), n), t.dst)
          for t in base.transitions]
    return Vass.build(n, a.dim, ts, base.source, base.target, Mode.COVER, states=base.states)


def decide_regular_vs_Cn(a: Nfa, n: int | None = None, limits: Limits = DEFAULT,
                         max_k: int | None = None, prune: bool = True) -> DecisionOutcome:
    """Is ``L(a)`` separable from ``C_n``?"""
    n = a.dim if n is None else n
    if a.dim > n:
        raise InputError("automaton dimension exceeds n")
    max_k = limits.max_k if max_k is None else max_k
    a = au.trim(a)
    try:
        nonempty, w = cover_nonempty(counter_product(a, n), limits)
    except BudgetExceeded as exc:
        return Unknown(str(exc))
    if nonempty:
        if w is None:
            return Unknown("the orthant is reachable but the witness search ran out of budget")
        if not (a.accepts(w) and in_Cn(w, n)):
            raise InternalError(f"witness {w} failed verification")
        return NotSeparable(w)
    if not a.final:
        return Separable(Certificate((), Cn(n), ("empty language",)))
    try:
        for k in range(max_k + 1):
            cover = tuple(CoverBounded(i, k, n) for i in range(1, n + 1))
            union = au.union_all([build_separator(s) for s in cover], n)
            if au.includes(union, a, limits)[0]:
                if prune:
                    cover = _prune_cover(a, cover, n, limits)
                cert = Certificate(cover, Cn(n), (f"k = {k}",))
                good, diag = verify_certificate(a, cert, max_len=8, limits=limits)
                if not good:
                    raise InternalError("certificate failed verification: " + "; ".join(diag))
                return Separable(cert)
    except BudgetExceeded as exc:
        return Unknown(str(exc))
    return Unknown(f"no cover found with k <= {max_k}")


# -- witnesses for the no-fixed-direction argument -----------------------------


def _same_ray(v: Sequence[int], u: Sequence[int]) -> bool:
    """Is ``v`` a positive rational multiple of ``u``?"""
    if not any(v):
        return False
    for i in range(len(u)):
        for j in range(len(u)):
            if v[i] * u[j] != v[j] * u[i]:
                return False
    return geo.dot(v, u) > 0


def witness_nofixed(u: Sequence[int], ell: int,
                    pairs: Sequence[tuple[Sequence[int], int]]) -> tuple[Word, int]:
    """A word drifting in direction ``u`` that escapes ``Mod(ell, n)`` and every
    ``Drift(u_i, ell_i)`` whose direction differs from ``u``.

    Returns the word and the smallest ``k0`` for which it lies in ``Drift(u, k)``
    for all ``k >= k0``.
    """
    u = tuple(int(x) for x in u)
    n = len(u)
    if not any(u):
        raise InputError("direction must be nonzero")
    for ui, _ in pairs:
        if len(ui) != n:
            raise InputError("direction dimensions differ")
        if _same_ray(ui, u):
            raise InputError(f"direction {tuple(ui)} is a positive multiple of {u}")
    cc = geo.gram_schmidt_extend(u_basis=[u], n=n)
    others = list(cc.basis[1:])
    dirs = [u]
    for b in others:
        dirs += [tuple(b), tuple(-x for x in b)]
    vs = [word_for_vector(d) for d in dirs]
    s = max((li for _, li in pairs), default=0) + 1
    w = tuple(word_for_vector(u)) * ell
    for v in vs:
        w += v * (ell * s)
    k0 = max(2 * len(v) for v in vs)
    if not sep_member(Drift(u, max(k0, 1)), w):
        raise InternalError("witness does not drift in direction u")
    if ell >= 1 and sep_member(Mod(ell, n), w):
        raise InternalError("witness lies in the modulus separator")
    for ui, li in pairs:
        if any(ui) and li >= 1 and sep_member(Drift(tuple(ui), li), w):
            raise InternalError(f"witness lies in Drift({tuple(ui)}, {li})")
    return w, k0


# -- modular envelopes ---------------------------------------------------------


@dataclass(frozen=True)
class Holds:
    checked: int


@dataclass(frozen=True)
class CounterexampleCandidate:
    word: Word
    reason: str


def _is_loop(a: Nfa, w: Sequence[int]) -> bool:
    return any(s in a.run(w, [s]) for s in a.states)


def _has_infix(w: Sequence[int], v: Sequence[int]) -> bool:
    w, v = tuple(w), tuple(v)
    return any(w[i:i + len(v)] == v for i in range(len(w) - len(v) + 1))


def modular_envelope_check(a: Nfa, sampler: Callable[[int], Iterable[Word]], k: int,
                           loops: Sequence[Word], sample_len: int = 4, search_len: int = 10,
                           budget: int = 200_000) -> Holds | CounterexampleCandidate | Unknown:
    """Bounded test that ``a`` is a modular envelope of the sampled language.

    (i) every sampled word is accepted by ``a``; (ii) for each sampled ``w``
    some word of the language up to ``search_len`` contains every loop word as
    an infix and has the same letter counts as ``w`` modulo ``k``.
    """
    loops = [tuple(x) for x in loops]
    for lw in loops:
        if not _is_loop(a, lw):
            raise InputError(f"{list(lw)} does not label a cycle of the envelope")
    sample = sorted(set(map(tuple, sampler(sample_len))), key=lambda w: (len(w), w))
    ok, cex = au.includes(a, au.from_words(a.dim, sample))
    if not ok:
        return CounterexampleCandidate(cex, "sampled word rejected by the envelope")
    pool = []
    for i, w in enumerate(sampler(search_len)):
        if i >= budget:
            return Unknown("search pool exceeded the budget")
        w = tuple(w)
        if all(_has_infix(w, lw) for lw in loops):
            pool.append(w)

    def residues(w):
        return tuple(sorted((x, c % k) for x, c in parikh(w).items() if c % k))

    have = {residues(w) for w in pool}
    for w in sample:
        if residues(w) not in have:
            return CounterexampleCandidate(w, f"no word up to length {search_len} with all loops "
                                              f"and matching letter counts mod {k}")
    return Holds(len(sample))


# -- Algorithm 1 skeleton ------------------------------------------------------


Provider = Callable[[Vass], "list[tuple[Vass, Nfa]] | None"]
CommutativeOracle = Callable[[Vass, Nfa], "bool | None"]


def regular_provider(v: Vass) -> list[tuple[Vass, Nfa]] | None:
    """Decomposition for counter-free inputs: each linear component is its own envelope."""
    if v.dim_counters:
        return None
    return [(vass_from_nfa(c), c) for c in au.linear_decomposition(nfa_from_vass(v))]


def regular_commutative_oracle(v: Vass, envelope: Nfa) -> bool | None:
    """Exact for counter-free components, unknown otherwise.

    For a regular component whose envelope has a full cone, separability of
    the commutative closure from ``Z_n`` coincides with ``L <= M_k`` for some
    ``k``, which for a regular language is the same as disjointness from Z_n.
    """
    if v.dim_counters:
        return None
    res = decide_regular_vs_Z(nfa_from_vass(v))
    if isinstance(res, Unknown):
        return None
    return isinstance(res, Separable)


def _vass_empty(v: Vass, limits: Limits) -> bool | None:
    if v.dim_counters == 0:
        return au.is_empty(nfa_from_vass(v))[0]
    if v.mode is Mode.COVER:
        return not cover_nonempty(v, limits)[0]
    try:
        if bounded_language(v, max_steps=12, limits=limits):
            return False
    except BudgetExceeded:
        pass
    return None


def algorithm1(provider: Provider, oracle: CommutativeOracle, L: Vass,
               limits: Limits = DEFAULT) -> DecisionOutcome:
    """Decide separability of ``L`` from ``Z_n`` by the cone dichotomy, given a
    decomposition provider and an oracle for the full-cone case."""
    n = L.dim_alphabet
    try:
        if n == 0:
            empty = _vass_empty(L, limits)
            if empty is None:
                return Unknown("emptiness of a dimension-0 VASS language is unknown")
            return Separable(None) if empty else NotSeparable(None, verified=False)
        parts = provider(L)
        if parts is None:
            return Unknown("the provider cannot decompose this language")
        for Li, env in parts:
            cone = geo.cone_of(env, limits)
            d = geo.dichotomy(cone, n)
            if isinstance(d, geo.FullSpace):
                ans = oracle(Li, env)
                if ans is None:
                    return Unknown("the commutative oracle has no answer for a component")
                if not ans:
                    return NotSeparable(None, verified=False)
                continue
            k, ell = geo.halfspace_constants(env, d.u, limits)
            rest = vass_intersect_nfa(Li, au.complement(build_separator(Drift(tuple(d.u), k)), limits))
            cc = geo.gram_schmidt_extend(normal=d.u)
            p = geo.shift_bound(cc, ell, [len(v) for v in cc.letter_images().values()])
            reduced = vass_apply_transducer(subspace_transducer(cc, p), rest)
            sub = algorithm1(provider, oracle, reduced, limits)
            if not isinstance(sub, Separable):
                return sub
        return Separable(None)
    except BudgetExceeded as exc:
        return Unknown(str(exc))
