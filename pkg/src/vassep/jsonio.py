"""JSON documents for automata, transducers, VASS, separators and certificates.

Every document is an object with a ``"kind"`` field.  Emitted documents use
integer states numbered breadth-first and sorted edge lists, so identical
inputs always serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import automata as au
from .automata import Nfa, Transducer
from .decide import Certificate, Target
from .errors import InputError
from .separators import spec_from_json, spec_to_json
from .vass import Mode, Vass, relabel_vass


def _state(x):
    """JSON states may be numbers, strings or (nested) lists; lists become tuples."""
    if isinstance(x, list):
        return tuple(_state(y) for y in x)
    if isinstance(x, (int, str)):
        return x
    raise InputError(f"unsupported state value {x!r}")


def _need(d: dict, *keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise InputError(f"{d.get('kind', 'document')} is missing fields {missing}")


def _letters(xs, what: str) -> tuple:
    if not isinstance(xs, list) or not all(isinstance(x, int) and x != 0 for x in xs):
        raise InputError(f"{what} must be a list of nonzero integers")
    return tuple(xs)


# -- NFA -----------------------------------------------------------------------


def nfa_to_json(a: Nfa) -> dict:
    a = au.relabel(a)
    edges = sorted(a.edges, key=lambda e: (e[0], 0 if e[1] is None else 1, e[1] or 0, e[2]))
    return {"kind": "nfa", "n": a.dim, "states": sorted(a.states),
            "initial": sorted(a.initial), "final": sorted(a.final),
            "edges": [{"from": s, "label": x, "to": t} for s, x, t in edges]}


def nfa_from_json(d: dict) -> Nfa:
    _need(d, "n", "edges", "initial", "final")
    try:
        edges = [(_state(e["from"]), e.get("label"), _state(e["to"])) for e in d["edges"]]
        return Nfa.build(int(d["n"]), edges, [_state(s) for s in d["initial"]],
                         [_state(s) for s in d["final"]],
                         states=[_state(s) for s in d.get("states", [])])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed nfa: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- transducers ---------------------------------------------------------------


def _renumber(states, first) -> dict:
    order = {first: 0}
    for s in au._sorted(states):
        order.setdefault(s, len(order))
    return order


def transducer_to_json(T: Transducer) -> dict:
    order = _renumber(T.states, T.initial)
    edges = sorted((order[s], list(u), list(v), order[t]) for s, u, v, t in T.edges)
    return {"kind": "transducer", "in_dim": T.in_dim, "out_dim": T.out_dim,
            "states": sorted(order.values()), "initial": order[T.initial],
            "final": order[T.final],
            "edges": [{"from": s, "input": u, "output": v, "to": t} for s, u, v, t in edges]}


def transducer_from_json(d: dict) -> Transducer:
    _need(d, "in_dim", "out_dim", "edges", "initial", "final")
    try:
        edges = [(_state(e["from"]), _letters(e.get("input", []), "input"),
                  _letters(e.get("output", []), "output"), _state(e["to"])) for e in d["edges"]]
        return Transducer.build(int(d["in_dim"]), int(d["out_dim"]), edges,
                                _state(d["initial"]), _state(d["final"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed transducer: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- VASS ----------------------------------------------------------------------


def vass_to_json(v: Vass) -> dict:
    v = relabel_vass(v)
    ts = sorted(v.transitions, key=lambda t: (t.src, t.label is not None, t.label or 0,
                                              t.effect, t.dst))
    return {"kind": "vass", "dim_counters": v.dim_counters, "dim_alphabet": v.dim_alphabet,
            "mode": v.mode.value,
            "states": sorted(v.states), "source": v.source, "target": v.target,
            "transitions": [{"from": t.src, "label": t.label, "effect": list(t.effect),
                             "to": t.dst} for t in ts]}


def vass_from_json(d: dict) -> Vass:
    d = dict(d)
    d.setdefault("dim_counters", d.get("d"))
    d.setdefault("dim_alphabet", d.get("n"))
    if d["dim_counters"] is None or d["dim_alphabet"] is None:
        raise InputError("vass is missing dim_counters or dim_alphabet")
    _need(d, "transitions", "source", "target")
    try:
        ts = [(_state(t["from"]), t.get("label"), tuple(int(x) for x in t["effect"]),
               _state(t["to"])) for t in d["transitions"]]
        return Vass.build(int(d["dim_counters"]), int(d["dim_alphabet"]), ts, _state(d["source"]),
                          _state(d["target"]), Mode(d.get("mode", "reach")),
                          states=[_state(s) for s in d.get("states", [])])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed vass: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- separators and certificates -------------------------------------------------


def certificate_to_json(c: Certificate) -> dict:
    return c.to_json()


def certificate_from_json(d: dict) -> Certificate:
    _need(d, "target")
    try:
        return Certificate.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None


def separator_from_json(d: dict):
    d = {k: v for k, v in d.items() if k != "kind"}
    try:
        return spec_from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed separator spec: {exc}") from None


def separator_to_json(s) -> dict:
    return {"kind": "separator_spec", **spec_to_json(s)}


_READERS = {"nfa": nfa_from_json, "transducer": transducer_from_json, "vass": vass_from_json,
            "certificate": certificate_from_json, "separator_spec": separator_from_json}


def from_document(d: Any, expect: str | tuple | None = None):
    """Parse any supported document, optionally insisting on its kind."""
    if not isinstance(d, dict):
        raise InputError("document must be a JSON object")
    kind = d.get("kind")
    if kind is None and "type" in d:
        kind = "separator_spec"
    if kind not in _READERS:
        raise InputError(f"unknown document kind {kind!r}")
    if expect is not None and kind not in ((expect,) if isinstance(expect, str) else expect):
        raise InputError(f"expected a {expect} document, got {kind}")
    return _READERS[kind](d)


def to_document(obj) -> dict:
    if isinstance(obj, Nfa):
        return nfa_to_json(obj)
    if isinstance(obj, Transducer):
        return transducer_to_json(obj)
    if isinstance(obj, Vass):
        return vass_to_json(obj)
    if isinstance(obj, Certificate):
        return certificate_to_json(obj)
    return separator_to_json(obj)


def load_text(text_or_path: str) -> Any:
    """Inline JSON text, or the path of a file holding it."""
    s = text_or_path.strip()
    try:
        if s.startswith("{") or s.startswith("["):
            return json.loads(s)
        return json.loads(Path(text_or_path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {text_or_path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


__all__ = ["nfa_to_json", "nfa_from_json", "transducer_to_json", "transducer_from_json",
           "vass_to_json", "vass_from_json", "certificate_to_json", "certificate_from_json",
           "separator_from_json", "separator_to_json", "from_document", "to_document",
           "load_text", "dumps", "Target"]
