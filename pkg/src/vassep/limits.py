"""Resource budgets.

Every potentially exponential routine takes a ``Limits`` value. The defaults
are sized for desk-scale inputs; the CLI can override them through flags or
the ``VAS_SEP_BUDGET`` environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "VAS_SEP_BUDGET"


@dataclass(frozen=True)
class Limits:
    max_states: int = 200_000      # subset construction / product exploration
    max_steps: int = 2_000_000     # configuration search in VASS enumeration
    max_cycles: int = 50_000       # simple-cycle enumeration
    max_nodes: int = 100_000       # Karp-Miller tree nodes
    max_k: int = 64                # search cap for the C_n decider
    factorial_cap: int = 8         # largest n for which n! is used as a modulus

    def with_(self, **changes) -> "Limits":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT = Limits()


def from_env(base: Limits = DEFAULT, environ=None) -> Limits:
    """Apply overrides from ``VAS_SEP_BUDGET``.

    The variable holds either a bare integer (taken as ``max_states``) or a JSON
    object whose keys are ``Limits`` field names.
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_VAR)
    if not raw:
        return base
    raw = raw.strip()
    if raw.lstrip("-").isdigit():
        return replace(base, max_states=int(raw))
    data = json.loads(raw)
    known = {f.name for f in fields(Limits)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown budget keys: {sorted(unknown)}")
    return replace(base, **{k: int(v) for k, v in data.items()})
