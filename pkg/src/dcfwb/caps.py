"""Global desk-scale guardrails.

Every module reads the module-level ``CAPS`` instance. The single environment
variable ``DCFWB_CAPS`` may hold a JSON object overriding individual fields,
e.g. ``DCFWB_CAPS='{"max_deriv": 64}'``.
"""

from __future__ import annotations

import dataclasses
import json
import os

from .errors import DcfwbError


@dataclasses.dataclass
class Caps:
    # differential polynomial ring
    max_deriv: int = 32
    max_degree: int = 64
    max_monomials: int = 10_000
    # ritt closure / tower machinery
    closure_budget: int = 2_000
    restart_budget: int = 64
    # truth-table functional search bounds
    max_prefix: int = 64
    max_input: int = 32
    max_time: int = 256
    # priority construction
    max_stage: int = 200
    stable_window: int = 10
    enum_budget: int = 20_000

    def replace(self, **kw) -> "Caps":
        return dataclasses.replace(self, **kw)


def _from_env() -> Caps:
    raw = os.environ.get("DCFWB_CAPS")
    caps = Caps()
    if not raw:
        return caps
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DcfwbError(f"DCFWB_CAPS is not valid JSON: {exc}") from exc
    unknown = set(data) - {f.name for f in dataclasses.fields(Caps)}
    if unknown:
        raise DcfwbError(f"DCFWB_CAPS has unknown fields: {sorted(unknown)}")
    return caps.replace(**data)


CAPS: Caps = _from_env()
