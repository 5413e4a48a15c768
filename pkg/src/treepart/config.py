"""Search budgets and run configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "TREEPART_BUDGETS"

_ENV_KEYS = {
    "tw": "treewidth_n",
    "pat": "pattern_n",
    "q": "min_q_n",
    "tpw": "min_tpw_n",
    "rainbow": "rainbow_n",
    "ep": "ep_nodes",
}


@dataclass(frozen=True)
class Budgets:
    treewidth_n: int = 20
    pattern_n: int = 12
    min_q_n: int = 16
    min_tpw_n: int = 9
    rainbow_n: int = 8
    ep_nodes: int = 1_000_000

    @classmethod
    def from_env(cls, environ=None) -> "Budgets":
        text = (environ if environ is not None else os.environ).get(ENV_VAR, "")
        return cls().with_overrides(text)

    def with_overrides(self, text: str) -> "Budgets":
        updates = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            name = _ENV_KEYS.get(key, key)
            if not sep or name not in {f.name for f in fields(self)}:
                raise ValueError(f"unknown budget entry {item!r}")
            updates[name] = int(value)
        return replace(self, **updates)


@dataclass(frozen=True)
class RunConfig:
    budgets: Budgets = Budgets()
    seed: int = 0
    checked: bool = False


_current = Budgets.from_env() if os.environ.get(ENV_VAR) else Budgets()


def budgets() -> Budgets:
    """Process-wide budgets used when a caller does not pass its own."""
    return _current


def set_budgets(b: Budgets) -> Budgets:
    global _current
    old, _current = _current, b
    return old
