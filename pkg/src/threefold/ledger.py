"""Machine-readable transcription of the manifold tables.

Each row carries its table of origin.  Fibration strings are either the
exact entries of a row (``fibrations``) or concrete instances of a
parametrized entry (``samples``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources


@dataclass(frozen=True)
class LedgerRow:
    table: str
    name: str
    label: str = ""
    fibrations: tuple[str, ...] = ()
    samples: tuple[str, ...] = ()
    gluings: tuple[str, ...] = ()
    geometry: str | None = None
    homology: str | None = None
    orientable: bool | None = None
    record: tuple[int, ...] | None = None
    build: str | None = None
    note: str = ""

    @property
    def display(self) -> str:
        return self.label or self.name

    def all_fibrations(self) -> tuple[str, ...]:
        return self.fibrations + self.samples


@lru_cache(maxsize=1)
def load_ledger() -> tuple[LedgerRow, ...]:
    text = resources.files("threefold.data").joinpath("ledger.json").read_text(encoding="utf-8")
    rows = []
    for d in json.loads(text)["rows"]:
        for key in ("fibrations", "samples", "gluings"):
            if key in d:
                d[key] = tuple(d[key])
        if d.get("record") is not None:
            d["record"] = tuple(d["record"])
        rows.append(LedgerRow(**d))
    return tuple(rows)


def rows_for(table: str | int | None = None) -> list[LedgerRow]:
    rows = load_ledger()
    if table is None:
        return list(rows)
    return [r for r in rows if r.table == str(table)]


def tables() -> list[str]:
    seen = []
    for r in load_ledger():
        if r.table not in seen:
            seen.append(r.table)
    return seen


def known_names() -> dict:
    """Normalized fibration -> display name, for exact (non-sample) entries."""
    from .seifert import normalize, parse

    out = {}
    for r in load_ledger():
        for s in r.fibrations:
            out.setdefault(normalize(parse(s)), r.display)
    return out
