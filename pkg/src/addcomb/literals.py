"""Text literals for sets.

Residue sets: ``n=<modulus>:{e1,e2,...}``.  Integer sets: ``{e1,e2,...}``.
Whitespace is ignored everywhere.  Elements of a residue literal are reduced
mod n; duplicates after reduction are an error, never silently dropped.
"""

import re

from .errors import LiteralError
from .intsets import IntSet
from .residues import ResidueSet

_RESIDUE_RE = re.compile(r"^n=(\d+):\{(.*)\}$")
_INT_RE = re.compile(r"^\{(.*)\}$")


def _parse_body(body: str) -> list[int]:
    if body == "":
        return []
    out = []
    for piece in body.split(","):
        if not re.fullmatch(r"-?\d+", piece):
            raise LiteralError(f"bad element {piece!r}")
        out.append(int(piece))
    return out


def parse_residue_set(text: str) -> ResidueSet:
    compact = re.sub(r"\s+", "", text)
    m = _RESIDUE_RE.match(compact)
    if not m:
        raise LiteralError(f"not a residue-set literal: {text!r}")
    n = int(m.group(1))
    if n < 2:
        raise LiteralError(f"modulus must be at least 2, got {n}")
    seen = set()
    for e in _parse_body(m.group(2)):
        r = e % n
        if r in seen:
            raise LiteralError(f"duplicate element {e} (= {r} mod {n})")
        seen.add(r)
    return ResidueSet.from_elements(n, seen)


def parse_int_set(text: str) -> IntSet:
    compact = re.sub(r"\s+", "", text)
    m = _INT_RE.match(compact)
    if not m:
        raise LiteralError(f"not an integer-set literal: {text!r}")
    els = _parse_body(m.group(1))
    if len(set(els)) != len(els):
        raise LiteralError("duplicate element in integer-set literal")
    if not els:
        raise LiteralError("integer-set literal must be nonempty")
    return IntSet(tuple(sorted(els)))


def parse_any(text: str):
    """Residue literal if it carries a modulus prefix, else integer literal."""
    if re.sub(r"\s+", "", text).startswith("n="):
        return parse_residue_set(text)
    return parse_int_set(text)


def format_int_set(a: IntSet) -> str:
    return "{" + ",".join(str(e) for e in a.elements) + "}"
