"""Parse group names like ``Z2xZ4``, ``D8``, ``PSL2(7)`` or ``perm:[(0 1),(0 1 2)]``.

Factors joined by ``x`` form a direct product. Supported factors are
``Zn``, ``Dn`` (dihedral of order n), ``Qn`` (dicyclic of order n, so
``Q8`` is the quaternion group), ``Sn``, ``An`` and ``PSL2(q)``. A
``perm:`` spec lists generators in cycle notation on points 0..m-1.

Parsed tables can be cached as JSON files ``{"n", "label", "mul", ...}``.
A cached table is re-validated every time it is loaded.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from pathlib import Path

import numpy as np

from . import groups as gr
from .groups import Group, GroupError, PermAction

CACHE_ENV = "PROFREE_CACHE_DIR"
DEFAULT_CACHE = ".profree-cache"
# rebuilding large tables beats parsing tens of megabytes of JSON
CACHE_MAX_ORDER = 1024


class GroupSpecError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        super().__init__(f"{msg} at position {pos} in {text!r}" if text else msg)
        self.pos = pos


_FACTOR = re.compile(r"(PSL2)\((\d+)\)|([ZCDQSA])(\d+)")
_CYCLE = re.compile(r"\(([\d\s,]*)\)")


def _parse_perm(text: str, offset: int, full: str) -> tuple[list[list[list[int]]], int]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise GroupSpecError("expected a bracketed generator list", full, offset)
    gens: list[list[list[int]]] = []
    current: list[list[int]] = []
    pos = 1
    inner = body[1:-1]
    degree = 0
    i = 0
    while i < len(inner):
        ch = inner[i]
        if ch.isspace():
            i += 1
        elif ch == ",":
            gens.append(current)
            current = []
            i += 1
        elif ch == "(":
            mt = _CYCLE.match(inner, i)
            if not mt:
                raise GroupSpecError("unterminated cycle", full, offset + pos + i)
            pts = [int(t) for t in re.split(r"[\s,]+", mt.group(1).strip()) if t]
            if pts:
                degree = max(degree, max(pts) + 1)
            current.append(pts)
            i = mt.end()
        else:
            raise GroupSpecError(f"unexpected character {ch!r}", full, offset + pos + i)
    if current or inner.strip():
        gens.append(current)
    return gens, degree


def _atom(kind: str, num: int, text: str, pos: int) -> tuple[Group, PermAction | None]:
    try:
        if kind == "PSL2":
            return gr.build_psl2(num)
        if kind in "ZC":
            return gr.build_cyclic(num), None
        if kind == "D":
            g = gr.build_dihedral(num)
            return g, gr.dihedral_action(g)
        if kind == "Q":
            return gr.build_dicyclic(num), None
        if kind == "S":
            return gr.build_symmetric(num)
        if kind == "A":
            return gr.build_alternating(num)
    except gr.OrderCapError:
        raise
    except GroupError as exc:
        raise GroupSpecError(str(exc), text, pos) from exc
    raise GroupSpecError(f"unknown group kind {kind!r}", text, pos)


def build_groupspec(text: str) -> tuple[Group, PermAction | None]:
    """Construct the group named by ``text`` (no caching)."""
    spec = text.strip()
    if not spec:
        raise GroupSpecError("empty group spec", text, 0)
    if spec.startswith("perm:"):
        gens, degree = _parse_perm(spec[5:], 5, text)
        degree = max(degree, 1)
        perms = [gr.cycles_to_perm(cycles, degree) for cycles in gens]
        g, act = gr.build_from_generators(perms, degree, label=spec)
        return g, act
    parts = []
    pos = 0
    while True:
        mt = _FACTOR.match(spec, pos)
        if not mt:
            raise GroupSpecError("expected a group factor", text, pos)
        if mt.group(1):
            parts.append(_atom("PSL2", int(mt.group(2)), text, pos))
        else:
            parts.append(_atom(mt.group(3), int(mt.group(4)), text, pos))
        pos = mt.end()
        if pos == len(spec):
            break
        if spec[pos] != "x":
            raise GroupSpecError("expected 'x' between factors", text, pos)
        pos += 1
    if len(parts) == 1:
        return parts[0]
    g = parts[0][0]
    for h, _ in parts[1:]:
        g = gr.direct_product(g, h)
    return g, None


# -- JSON cache ---------------------------------------------------------------


def _tupled(x):
    return tuple(_tupled(y) for y in x) if isinstance(x, list) else x


def group_to_json(g: Group, act: PermAction | None = None, spec: str = "") -> dict:
    doc = {"n": g.n, "label": g.label, "mul": g.mul.tolist()}
    if g.family:
        doc["family"] = json.loads(json.dumps(g.family))
    if act is not None:
        doc["act"] = act.act.tolist()
    if spec:
        doc["spec"] = spec
    return doc


def group_from_json(doc: dict) -> tuple[Group, PermAction | None]:
    """Rebuild and re-validate a group (and action) from its JSON form."""
    mul = np.asarray(doc["mul"])
    if mul.shape != (doc["n"], doc["n"]):
        raise GroupError("cached table does not match its declared order")
    g = Group.from_table(mul, doc.get("label", ""), _tupled(doc.get("family", [])))
    g.validate()
    act = None
    if "act" in doc:
        act = PermAction(g, gr._frozen(doc["act"]))
        act.validate()
    return g, act


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE))


def _cache_path(directory: Path, spec: str) -> Path:
    stem = re.sub(r"[^A-Za-z0-9]+", "_", spec).strip("_")[:40]
    digest = hashlib.sha1(spec.encode()).hexdigest()[:10]
    return directory / f"{stem}-{digest}.json"


def parse_groupspec(
    text: str, cache: Path | str | None = None
) -> tuple[Group, PermAction | None]:
    """Group (and natural action, when there is one) for a spec string.

    With ``cache`` set, tables up to ``CACHE_MAX_ORDER`` are read from and
    written to that directory.
    """
    spec = text.strip()
    path = None
    if cache is not None:
        path = _cache_path(Path(cache), spec)
        if path.exists():
            with open(path) as fh:
                return group_from_json(json.load(fh))
    g, act = build_groupspec(spec)
    if path is not None and g.n <= CACHE_MAX_ORDER:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(group_to_json(g, act, spec), fh, separators=(",", ":"))
        tmp.replace(path)
    return g, act
