"""JSON encodings for vertices, families, edges and numbers.

Vertices are read as lists of 1-based elements (``[1, 3]``) or hex mask
strings (``"0x5"``) and always written as element lists.  Families are
``{"n": 3, "members": [...]}``.  Rationals are written as ``"p/q"`` strings
and reals with 12 significant digits, so output is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .boundary import EdgeSet
from .cube import CubeSet, CubeVertex, check_dim, mask_elements


def vertex_to_json(mask: int) -> list[int]:
    return mask_elements(mask)


def parse_vertex(obj: Any, n: int) -> int:
    if isinstance(obj, str):
        try:
            mask = int(obj, 16)
        except ValueError:
            raise ValueError(f"bad hex vertex {obj!r}") from None
        return CubeVertex(mask, n).mask
    if isinstance(obj, list) and all(isinstance(e, int) and not isinstance(e, bool) for e in obj):
        return CubeVertex.from_elements(n, obj).mask
    raise ValueError(f"vertex must be an element list or hex string, got {obj!r}")


def set_to_json(S: CubeSet) -> dict:
    return {"n": S.dim, "members": [mask_elements(m) for m in S]}


def bits_to_json(n: int, bits: int) -> dict:
    return set_to_json(CubeSet(n, bits))


def parse_set(obj: Any, n: int | None = None) -> CubeSet:
    """Accept ``{"n": .., "members": [..]}`` or a bare member list (needs ``n``)."""
    if isinstance(obj, dict):
        if "members" not in obj:
            raise ValueError("set object needs a 'members' list")
        dim = obj.get("n", n)
        if dim is None:
            raise ValueError("set object needs 'n'")
        if n is not None and dim != n:
            raise ValueError(f"set has n={dim} but the instance has n={n}")
        members = obj["members"]
    elif isinstance(obj, list):
        if n is None:
            raise ValueError("a bare member list needs the dimension n")
        dim, members = n, obj
    else:
        raise ValueError(f"cannot read a vertex family from {obj!r}")
    check_dim(dim)
    if not isinstance(members, list):
        raise ValueError("'members' must be a list")
    return CubeSet.from_masks(dim, (parse_vertex(v, dim) for v in members))


def edges_to_json(E: EdgeSet) -> list[dict]:
    return [{"u": mask_elements(u), "v": mask_elements(v)} for u, v in E]


def real(x: float) -> float:
    return float(f"{x:.12g}")


def rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
