"""JSON encoding of spaces, kernels, systems and decompositions.

Rationals travel as ``"num/den"`` strings (integers are accepted as
shorthand on input).  :func:`canonical_json` fixes the byte layout: sorted
keys, no insignificant whitespace.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .disintegration import Decomposition
from .dynamics import DynSystem, InvariantSigma
from .errors import FinStochError, ParseError
from .kernel import Kernel, is_deterministic, kernel_from_function, state
from .space import FinSpace

_RATIONAL = re.compile(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_rational(raw: Any, where: str = "value") -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"{where}: booleans are not rationals")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        match = _RATIONAL.fullmatch(raw)
        if match:
            num, den = match.groups()
            if den is not None and int(den) == 0:
                raise ParseError(f"{where}: zero denominator in {raw!r}")
            return Fraction(int(num), int(den) if den is not None else 1)
    raise ParseError(f"{where}: {raw!r} is not a rational ('num/den' string or integer)")


def _expect(obj: Any, kind: type, where: str):
    if not isinstance(obj, kind):
        raise ParseError(f"{where}: expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _reraise(where: str, exc: FinStochError) -> ParseError:
    return ParseError(f"{where}: {exc}")


def space_to_json(x: FinSpace) -> dict:
    return {"carrier": list(x.carrier), "atoms": [list(a) for a in x.atoms]}


def space_from_json(obj: Any, where: str = "space") -> FinSpace:
    _expect(obj, dict, where)
    for key in ("carrier", "atoms"):
        if key not in obj:
            raise ParseError(f"{where}: missing key {key!r}")
    carrier = _expect(obj["carrier"], list, f"{where}.carrier")
    atoms = _expect(obj["atoms"], list, f"{where}.atoms")
    for j, atom in enumerate(atoms):
        _expect(atom, list, f"{where}.atoms[{j}]")
    try:
        return FinSpace(tuple(carrier), tuple(tuple(a) for a in atoms))
    except ParseError as exc:
        raise _reraise(where, exc) from exc


def kernel_to_json(k: Kernel) -> dict:
    return {
        "dom": space_to_json(k.dom),
        "cod": space_to_json(k.cod),
        "rows": [[format_rational(v) for v in row] for row in k.rows],
    }


def _rows_from_json(obj: Any, where: str) -> tuple:
    rows = _expect(obj, list, where)
    out = []
    for r, row in enumerate(rows):
        _expect(row, list, f"{where}[{r}]")
        out.append(tuple(parse_rational(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)))
    return tuple(out)


def kernel_from_json(obj: Any, where: str = "kernel") -> Kernel:
    _expect(obj, dict, where)
    for key in ("dom", "cod", "rows"):
        if key not in obj:
            raise ParseError(f"{where}: missing key {key!r}")
    dom = space_from_json(obj["dom"], f"{where}.dom")
    cod = space_from_json(obj["cod"], f"{where}.cod")
    rows = _rows_from_json(obj["rows"], f"{where}.rows")
    try:
        return Kernel(dom, cod, rows)
    except ParseError as exc:
        raise _reraise(where, exc) from exc


def state_from_json(obj: Any, space: FinSpace | None = None, where: str = "measure") -> Kernel:
    """A state given as a kernel object or as a bare list of atom weights."""
    if isinstance(obj, list):
        if space is None:
            raise ParseError(f"{where}: a bare weight list needs a system space")
        probs = [parse_rational(v, f"{where}[{i}]") for i, v in enumerate(obj)]
        try:
            return state(space, probs)
        except ParseError as exc:
            raise _reraise(where, exc) from exc
    p = kernel_from_json(obj, where)
    if not p.is_state:
        raise ParseError(f"{where}: domain is not the one-point space")
    return p


def system_to_json(sys: DynSystem) -> dict:
    """Zero-one generators use the ``map`` shorthand, others the kernel form."""
    space = sys.space
    gens = {}
    for name, k in sys.generators:
        if is_deterministic(k):
            gens[name] = {
                "map": {
                    label: space.carrier[space.atoms[sys.image(k, space.atom_of[i])][0]]
                    for i, label in enumerate(space.carrier)
                }
            }
        else:
            gens[name] = kernel_to_json(k)
    return {"space": space_to_json(space), "generators": gens}


def system_from_json(obj: Any, where: str = "system") -> DynSystem:
    _expect(obj, dict, where)
    for key in ("space", "generators"):
        if key not in obj:
            raise ParseError(f"{where}: missing key {key!r}")
    space = space_from_json(obj["space"], f"{where}.space")
    raw = _expect(obj["generators"], dict, f"{where}.generators")
    gens = []
    for name, g in raw.items():
        loc = f"{where}.generators.{name}"
        _expect(g, dict, loc)
        try:
            if "map" in g:
                mapping = _expect(g["map"], dict, f"{loc}.map")
                k = kernel_from_function(mapping, space, space)
            elif "rows" in g and "dom" not in g and "cod" not in g:
                k = Kernel(space, space, _rows_from_json(g["rows"], f"{loc}.rows"))
            else:
                k = kernel_from_json(g, loc)
        except FinStochError as exc:
            if isinstance(exc, ParseError) and str(exc).startswith(loc):
                raise
            raise _reraise(loc, exc) from exc
        gens.append((name, k))
    try:
        return DynSystem(space, tuple(gens))
    except FinStochError as exc:
        raise _reraise(where, exc) from exc


def decomposition_to_json(d: Decomposition) -> dict:
    return {"q": kernel_to_json(d.q), "k": kernel_to_json(d.k), "p": kernel_to_json(d.p)}


def decomposition_from_json(obj: Any, where: str = "decomposition") -> Decomposition:
    _expect(obj, dict, where)
    parts = {key: kernel_from_json(obj.get(key), f"{where}.{key}") for key in ("q", "k", "p")}
    try:
        return Decomposition(**parts)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def sigma_to_json(sigma: InvariantSigma) -> dict:
    return {
        "quotient_space": space_to_json(sigma.quotient_space),
        "cocone": kernel_to_json(sigma.cocone),
    }
