"""JSON readers for kernel and payoff files, and rational rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .kernel import StepKernel
from .lattice import Site
from .transform import LatticeFunction, Region


class InputError(ValueError):
    """Malformed input file or argument."""


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"rational must be a string or integer, got {text!r}")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}") from exc


def parse_site(text, d: int | None = None) -> Site:
    """Accept ``[1, 2]``, ``"[1,2]"``, ``"1,2"`` or a bare integer for d = 1."""
    value = text
    if isinstance(text, str):
        s = text.strip()
        try:
            value = json.loads(s if s.startswith("[") else f"[{s}]")
        except json.JSONDecodeError as exc:
            raise InputError(f"bad site {text!r}") from exc
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InputError(f"bad site {text!r}")
    if d is not None and len(value) != d:
        raise InputError(f"site {value} does not have dimension {d}")
    return tuple(value)


def _probs(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object of direction probabilities")
    return {k: parse_rational(v) for k, v in obj.items()}


def kernel_from_json(data) -> StepKernel:
    if not isinstance(data, dict):
        raise InputError("kernel file must hold a JSON object")
    unknown = set(data) - {"dimension", "default", "overrides"}
    if unknown:
        raise InputError(f"unknown kernel keys {sorted(unknown)}")
    d = data.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("'dimension' must be a positive integer")
    if "default" not in data:
        raise InputError("missing 'default'")
    overrides = []
    for entry in data.get("overrides", []):
        if not isinstance(entry, dict) or set(entry) != {"site", "probs"}:
            raise InputError("each override needs exactly 'site' and 'probs'")
        overrides.append((parse_site(entry["site"]), _probs(entry["probs"], "override")))
    return StepKernel.build(d, _probs(data["default"], "default"), overrides)


def load_kernel(path: str | Path) -> StepKernel:
    return kernel_from_json(_read_json(path))


def payoff_from_json(data, d: int) -> LatticeFunction:
    if not isinstance(data, dict):
        raise InputError("payoff file must hold a JSON object mapping sites to rationals")
    return LatticeFunction({parse_site(k, d): parse_rational(v) for k, v in data.items()}, Region.UPPER)


def load_payoff(path: str | Path, d: int) -> LatticeFunction:
    return payoff_from_json(_read_json(path), d)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def render(q: Fraction, as_float: bool = False, digits: int = 15) -> str:
    if as_float:
        return f"{float(q):.{digits}g}"
    return str(q)
