"""Spec files: a small ``key = value`` format describing f(x) and task defaults.

Example::

    label = g_eta
    param eta = 1/3
    gamma = eta:1, 1-eta:1, 1:-2
    k_max = 8

Coefficients are exact rationals or arithmetic in declared parameters; decimal
literals are refused so nothing is silently rounded.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from . import oracle
from .algebra import as_rational
from .engine import FunctionSpec, SpecError


class SpecLoadError(ValueError):
    """Raised with the offending field named in the message."""


@dataclass(frozen=True)
class SpecFile:
    label: str
    spec: FunctionSpec
    k_max: int = 4
    depth: int = 40
    precision: int = oracle.DEFAULT_PREC
    grid: tuple[Fraction, ...] = (Fraction(50), Fraction(100), Fraction(200), Fraction(400))
    params: dict = field(default_factory=dict)
    source: str = ""


_INT_KEYS = {"stirling_power", "nu", "pi_power", "k_max", "depth", "precision"}
_KNOWN = _INT_KEYS | {"label", "gamma", "c", "prefactor", "grid"}


def eval_rational(text: str, params: Optional[dict] = None, where: str = "value") -> Fraction:
    """Evaluate +, -, *, / and integer powers (^ or **) over integer literals and named parameters."""
    params = params or {}
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SpecLoadError(f"{where}: cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise SpecLoadError(f"{where}: {node.value!r} is not an integer literal; write decimals as p/q")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise SpecLoadError(f"{where}: unknown name {node.id!r}")
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b == 0:
                    raise SpecLoadError(f"{where}: division by zero")
                return a / b
            if isinstance(node.op, ast.Pow) and b.denominator == 1:
                return a ** int(b)
        raise SpecLoadError(f"{where}: unsupported expression {text!r}")

    return ev(tree.body)


def parse_spec_text(text: str, overrides: Optional[dict] = None, source: str = "<text>",
                    check_limit: bool = True) -> SpecFile:
    """Parse spec text; ``overrides`` replaces declared parameter values (e.g. eta)."""
    overrides = {k: as_rational(v) if not isinstance(v, Fraction) else v for k, v in (overrides or {}).items()}
    params: dict[str, Fraction] = {}
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecLoadError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("param "):
            name = key[len("param "):].strip()
            if not name.isidentifier():
                raise SpecLoadError(f"{source}:{lineno}: bad parameter name {name!r}")
            params[name] = eval_rational(value, {}, f"param {name}")
            continue
        if key not in _KNOWN:
            raise SpecLoadError(f"{source}:{lineno}: unknown field {key!r}")
        raw[key] = value
    for name in overrides:
        if name not in params:
            raise SpecLoadError(f"parameter {name!r} is not declared in {source}")
    params.update(overrides)

    if "gamma" not in raw:
        raise SpecLoadError(f"{source}: missing field 'gamma'")
    factors = []
    for item in raw["gamma"].split(","):
        if ":" not in item:
            raise SpecLoadError(f"gamma: expected 'shift:exponent', got {item.strip()!r}")
        shift, exp = item.rsplit(":", 1)
        a = eval_rational(shift, params, "gamma shift")
        e = eval_rational(exp, params, "gamma exponent")
        if e.denominator != 1:
            raise SpecLoadError(f"gamma exponent {e} must be an integer")
        factors.append((a, int(e)))

    ints = {}
    for key in _INT_KEYS & raw.keys():
        v = eval_rational(raw[key], params, key)
        if v.denominator != 1:
            raise SpecLoadError(f"{key}: expected an integer, got {v}")
        ints[key] = int(v)
    kwargs = dict(
        gamma_factors=tuple(factors),
        stirling_power=ints.get("stirling_power", 0),
        nu=ints.get("nu"),
        c=eval_rational(raw["c"], params, "c") if "c" in raw else None,
        prefactor=eval_rational(raw["prefactor"], params, "prefactor") if "prefactor" in raw else Fraction(1),
        pi_power=ints.get("pi_power", 0),
        label=raw.get("label", Path(source).stem),
    )
    try:
        spec = FunctionSpec(**kwargs)
    except SpecError as exc:
        raise SpecLoadError(f"{source}: {exc}") from exc
    if check_limit:
        ok, value = oracle.limit_check(spec)
        if not ok:
            raise SpecLoadError(
                f"{source}: x^nu f(x) at x = 10^4 is {float(value):.6g}, not within 1% of c = {spec.c}"
            )
    extra = {k: ints[k] for k in ("k_max", "depth", "precision") if k in ints}
    if "grid" in raw:
        extra["grid"] = tuple(eval_rational(g, params, "grid") for g in raw["grid"].split(","))
    return SpecFile(label=kwargs["label"], spec=spec, params=dict(params), source=source, **extra)


def bundled_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("mcfrac.specs").iterdir() if p.name.endswith(".spec"))


def load_spec(name_or_path: Union[str, Path], overrides: Optional[dict] = None, check_limit: bool = True) -> SpecFile:
    """Load a bundled spec by name (``brouncker``) or a spec file by path."""
    p = Path(name_or_path)
    if p.suffix == ".spec" or p.exists():
        if not p.exists():
            raise SpecLoadError(f"no such spec file: {p}")
        return parse_spec_text(p.read_text(), overrides, str(p), check_limit)
    name = str(name_or_path)
    res = resources.files("mcfrac.specs") / f"{name}.spec"
    if not res.is_file():
        raise SpecLoadError(f"unknown spec {name!r}; bundled: {', '.join(bundled_names())}")
    return parse_spec_text(res.read_text(), overrides, name, check_limit)
