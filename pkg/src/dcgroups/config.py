"""Group, subgroup and run configuration parsing shared by the CLI and tests."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .catalog import catalog_group, catalog_names
from .errors import ConfigError
from .groups import (DEFAULT_BALL_CAP, DirectProduct, FreeGroup, GenSet, Group, HeisenbergZ,
                     InfiniteDihedral, ZPowD)
from .index import (DEFAULT_COSET_CAP, SubgroupOracle, center_subgroup, even_sum,
                    factor_subgroup, subgroup_from_words, translations)
from .dc import DEFAULT_PAIRS_CAP

DEFAULT_SEED = 20240917
DEFAULT_TAIL = 10

_NAMED = {
    "heisenberg": lambda: HeisenbergZ(),
    "dinf": lambda: InfiniteDihedral(),
    "d-inf": lambda: InfiniteDihedral(),
    "z": lambda: ZPowD(1),
    "f2": lambda: FreeGroup(2),
    "z-x-f2": lambda: DirectProduct((ZPowD(1), FreeGroup(2))),
    "zxf2": lambda: DirectProduct((ZPowD(1), FreeGroup(2))),
}


def parse_group(spec: str | Mapping) -> Group:
    """Build a group from a short name or a config document.

    Short names: ``heisenberg``, ``dinf``, ``z``, ``z^d`` / ``zd:d``, ``f2`` /
    ``free:k``, ``z-x-f2`` and every catalog name (``Q8``, ``D4``, ``Z12`` ...).
    """
    if isinstance(spec, Mapping):
        return _group_from_doc(spec)
    if not isinstance(spec, str) or not spec.strip():
        raise ConfigError("empty group spec")
    s = spec.strip()
    low = s.lower()
    if low in _NAMED:
        return _NAMED[low]()
    if m := re.fullmatch(r"z(?:\^|d:)(\d+)", low):
        return ZPowD(_positive(m.group(1), "dimension"))
    if m := re.fullmatch(r"free:(\d+)", low):
        return FreeGroup(_positive(m.group(1), "rank"))
    try:
        return catalog_group(s)
    except KeyError:
        raise ConfigError(f"unknown group {spec!r}; named families: {sorted(_NAMED)}, "
                          f"z^d, free:k, or a catalog name {catalog_names()}") from None


def _positive(v: Any, what: str) -> int:
    try:
        k = int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be an integer, got {v!r}") from None
    if k < 1:
        raise ConfigError(f"{what} must be >= 1, got {k}")
    return k


def _group_from_doc(doc: Mapping) -> Group:
    family = str(doc.get("family", "")).lower()
    params = doc.get("params") or {}
    if family == "catalog":
        return parse_group(str(params.get("name", "")))
    if family in ("zd", "zpowd", "z^d"):
        return ZPowD(_positive(params.get("d", 1), "dimension"))
    if family in ("free", "freegroup"):
        return FreeGroup(_positive(params.get("rank", 2), "rank"))
    if family in ("heisenberg", "heisenbergz"):
        return HeisenbergZ()
    if family in ("dinf", "infinitedihedral"):
        return InfiniteDihedral()
    if family in ("product", "directproduct"):
        factors = params.get("factors") or []
        if not factors:
            raise ConfigError("product needs a non-empty 'factors' list")
        return DirectProduct(tuple(parse_group(f) for f in factors))
    if family:
        return parse_group(family)
    raise ConfigError("group document needs a 'family' field")


def parse_genset(group: Group, words: str | list | None) -> GenSet:
    """Explicit generating set; must be symmetric and contain the identity."""
    if words is None:
        S = group.default_genset()
    else:
        if isinstance(words, str):
            words = [w for w in words.split(",")]
        words = [w.strip() for w in words if w.strip()]
        if not words:
            raise ConfigError("empty generating set")
        S = GenSet.from_words(group, words)
    S.require_standard()
    return S


def parse_subgroup(group: Group, spec: str) -> SubgroupOracle:
    """``even-sum``, ``center``, ``translations``, ``factor:i`` or a comma list of words."""
    s = spec.strip()
    low = s.lower()
    if low == "even-sum":
        return even_sum(group)
    if low in ("center", "centre"):
        return center_subgroup(group)
    if low == "translations":
        if not isinstance(group, InfiniteDihedral):
            raise ConfigError("translations is only defined for the infinite dihedral group")
        return translations(group)
    if m := re.fullmatch(r"factor:(\d+)", low):
        return factor_subgroup(group, int(m.group(1)))
    words = [w.strip() for w in s.split(",") if w.strip()]
    if not words:
        raise ConfigError("empty subgroup spec")
    return subgroup_from_words(group, words)


def parse_range(text: str | int | list) -> list[int]:
    """``"A..B"`` (inclusive), ``"N"``, or an explicit list."""
    if isinstance(text, int):
        out = [text]
    elif isinstance(text, list):
        out = [int(v) for v in text]
    else:
        t = str(text).strip()
        if ".." in t:
            a, _, b = t.partition("..")
            try:
                out = list(range(int(a), int(b) + 1))
            except ValueError:
                raise ConfigError(f"bad range {text!r}") from None
        else:
            try:
                out = [int(v) for v in t.split(",") if v.strip()]
            except ValueError:
                raise ConfigError(f"bad range {text!r}") from None
    if not out:
        raise ConfigError(f"empty n range {text!r}")
    if any(n < 0 for n in out):
        raise ConfigError("n values must be >= 0")
    return out


def load_config_file(path: str | Path) -> dict:
    """Read a YAML or JSON config file into a flat dict of option values."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        if p.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            import yaml

            data = yaml.safe_load(text)
    except Exception as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


@dataclass
class RunConfig:
    """Everything a run depends on; embedded verbatim in every report."""

    group: Any = None
    gens: Any = None
    seq: str = "ball"
    n: Any = None
    tail: int = DEFAULT_TAIL
    seed: int = DEFAULT_SEED
    mc_trials: int | None = None
    lazy: Any = None
    float_mode: bool = False
    subgroup: Any = None
    probe: str = "e"
    coset_cap: int = DEFAULT_COSET_CAP
    ball_cap: int = DEFAULT_BALL_CAP
    pairs_cap: int = DEFAULT_PAIRS_CAP
    eps: Any = None
    tol: Any = None
    c: Any = None
    walk_n: Any = None
    json: str | None = None
    csv: str | None = None
    plot: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("coset_cap", "ball_cap", "pairs_cap", "tail"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name.replace('_', '-')} must be a positive integer")
        if self.seq not in ("ball", "walk"):
            raise ConfigError(f"--seq must be ball or walk, got {self.seq!r}")
        if self.mc_trials is not None and self.mc_trials < 1:
            raise ConfigError("mc-trials must be >= 1")

    @classmethod
    def merge(cls, file_values: Mapping, flag_values: Mapping) -> RunConfig:
        """Flags that were given (not ``None``) win over file values."""
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        values: dict = {}
        extra: dict = {}
        for src in (file_values, flag_values):
            for k, v in src.items():
                if v is None:
                    continue
                if k in known:
                    values[k] = v
                else:
                    extra[k] = v
        return cls(**values, extra=extra)

    def to_dict(self) -> dict:
        d = asdict(self)
        if not d["extra"]:
            del d["extra"]
        return d


__all__ = ["DEFAULT_SEED", "DEFAULT_TAIL", "RunConfig", "parse_group", "parse_genset",
           "parse_subgroup", "parse_range", "load_config_file"]
