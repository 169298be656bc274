"""Experiment configuration, result records, file ingestion and caches."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .charcalc import CharacterExpansion, DominantWeight, adams_decompose, tensor_decompose
from .lfun.core import ZeroList, parse_zero_text

log = logging.getLogger(__name__)

CACHE_ENV = "SATAKE_LAB_CACHE"


def cache_dir() -> Path:
    """Cache root: $SATAKE_LAB_CACHE if set, else ~/.cache/satake-lab."""
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "satake-lab"


class DecompositionCache:
    """On-disk store of character expansions in their canonical text form."""

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else cache_dir() / "decompositions"

    def _fetch(self, key: str, rank: int, compute) -> CharacterExpansion:
        path = self.root / f"{key}.txt"
        if path.exists():
            return CharacterExpansion.from_text(path.read_text(), rank)
        value = compute()
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".{os.getpid()}.tmp")
        tmp.write_text(value.to_text())
        os.replace(tmp, path)
        return value

    def adams(self, weight: DominantWeight, k: int) -> CharacterExpansion:
        key = f"adams-{'_'.join(map(str, weight.coords))}-k{k}"
        return self._fetch(key, weight.rank, lambda: adams_decompose(weight, k))

    def tensor(self, a: DominantWeight, b: DominantWeight) -> CharacterExpansion:
        key = f"tensor-{'_'.join(map(str, a.coords))}-{'_'.join(map(str, b.coords))}"
        return self._fetch(key, a.rank, lambda: tensor_decompose(a, b))


# ---------------------------------------------------------------------------
# configuration

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


@dataclass
class ExperimentConfig:
    """Flat experiment settings; text form is one ``key=value`` per line."""

    subcommand: str
    rank: int = 2
    weight: str = "1,0"
    kernel: str = "fejer"
    delta: float = 1.0
    logC: float = 13.815510557964274  # log 10^6
    X: float = 0.0  # 0 means: use the conductor
    members: int = 2000
    cutoff: int = 50
    bound: int = 0  # 0 means: automatic
    prime_limit: int = 0
    samples: int = 1_000_000
    max_weight: int = 3
    grid: str = "5,5,30"
    method: str = "rejection"
    kmax: str = "2"
    label: str = "zeta"
    n_zeros: int = 100
    count: int = 10_000
    seed: int = 0
    workers: int = 1
    zeros: str = ""
    satake: str = ""
    out: str = "results"
    emit_plot: bool = False
    tolerance_profile: str = "default"

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            setattr(self, f.name, _coerce(f, value))
        if self.tolerance_profile not in ("strict", "default"):
            raise ValueError("tolerance_profile must be 'strict' or 'default'")

    def to_text(self) -> str:
        return "".join(f"{k}={_render(v)}\n" for k, v in sorted(dataclasses.asdict(self).items()))

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        values = parse_key_values(text)
        if "subcommand" not in values:
            raise ValueError("config lacks a subcommand")
        return cls(**values)

    def updated(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})

    def digest(self) -> str:
        """SHA-256 of the canonical text form."""
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def int_list(self, name: str) -> list[int]:
        raw = getattr(self, name)
        return [int(x) for x in str(raw).split(",") if x.strip()]


def _coerce(f: dataclasses.Field, value: Any) -> Any:
    kind = f.type if isinstance(f.type, str) else f.type.__name__
    if kind == "bool":
        if isinstance(value, str):
            try:
                return _BOOL[value.strip().lower()]
            except KeyError:
                raise ValueError(f"{f.name}: expected a boolean, got {value!r}") from None
        return bool(value)
    if kind == "int":
        if isinstance(value, str):
            value = value.strip()
            return int(float(value)) if "e" in value.lower() else int(value)
        return int(value)
    if kind == "float":
        return float(value)
    return str(value)


def _render(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def config_keys() -> list[str]:
    return [f.name for f in dataclasses.fields(ExperimentConfig)]


def parse_key_values(text: str) -> dict[str, str]:
    known = set(config_keys())
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


# ---------------------------------------------------------------------------
# results


@dataclass
class ResultRecord:
    experiment_id: str
    timestamp: float
    config_hash: str
    results: dict[str, float] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, default=_json_default)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        return cls(**json.loads(line))

    @classmethod
    def new(cls, config: ExperimentConfig) -> "ResultRecord":
        digest = config.digest()
        return cls(f"{config.subcommand}-{digest[:12]}", time.time(), digest)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def append_record(path: str | os.PathLike, record: ResultRecord) -> None:
    """Append one JSON line to the results ledger."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        fh.write(record.to_json() + "\n")


def read_records(path: str | os.PathLike) -> list[ResultRecord]:
    return [ResultRecord.from_json(line) for line in Path(path).read_text().splitlines() if line.strip()]


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]],
              meta: Mapping[str, Any] | None = None) -> Path:
    """CSV with ``# key=value`` comment lines describing the run, then a header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for k, v in (meta or {}).items():
            fh.write(f"# {k}={_render(v)}\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_render(x) for x in row])
    return path


def read_csv(path: str | os.PathLike) -> tuple[dict[str, str], list[dict[str, str]]]:
    meta: dict[str, str] = {}
    lines = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        else:
            lines.append(line)
    return meta, list(csv.DictReader(lines))


# ---------------------------------------------------------------------------
# ingestion


def ingest_zeros(path: str | os.PathLike) -> ZeroList:
    """Read a zero-ordinate file (``# L <label>`` header, one ordinate per line)."""
    path = Path(path)
    zeros, label, warnings = parse_zero_text(path.read_text(), source=str(path))
    for w in warnings:
        log.warning("%s: %s", path, w)
    if label is not None:
        zeros = ZeroList(zeros.ordinates, label)
    return zeros


def parse_satake_text(text: str) -> dict[int, np.ndarray]:
    """Lines ``p angle_1 ... angle_r``; repeated primes stack one row per family member."""
    rows: dict[int, list[list[float]]] = {}
    rank = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            p = int(parts[0])
            angles = [float(x) for x in parts[1:]]
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
        if p < 2 or not angles:
            raise ValueError(f"line {lineno}: need a prime and at least one angle")
        if rank is None:
            rank = len(angles)
        elif len(angles) != rank:
            raise ValueError(f"line {lineno}: expected {rank} angles, got {len(angles)}")
        turns = sum(angles) / (2 * np.pi)
        if abs(turns - round(turns)) > 1e-8:
            raise ValueError(f"line {lineno}: angles must sum to 0 mod 2 pi")
        rows.setdefault(p, []).append(angles)
    return {p: np.array(v, dtype=float) for p, v in sorted(rows.items())}


def ingest_satake(path: str | os.PathLike) -> dict[int, np.ndarray]:
    return parse_satake_text(Path(path).read_text())
