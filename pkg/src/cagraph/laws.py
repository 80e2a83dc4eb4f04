"""Probability laws for community sizes and edge densities.

A ``CommunityLaw`` specifies the joint distribution of the size X and the
density Q of one community.  All size laws have finite support (caps on the
zipf and poisson families), which keeps moment computation exact.  On
sampling, sizes are truncated to the current vertex count: X~ = min(X, n).

Laws are plain frozen dataclasses.  ``validate`` reports every invariant
violation with a path to the offending field; the factory classmethods and
the JSON loader raise ``LawValidationError`` eagerly, so any law obtained
through them is known good.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Tuple, Union

import numpy as np

from .rng import RandomState

PROB_SUM_TOL = 1e-12


class LawValidationError(ValueError):
    """Raised when a law specification violates its invariants."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class SizeLaw:
    """Distribution of a community size X over nonnegative integers."""

    kind: str
    value: Optional[int] = None
    entries: Optional[Tuple[Tuple[int, float], ...]] = None
    exponent: Optional[float] = None
    xmin: Optional[int] = None
    xmax: Optional[int] = None
    mean: Optional[float] = None
    cap: Optional[int] = None

    @classmethod
    def point(cls, value: int) -> "SizeLaw":
        law = cls(kind="point", value=int(value))
        _raise_if_invalid(validate_size_law(law, "x"))
        return law

    @classmethod
    def pmf(cls, entries) -> "SizeLaw":
        law = cls(kind="pmf", entries=_as_entries(entries))
        _raise_if_invalid(validate_size_law(law, "x"))
        return law

    @classmethod
    def zipf(cls, exponent: float, xmin: int, xmax: int) -> "SizeLaw":
        law = cls(kind="zipf", exponent=float(exponent), xmin=int(xmin), xmax=int(xmax))
        _raise_if_invalid(validate_size_law(law, "x"))
        return law

    @classmethod
    def poisson(cls, mean: float, cap: int) -> "SizeLaw":
        law = cls(kind="poisson", mean=float(mean), cap=int(cap))
        _raise_if_invalid(validate_size_law(law, "x"))
        return law


@dataclass(frozen=True)
class DensityLaw:
    """Distribution of a community edge density Q on [0, 1]."""

    kind: str
    value: Optional[float] = None
    entries: Optional[Tuple[Tuple[float, float], ...]] = None
    a: Optional[float] = None
    b: Optional[float] = None

    @classmethod
    def point(cls, value: float) -> "DensityLaw":
        law = cls(kind="point", value=float(value))
        _raise_if_invalid(validate_density_law(law, "q"))
        return law

    @classmethod
    def pmf(cls, entries) -> "DensityLaw":
        law = cls(kind="pmf", entries=_as_entries(entries, cast=float))
        _raise_if_invalid(validate_density_law(law, "q"))
        return law

    @classmethod
    def uniform(cls, a: float, b: float) -> "DensityLaw":
        law = cls(kind="uniform", a=float(a), b=float(b))
        _raise_if_invalid(validate_density_law(law, "q"))
        return law


JointTable = Tuple[Tuple[int, float, float], ...]  # (x, q, prob) triples


@dataclass(frozen=True)
class CommunityLaw:
    """Joint law of (X, Q), identically distributed or a cyclic pattern.

    ``iid`` mode: every community draws from the same (X, Q) law, with X and
    Q independent or coupled through an explicit joint pmf table.
    ``noniid`` mode: community i draws from pattern entry i mod len(pattern),
    so a short pattern describes arbitrarily many communities.
    """

    mode: str
    x: Optional[SizeLaw] = None
    q: Optional[DensityLaw] = None
    coupling: Union[str, JointTable] = "independent"
    pattern: Optional[Tuple[Tuple[SizeLaw, DensityLaw], ...]] = None

    @classmethod
    def iid(cls, x=None, q=None, coupling="independent") -> "CommunityLaw":
        if not isinstance(coupling, str):
            coupling = tuple((int(v), float(qv), float(p)) for v, qv, p in coupling)
        law = cls(mode="iid", x=x, q=q, coupling=coupling)
        _raise_if_invalid(validate(law))
        return law

    @classmethod
    def noniid(cls, pattern) -> "CommunityLaw":
        law = cls(mode="noniid", pattern=tuple((sx, dq) for sx, dq in pattern))
        _raise_if_invalid(validate(law))
        return law


def _as_entries(entries, cast=int):
    if isinstance(entries, Mapping):
        items = entries.items()
    else:
        items = entries
    return tuple((cast(v), float(p)) for v, p in items)


def _raise_if_invalid(errors):
    if errors:
        raise LawValidationError(errors)


# ---------------------------------------------------------------------------
# Validation


def validate_size_law(law: SizeLaw, path: str) -> list:
    errors = []
    if law.kind == "point":
        if law.value is None or law.value < 0:
            errors.append(f"{path}.value: nonnegative integer required")
    elif law.kind == "pmf":
        errors.extend(_check_pmf(law.entries, path, value_check=_check_size_value))
    elif law.kind == "zipf":
        if law.exponent is None or not law.exponent > 1:
            errors.append(f"{path}.exponent: must be > 1")
        if law.xmin is None or law.xmin < 1:
            errors.append(f"{path}.xmin: positive integer required")
        if law.xmax is None or (law.xmin is not None and law.xmin > law.xmax):
            errors.append(f"{path}.xmin: xmin <= xmax required")
    elif law.kind == "poisson":
        if law.mean is None or not law.mean > 0:
            errors.append(f"{path}.mean: must be positive")
        if law.cap is None or law.cap < 1:
            errors.append(f"{path}.cap: cap >= 1 required")
    else:
        errors.append(f"{path}.kind: unknown kind {law.kind!r}")
    return errors


def validate_density_law(law: DensityLaw, path: str) -> list:
    errors = []
    if law.kind == "point":
        if law.value is None or not 0.0 <= law.value <= 1.0:
            errors.append(f"{path}.value: must lie in [0, 1]")
    elif law.kind == "pmf":
        errors.extend(_check_pmf(law.entries, path, value_check=_check_density_value))
    elif law.kind == "uniform":
        if law.a is None or law.b is None or not (0.0 <= law.a <= 1.0 and 0.0 <= law.b <= 1.0):
            errors.append(f"{path}: a and b must lie in [0, 1]")
        elif not law.a < law.b:
            errors.append(f"{path}: a < b required")
    else:
        errors.append(f"{path}.kind: unknown kind {law.kind!r}")
    return errors


def _check_size_value(v):
    return isinstance(v, (int, np.integer)) and v >= 0


def _check_density_value(v):
    return 0.0 <= v <= 1.0


def _check_pmf(entries, path, value_check) -> list:
    errors = []
    if not entries:
        return [f"{path}.entries: empty pmf"]
    total = 0.0
    seen = set()
    for i, (v, p) in enumerate(entries):
        if not value_check(v):
            errors.append(f"{path}.entries[{i}].value: out of range")
        if v in seen:
            errors.append(f"{path}.entries[{i}].value: duplicate value {v}")
        seen.add(v)
        if not 0.0 <= p <= 1.0:
            errors.append(f"{path}.entries[{i}].prob: out of [0, 1]")
        total += p
    if abs(total - 1.0) > PROB_SUM_TOL:
        errors.append(f"{path}.entries: probabilities sum to {total!r}")
    return errors


def validate(law: CommunityLaw) -> list:
    """Return all invariant violations; an empty list means the law is ok."""
    errors = []
    if law.mode == "iid":
        joint = not isinstance(law.coupling, str)
        if joint:
            if law.x is not None or law.q is not None:
                errors.append("iid: x and q must be omitted when a joint table is given")
            errors.extend(_check_joint(law.coupling))
        else:
            if law.coupling != "independent":
                errors.append(f"iid.coupling: unknown coupling {law.coupling!r}")
            if law.x is None:
                errors.append("iid.x: size law required")
            else:
                errors.extend(validate_size_law(law.x, "iid.x"))
            if law.q is None:
                errors.append("iid.q: density law required")
            else:
                errors.extend(validate_density_law(law.q, "iid.q"))
        if law.pattern is not None:
            errors.append("iid: pattern must be absent")
    elif law.mode == "noniid":
        if not law.pattern:
            errors.append("noniid.pattern: must be nonempty")
        else:
            for i, (sx, dq) in enumerate(law.pattern):
                errors.extend(validate_size_law(sx, f"noniid.pattern[{i}].x"))
                errors.extend(validate_density_law(dq, f"noniid.pattern[{i}].q"))
    else:
        errors.append(f"mode: unknown mode {law.mode!r}")
    return errors


def _check_joint(table) -> list:
    errors = []
    if not table:
        return ["iid.coupling.joint: empty table"]
    total = 0.0
    seen = set()
    for i, (x, q, p) in enumerate(table):
        if not _check_size_value(x):
            errors.append(f"iid.coupling.joint[{i}].x: out of range")
        if not _check_density_value(q):
            errors.append(f"iid.coupling.joint[{i}].q: out of [0, 1]")
        if not 0.0 <= p <= 1.0:
            errors.append(f"iid.coupling.joint[{i}].prob: out of [0, 1]")
        if (x, q) in seen:
            errors.append(f"iid.coupling.joint[{i}]: duplicate pair ({x}, {q})")
        seen.add((x, q))
        total += p
    if abs(total - 1.0) > PROB_SUM_TOL:
        errors.append(f"iid.coupling.joint: probabilities sum to {total!r}")
    return errors


# ---------------------------------------------------------------------------
# JSON schema

_SIZE_KINDS = ("point", "pmf", "zipf", "poisson")
_DENSITY_KINDS = ("point", "pmf", "uniform")


def law_to_jsonable(law: CommunityLaw) -> dict:
    if law.mode == "iid":
        if isinstance(law.coupling, str):
            body = {
                "x": _size_to_jsonable(law.x),
                "q": _density_to_jsonable(law.q),
                "coupling": "independent",
            }
        else:
            body = {"coupling": {"joint": [[x, q, p] for x, q, p in law.coupling]}}
        return {"mode": "iid", "iid": body}
    pattern = [
        {"x": _size_to_jsonable(sx), "q": _density_to_jsonable(dq)}
        for sx, dq in law.pattern
    ]
    return {"mode": "noniid", "noniid": {"pattern": pattern}}


def _size_to_jsonable(law: SizeLaw) -> dict:
    if law.kind == "point":
        return {"kind": "point", "value": law.value}
    if law.kind == "pmf":
        return {"kind": "pmf", "entries": [[v, p] for v, p in law.entries]}
    if law.kind == "zipf":
        return {"kind": "zipf", "exponent": law.exponent, "xmin": law.xmin, "xmax": law.xmax}
    return {"kind": "poisson", "mean": law.mean, "cap": law.cap}


def _density_to_jsonable(law: DensityLaw) -> dict:
    if law.kind == "point":
        return {"kind": "point", "value": law.value}
    if law.kind == "pmf":
        return {"kind": "pmf", "entries": [[v, p] for v, p in law.entries]}
    return {"kind": "uniform", "a": law.a, "b": law.b}


def law_from_jsonable(obj) -> CommunityLaw:
    errors = []
    law = _law_from_jsonable(obj, errors)
    if errors:
        raise LawValidationError(errors)
    more = validate(law)
    if more:
        raise LawValidationError(more)
    return law


def _law_from_jsonable(obj, errors) -> CommunityLaw:
    if not isinstance(obj, dict):
        errors.append("root: object required")
        return CommunityLaw(mode="iid")
    mode = obj.get("mode")
    if mode == "iid":
        body = obj.get("iid")
        if not isinstance(body, dict):
            errors.append("iid: object required")
            return CommunityLaw(mode="iid")
        coupling = body.get("coupling", "independent")
        if isinstance(coupling, dict):
            joint = coupling.get("joint")
            if not isinstance(joint, list):
                errors.append("iid.coupling.joint: list required")
                joint = []
            table = []
            for i, row in enumerate(joint):
                if not (isinstance(row, list) and len(row) == 3):
                    errors.append(f"iid.coupling.joint[{i}]: [x, q, prob] triple required")
                    continue
                table.append((int(row[0]), float(row[1]), float(row[2])))
            x = _size_from_jsonable(body["x"], "iid.x", errors) if "x" in body else None
            q = _density_from_jsonable(body["q"], "iid.q", errors) if "q" in body else None
            return CommunityLaw(mode="iid", x=x, q=q, coupling=tuple(table))
        x = _size_from_jsonable(body.get("x"), "iid.x", errors)
        q = _density_from_jsonable(body.get("q"), "iid.q", errors)
        return CommunityLaw(mode="iid", x=x, q=q, coupling=coupling)
    if mode == "noniid":
        body = obj.get("noniid")
        if not isinstance(body, dict) or not isinstance(body.get("pattern"), list):
            errors.append("noniid.pattern: list required")
            return CommunityLaw(mode="noniid", pattern=())
        pattern = []
        for i, entry in enumerate(body["pattern"]):
            if not isinstance(entry, dict):
                errors.append(f"noniid.pattern[{i}]: object required")
                continue
            sx = _size_from_jsonable(entry.get("x"), f"noniid.pattern[{i}].x", errors)
            dq = _density_from_jsonable(entry.get("q"), f"noniid.pattern[{i}].q", errors)
            pattern.append((sx, dq))
        return CommunityLaw(mode="noniid", pattern=tuple(pattern))
    errors.append(f"mode: expected 'iid' or 'noniid', got {mode!r}")
    return CommunityLaw(mode="iid")


def _size_from_jsonable(obj, path, errors) -> SizeLaw:
    if not isinstance(obj, dict) or obj.get("kind") not in _SIZE_KINDS:
        errors.append(f"{path}.kind: one of {_SIZE_KINDS} required")
        return SizeLaw(kind="point", value=0)
    kind = obj["kind"]
    try:
        if kind == "point":
            return SizeLaw(kind="point", value=int(obj["value"]))
        if kind == "pmf":
            return SizeLaw(kind="pmf", entries=tuple((int(v), float(p)) for v, p in obj["entries"]))
        if kind == "zipf":
            return SizeLaw(
                kind="zipf",
                exponent=float(obj["exponent"]),
                xmin=int(obj["xmin"]),
                xmax=int(obj["xmax"]),
            )
        return SizeLaw(kind="poisson", mean=float(obj["mean"]), cap=int(obj["cap"]))
    except (KeyError, TypeError, ValueError) as exc:
        errors.append(f"{path}: malformed {kind} law ({exc})")
        return SizeLaw(kind="point", value=0)


def _density_from_jsonable(obj, path, errors) -> DensityLaw:
    if not isinstance(obj, dict) or obj.get("kind") not in _DENSITY_KINDS:
        errors.append(f"{path}.kind: one of {_DENSITY_KINDS} required")
        return DensityLaw(kind="point", value=0.0)
    kind = obj["kind"]
    try:
        if kind == "point":
            return DensityLaw(kind="point", value=float(obj["value"]))
        if kind == "pmf":
            return DensityLaw(kind="pmf", entries=tuple((float(v), float(p)) for v, p in obj["entries"]))
        return DensityLaw(kind="uniform", a=float(obj["a"]), b=float(obj["b"]))
    except (KeyError, TypeError, ValueError) as exc:
        errors.append(f"{path}: malformed {kind} law ({exc})")
        return DensityLaw(kind="point", value=0.0)


def load_law_file(path) -> CommunityLaw:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LawValidationError([f"root: invalid JSON ({exc})"]) from exc
    return law_from_jsonable(obj)


# ---------------------------------------------------------------------------
# Support expansion and sampling tables

DISCRETE_Q = 0
UNIFORM_Q = 1
JOINT = 2


def size_support(law: SizeLaw):
    """Finite support of a size law as (values, probabilities) arrays."""
    if law.kind == "point":
        return np.array([law.value], dtype=np.int64), np.array([1.0])
    if law.kind == "pmf":
        order = sorted(law.entries)
        vals = np.array([v for v, _ in order], dtype=np.int64)
        probs = np.array([p for _, p in order], dtype=np.float64)
        return vals, probs
    if law.kind == "zipf":
        vals = np.arange(law.xmin, law.xmax + 1, dtype=np.int64)
        weights = vals.astype(np.float64) ** (-law.exponent)
        return vals, weights / weights.sum()
    # poisson with all mass above the cap collapsed onto the cap
    vals = np.arange(0, law.cap + 1, dtype=np.int64)
    log_pmf = -law.mean + vals * np.log(law.mean) - np.array(
        [_lgamma(int(v) + 1) for v in vals]
    )
    probs = np.exp(log_pmf)
    probs[-1] = max(0.0, 1.0 - probs[:-1].sum())
    return vals, probs


def _lgamma(k):
    import math

    return math.lgamma(k)


def density_support(law: DensityLaw):
    """("discrete", values, probs) or ("uniform", a, b)."""
    if law.kind == "point":
        return ("discrete", np.array([law.value]), np.array([1.0]))
    if law.kind == "pmf":
        order = sorted(law.entries)
        vals = np.array([v for v, _ in order], dtype=np.float64)
        probs = np.array([p for _, p in order], dtype=np.float64)
        return ("discrete", vals, probs)
    return ("uniform", law.a, law.b)


def law_cells(law: CommunityLaw):
    """Per-pattern-entry descriptors driving both sampling and exact moments.

    Each cell is (mode, x_vals, x_probs, q_spec) where q_spec is
    (q_vals, q_probs) for DISCRETE_Q, (a, b) for UNIFORM_Q and an array of
    q values aligned with x_vals for JOINT.
    """
    cells = []
    if law.mode == "iid":
        if not isinstance(law.coupling, str):
            xs = np.array([x for x, _, _ in law.coupling], dtype=np.int64)
            qs = np.array([q for _, q, _ in law.coupling], dtype=np.float64)
            ps = np.array([p for _, _, p in law.coupling], dtype=np.float64)
            cells.append((JOINT, xs, ps, qs))
        else:
            xv, xp = size_support(law.x)
            cells.append(_independent_cell(xv, xp, law.q))
    else:
        for sx, dq in law.pattern:
            xv, xp = size_support(sx)
            cells.append(_independent_cell(xv, xp, dq))
    return cells


def _independent_cell(xv, xp, qlaw: DensityLaw):
    spec = density_support(qlaw)
    if spec[0] == "uniform":
        return (UNIFORM_Q, xv, xp, (spec[1], spec[2]))
    return (DISCRETE_Q, xv, xp, (spec[1], spec[2]))


@dataclass(frozen=True)
class LawTables:
    """Flat array encoding of ``law_cells`` consumed by the kernels.

    For JOINT cells ``q_vals`` is aligned with ``x_vals`` through ``x_off``;
    for DISCRETE_Q cells it is indexed through ``q_off``.  Cumulative arrays
    end exactly at 1.0 so an open-interval uniform always lands in range.
    """

    ncells: int
    cell_mode: np.ndarray
    x_off: np.ndarray
    x_vals: np.ndarray
    x_cum: np.ndarray
    q_off: np.ndarray
    q_vals: np.ndarray
    q_cum: np.ndarray
    q_lo: np.ndarray
    q_hi: np.ndarray


def _cumulative(probs):
    cum = np.cumsum(probs, dtype=np.float64)
    cum[-1] = 1.0
    return cum


@lru_cache(maxsize=128)
def compile_tables(law: CommunityLaw) -> LawTables:
    """Precompute inverse-CDF tables for every pattern cell of a law."""
    errors = validate(law)
    if errors:
        raise LawValidationError(errors)
    cells = law_cells(law)
    modes, x_off, q_off = [], [0], [0]
    x_vals, x_cum, q_vals, q_cum, q_lo, q_hi = [], [], [], [], [], []
    for mode, xv, xp, qspec in cells:
        modes.append(mode)
        x_vals.append(xv)
        x_cum.append(_cumulative(xp))
        x_off.append(x_off[-1] + len(xv))
        if mode == JOINT:
            q_vals.append(np.asarray(qspec, dtype=np.float64))
            q_cum.append(np.zeros(len(qspec)))
            q_off.append(q_off[-1] + len(qspec))
            q_lo.append(0.0)
            q_hi.append(0.0)
        elif mode == UNIFORM_Q:
            q_off.append(q_off[-1])
            q_lo.append(qspec[0])
            q_hi.append(qspec[1])
        else:
            qv, qp = qspec
            q_vals.append(np.asarray(qv, dtype=np.float64))
            q_cum.append(_cumulative(qp))
            q_off.append(q_off[-1] + len(qv))
            q_lo.append(0.0)
            q_hi.append(0.0)

    def _cat(parts, dtype):
        if not parts:
            return np.zeros(0, dtype=dtype)
        return np.ascontiguousarray(np.concatenate(parts), dtype=dtype)

    return LawTables(
        ncells=len(cells),
        cell_mode=np.array(modes, dtype=np.int8),
        x_off=np.array(x_off, dtype=np.int64),
        x_vals=_cat(x_vals, np.int64),
        x_cum=_cat(x_cum, np.float64),
        q_off=np.array(q_off, dtype=np.int64),
        q_vals=_cat(q_vals, np.float64),
        q_cum=_cat(q_cum, np.float64),
        q_lo=np.array(q_lo, dtype=np.float64),
        q_hi=np.array(q_hi, dtype=np.float64),
    )


def _searchcum(cum, lo, hi, u):
    # leftmost index in [lo, hi) with cum[index] > u
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


def draw_cell(tables: LawTables, cell: int, rng: RandomState):
    """Draw an untruncated (x, q) pair from one pattern cell.

    RNG use is part of the reproducibility contract: JOINT cells consume one
    uniform, the other modes consume two (x first, then q).
    """
    mode = tables.cell_mode[cell]
    lo = tables.x_off[cell]
    hi = tables.x_off[cell + 1]
    i = _searchcum(tables.x_cum, lo, hi, rng.u01())
    x = int(tables.x_vals[i])
    if mode == JOINT:
        q = float(tables.q_vals[tables.q_off[cell] + (i - lo)])
    elif mode == UNIFORM_Q:
        u = rng.u01()
        q = tables.q_lo[cell] + u * (tables.q_hi[cell] - tables.q_lo[cell])
    else:
        j = _searchcum(tables.q_cum, tables.q_off[cell], tables.q_off[cell + 1], rng.u01())
        q = float(tables.q_vals[j])
    return x, q


def sample_pair(law: CommunityLaw, community_index: int, n: int, rng: RandomState):
    """Sample (min(X, n), Q) for the community at the given index."""
    tables = compile_tables(law)
    x, q = draw_cell(tables, community_index % tables.ncells, rng)
    return min(x, n), q
