"""Finite windows of would-be indiscernible sequences.

A window is a finite list of same-arity tuples read in list order.  The
operations here classify singleton windows (constant, petaled, monotonic),
compute discernible hulls and frontier sets, and decide weak indiscernibility
over a parameter set by brute order-type scanning of relation atoms.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import DSet, InputError, InvariantViolation, relation_table
from .splittings import Splitting, enumerate_splittings, extend_splitting, is_splitting

__all__ = [
    "SequenceWindow",
    "WindowClass",
    "ColumnHull",
    "HullResult",
    "classify_window",
    "hull_window",
    "frontiers",
    "weakly_indiscernible_over",
    "mutually_indiscernible",
    "detect_petaled",
]


@dataclass(frozen=True)
class SequenceWindow:
    """Ordered rows of element tuples; row order is the index order."""

    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Sequence[int]]) -> None:
        packed = tuple(tuple(int(v) for v in row) for row in rows)
        if not packed:
            raise InputError("window must hold at least one row")
        arity = len(packed[0])
        if arity < 1:
            raise InputError("window rows must be nonempty tuples")
        if any(len(row) != arity for row in packed):
            raise InputError("window rows must share one arity")
        object.__setattr__(self, "rows", packed)

    @property
    def arity(self) -> int:
        return len(self.rows[0])

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.arity)]

    def elements(self) -> frozenset[int]:
        return frozenset(v for row in self.rows for v in row)

    def to_json(self) -> str:
        return json.dumps({"rows": [list(row) for row in self.rows]})

    @classmethod
    def from_json(cls, text: str) -> "SequenceWindow":
        try:
            payload = json.loads(text)
            rows = payload["rows"]
        except (json.JSONDecodeError, TypeError, KeyError) as exc:
            raise InputError(f"bad window payload: {exc}") from exc
        return cls(rows)


@dataclass(frozen=True)
class WindowClass:
    """Verdict of the singleton-window trichotomy.

    label is one of constant / petaled / monotonic / not_indiscernible; the
    witness explains the last case.
    """

    label: str
    witness: Optional[dict] = None

    def as_dict(self) -> dict:
        out: dict = {"label": self.label}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _check_ids(d: DSet, ids: Iterable[int]) -> None:
    for v in ids:
        if not 0 <= v < d.n:
            raise InputError(f"element {v} outside the D-set")


def _quad_pattern(d: DSet, a: int, b: int, c: int, e: int) -> tuple[bool, bool, bool]:
    # The three pairings of the four elements, in a fixed order.
    return (d.holds(a, b, c, e), d.holds(a, c, b, e), d.holds(a, e, b, c))


def classify_window(d: DSet, s: SequenceWindow) -> WindowClass:
    """Sort a singleton window into the indiscernibility trichotomy.

    A window that is not constant must be all-distinct with every index
    quad showing one shared pairing pattern: all-false means petaled, the
    outer pairing alone means monotonic.  Anything else is returned as
    not_indiscernible with a witness of the offending quad(s).
    """
    if s.arity != 1:
        raise InputError("classification works on singleton windows")
    if len(s) < 4:
        raise InputError("window too short to classify (need at least 4 rows)")
    col = s.column(0)
    _check_ids(d, col)
    if len(set(col)) == 1:
        return WindowClass("constant")
    if len(set(col)) < len(col):
        seen: dict[int, int] = {}
        for i, v in enumerate(col):
            if v in seen:
                return WindowClass(
                    "not_indiscernible",
                    {"kind": "repeat", "indices": [seen[v], i], "element": v},
                )
            seen[v] = i

    first_quad: Optional[tuple[int, ...]] = None
    first_pattern: Optional[tuple[bool, bool, bool]] = None
    for quad in itertools.combinations(range(len(col)), 4):
        i, j, k, l = quad
        pattern = _quad_pattern(d, col[i], col[j], col[k], col[l])
        if first_pattern is None:
            first_quad, first_pattern = quad, pattern
        elif pattern != first_pattern:
            return WindowClass(
                "not_indiscernible",
                {
                    "kind": "order",
                    "quad_a": list(first_quad),
                    "pattern_a": list(first_pattern),
                    "quad_b": list(quad),
                    "pattern_b": list(pattern),
                },
            )
    assert first_quad is not None and first_pattern is not None
    if first_pattern == (False, False, False):
        return WindowClass("petaled")
    if first_pattern == (True, False, False):
        return WindowClass("monotonic")
    return WindowClass(
        "not_indiscernible",
        {
            "kind": "forbidden_pattern",
            "quad": list(first_quad),
            "pattern": list(first_pattern),
        },
    )


@dataclass(frozen=True)
class ColumnHull:
    """Hull data for one window column."""

    column: int
    klass: WindowClass
    hull: frozenset[int]
    h1: frozenset[int] = frozenset()
    h2: frozenset[int] = frozenset()
    h3: frozenset[int] = frozenset()
    sector_union: frozenset[int] = frozenset()
    left: frozenset[int] = frozenset()
    right: frozenset[int] = frozenset()

    def as_dict(self) -> dict:
        return {
            "column": self.column,
            "class": self.klass.as_dict(),
            "hull": sorted(self.hull),
            "h1": sorted(self.h1),
            "h2": sorted(self.h2),
            "h3": sorted(self.h3),
            "sector_union": sorted(self.sector_union),
            "left": sorted(self.left),
            "right": sorted(self.right),
        }


@dataclass(frozen=True)
class HullResult:
    """Union of the per-column hulls of a window."""

    columns: tuple[ColumnHull, ...]
    hull: frozenset[int] = field(default=frozenset())

    def as_dict(self) -> dict:
        return {
            "hull": sorted(self.hull),
            "columns": [c.as_dict() for c in self.columns],
        }


def _monotonic_parts(
    d: DSet, col: Sequence[int]
) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    col_set = set(col)
    others = [x for x in sorted(d.elements) if x not in col_set]
    h1: set[int] = set()
    h2: set[int] = set()
    h3: set[int] = set()
    triples = list(itertools.combinations(range(len(col)), 3))
    quads = list(itertools.combinations(range(len(col)), 4))
    for x in others:
        for i, j, k in triples:
            a, b, c = col[i], col[j], col[k]
            if d.holds(a, c, b, x):
                h1.add(x)
            if not (d.holds(a, b, c, x) or d.holds(a, c, b, x) or d.holds(a, x, b, c)):
                h2.add(x)
        for i, j, k, l in quads:
            if d.holds(col[i], x, col[k], col[l]) and d.holds(col[i], col[j], x, col[l]):
                h3.add(x)
                break
    return frozenset(h1), frozenset(h2), frozenset(h3)


def _petaled_sectors(d: DSet, col: Sequence[int]) -> frozenset[int]:
    partial = Splitting([{v} for v in col])
    full = extend_splitting(d, partial.ground, partial)
    ok, witness = is_splitting(d, full)
    if not ok:
        raise InvariantViolation(
            f"petaled column failed to extend to a splitting: {witness}"
        )
    col_set = set(col)
    union: set[int] = set()
    for sec in full.sectors:
        if sec & col_set:
            union |= sec
    return frozenset(union)


def hull_window(d: DSet, s: SequenceWindow) -> HullResult:
    """Discernible hull of a window: union over its columns.

    Constant columns contribute nothing.  A petaled column grows its
    singletons into a full node splitting and takes every sector the column
    meets.  A monotonic column takes its own elements plus the three
    witnessed side sets, and also reports the frontier pair.
    """
    hulls: list[ColumnHull] = []
    for j, col in enumerate(s.columns()):
        window = SequenceWindow([(v,) for v in col])
        klass = classify_window(d, window)
        if klass.label == "not_indiscernible":
            raise InputError(
                f"column {j} is not indiscernible: {klass.witness}"
            )
        if klass.label == "constant":
            hulls.append(ColumnHull(j, klass, frozenset()))
            continue
        if klass.label == "petaled":
            union = _petaled_sectors(d, col)
            hulls.append(ColumnHull(j, klass, union, sector_union=union))
            continue
        if len(col) < 5:
            raise InputError("monotonic hull needs a window of at least 5 rows")
        h1, h2, h3 = _monotonic_parts(d, col)
        left, right = frontiers(d, window)
        hull = frozenset(col) | h1 | h2 | h3
        hulls.append(ColumnHull(j, klass, hull, h1, h2, h3, frozenset(), left, right))
    total = frozenset().union(*(c.hull for c in hulls)) if hulls else frozenset()
    return HullResult(tuple(hulls), total)


def frontiers(d: DSet, s: SequenceWindow) -> tuple[frozenset[int], frozenset[int]]:
    """Left and right frontier of a monotonic singleton window.

    A sector qualifies on the left when it meets the window in an initial
    segment of length at least 2 missing at least 2 rows; the frontier is
    the intersection of all qualifying sectors with the window elements
    removed, empty when nothing qualifies.  The right side mirrors this
    with final segments.
    """
    klass = classify_window(d, s)
    if klass.label != "monotonic":
        raise InputError(f"frontiers need a monotonic window, got {klass.label}")
    col = s.column(0)
    if len(col) < 5:
        raise InputError("frontiers need a window of at least 5 rows")
    m = len(col)
    initials = [frozenset(col[: t + 1]) for t in range(1, m - 2)]
    finals = [frozenset(col[t:]) for t in range(2, m - 1)]
    col_set = frozenset(col)

    left_family: list[frozenset[int]] = []
    right_family: list[frozenset[int]] = []
    for splitting in enumerate_splittings(d):
        for sec in splitting.sectors:
            met = sec & col_set
            if met in initials:
                left_family.append(sec)
            if met in finals:
                right_family.append(sec)

    def core(family: list[frozenset[int]]) -> frozenset[int]:
        if not family:
            return frozenset()
        acc = family[0]
        for sec in family[1:]:
            acc &= sec
        return acc - col_set

    return core(left_family), core(right_family)


def _atom_value(d: DSet, args: Sequence[int]) -> bool:
    return bool(relation_table(d)[args[0], args[1], args[2], args[3]])


def _pattern_iter() -> list[tuple[int, ...]]:
    # 1 marks a window slot; pure-parameter and pure-window atoms are out.
    return [p for p in itertools.product((0, 1), repeat=4) if 0 < sum(p) < 4]


def weakly_indiscernible_over(
    d: DSet, s: SequenceWindow, params: Iterable[int]
) -> tuple[bool, Optional[dict]]:
    """Order-invariance of every relation atom mixing the window with params.

    Each atom fills the four slots with parameters and window entries, the
    window entries addressed by (column, row).  Two fillings with the same
    slot layout, the same columns, and the same order/equality pattern of
    their row indices must agree.  The first disagreement found is returned
    as a witness pair; an empty parameter set is vacuously invariant.
    """
    if len(s) < 5:
        raise InputError("weak indiscernibility needs a window of at least 5 rows")
    b_list = sorted(set(int(v) for v in params))
    _check_ids(d, b_list)
    _check_ids(d, s.elements())
    if not b_list:
        return True, None

    table = relation_table(d)
    m = len(s)
    k = s.arity
    # Window slot axis enumerates (column, row) pairs column-major.
    flat_ids = np.array([s.rows[r][c] for c in range(k) for r in range(m)], dtype=np.intp)
    param_ids = np.array(b_list, dtype=np.intp)

    for pattern in _pattern_iter():
        axes = [flat_ids if flag else param_ids for flag in pattern]
        values = table[np.ix_(*axes)]
        wpos = [i for i, flag in enumerate(pattern) if flag]
        ppos = [i for i, flag in enumerate(pattern) if not flag]
        # Parameter axes up front, window axes behind, then flatten both.
        values = values.transpose(ppos + wpos).reshape(
            len(param_ids) ** len(ppos), -1
        )

        w = len(wpos)
        grids = np.meshgrid(*([np.arange(k * m)] * w), indexing="ij")
        rows_of = [g.ravel() % m for g in grids]
        cols_of = [g.ravel() // m for g in grids]
        code = np.zeros(values.shape[1], dtype=np.int64)
        for c in cols_of:
            code = code * k + c
        for a, b in itertools.combinations(range(w), 2):
            code = code * 3 + (np.sign(rows_of[a] - rows_of[b]) + 1)

        for u in np.unique(code):
            mask = code == u
            chunk = values[:, mask]
            lo = chunk.min(axis=1)
            hi = chunk.max(axis=1)
            if not (lo == hi).all():
                return False, _extract_witness(d, s, b_list, pattern)
    return True, None


def _slot_descriptors(
    s: SequenceWindow, b_list: Sequence[int], pattern: Sequence[int], filling: Sequence
) -> tuple[list[dict], list[int]]:
    slots: list[dict] = []
    args: list[int] = []
    for flag, item in zip(pattern, filling):
        if flag:
            c, r = item
            v = s.rows[r][c]
            slots.append({"kind": "window", "column": c, "row": r, "id": v})
            args.append(v)
        else:
            slots.append({"kind": "param", "id": item})
            args.append(item)
    return slots, args


def _extract_witness(
    d: DSet, s: SequenceWindow, b_list: Sequence[int], pattern: Sequence[int]
) -> dict:
    """Find the first disagreeing atom pair under one slot layout."""
    m = len(s)
    k = s.arity
    choices = []
    for flag in pattern:
        if flag:
            choices.append([(c, r) for c in range(k) for r in range(m)])
        else:
            choices.append(list(b_list))
    seen: dict[tuple, tuple] = {}
    for filling in itertools.product(*choices):
        key_parts: list = []
        w_rows: list[int] = []
        for flag, item in zip(pattern, filling):
            if flag:
                key_parts.append(("col", item[0]))
                w_rows.append(item[1])
            else:
                key_parts.append(("param", item))
        for a, b in itertools.combinations(range(len(w_rows)), 2):
            key_parts.append((w_rows[a] > w_rows[b]) - (w_rows[a] < w_rows[b]))
        key = tuple(key_parts)
        slots, args = _slot_descriptors(s, b_list, pattern, filling)
        value = _atom_value(d, args)
        if key not in seen:
            seen[key] = (slots, args, value)
        else:
            first_slots, first_args, first_value = seen[key]
            if first_value != value:
                return {
                    "kind": "order_type",
                    "first": {"slots": first_slots, "args": first_args, "value": first_value},
                    "second": {"slots": slots, "args": args, "value": value},
                }
    raise InvariantViolation("vectorized scan disagreed with the direct scan")


def mutually_indiscernible(
    d: DSet, s1: SequenceWindow, s2: SequenceWindow
) -> tuple[bool, Optional[dict]]:
    """Each window weakly indiscernible over the other's elements."""
    if len(s1) < 5 or len(s2) < 5:
        raise InputError("mutual indiscernibility needs windows of at least 5 rows")
    ok, witness = weakly_indiscernible_over(d, s1, s2.elements())
    if not ok:
        assert witness is not None
        return False, {"direction": "first_over_second", **witness}
    ok, witness = weakly_indiscernible_over(d, s2, s1.elements())
    if not ok:
        assert witness is not None
        return False, {"direction": "second_over_first", **witness}
    return True, None


def detect_petaled(d: DSet, k: int) -> Optional[SequenceWindow]:
    """Least k-tuple of elements pairwise separated by one node splitting."""
    if k < 3:
        raise InputError("petaled detection needs k of at least 3")
    if d.n < k:
        return None
    node_splittings = [
        sp for sp in enumerate_splittings(d) if len(sp.sectors) > 2
    ]
    if not node_splittings:
        return None
    for combo in itertools.combinations(range(d.n), k):
        for sp in node_splittings:
            sectors = {sp.sector_of(v) for v in combo}
            if len(sectors) == len(combo):
                return SequenceWindow([(v,) for v in combo])
    return None
