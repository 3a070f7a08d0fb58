"""Two-group Boolean instances and the desk-scale solvers that run on them.

Observations are stored as integer bitmasks (bit j is attribute j), which
keeps projections, pair comparisons and term evaluation to a couple of
integer operations each.
"""

from __future__ import annotations

import csv
import io
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .errors import (
    BudgetError,
    InstanceFormatError,
    NotASolutionError,
    ProfileError,
    UnsatisfiableInstanceError,
)
from .exactmath import DomainSpec
from .model_m1 import SizeProfile

__all__ = [
    "GroupedInstance",
    "ProjectionSummary",
    "Verdict",
    "SolutionSearch",
    "Pattern",
    "CoverResult",
    "RUNNING_EXAMPLE_CSV",
    "running_example",
    "load_instance",
    "write_instance",
    "resolve_subset",
    "check_satisfiable",
    "project",
    "project_instance",
    "is_solution",
    "is_non_dominated",
    "find_minimal_solutions",
    "enumerate_patterns",
    "min_pattern_cover",
    "size_profile",
]

GROUP_COLUMN = "group"
ID_COLUMN = "id"
MAX_PATTERN_ATTRS = 20
DEFAULT_EXACT_COVER_THRESHOLD = 4096

RUNNING_EXAMPLE_CSV = """\
id,group,a,b,c,d,e,f,g,h
1,P,0,1,0,1,0,1,1,0
2,P,1,1,0,1,1,0,0,1
3,P,0,1,1,0,1,0,0,1
4,N,1,0,1,0,1,0,1,1
5,N,0,0,0,1,1,1,0,0
6,N,1,1,0,1,0,1,0,1
7,N,0,0,1,0,1,0,1,0
"""


@dataclass(frozen=True)
class GroupedInstance:
    """Boolean observations split into a positive group (1) and a negative group (2)."""

    attributes: tuple[str, ...]
    rows: tuple[int, ...]
    groups: tuple[int, ...]
    ids: tuple[str, ...]
    dropped_duplicates: int = 0
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not (len(self.rows) == len(self.groups) == len(self.ids)):
            raise ValueError("rows, groups and ids must have equal length")
        limit = 1 << len(self.attributes)
        for row in self.rows:
            if not 0 <= row < limit:
                raise ValueError(f"row bitmask {row} has bits outside the attribute range")
        if any(g not in (1, 2) for g in self.groups):
            raise ValueError("group labels must be 1 or 2")

    @classmethod
    def from_rows(
        cls,
        attributes: Sequence[str],
        rows: Iterable[Sequence[int]],
        groups: Iterable[int],
        ids: Iterable[str] | None = None,
    ) -> "GroupedInstance":
        """Build from 0/1 vectors, dropping rows repeated within the same group."""
        rows = [tuple(r) for r in rows]
        groups = list(groups)
        ids = [str(i + 1) for i in range(len(rows))] if ids is None else [str(i) for i in ids]
        masks = []
        for r in rows:
            if len(r) != len(attributes):
                raise ValueError(f"vector of length {len(r)} for {len(attributes)} attributes")
            masks.append(sum(1 << j for j, bit in enumerate(r) if bit))
        return cls._dedup(tuple(attributes), masks, groups, ids)

    @classmethod
    def _dedup(cls, attributes, masks, groups, ids) -> "GroupedInstance":
        seen: set[tuple[int, int]] = set()
        keep, notes = [], []
        for i, (m, g) in enumerate(zip(masks, groups)):
            if (m, g) in seen:
                notes.append(f"observation {ids[i]} duplicates an earlier row of group {g}; dropped")
                continue
            seen.add((m, g))
            keep.append(i)
        for note in notes:
            warnings.warn(note, stacklevel=3)
        return cls(
            attributes,
            tuple(masks[i] for i in keep),
            tuple(groups[i] for i in keep),
            tuple(ids[i] for i in keep),
            len(notes),
            tuple(notes),
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def n1(self) -> int:
        return self.groups.count(1)

    @property
    def n2(self) -> int:
        return self.groups.count(2)

    @property
    def positive(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g == 1]

    @property
    def negative(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g == 2]

    def value(self, obs: int, attr: int) -> int:
        return (self.rows[obs] >> attr) & 1

    def vector(self, obs: int) -> tuple[int, ...]:
        return tuple(self.value(obs, j) for j in range(len(self.attributes)))


def running_example() -> GroupedInstance:
    """The seven-observation, eight-attribute example instance."""
    return load_instance(io.StringIO(RUNNING_EXAMPLE_CSV))


# ---------------------------------------------------------------------------
# File format


def _group_map(labels: list[str], positive: str | None) -> dict[str, int]:
    distinct = sorted(set(labels))
    if positive is not None:
        if positive not in distinct:
            raise InstanceFormatError(f"group {positive!r} does not occur in the file")
        if len(distinct) < 2:
            raise InstanceFormatError("fewer than two groups in the file")
        return {lab: 1 if lab == positive else 2 for lab in distinct}
    if len(distinct) != 2:
        raise InstanceFormatError(
            f"expected exactly two group labels, found {len(distinct)}: {', '.join(distinct)}"
        )
    for pos, neg in (("1", "2"), ("P", "N"), ("p", "n")):
        if set(distinct) == {pos, neg}:
            return {pos: 1, neg: 2}
    raise InstanceFormatError(
        f"group labels {distinct} are not {{1,2}} or {{P,N}}; pick the positive group explicitly"
    )


def load_instance(
    source: str | os.PathLike | TextIO, *, positive_group: str | None = None
) -> GroupedInstance:
    """Read a comma- or tab-separated instance with a ``group`` column.

    ``positive_group`` selects one label as group 1 and merges every other
    label into group 2, which is how files with more than two groups are
    accepted.  Rows and columns in error messages are 1-based.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_instance(fh, positive_group=positive_group)
    text = source.read()
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise InstanceFormatError("empty file", row=1)
    delimiter = "\t" if "\t" in lines[0] else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    header = [h.strip() for h in next(reader)]
    if GROUP_COLUMN not in header:
        raise InstanceFormatError(f"missing {GROUP_COLUMN!r} column", row=1)
    if len(set(header)) != len(header):
        raise InstanceFormatError("duplicate column names", row=1)
    g_col = header.index(GROUP_COLUMN)
    id_col = header.index(ID_COLUMN) if ID_COLUMN in header else None
    attr_cols = [j for j, h in enumerate(header) if j not in (g_col, id_col)]
    if not attr_cols:
        raise InstanceFormatError("no attribute columns", row=1)

    masks, labels, ids = [], [], []
    for r, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise InstanceFormatError(f"expected {len(header)} cells, found {len(cells)}", row=r)
        mask = 0
        for bit, j in enumerate(attr_cols):
            cell = cells[j].strip()
            if cell == "1":
                mask |= 1 << bit
            elif cell != "0":
                raise InstanceFormatError(f"non-Boolean cell {cell!r}", row=r, column=j + 1)
        label = cells[g_col].strip()
        if not label:
            raise InstanceFormatError("empty group label", row=r, column=g_col + 1)
        masks.append(mask)
        labels.append(label)
        ids.append(cells[id_col].strip() if id_col is not None else str(len(ids) + 1))
    mapping = _group_map(labels, positive_group)
    groups = [mapping[lab] for lab in labels]
    attributes = tuple(header[j] for j in attr_cols)
    return GroupedInstance._dedup(attributes, masks, groups, ids)


def write_instance(inst: GroupedInstance, stream: TextIO, delimiter: str = ",") -> None:
    """Write the instance in the format :func:`load_instance` reads."""
    writer = csv.writer(stream, delimiter=delimiter, lineterminator="\n")
    writer.writerow([ID_COLUMN, GROUP_COLUMN, *inst.attributes])
    for i in range(inst.n):
        writer.writerow([inst.ids[i], inst.groups[i], *inst.vector(i)])


# ---------------------------------------------------------------------------
# Projections and solutions


def resolve_subset(inst: GroupedInstance, subset: Iterable[str | int]) -> tuple[int, ...]:
    """Attribute names or indices to a sorted tuple of distinct indices."""
    out = set()
    for item in subset:
        if isinstance(item, str) and item in inst.attributes:
            out.add(inst.attributes.index(item))
        elif isinstance(item, str) and not item.isdigit():
            raise ProfileError(f"unknown attribute {item!r}")
        else:
            j = int(item)
            if not 0 <= j < len(inst.attributes):
                raise ProfileError(f"attribute index {j} out of range")
            out.add(j)
    return tuple(sorted(out))


def _mask(inst: GroupedInstance, subset: Iterable[str | int]) -> int:
    return sum(1 << j for j in resolve_subset(inst, subset))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple[int, int] | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_satisfiable(inst: GroupedInstance) -> Verdict:
    """Satisfiable iff no positive row equals a negative row.

    The witness is a (positive, negative) pair of observation indices.
    An empty group is vacuously satisfiable but flagged in ``note``.
    """
    first_pos: dict[int, int] = {}
    for i in inst.positive:
        first_pos.setdefault(inst.rows[i], i)
    for j in inst.negative:
        if inst.rows[j] in first_pos:
            return Verdict(False, (first_pos[inst.rows[j]], j))
    note = "a group is empty" if not inst.n1 or not inst.n2 else ""
    return Verdict(True, None, note)


@dataclass(frozen=True)
class ProjectionSummary:
    k: int
    k1: int
    k2: int

    @property
    def intersection_size(self) -> int:
        return self.k1 + self.k2 - self.k


def project(inst: GroupedInstance, subset: Iterable[str | int]) -> ProjectionSummary:
    """Numbers of distinct restricted rows, overall and per group."""
    m = _mask(inst, subset)
    p = {inst.rows[i] & m for i in inst.positive}
    q = {inst.rows[i] & m for i in inst.negative}
    return ProjectionSummary(len(p | q), len(p), len(q))


def project_instance(inst: GroupedInstance, subset: Iterable[str | int]) -> GroupedInstance:
    """The instance restricted to the given attributes (duplicates dropped)."""
    cols = resolve_subset(inst, subset)
    rows = [[inst.value(i, j) for j in cols] for i in range(inst.n)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return GroupedInstance.from_rows(
            [inst.attributes[j] for j in cols], rows, inst.groups, inst.ids
        )


def is_solution(inst: GroupedInstance, subset: Iterable[str | int]) -> Verdict:
    """True iff no positive and negative observation agree on every chosen attribute."""
    m = _mask(inst, subset)
    first_pos: dict[int, int] = {}
    for i in inst.positive:
        first_pos.setdefault(inst.rows[i] & m, i)
    for j in inst.negative:
        hit = first_pos.get(inst.rows[j] & m)
        if hit is not None:
            return Verdict(False, (hit, j))
    return Verdict(True)


def is_non_dominated(inst: GroupedInstance, subset: Iterable[str | int]) -> bool:
    """True iff dropping any single attribute breaks the solution."""
    cols = resolve_subset(inst, subset)
    if not is_solution(inst, cols):
        raise NotASolutionError(f"attributes {cols} do not separate the groups")
    return all(not is_solution(inst, [c for c in cols if c != drop]) for drop in cols)


def _difference_sets(inst: GroupedInstance) -> list[int]:
    """Inclusion-minimal masks of attributes on which a positive and a negative row differ."""
    diffs = {inst.rows[i] ^ inst.rows[j] for i in inst.positive for j in inst.negative}
    if 0 in diffs:
        raise UnsatisfiableInstanceError(check_satisfiable(inst).witness)
    ordered = sorted(diffs, key=lambda d: (d.bit_count(), d))
    minimal: list[int] = []
    for d in ordered:
        if not any(m & d == m for m in minimal):
            minimal.append(d)
    return minimal


@dataclass
class SolutionSearch:
    solutions: list[tuple[int, ...]] = field(default_factory=list)
    size: int | None = None
    optimal: bool = False
    nodes: int = 0

    def names(self, inst: GroupedInstance) -> list[tuple[str, ...]]:
        return [tuple(inst.attributes[j] for j in s) for s in self.solutions]


def find_minimal_solutions(
    inst: GroupedInstance, *, max_levels: int | None = None, max_nodes: int | None = None
) -> SolutionSearch:
    """All minimum-cardinality solutions, by increasing size then lexicographically.

    A subset separates the groups iff it meets every positive/negative
    difference set, so each level is a depth-first search over increasing
    attribute indices that abandons a branch as soon as some unmet
    difference set has no attribute left to the right of the last choice.
    ``optimal`` is False when a budget stopped the search before a level
    finished.
    """
    check = check_satisfiable(inst)
    if not check:
        raise UnsatisfiableInstanceError(check.witness)
    result = SolutionSearch()
    if not inst.n1 or not inst.n2:
        result.solutions, result.size, result.optimal = [()], 0, True
        return result
    diffs = _difference_sets(inst)
    n_attrs = len(inst.attributes)
    top = n_attrs if max_levels is None else min(max_levels, n_attrs)
    budget = [max_nodes]

    def dfs(chosen: list[int], start: int, slots: int, unmet: list[int]) -> bool:
        result.nodes += 1
        if budget[0] is not None:
            budget[0] -= 1
            if budget[0] < 0:
                return False
        if not unmet:
            result.solutions.append(tuple(chosen))
            return True
        if slots == 0:
            return True
        above = ~((1 << start) - 1)
        if any(not d & above for d in unmet):
            return True
        for j in range(start, n_attrs - slots + 1):
            bit = 1 << j
            chosen.append(j)
            ok = dfs(chosen, j + 1, slots - 1, [d for d in unmet if not d & bit])
            chosen.pop()
            if not ok:
                return False
        return True

    for size in range(1, top + 1):
        if not dfs([], 0, size, diffs):
            return result
        if result.solutions:
            result.size = size
            result.optimal = True
            return result
    return result


# ---------------------------------------------------------------------------
# Patterns


@dataclass(frozen=True)
class Pattern:
    """A term (positive and negative literals) true on no negative observation."""

    pos: frozenset[int]
    neg: frozenset[int]
    cover: frozenset[int]
    prime: bool = False

    @property
    def degree(self) -> int:
        return len(self.pos) + len(self.neg)

    def describe(self, inst: GroupedInstance) -> str:
        lits = [(j, inst.attributes[j]) for j in self.pos] + [
            (j, "~" + inst.attributes[j]) for j in self.neg
        ]
        return " & ".join(name for _, name in sorted(lits)) or "true"

    def cover_ids(self, inst: GroupedInstance) -> list[str]:
        return [inst.ids[i] for i in sorted(self.cover)]

    def satisfied_by(self, row: int) -> bool:
        return all(row >> j & 1 for j in self.pos) and not any(row >> j & 1 for j in self.neg)


def _term_key(support: int, values: int) -> tuple[int, int]:
    return support, values & support


def enumerate_patterns(
    inst: GroupedInstance, subset: Iterable[str | int], *, prime_only: bool = False
) -> list[Pattern]:
    """Every pattern whose variables lie in the subset, with its cover.

    A pattern is satisfied by some positive row, so it is that row
    restricted to a subset of the variables; only those candidates are
    generated.  Sorted by degree, then literals.
    """
    cols = resolve_subset(inst, subset)
    if len(cols) > MAX_PATTERN_ATTRS:
        raise BudgetError(f"pattern enumeration limited to {MAX_PATTERN_ATTRS} attributes")
    neg_rows = [inst.rows[j] for j in inst.negative]
    pos = inst.positive
    supports = [
        sum(1 << cols[b] for b in range(len(cols)) if s >> b & 1) for s in range(1 << len(cols))
    ]

    def is_pattern(support: int, values: int) -> bool:
        return all((r ^ values) & support for r in neg_rows)

    found: dict[tuple[int, int], Pattern] = {}
    for i in pos:
        row = inst.rows[i]
        for support in supports:
            key = _term_key(support, row)
            if key in found or not is_pattern(*key):
                continue
            cover = frozenset(p for p in pos if not (inst.rows[p] ^ key[1]) & support)
            prime = all(
                not is_pattern(support & ~(1 << j), key[1])
                for j in range(len(inst.attributes))
                if support >> j & 1
            )
            if prime_only and not prime:
                continue
            found[key] = Pattern(
                frozenset(j for j in cols if support >> j & 1 and key[1] >> j & 1),
                frozenset(j for j in cols if support >> j & 1 and not key[1] >> j & 1),
                cover,
                prime,
            )
    return sorted(found.values(), key=lambda p: (p.degree, sorted(p.pos | p.neg), sorted(p.pos)))


@dataclass
class CoverResult:
    patterns: list[Pattern]
    complete: bool
    exact: bool
    uncoverable: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.patterns)


def _greedy_cover(universe: int, cands: list[tuple[int, Pattern]]) -> list[int]:
    chosen, left = [], universe
    while left:
        best = max(
            range(len(cands)),
            key=lambda c: ((cands[c][0] & left).bit_count(), -cands[c][1].degree, -c),
        )
        chosen.append(best)
        left &= ~cands[best][0]
    return chosen


def _exact_cover(universe: int, cands: list[tuple[int, Pattern]], start: list[int]) -> list[int]:
    best = [list(start)]
    by_elem: dict[int, list[int]] = {}
    for c, (m, _) in enumerate(cands):
        for e in range(m.bit_length()):
            if m >> e & 1:
                by_elem.setdefault(e, []).append(c)
    biggest = max((m.bit_count() for m, _ in cands), default=1)

    def search(left: int, chosen: list[int]) -> None:
        if not left:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        # every further set covers at most ``biggest`` new elements
        need = -(-left.bit_count() // biggest)
        if len(chosen) + need >= len(best[0]):
            return
        elems = [e for e in range(left.bit_length()) if left >> e & 1]
        e = min(elems, key=lambda x: len(by_elem[x]))
        for c in sorted(by_elem[e], key=lambda c: -(cands[c][0] & left).bit_count()):
            chosen.append(c)
            search(left & ~cands[c][0], chosen)
            chosen.pop()

    search(universe, [])
    return best[0]


def min_pattern_cover(
    inst: GroupedInstance,
    subset: Iterable[str | int],
    *,
    exact_threshold: int = DEFAULT_EXACT_COVER_THRESHOLD,
) -> CoverResult:
    """Fewest patterns over the subset whose covers contain every coverable positive row.

    Prime patterns suffice since shrinking a term only enlarges its cover.
    Candidates with a cover contained in another's are dropped; an exact
    branch-and-bound runs when at most ``exact_threshold`` remain,
    otherwise a greedy cover is returned with ``exact=False``.
    """
    cols = resolve_subset(inst, subset)
    full = sum(1 << j for j in cols)
    neg = {inst.rows[j] & full for j in inst.negative}
    uncoverable = tuple(i for i in inst.positive if inst.rows[i] & full in neg)
    patterns = enumerate_patterns(inst, cols, prime_only=True)

    by_cover: dict[frozenset[int], Pattern] = {}
    for p in patterns:  # already ordered by degree then literals
        by_cover.setdefault(p.cover, p)
    covers = list(by_cover.items())
    cands = []
    for c, p in covers:
        if not any(c < other for other, _ in covers):
            cands.append((sum(1 << i for i in c), p))
    universe = 0
    for m, _ in cands:
        universe |= m
    chosen = _greedy_cover(universe, cands)
    exact = len(cands) <= exact_threshold
    if exact:
        chosen = _exact_cover(universe, cands, chosen)
    picked = sorted((cands[c][1] for c in chosen), key=lambda p: sorted(p.cover))
    return CoverResult(picked, not uncoverable, exact, uncoverable)


def size_profile(inst: GroupedInstance, subset: Iterable[str | int]) -> SizeProfile:
    """Sizes of the instance and of its projection, with the matching domain split."""
    cols = resolve_subset(inst, subset)
    s = project(inst, cols)
    spec = DomainSpec(len(cols), len(inst.attributes) - len(cols))
    return SizeProfile(inst.n, spec, inst.n1, inst.n2, s.k, s.k1, s.k2)
