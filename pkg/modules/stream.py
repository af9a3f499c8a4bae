# modules/stream.py
"""
Countable indexed hyperspaces given by a deterministic enumeration, the
greedy acceptable coloring built along that enumeration, and the audit that
checks a coloring against the bound extracted from the greedy construction.
"""
import logging
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterator, List, Optional, Sequence, Tuple

from modules.core import Coloring, FiniteIndexedHyperspace
from modules.errors import (
    EnumerationRepeatError,
    IndexOutOfRangeError,
    MalformedInputError,
    PartialColoringError,
    ProfileMissingError,
)
from modules.setsystem import SetSystem

logger = logging.getLogger(__name__)


@dataclass
class StreamHyperspace:
    """
    A countable n-indexed hyperspace a_0, a_1, a_2, ...

    `source` returns a fresh iterator over the enumeration. Class equality is
    given by `same_class(i, x, y)`, or by `class_key(i, x)` when the stream can
    name its classes (x E_i y iff the keys agree). `declared_profile` lists the
    index sets whose class intersections the stream asserts finite, with
    optional size bounds in `profile_bounds`. `exact_bounds(N)`, when given,
    returns the certificate bounds over the whole structure instead of the prefix.
    """
    n: int
    source: Callable[[], Iterator[Any]]
    same_class: Optional[Callable[[int, Any, Any], bool]] = None
    class_key: Optional[Callable[[int, Any], Hashable]] = None
    declared_profile: Optional[SetSystem] = None
    profile_bounds: Dict[FrozenSet[int], int] = field(default_factory=dict)
    name: str = "stream"
    exact_bounds: Optional[Callable[[int], Optional[List[int]]]] = None
    _cache: List[Any] = field(default_factory=list, init=False, repr=False)
    _seen: Dict[Any, int] = field(default_factory=dict, init=False, repr=False)
    _iterator: Optional[Iterator[Any]] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise MalformedInputError(f"relation count must be positive, got {self.n}")
        if self.same_class is None and self.class_key is None:
            raise MalformedInputError("a stream needs same_class or class_key")
        if self.declared_profile is None:
            self.declared_profile = SetSystem(self.n)
        if self.declared_profile.ground != self.n:
            raise MalformedInputError("declared profile must live over the relation index set")
        self.profile_bounds = {frozenset(k): int(v) for k, v in self.profile_bounds.items()}

    @property
    def full_index_set(self) -> FrozenSet[int]:
        return frozenset(range(self.n))

    def declares_total_finite(self) -> bool:
        return self.full_index_set in self.declared_profile

    def enumerate(self, k: int) -> Any:
        """a_k; the enumeration is extended and cached on demand"""
        if k < 0:
            raise IndexOutOfRangeError(f"negative enumeration index {k}")
        if self._iterator is None:
            self._iterator = iter(self.source())
        while len(self._cache) <= k:
            try:
                item = next(self._iterator)
            except StopIteration:
                raise IndexOutOfRangeError(f"{self.name} has only {len(self._cache)} elements")
            try:
                earlier = self._seen.get(item)
            except TypeError:
                earlier = None   # unhashable payloads are not checked
            else:
                if earlier is not None:
                    raise EnumerationRepeatError(f"{self.name}: a_{len(self._cache)} repeats a_{earlier} = {item!r}")
                self._seen[item] = len(self._cache)
            self._cache.append(item)
        return self._cache[k]

    def prefix(self, length: int) -> Tuple[Any, ...]:
        if length > 0:
            self.enumerate(length - 1)
        return tuple(self._cache[:length])


@dataclass(frozen=True)
class FirstOccurrenceTable:
    """rows[k][i] = least m with a_k E_i a_m, computed over a prefix"""
    rows: Tuple[Tuple[int, ...], ...]
    equivalence_violations: Tuple[Dict[str, Any], ...] = ()

    def __len__(self):
        return len(self.rows)


def first_occurrence_table(stream: StreamHyperspace, length: int) -> FirstOccurrenceTable:
    """Incremental first-occurrence tables, one per relation"""
    items = stream.prefix(length)
    columns: List[List[int]] = []
    violations: List[Dict[str, Any]] = []
    for i in range(stream.n):
        column = []
        if stream.class_key is not None:
            first: Dict[Hashable, int] = {}
            for k, x in enumerate(items):
                column.append(first.setdefault(stream.class_key(i, x), k))
        else:
            reps: List[int] = []
            for k, x in enumerate(items):
                if not stream.same_class(i, x, x):
                    violations.append({"kind": "equivalence", "axiom": "reflexive", "i": i, "a": k})
                matches = [r for r in reps if stream.same_class(i, x, items[r])]
                for r in matches:
                    if not stream.same_class(i, items[r], x):
                        violations.append({"kind": "equivalence", "axiom": "symmetric", "i": i, "a": k, "b": r})
                if len(matches) > 1:
                    violations.append({"kind": "equivalence", "axiom": "transitive", "i": i, "a": k,
                                       "b": matches[0], "c": matches[1]})
                if matches:
                    column.append(matches[0])
                else:
                    reps.append(k)
                    column.append(k)
        columns.append(column)
    rows = tuple(tuple(columns[i][k] for i in range(stream.n)) for k in range(len(items)))
    if violations:
        logger.warning(f"{stream.name}: {len(violations)} equivalence-axiom violations in a prefix of {length}")
    return FirstOccurrenceTable(rows, tuple(violations))


# === Colorings ===

def _least_argmax(row: Sequence[int]) -> int:
    best = 0
    for j in range(1, len(row)):
        if row[j] > row[best]:
            best = j
    return best


def greedy_coloring(stream: StreamHyperspace, length: int) -> Coloring:
    """
    chi(a_k) = least j maximizing m_j, where m_i is the least m with a_k E_i a_m.

    Requires the declared profile to contain the full index set, i.e. the
    total intersections [a]_0 & ... & [a]_{n-1} are finite.
    """
    if not stream.declares_total_finite():
        raise ProfileMissingError(f"{stream.name}: declared profile lacks the full index set {{0..{stream.n - 1}}}")
    table = first_occurrence_table(stream, length)
    return Coloring(stream.n, tuple(_least_argmax(row) for row in table.rows))


def constant_coloring(stream: StreamHyperspace, length: int, color: int = 0) -> Coloring:
    stream.prefix(length)
    return Coloring(stream.n, (color,) * length)


def cyclic_coloring(stream: StreamHyperspace, length: int) -> Coloring:
    stream.prefix(length)
    return Coloring(stream.n, tuple(k % stream.n for k in range(length)))


COLORING_STRATEGIES: Dict[str, Callable[[StreamHyperspace, int], Coloring]] = {
    "greedy": greedy_coloring,
    "constant": constant_coloring,
    "cyclic": cyclic_coloring,
}


# === Certificate ===

def _certificate_bounds(table: FirstOccurrenceTable) -> List[int]:
    """
    bounds[k] = |union over r in [0..k]^n of the intersection of [a_{r_t}]_t|.

    x lies in that union iff every m_t(x) <= k, so the bound counts the prefix
    elements whose largest first-occurrence index is at most k.
    """
    length = len(table)
    histogram = [0] * (length + 1)
    for row in table.rows:
        histogram[max(row)] += 1
    bounds, running = [], 0
    for k in range(length):
        running += histogram[k]
        bounds.append(running)
    return bounds


def _bounds_for(stream: StreamHyperspace, table: FirstOccurrenceTable) -> Tuple[List[int], bool]:
    """Certificate bounds and whether they only see the prefix"""
    if stream.exact_bounds is not None:
        exact = stream.exact_bounds(len(table))
        if exact is not None:
            return exact, False
    return _certificate_bounds(table), True


def certificate_bound(stream: StreamHyperspace, k: int, i: int, length: int) -> int:
    """
    Upper bound on |{x in [a_k]_i : chi(x) = i}| for the greedy coloring.
    Exact when the stream supplies `exact_bounds`, otherwise evaluated within
    the prefix of the given length. The bound does not depend on i.
    """
    if not 0 <= k < length:
        raise IndexOutOfRangeError(f"k = {k} outside the prefix of length {length}")
    if not 0 <= i < stream.n:
        raise IndexOutOfRangeError(f"relation {i} outside 0..{stream.n - 1}")
    table = first_occurrence_table(stream, length)
    bounds, _ = _bounds_for(stream, table)
    return bounds[k]


# === Audit ===

@dataclass(frozen=True)
class AuditEntry:
    a: int
    i: int
    count: int
    bound: int


@dataclass(frozen=True)
class AuditReport:
    length: int
    counts: Tuple[AuditEntry, ...] = ()
    violations: Tuple[Dict[str, Any], ...] = ()
    prefix_relative: bool = True

    @property
    def max_count(self) -> int:
        return max((e.count for e in self.counts), default=0)

    def violations_of(self, kind: str) -> List[Dict[str, Any]]:
        return [v for v in self.violations if v["kind"] == kind]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "N": self.length,
            "violations": list(self.violations),
            "counts": [{"a": e.a, "i": e.i, "count": e.count, "bound": e.bound} for e in self.counts],
            "prefix_relative": self.prefix_relative,
        }


def _relation_counts(rows: Tuple[Tuple[int, ...], ...], colors: Tuple[int, ...], i: int) -> List[int]:
    """count[k] = |{x in prefix : x E_i a_k and chi(x) = i}|"""
    per_class = Counter(row[i] for row, c in zip(rows, colors) if c == i)
    return [per_class.get(row[i], 0) for row in rows]


def _profile_violations(stream: StreamHyperspace, table: FirstOccurrenceTable) -> List[Dict[str, Any]]:
    found = []
    for member in stream.declared_profile.members:
        bound = stream.profile_bounds.get(member)
        if bound is None:
            continue
        indices = sorted(member)
        groups: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
        for k, row in enumerate(table.rows):
            groups[tuple(row[i] for i in indices)].append(k)
        for group in groups.values():
            if len(group) > bound:
                found.append({"kind": "profile", "I": indices, "a": group[0], "size": len(group), "bound": bound})
    found.sort(key=lambda v: (v["a"], v["I"]))
    return found


def acceptability_audit(stream: StreamHyperspace, coloring: Coloring, length: int, workers: int = 1) -> AuditReport:
    """
    Count, for every a_k in the prefix and every i, the color-i elements of
    [a_k]_i, compare each count with the certificate bound, and check the
    declared profile on the prefix.
    """
    if length == 0:
        return AuditReport(0)
    if len(coloring) < length:
        raise PartialColoringError(f"coloring covers {len(coloring)} of the {length} prefix elements")
    if coloring.n != stream.n:
        raise PartialColoringError(f"coloring uses {coloring.n} colors, stream has {stream.n} relations")
    colors = coloring.assignment[:length]
    table = first_occurrence_table(stream, length)
    bounds, prefix_relative = _bounds_for(stream, table)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_relation = list(pool.map(lambda i: _relation_counts(table.rows, colors, i), range(stream.n)))
    else:
        per_relation = [_relation_counts(table.rows, colors, i) for i in range(stream.n)]

    entries = []
    violations: List[Dict[str, Any]] = []
    for k in range(length):
        for i in range(stream.n):
            count = per_relation[i][k]
            entries.append(AuditEntry(k, i, count, bounds[k]))
            if count > bounds[k]:
                violations.append({"kind": "certificate", "a": k, "i": i, "count": count, "bound": bounds[k]})
    violations.extend(_profile_violations(stream, table))
    violations.extend(table.equivalence_violations)
    if violations:
        logger.info(f"{stream.name}: audit of N={length} found {len(violations)} violations")
    return AuditReport(length, tuple(entries), tuple(violations), prefix_relative)


# === Stream constructors ===

def _naturals() -> Iterator[int]:
    k = 0
    while True:
        yield k
        k += 1


def single_class_stream(n: int, declared_bound: int) -> StreamHyperspace:
    """All of N in one class for every relation, wrongly declared to have bounded total intersections"""
    full = frozenset(range(n))
    return StreamHyperspace(
        n=n,
        source=_naturals,
        class_key=lambda i, x: 0,
        declared_profile=SetSystem(n, (full,)),
        profile_bounds={full: declared_bound},
        name=f"single-class(n={n})",
    )


def stream_from_hyperspace(space: FiniteIndexedHyperspace, profile: Optional[SetSystem] = None,
                           bound: Optional[int] = None) -> StreamHyperspace:
    """Enumerate a finite structure in index order"""
    profile = profile or SetSystem(space.n, (frozenset(range(space.n)),))
    bounds = {} if bound is None else {m: bound for m in profile.members}
    return StreamHyperspace(
        n=space.n,
        source=lambda: iter(range(space.size)),
        class_key=lambda i, a: space.labels[i][a],
        declared_profile=profile,
        profile_bounds=bounds,
        name="finite",
    )


def prefix_hyperspace(stream: StreamHyperspace, length: int) -> FiniteIndexedHyperspace:
    """The induced finite structure on a_0..a_{N-1}"""
    table = first_occurrence_table(stream, length)
    labels = tuple(tuple(row[i] for row in table.rows) for i in range(stream.n))
    return FiniteIndexedHyperspace(stream.n, length, labels, stream.prefix(length))
