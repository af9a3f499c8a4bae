# modules/core.py
"""
Finite indexed hyperspaces: a carrier {0..size-1} with n equivalence
relations stored as dense class-label arrays.
"""
import itertools
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from typing_extensions import Self

from modules.errors import (
    GroundSetMismatchError,
    IndexOutOfRangeError,
    MalformedInputError,
    PartialColoringError,
    SearchTooLargeError,
)
from modules.setsystem import SetSystem, complete_system
from modules.settings import get_settings

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def canonical_labels(raw: Sequence[Any]) -> Tuple[int, ...]:
    """Renumber class ids in first-occurrence order"""
    seen: Dict[Any, int] = {}
    out = []
    for label in raw:
        if label not in seen:
            seen[label] = len(seen)
        out.append(seen[label])
    return tuple(out)


@dataclass(frozen=True)
class FiniteIndexedHyperspace:
    """(A; E_0..E_{n-1}) with A = {0..size-1}; labels[i][a] is the E_i-class of a"""
    n: int
    size: int
    labels: Tuple[Tuple[int, ...], ...]
    payloads: Optional[Tuple[Any, ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise MalformedInputError(f"relation count must be positive, got {self.n}")
        if self.size < 0:
            raise MalformedInputError(f"size must be non-negative, got {self.size}")
        if len(self.labels) != self.n:
            raise MalformedInputError(f"expected {self.n} label arrays, got {len(self.labels)}")
        for i, row in enumerate(self.labels):
            if len(row) != self.size:
                raise MalformedInputError(f"labels[{i}] has {len(row)} entries, expected {self.size}")
        object.__setattr__(self, "labels", tuple(canonical_labels(row) for row in self.labels))
        if self.payloads is not None:
            if len(self.payloads) != self.size:
                raise MalformedInputError("payload table does not match the carrier size")
            object.__setattr__(self, "payloads", tuple(self.payloads))

    @classmethod
    def from_key_function(cls, n: int, elements: Sequence[Any], key) -> Self:
        """Build from payloads and key(i, x): x E_i y iff key(i, x) == key(i, y)"""
        labels = tuple(tuple(key(i, x) for x in elements) for i in range(n))
        return cls(n, len(elements), labels, tuple(elements))

    @cached_property
    def classes(self) -> Tuple[Tuple[FrozenSet[int], ...], ...]:
        """classes[i][c] is the set of elements with label c under E_i"""
        out = []
        for row in self.labels:
            groups: Dict[int, List[int]] = defaultdict(list)
            for a, c in enumerate(row):
                groups[c].append(a)
            out.append(tuple(frozenset(groups[c]) for c in range(len(groups))))
        return tuple(out)

    @cached_property
    def signatures(self) -> Tuple[Tuple[int, ...], ...]:
        """Per-element class sizes, the pruning signature of the morphism search"""
        sizes = [[len(cls) for cls in rel] for rel in self.classes]
        return tuple(tuple(sizes[i][self.labels[i][a]] for i in range(self.n)) for a in range(self.size))

    def same(self, i: int, x: int, y: int) -> bool:
        return self.labels[i][x] == self.labels[i][y]

    def _check(self, a: int, i: Optional[int] = None):
        if not 0 <= a < self.size:
            raise IndexOutOfRangeError(f"element {a} outside 0..{self.size - 1}")
        if i is not None and not 0 <= i < self.n:
            raise IndexOutOfRangeError(f"relation {i} outside 0..{self.n - 1}")


@dataclass(frozen=True)
class Coloring:
    """chi: A -> n"""
    n: int
    assignment: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        bad = [(a, c) for a, c in enumerate(self.assignment) if not isinstance(c, int) or not 0 <= c < self.n]
        if bad:
            a, c = bad[0]
            raise PartialColoringError(f"element {a} has color {c!r}, expected 0..{self.n - 1}")

    def __getitem__(self, a: int) -> int:
        return self.assignment[a]

    def __len__(self):
        return len(self.assignment)

    def restrict(self, length: int) -> Self:
        return Coloring(self.n, self.assignment[:length])


@dataclass(frozen=True)
class AcceptabilityReport:
    acceptable: bool
    max_count: int
    witness: Optional[Tuple[int, int]] = None   # (a, i) attaining max_count
    counts: Tuple[Tuple[int, ...], ...] = ()    # counts[a][i] = |{x in [a]_i : chi(x) = i}|


# === Class queries ===

def class_of(space: FiniteIndexedHyperspace, a: int, i: int) -> FrozenSet[int]:
    """[a]_i"""
    space._check(a, i)
    return space.classes[i][space.labels[i][a]]


def total_intersection(space: FiniteIndexedHyperspace, a: int) -> FrozenSet[int]:
    """[a]_0 & [a]_1 & ... & [a]_{n-1}"""
    space._check(a)
    return intersection_over(space, a, range(space.n))


def intersection_over(space: FiniteIndexedHyperspace, a: int, indices: Iterable[int]) -> FrozenSet[int]:
    """Intersection of [a]_i over the given relation indices; the whole carrier when empty"""
    space._check(a)
    result = frozenset(range(space.size))
    for i in indices:
        space._check(a, i)
        result &= space.classes[i][space.labels[i][a]]
    return result


def class_sizes(space: FiniteIndexedHyperspace, a: int) -> Tuple[int, ...]:
    space._check(a)
    return space.signatures[a]


def _intersection_sizes(space: FiniteIndexedHyperspace, indices: Sequence[int]) -> List[int]:
    """Size of the I-intersection through each element, by grouping on label tuples"""
    keys = [tuple(space.labels[i][a] for i in indices) for a in range(space.size)]
    counts = Counter(keys)
    return [counts[k] for k in keys]


# === Structural checks ===

def is_grid_for(space: FiniteIndexedHyperspace, system: SetSystem, bound: int) -> bool:
    """Every intersection over a member of the system has at most `bound` elements"""
    if system.ground != space.n:
        raise GroundSetMismatchError(f"set system over {system.ground} indices, structure has {space.n} relations")
    for member in system.members:
        sizes = _intersection_sizes(space, sorted(member))
        if sizes and max(sizes) > bound:
            logger.debug(f"grid check fails on {sorted(member)}: intersection of size {max(sizes)} > {bound}")
            return False
    return True


def is_n_grid(space: FiniteIndexedHyperspace, bound: int) -> bool:
    """Any two distinct classes through a point meet in at most `bound` elements"""
    return is_grid_for(space, complete_system(space.n, 2), bound)


def intersection_profile(space: FiniteIndexedHyperspace, a: int, bound: int) -> SetSystem:
    """Finite-scale I(a): index sets whose intersection through a has at most `bound` elements"""
    space._check(a)
    members = []
    for r in range(space.n + 1):
        for indices in itertools.combinations(range(space.n), r):
            if len(intersection_over(space, a, indices)) <= bound:
                members.append(indices)
    return SetSystem.of(space.n, members)


def hyperspace_profile(space: FiniteIndexedHyperspace, bound: int) -> SetSystem:
    """Finite-scale I(A): index sets whose intersections are all of size <= bound"""
    members = []
    for r in range(space.n + 1):
        for indices in itertools.combinations(range(space.n), r):
            sizes = _intersection_sizes(space, indices)
            if not sizes or max(sizes) <= bound:
                members.append(indices)
    return SetSystem.of(space.n, members)


def fine_to_depth(space: FiniteIndexedHyperspace, bound: int, d: int, max_ground: Optional[int] = None) -> bool:
    """
    bound-fine to depth d: for every a and every permutation pi of the
    relation indices there are 0 = i_0 <= ... <= i_d < n such that each window
    intersection of [a]_{pi(j)}, i_k <= j <= i_{k+1}, has at most `bound`
    elements.

    Windows only shrink their intersection as they grow, so the least
    admissible end of each window is taken.
    """
    n = space.n
    if d < 0:
        raise MalformedInputError("d must be non-negative")
    if bound < 0:
        raise MalformedInputError("bound must be non-negative")
    max_ground = get_settings().dandy_max_ground if max_ground is None else max_ground
    if n > max_ground:
        raise SearchTooLargeError(f"fine_to_depth enumerates n! permutations; {n} relations > {max_ground}")
    for a in range(space.size):
        small: Dict[FrozenSet[int], bool] = {}

        def is_small(window: FrozenSet[int]) -> bool:
            if window not in small:
                small[window] = len(intersection_over(space, a, window)) <= bound
            return small[window]

        for perm in itertools.permutations(range(n)):
            start = 0
            for _ in range(d):
                end = next((e for e in range(start, n) if is_small(frozenset(perm[start:e + 1]))), None)
                if end is None:
                    logger.debug(f"element {a} is not {bound}-fine to depth {d} along {perm}")
                    return False
                start = end
    return True


def restrict_to(space: FiniteIndexedHyperspace, elements: Sequence[int]) -> FiniteIndexedHyperspace:
    """The induced substructure on the listed elements (in the listed order)"""
    for a in elements:
        space._check(a)
    if len(set(elements)) != len(elements):
        raise MalformedInputError("restriction lists an element twice")
    labels = tuple(tuple(row[a] for a in elements) for row in space.labels)
    payloads = None if space.payloads is None else tuple(space.payloads[a] for a in elements)
    return FiniteIndexedHyperspace(space.n, len(elements), labels, payloads)


def is_acceptable(space: FiniteIndexedHyperspace, coloring: Coloring) -> AcceptabilityReport:
    """
    On a finite carrier every coloring is acceptable; the report carries the
    largest |{x in [a]_i : chi(x) = i}| as a diagnostic.
    """
    if len(coloring) != space.size:
        raise PartialColoringError(f"coloring covers {len(coloring)} of {space.size} elements")
    if coloring.n != space.n:
        raise PartialColoringError(f"coloring uses {coloring.n} colors, structure has {space.n} relations")
    per_relation = []
    for i in range(space.n):
        per_class = Counter(space.labels[i][x] for x in range(space.size) if coloring[x] == i)
        per_relation.append([per_class.get(space.labels[i][a], 0) for a in range(space.size)])
    counts = tuple(tuple(per_relation[i][a] for i in range(space.n)) for a in range(space.size))
    best, witness = 0, None
    for a, row in enumerate(counts):
        for i, count in enumerate(row):
            if count > best:
                best, witness = count, (a, i)
    return AcceptabilityReport(True, best, witness, counts)


# === JSON ===

def hyperspace_to_dict(space: FiniteIndexedHyperspace) -> Dict[str, Any]:
    return {"n": space.n, "size": space.size, "labels": [list(row) for row in space.labels]}


def hyperspace_from_dict(data: Dict[str, Any]) -> FiniteIndexedHyperspace:
    try:
        n, size, labels = int(data["n"]), int(data["size"]), data["labels"]
        rows = tuple(tuple(int(c) for c in row) for row in labels)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInputError(f"bad hyperspace document: {e}")
    return FiniteIndexedHyperspace(n, size, rows)


def load_hyperspace(path: Union[str, Path]) -> FiniteIndexedHyperspace:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedInputError(f"cannot read hyperspace {path}: {e}")
    return hyperspace_from_dict(data)


def save_hyperspace(space: FiniteIndexedHyperspace, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(hyperspace_to_dict(space), f, indent=2)
        f.write("\n")


def coloring_to_dict(coloring: Coloring) -> Dict[str, Any]:
    return {"n": coloring.n, "colors": list(coloring.assignment)}


def coloring_from_dict(data: Dict[str, Any]) -> Coloring:
    try:
        return Coloring(int(data["n"]), tuple(int(c) for c in data["colors"]))
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInputError(f"bad coloring document: {e}")
