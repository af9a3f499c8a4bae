# modules/setsystem.py
"""
Set systems over a ground set {0..n-1} and exact solvers for their
invariants: transversals, transversal number, depth, the system induced by
a tuple of sets, restriction and dandy-depth.

Members are handled internally as int bitmasks (bit j <=> element j).
"""
import itertools
import logging
from dataclasses import dataclass
from functools import total_ordering
from pathlib import Path
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from typing_extensions import Self

from modules.errors import MalformedInputError, SearchTooLargeError

logger = logging.getLogger(__name__)

# depth() builds a table over all subsets of the ground set
MAX_TABLE_GROUND = 22


@total_ordering
@dataclass(frozen=True)
class ExtendedNat:
    """A natural number or INFINITY (value None)"""
    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and self.value < 0:
            raise ValueError("ExtendedNat cannot be negative")

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @classmethod
    def of(cls, value) -> "ExtendedNat":
        if isinstance(value, ExtendedNat):
            return value
        return cls(int(value))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, ExtendedNat):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        if isinstance(other, int):
            return self.value is not None and self.value < other
        if not isinstance(other, ExtendedNat):
            return NotImplemented
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __sub__(self, k: int) -> "ExtendedNat":
        # truncated subtraction; INFINITY - k = INFINITY
        if self.value is None:
            return self
        return ExtendedNat(max(0, self.value - k))

    def __add__(self, k: int) -> "ExtendedNat":
        if self.value is None:
            return self
        return ExtendedNat(self.value + k)

    def __int__(self):
        if self.value is None:
            raise OverflowError("INFINITY has no integer value")
        return self.value

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def __repr__(self):
        return "INFINITY" if self.value is None else f"ExtendedNat({self.value})"


INFINITY = ExtendedNat(None)


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def from_mask(mask: int) -> FrozenSet[int]:
    return frozenset(j for j in range(mask.bit_length()) if mask >> j & 1)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _member_key(member: FrozenSet[int]):
    return (len(member), tuple(sorted(member)))


@dataclass(frozen=True)
class SetSystem:
    """A deduplicated family of subsets of {0..ground-1}, kept in canonical order"""
    ground: int
    members: Tuple[FrozenSet[int], ...] = ()

    def __post_init__(self):
        if self.ground < 0:
            raise MalformedInputError(f"ground must be non-negative, got {self.ground}")
        for member in self.members:
            bad = [e for e in member if not 0 <= e < self.ground]
            if bad:
                raise MalformedInputError(f"member {sorted(member)} leaves the ground set {{0..{self.ground - 1}}}")
        unique = sorted(set(frozenset(m) for m in self.members), key=_member_key)
        object.__setattr__(self, "members", tuple(unique))

    @classmethod
    def of(cls, ground: int, members: Iterable[Iterable[int]] = ()) -> Self:
        return cls(ground, tuple(frozenset(m) for m in members))

    @classmethod
    def from_masks(cls, ground: int, masks: Iterable[int]) -> Self:
        return cls(ground, tuple(from_mask(m) for m in masks))

    @property
    def masks(self) -> Tuple[int, ...]:
        return tuple(to_mask(m) for m in self.members)

    @property
    def ground_mask(self) -> int:
        return (1 << self.ground) - 1

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, member):
        return frozenset(member) in set(self.members)

    def as_lists(self) -> List[List[int]]:
        return [sorted(m) for m in self.members]


@dataclass(frozen=True)
class SetTuple:
    """An n-tuple <S_0..S_{n-1}> of subsets of {0..m-1}"""
    m: int
    sets: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if self.m < 0:
            raise MalformedInputError(f"m must be non-negative, got {self.m}")
        sets = tuple(frozenset(s) for s in self.sets)
        for i, s in enumerate(sets):
            if any(not 0 <= e < self.m for e in s):
                raise MalformedInputError(f"S_{i} = {sorted(s)} is not a subset of {{0..{self.m - 1}}}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def of(cls, m: int, sets: Iterable[Iterable[int]]) -> Self:
        return cls(m, tuple(frozenset(s) for s in sets))

    @classmethod
    def singletons(cls, n: int) -> Self:
        """<{0},{1},...,{n-1}>, the tuple of the n-cube"""
        return cls(n, tuple(frozenset([i]) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.sets)

    @property
    def masks(self) -> Tuple[int, ...]:
        return tuple(to_mask(s) for s in self.sets)

    def as_family(self) -> SetSystem:
        return SetSystem(self.m, self.sets)

    def as_lists(self) -> List[List[int]]:
        return [sorted(s) for s in self.sets]

    def __str__(self):
        inner = ",".join("{" + ",".join(map(str, sorted(s))) + "}" for s in self.sets)
        return f"<{inner}>"


class Restriction(NamedTuple):
    system: SetSystem
    index_map: Tuple[int, ...]   # new index -> original index


# === Transversals ===

def is_transversal(transversal: Iterable[int], system: SetSystem) -> bool:
    """True iff the set meets every member"""
    t = to_mask(transversal)
    return all(t & m for m in system.masks)


def _minimal_masks(masks: Iterable[int]) -> List[int]:
    kept: List[int] = []
    for m in sorted(set(masks), key=_popcount):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def minimal_members(system: SetSystem) -> SetSystem:
    """Drop every member that strictly contains another; tau and delta are unchanged"""
    return SetSystem.from_masks(system.ground, _minimal_masks(system.masks))


def _greedy_hitting_set(masks: Sequence[int]) -> int:
    chosen = 0
    unhit = list(masks)
    while unhit:
        counts = {}
        for m in unhit:
            bits = m
            while bits:
                low = bits & -bits
                counts[low] = counts.get(low, 0) + 1
                bits ^= low
        # most frequent element, ties to the smallest
        best = max(counts, key=lambda b: (counts[b], -b))
        chosen |= best
        unhit = [m for m in unhit if not m & best]
    return chosen


def _disjoint_lower_bound(unhit: Sequence[int]) -> int:
    """Size of a greedy packing of pairwise disjoint members"""
    used = 0
    count = 0
    for m in sorted(unhit, key=_popcount):
        if not m & used:
            used |= m
            count += 1
    return count


def _minimum_hitting_set(masks: Sequence[int]) -> int:
    """Exact minimum hitting set by branch and bound; masks must all be nonzero"""
    masks = _minimal_masks(masks)
    if not masks:
        return 0
    best = [_greedy_hitting_set(masks)]
    best_size = [_popcount(best[0])]
    logger.debug(f"hitting set: {len(masks)} members, greedy upper bound {best_size[0]}")

    def branch(chosen: int, size: int, unhit: List[int]):
        if not unhit:
            if size < best_size[0]:
                best[0], best_size[0] = chosen, size
            return
        if size + _disjoint_lower_bound(unhit) >= best_size[0]:
            return
        smallest = min(unhit, key=_popcount)
        bits = smallest
        while bits:
            low = bits & -bits
            bits ^= low
            branch(chosen | low, size + 1, [m for m in unhit if not m & low])

    branch(0, 0, masks)
    return best[0]


def transversal_number(system: SetSystem) -> ExtendedNat:
    """tau: least size of a transversal; INFINITY iff the empty set is a member"""
    masks = system.masks
    if any(m == 0 for m in masks):
        return INFINITY
    return ExtendedNat(_popcount(_minimum_hitting_set(masks)))


def tuple_transversal_number(stuple: SetTuple) -> ExtendedNat:
    """tau of the family {S_0..S_{n-1}} over ground m"""
    return transversal_number(stuple.as_family())


def minimum_transversal(system: SetSystem) -> Optional[FrozenSet[int]]:
    """Lexicographically least transversal of minimum size, None when tau is infinite"""
    tau = transversal_number(system)
    if tau.is_infinite:
        return None
    masks = system.masks
    for combo in itertools.combinations(range(system.ground), tau.value):
        t = to_mask(combo)
        if all(t & m for m in masks):
            return frozenset(combo)
    raise AssertionError("transversal number has no witness")


# === Depth ===

def _member_closure(ground: int, masks: Sequence[int]) -> bytearray:
    """table[X] == 1 iff some member is a subset of X"""
    if ground > MAX_TABLE_GROUND:
        raise SearchTooLargeError(f"ground set of size {ground} exceeds {MAX_TABLE_GROUND}")
    size = 1 << ground
    table = bytearray(size)
    for m in masks:
        table[m] = 1
    for b in range(ground):
        bit = 1 << b
        for x in range(size):
            if x & bit and table[x ^ bit]:
                table[x] = 1
    return table


def _maximal_free_sets(ground: int, masks: Sequence[int]) -> List[int]:
    """Maximal subsets of the ground set containing no member"""
    table = _member_closure(ground, masks)
    full = (1 << ground) - 1
    maximal = []
    for x in range(1 << ground):
        if table[x]:
            continue
        outside = full & ~x
        extendable = False
        while outside:
            low = outside & -outside
            outside ^= low
            if not table[x | low]:
                extendable = True
                break
        if not extendable:
            maximal.append(x)
    return maximal


def _minimum_free_cover(ground: int, masks: Sequence[int]) -> List[int]:
    """Fewest member-free sets covering the ground set (members all of size >= 2)"""
    free = _maximal_free_sets(ground, masks)
    full = (1 << ground) - 1
    largest = max(_popcount(f) for f in free)
    # singletons always work
    best = [[1 << j for j in range(ground)]]

    def search(uncovered: int, chosen: List[int]):
        if not uncovered:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        needed = -(-_popcount(uncovered) // largest)
        if len(chosen) + needed >= len(best[0]):
            return
        low = uncovered & -uncovered
        candidates = [f for f in free if f & low]
        candidates.sort(key=lambda f: -_popcount(f & uncovered))
        for f in candidates:
            chosen.append(f)
            search(uncovered & ~f, chosen)
            chosen.pop()

    search(full, [])
    logger.debug(f"free cover: {len(free)} maximal free sets, optimum {len(best[0])}")
    return best[0]


def depth(system: SetSystem) -> ExtendedNat:
    """
    delta: least d such that d transversals have empty intersection.

    T is a transversal iff its complement contains no member, so delta is the
    least number of member-free sets whose union is the ground set.
    """
    masks = system.masks
    if any(_popcount(m) <= 1 for m in masks):
        return INFINITY
    if system.ground == 0:
        return ExtendedNat(0)
    if not masks:
        return ExtendedNat(1)
    return ExtendedNat(len(_minimum_free_cover(system.ground, masks)))


def depth_witness(system: SetSystem) -> Optional[List[FrozenSet[int]]]:
    """Transversals realizing delta (empty intersection), None when delta is infinite"""
    masks = system.masks
    if any(_popcount(m) <= 1 for m in masks):
        return None
    if system.ground == 0:
        return []
    if not masks:
        return [frozenset()]
    full = system.ground_mask
    return [from_mask(full & ~f) for f in _minimum_free_cover(system.ground, masks)]


def depth_bruteforce(system: SetSystem) -> ExtendedNat:
    """Direct search over tuples of transversals; exponential, for cross-validation only"""
    masks = system.masks
    full = system.ground_mask
    # every transversal contains a singleton member, so no intersection is empty
    if any(_popcount(m) <= 1 for m in masks):
        return INFINITY
    transversals = [t for t in range(full + 1) if all(t & m for m in masks)]
    if not transversals:
        return INFINITY
    for d in range(0, system.ground + 1):
        if d == 0:
            if full == 0:
                return ExtendedNat(0)
            continue
        for combo in itertools.combinations(transversals, d):
            acc = full
            for t in combo:
                acc &= t
            if acc == 0:
                return ExtendedNat(d)
    return INFINITY


# === Derived systems ===

def induced_system(stuple: SetTuple) -> SetSystem:
    """I(S) = {I subset of n : intersection of S_i over I is empty}"""
    if stuple.m == 0:
        raise MalformedInputError("induced system needs m >= 1")
    n = stuple.n
    set_masks = stuple.masks
    codomain = (1 << stuple.m) - 1
    members = []
    for index_mask in range(1, 1 << n):
        acc = codomain
        for i in range(n):
            if index_mask >> i & 1:
                acc &= set_masks[i]
        if acc == 0:
            members.append(index_mask)
    return SetSystem.from_masks(n, members)


def restrict(system: SetSystem, subset: Iterable[int]) -> Restriction:
    """Members contained in J, re-indexed onto {0..|J|-1}"""
    index_map = tuple(sorted(set(subset)))
    if any(not 0 <= j < system.ground for j in index_map):
        raise MalformedInputError(f"{list(index_map)} is not a subset of the ground set")
    position = {old: new for new, old in enumerate(index_map)}
    inside = [m for m in system.members if m <= set(index_map)]
    restricted = SetSystem.of(len(index_map), ([position[e] for e in m] for m in inside))
    return Restriction(restricted, index_map)


def complete_system(n: int, k: int) -> SetSystem:
    """[n]^k, all k-element subsets of n"""
    return SetSystem.of(n, itertools.combinations(range(n), k))


def dandy_to_depth(system: SetSystem, d: int, max_ground: int = 8) -> bool:
    """
    For every permutation pi of the ground set there are 0 = i_0 <= ... <= i_d < n
    with a member inside {pi(j) : i_k <= j <= i_{k+1}} for each k < d.
    """
    n = system.ground
    if n > max_ground:
        raise SearchTooLargeError(f"dandy_to_depth enumerates n! permutations; ground {n} > {max_ground}")
    if d < 0:
        raise MalformedInputError("d must be non-negative")
    if n == 0:
        return False
    table = _member_closure(n, system.masks)
    for perm in itertools.permutations(range(n)):
        # next_end[s]: least e >= s whose window [s..e] holds a member
        next_end: List[Optional[int]] = []
        for s in range(n):
            window = 0
            end = None
            for e in range(s, n):
                window |= 1 << perm[e]
                if table[window]:
                    end = e
                    break
            next_end.append(end)
        start = 0
        for _ in range(d):
            end = next_end[start]
            if end is None:
                return False
            start = end
    return True


# === Text formats ===

def _parse_members(lines: Sequence[str], what: str) -> List[List[int]]:
    members = []
    for number, line in enumerate(lines, start=2):
        try:
            members.append([int(tok) for tok in line.split()])
        except ValueError:
            raise MalformedInputError(f"{what} line {number}: expected integers, got {line!r}")
    return members


def parse_set_system(text: str) -> SetSystem:
    """First line "n=<ground>", then one member per line; an empty line is the empty member"""
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith("n="):
        raise MalformedInputError("set system must start with a line 'n=<ground>'")
    try:
        ground = int(lines[0].strip()[2:])
    except ValueError:
        raise MalformedInputError(f"bad header {lines[0]!r}")
    return SetSystem.of(ground, _parse_members(lines[1:], "set system"))


def format_set_system(system: SetSystem) -> str:
    lines = [f"n={system.ground}"]
    lines.extend(" ".join(map(str, m)) for m in system.as_lists())
    return "\n".join(lines) + "\n"


def parse_set_tuple(text: str) -> SetTuple:
    """Header "n=<n> m=<m>", then exactly n lines, line i holding S_i"""
    lines = text.splitlines()
    if not lines:
        raise MalformedInputError("empty set tuple")
    header = {}
    for tok in lines[0].split():
        key, _, value = tok.partition("=")
        header[key] = value
    try:
        n, m = int(header["n"]), int(header["m"])
    except (KeyError, ValueError):
        raise MalformedInputError(f"set tuple header must be 'n=<n> m=<m>', got {lines[0]!r}")
    body = list(lines[1:])
    # a trailing run of empty sets may have been eaten by splitlines
    body.extend([""] * (n - len(body)))
    if len(body) != n:
        raise MalformedInputError(f"set tuple declares n={n} but has {len(body)} lines")
    return SetTuple.of(m, _parse_members(body, "set tuple"))


def format_set_tuple(stuple: SetTuple) -> str:
    lines = [f"n={stuple.n} m={stuple.m}"]
    lines.extend(" ".join(map(str, s)) for s in stuple.as_lists())
    return "\n".join(lines) + "\n"


def _read(path: Union[str, Path]) -> str:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise MalformedInputError(f"cannot read {path}: {e}")


def load_set_system(path: Union[str, Path]) -> SetSystem:
    return parse_set_system(_read(path))


def load_set_tuple(path: Union[str, Path]) -> SetTuple:
    return parse_set_tuple(_read(path))
