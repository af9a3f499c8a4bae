# modules/cubes.py
"""
S-cubes, halfcubes and cube streams, plus the explicit parbedding of the
d-cube into an S-cube (d = tau(S)).

The S-cube over A_0 x ... x A_{m-1} relates x E_i y iff x and y agree on every
coordinate outside S_i. The n-cube is the <{0},...,{n-1}>-cube.
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from modules.core import FiniteIndexedHyperspace
from modules.errors import MalformedInputError
from modules.setsystem import INFINITY, ExtendedNat, SetSystem, SetTuple, minimum_transversal
from modules.stream import StreamHyperspace

logger = logging.getLogger(__name__)


class Factor(Enum):
    OMEGA = "omega"


OMEGA = Factor.OMEGA
FactorSize = Union[int, Factor]


@dataclass(frozen=True)
class CubeSpec:
    """An S-tuple together with the sizes of the m factors"""
    stuple: SetTuple
    factors: Tuple[FactorSize, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) != self.stuple.m:
            raise MalformedInputError(f"{len(self.factors)} factors given for m = {self.stuple.m}")
        for f in self.factors:
            if f is not OMEGA and (not isinstance(f, int) or f < 1):
                raise MalformedInputError(f"factor sizes must be positive integers or omega, got {f!r}")

    @property
    def is_finite(self) -> bool:
        return all(f is not OMEGA for f in self.factors)

    def outside(self, i: int) -> Tuple[int, ...]:
        """Coordinates that E_i must preserve"""
        s = self.stuple.sets[i]
        return tuple(j for j in range(self.stuple.m) if j not in s)


def parse_factors(text: str) -> Tuple[FactorSize, ...]:
    """"3,3,2" or "omega,omega" (also "w"/"inf")"""
    out: List[FactorSize] = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if tok in ("omega", "w", "inf"):
            out.append(OMEGA)
            continue
        try:
            out.append(int(tok))
        except ValueError:
            raise MalformedInputError(f"bad factor size {tok!r}")
    return tuple(out)


def _cube_key(stuple: SetTuple):
    outside = [tuple(j for j in range(stuple.m) if j not in s) for s in stuple.sets]

    def key(i: int, x: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(x[j] for j in outside[i])
    return key


def colex_product(sizes: Sequence[int]) -> List[Tuple[int, ...]]:
    """All tuples of the product, first coordinate varying fastest"""
    return [tuple(reversed(t)) for t in itertools.product(*(range(s) for s in reversed(sizes)))]


def make_cube(spec: CubeSpec) -> FiniteIndexedHyperspace:
    """The finite S-cube; payloads are the coordinate tuples in colex order"""
    if not spec.is_finite:
        raise MalformedInputError("make_cube needs finite factors; use cube_stream for omega")
    elements = colex_product(spec.factors)
    return FiniteIndexedHyperspace.from_key_function(spec.stuple.n, elements, _cube_key(spec.stuple))


def make_n_cube(n: int, k: int) -> FiniteIndexedHyperspace:
    """The n-cube over a k-element set"""
    return make_cube(CubeSpec(SetTuple.singletons(n), (k,) * n))


def make_halfcube(stuple: SetTuple, k: int, allow_empty: bool = False) -> FiniteIndexedHyperspace:
    """The S-cube over {0..k-1} restricted to strictly increasing m-tuples, in lexicographic order"""
    if k < stuple.m:
        if not allow_empty:
            raise MalformedInputError(f"halfcube needs k >= m, got k={k} < m={stuple.m}")
        logger.warning(f"halfcube with k={k} < m={stuple.m} is empty")
    elements = list(itertools.combinations(range(k), stuple.m))
    return FiniteIndexedHyperspace.from_key_function(stuple.n, elements, _cube_key(stuple))


def cube_intersection_size(spec: CubeSpec, indices: Iterable[int]) -> ExtendedNat:
    """|intersection of [a]_i over I| = product of factor sizes over the common coordinates of the S_i"""
    common = set(range(spec.stuple.m))
    for i in indices:
        common &= spec.stuple.sets[i]
    size = 1
    for j in sorted(common):
        if spec.factors[j] is OMEGA:
            return INFINITY
        size *= spec.factors[j]
    return ExtendedNat(size)


def _tuples_with_sum(bounds: Sequence[FactorSize], total: int) -> Iterator[Tuple[int, ...]]:
    if not bounds:
        if total == 0:
            yield ()
        return
    head = bounds[0]
    top = total if head is OMEGA else min(total, head - 1)
    for v in range(top + 1):
        for rest in _tuples_with_sum(bounds[1:], total - v):
            yield (v,) + rest


def diagonal_tuples(bounds: Sequence[FactorSize]) -> Iterator[Tuple[int, ...]]:
    """Tuples ordered by coordinate sum, then lexicographically"""
    bounds = tuple(bounds)
    if all(b is not OMEGA for b in bounds):
        last = sum(b - 1 for b in bounds)
        totals: Iterable[int] = range(last + 1)
    else:
        totals = itertools.count()
    for total in totals:
        yield from _tuples_with_sum(bounds, total)


def _exact_cube_bounds(spec: CubeSpec, stream: StreamHyperspace, length: int) -> Optional[List[int]]:
    """
    Certificate bounds over the whole cube: bounds[k] counts every x whose
    i-classes all first occur among a_0..a_k. In diagonal order the first
    element of [x]_i is x with the coordinates in S_i set to 0.
    """
    if length == 0:
        return []
    sets = spec.stuple.sets
    common = set(range(spec.stuple.m)).intersection(*sets)
    if any(spec.factors[j] is OMEGA for j in common):
        return None
    items = stream.prefix(length)
    index = {x: k for k, x in enumerate(items)}
    ranges = [range(spec.factors[j]) if j in common else range(max(x[j] for x in items) + 1)
              for j in range(spec.stuple.m)]
    histogram = [0] * length
    for x in itertools.product(*ranges):
        latest = 0
        for s in sets:
            k = index.get(tuple(0 if j in s else v for j, v in enumerate(x)))
            if k is None:
                break
            latest = max(latest, k)
        else:
            histogram[latest] += 1
    return list(itertools.accumulate(histogram))


def cube_stream(spec: CubeSpec) -> StreamHyperspace:
    """The S-cube as a stream in diagonal order, with its finite intersections declared"""
    n = spec.stuple.n
    members, bounds = [], {}
    for r in range(n + 1):
        for indices in itertools.combinations(range(n), r):
            size = cube_intersection_size(spec, indices)
            if not size.is_infinite:
                members.append(indices)
                bounds[frozenset(indices)] = size.value
    factors_text = ",".join("omega" if f is OMEGA else str(f) for f in spec.factors)
    stream = StreamHyperspace(
        n=n,
        source=lambda: diagonal_tuples(spec.factors),
        class_key=_cube_key(spec.stuple),
        declared_profile=SetSystem.of(n, members),
        profile_bounds=bounds,
        name=f"cube{spec.stuple}[{factors_text}]",
    )
    stream.exact_bounds = lambda length: _exact_cube_bounds(spec, stream, length)
    return stream


# === Explicit parbedding ===

@dataclass(frozen=True)
class CubeParbedding:
    """f: X^d -> X^m with beta: n -> d, realized between concrete finite cubes"""
    transversal: Tuple[int, ...]
    beta: Tuple[int, ...]
    source: FiniteIndexedHyperspace     # the d-cube over X
    target: FiniteIndexedHyperspace     # the S-cube over X
    mapping: Tuple[int, ...]            # source element -> target element
    points: Tuple[Any, ...]             # X, position p holds the p-th point

    def image(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        """f applied to a d-tuple of points of X"""
        pos = {p: q for q, p in enumerate(self.points)}
        src = tuple(pos[v] for v in x)
        a = self.source.payloads.index(src)
        return tuple(self.points[q] for q in self.target.payloads[self.mapping[a]])


def transversal_parbedding(stuple: SetTuple, points: Sequence[Any], c: Any) -> CubeParbedding:
    """
    With T = {t_0 < ... < t_{d-1}} the lexicographically least minimum
    transversal of S and beta(i) the least j with t_j in S_i, the map

        f(x)_k = x_j if k = t_j, c otherwise

    is a beta-parbedding of the d-cube over X into the S-cube over X.
    """
    if stuple.n < 1 or stuple.m < 1:
        raise MalformedInputError("the construction needs n, m >= 1")
    empty = [i for i, s in enumerate(stuple.sets) if not s]
    if empty:
        raise MalformedInputError(f"S_{empty[0]} is empty, tau is infinite")
    points = tuple(points)
    if len(set(points)) != len(points) or not points:
        raise MalformedInputError("X must be a nonempty set of distinct points")
    if c not in points:
        raise MalformedInputError(f"c = {c!r} is not a point of X")
    transversal = tuple(sorted(minimum_transversal(stuple.as_family())))
    d = len(transversal)
    beta = tuple(next(j for j, t in enumerate(transversal) if t in s) for s in stuple.sets)
    size = len(points)
    c_pos = points.index(c)

    source = make_n_cube(d, size)
    target = make_cube(CubeSpec(stuple, (size,) * stuple.m))
    target_index: Dict[Tuple[int, ...], int] = {x: a for a, x in enumerate(target.payloads)}
    slot = {t: j for j, t in enumerate(transversal)}
    mapping = []
    for x in source.payloads:
        image = tuple(x[slot[k]] if k in slot else c_pos for k in range(stuple.m))
        mapping.append(target_index[image])
    logger.debug(f"transversal parbedding for {stuple}: T={transversal}, beta={beta}")
    return CubeParbedding(transversal, beta, source, target, tuple(mapping), points)
