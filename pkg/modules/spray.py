# modules/spray.py
"""
Sprays over Q^m in exact rational arithmetic.

E(c) relates two points iff they lie on the same sphere around c. Points are
tuples of Fractions; the relation is keyed by the squared distance to c, so
the equivalence axioms hold literally.
"""
import csv
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from modules.core import Coloring
from modules.errors import GeneralPositionError, MalformedInputError
from modules.setsystem import SetSystem
from modules.stream import AuditReport, StreamHyperspace, acceptability_audit, greedy_coloring

logger = logging.getLogger(__name__)

RationalPoint = Tuple[Fraction, ...]


def as_point(coords: Iterable[Union[int, str, Fraction]]) -> RationalPoint:
    try:
        return tuple(Fraction(c) for c in coords)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise MalformedInputError(f"bad rational coordinate: {e}")


def squared_distance(c: RationalPoint, x: RationalPoint) -> Fraction:
    if len(c) != len(x):
        raise MalformedInputError(f"dimension mismatch: {len(c)} vs {len(x)}")
    return sum(((a - b) * (a - b) for a, b in zip(c, x)), Fraction(0))


def same_sphere(c: RationalPoint, x: RationalPoint, y: RationalPoint) -> bool:
    return squared_distance(c, x) == squared_distance(c, y)


def _rank(rows: List[List[Fraction]]) -> int:
    """Row rank by exact Gaussian elimination"""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    rank = 0
    for col in range(len(rows[0])):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def general_position_check(centers: Sequence[RationalPoint]) -> bool:
    """Every min(m+1, n) of the centers are affinely independent"""
    n = len(centers)
    if n <= 1:
        return True
    m = len(centers[0])
    k = min(m + 1, n)
    for subset in itertools.combinations(centers, k):
        base = subset[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in subset[1:]]
        if _rank(diffs) < k - 1:
            logger.debug(f"centers {[tuple(map(str, p)) for p in subset]} are affinely dependent")
            return False
    return True


def _height(value: Fraction) -> int:
    return max(abs(value.numerator), value.denominator)


def _values_up_to(h: int) -> List[Fraction]:
    return sorted({Fraction(p, q) for q in range(1, h + 1) for p in range(-h, h + 1)})


def rational_grid(m: int) -> Iterator[RationalPoint]:
    """
    Q^m without repeats: points ordered by height, the largest |numerator| or
    denominator over the reduced coordinates, then lexicographically by value.
    """
    if m < 1:
        raise MalformedInputError(f"dimension must be positive, got {m}")
    h = 1
    while True:
        values = _values_up_to(h)
        for point in itertools.product(values, repeat=m):
            if max(_height(v) for v in point) == h:
                yield point
        h += 1


@dataclass(frozen=True)
class SprayConfig:
    centers: Tuple[RationalPoint, ...]
    enumeration: Optional[Callable[[], Iterator[RationalPoint]]] = None

    def __post_init__(self):
        centers = tuple(as_point(c) for c in self.centers)
        if not centers:
            raise MalformedInputError("at least one center is needed")
        if len({len(c) for c in centers}) != 1 or not centers[0]:
            raise MalformedInputError("all centers must share a positive dimension")
        if len(set(centers)) != len(centers):
            raise MalformedInputError("spray centers must be pairwise distinct")
        object.__setattr__(self, "centers", centers)

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def m(self) -> int:
        return len(self.centers[0])

    def source(self) -> Iterator[RationalPoint]:
        if self.enumeration is not None:
            return self.enumeration()
        return rational_grid(self.m)


def parse_centers(text: str) -> Tuple[RationalPoint, ...]:
    """ "0,0;1,0;0,1" -> three points of Q^2; coordinates may be fractions like 1/2 """
    chunks = [c for c in text.split(";") if c.strip()]
    if not chunks:
        raise MalformedInputError("no centers given")
    return tuple(as_point(tok.strip() for tok in chunk.split(",")) for chunk in chunks)


def spray_stream(config: SprayConfig, declare_profile: bool = True) -> StreamHyperspace:
    """
    The hyperspace (Q^m; E(c_0), ..., E(c_{n-1})) along the configured
    enumeration. With `declare_profile`, index sets of size m are declared
    to meet in at most 2 points and larger ones in at most 1.
    """
    n, m = config.n, config.m
    centers = config.centers
    profile, bounds = SetSystem(n), {}
    if declare_profile:
        if not general_position_check(centers):
            raise GeneralPositionError("spray centers are not in general position")
        members = [frozenset(s) for r in range(m, n + 1) for s in itertools.combinations(range(n), r)]
        profile = SetSystem(n, members)
        bounds = {s: (2 if len(s) == m else 1) for s in members}

    def class_key(i: int, x: RationalPoint) -> Fraction:
        return squared_distance(centers[i], x)

    return StreamHyperspace(
        n=n,
        source=config.source,
        class_key=class_key,
        declared_profile=profile,
        profile_bounds=bounds,
        name=f"spray(n={n}, m={m})",
    )


@dataclass(frozen=True)
class SprayCover:
    points: Tuple[RationalPoint, ...]
    coloring: Coloring
    audit: AuditReport


def cover_with_sprays(config: SprayConfig, length: int, workers: int = 1) -> SprayCover:
    """Greedy coloring of the first `length` points; color i is a piece of the spray around c_i"""
    if config.n <= config.m:
        logger.warning(f"{config.n} sprays in dimension {config.m}: fewer than m+1 centers")
    stream = spray_stream(config)
    coloring = greedy_coloring(stream, length)
    audit = acceptability_audit(stream, coloring, length, workers=workers)
    logger.info(f"spray cover of {length} points: max count {audit.max_count}, {len(audit.violations)} violations")
    return SprayCover(stream.prefix(length), coloring, audit)


def max_count_growth(config: SprayConfig, lengths: Sequence[int]) -> List[int]:
    """Largest audited sphere-color count at each prefix length"""
    return [cover_with_sprays(config, length).audit.max_count for length in lengths]


def write_cover_csv(cover: SprayCover, path: Union[str, Path]):
    """One row per point: numerator/denominator per coordinate, then the color"""
    m = len(cover.points[0]) if cover.points else 2
    names = ["x", "y"] if m == 2 else [f"c{j}" for j in range(m)]
    header = [f"{name}_{part}" for name in names for part in ("num", "den")] + ["color"]
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for point, color in zip(cover.points, cover.coloring.assignment):
            row = []
            for v in point:
                row.extend([v.numerator, v.denominator])
            row.append(color)
            writer.writerow(row)
