# modules/identities.py
"""
Property suites behind `check-identities`: each suite checks an identity of
the set-system and cube machinery exhaustively on small instances and on
seeded random samples, and returns the first counterexample it meets.
"""
import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence

from modules.core import FiniteIndexedHyperspace, fine_to_depth, intersection_profile
from modules.cubes import CubeSpec, make_cube, transversal_parbedding
from modules.morphisms import verify_parbedding
from modules.setsystem import (
    ExtendedNat,
    SetSystem,
    SetTuple,
    complete_system,
    dandy_to_depth,
    depth,
    depth_bruteforce,
    from_mask,
    induced_system,
    is_transversal,
    restrict,
    tuple_transversal_number,
)
from modules.settings import get_settings
from modules.stream import COLORING_STRATEGIES, acceptability_audit, single_class_stream

logger = logging.getLogger(__name__)

RANDOM_TUPLE_MAX = 6
RANDOM_DANDY_GROUND = 5
CROSS_CHECK_MAX = 4
FINE_MAX_BOUND = 3


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checked: int
    counterexample: Optional[Dict[str, Any]] = field(default=None)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "checked": self.checked, "passed": self.passed,
                "counterexample": self.counterexample}


def _random_tuple(rng: random.Random, n: int, m: int) -> SetTuple:
    """n nonempty subsets of {0..m-1}"""
    return SetTuple(m, tuple(from_mask(rng.randrange(1, 1 << m)) for _ in range(n)))


def _all_nonempty_tuples(n: int, m: int) -> Iterator[SetTuple]:
    for masks in itertools.product(range(1, 1 << m), repeat=n):
        yield SetTuple(m, tuple(from_mask(k) for k in masks))


def _families(n: int, min_size: int = 0) -> Iterator[SetSystem]:
    """Every family of subsets of n with members of at least min_size elements"""
    candidates = [mask for mask in range(1 << n) if bin(mask).count("1") >= min_size]
    for choice in range(1 << len(candidates)):
        yield SetSystem.from_masks(n, [c for b, c in enumerate(candidates) if choice >> b & 1])


def _random_family(rng: random.Random, n: int, min_size: int = 0) -> SetSystem:
    candidates = [mask for mask in range(1 << n) if bin(mask).count("1") >= min_size]
    density = rng.random()
    return SetSystem.from_masks(n, [c for c in candidates if rng.random() < density])


# === Suites ===

def depth_formula_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """depth([n]^m) = ceil(n / (m - 1)) for 2 <= m <= n + 1"""
    checked = 0
    for n in range(1, n_max + 1):
        for m in range(2, n + 2):
            expected = ExtendedNat(math.ceil(n / (m - 1)))
            got = depth(complete_system(n, m))
            checked += 1
            if got != expected:
                return SuiteResult("depth-formula", checked, {"n": n, "m": m, "expected": str(expected), "got": str(got)})
    return SuiteResult("depth-formula", checked)


def transversal_depth_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """tau(S) = depth(I(S))"""
    checked = 0

    def mismatch(stuple: SetTuple) -> Optional[Dict[str, Any]]:
        tau = tuple_transversal_number(stuple)
        delta = depth(induced_system(stuple))
        if tau != delta:
            return {"S": stuple.as_lists(), "m": stuple.m, "tau": str(tau), "depth": str(delta)}
        return None

    for n in range(1, min(n_max, 3) + 1):
        for m in range(1, 4):
            for stuple in _all_nonempty_tuples(n, m):
                checked += 1
                bad = mismatch(stuple)
                if bad:
                    return SuiteResult("transversal-depth", checked, bad)
    for _ in range(samples):
        stuple = _random_tuple(rng, rng.randint(1, RANDOM_TUPLE_MAX), rng.randint(1, RANDOM_TUPLE_MAX))
        checked += 1
        bad = mismatch(stuple)
        if bad:
            return SuiteResult("transversal-depth", checked, bad)
    return SuiteResult("transversal-depth", checked)


def dandy_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """dandy to depth d iff d < depth(I)"""
    checked = 0

    def mismatch(system: SetSystem) -> Optional[Dict[str, Any]]:
        delta = depth(system)
        for d in range(system.ground + 2):
            if dandy_to_depth(system, d) != (ExtendedNat(d) < delta):
                return {"I": system.as_lists(), "ground": system.ground, "d": d, "depth": str(delta)}
        return None

    for n in range(1, min(n_max, 4) + 1):
        for system in _families(n, min_size=2):
            checked += 1
            bad = mismatch(system)
            if bad:
                return SuiteResult("dandy", checked, bad)
    for _ in range(max(1, samples // 10) if samples else 0):
        system = _random_family(rng, RANDOM_DANDY_GROUND, min_size=2)
        checked += 1
        bad = mismatch(system)
        if bad:
            return SuiteResult("dandy", checked, bad)
    return SuiteResult("dandy", checked)


def _fine_mismatch(space: FiniteIndexedHyperspace, label: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    for bound in range(FINE_MAX_BOUND + 1):
        depths = [depth(intersection_profile(space, a, bound)) for a in range(space.size)]
        for d in range(space.n + 2):
            expected = all(ExtendedNat(d) < delta for delta in depths)
            if fine_to_depth(space, bound, d) != expected:
                return dict(label, bound=bound, d=d, fine=not expected)
    return None


def fine_depth_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """bound-fine to depth d iff every intersection profile has depth > d"""
    checked = 0
    for n in range(1, min(n_max, 2) + 1):
        for m in range(1, 3):
            for stuple in _all_nonempty_tuples(n, m):
                checked += 1
                bad = _fine_mismatch(make_cube(CubeSpec(stuple, (2,) * m)), {"S": stuple.as_lists(), "m": m})
                if bad:
                    return SuiteResult("fine-depth", checked, bad)
    for _ in range(samples // 50):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        stuple = _random_tuple(rng, n, m)
        factors = tuple(rng.randint(1, 3) for _ in range(m))
        checked += 1
        bad = _fine_mismatch(make_cube(CubeSpec(stuple, factors)),
                             {"S": stuple.as_lists(), "m": m, "factors": list(factors)})
        if bad:
            return SuiteResult("fine-depth", checked, bad)
    return SuiteResult("fine-depth", checked)


def restriction_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """depth(I restricted to a transversal J) >= depth(I) - 1"""
    checked = 0
    for _ in range(samples):
        n = rng.randint(1, RANDOM_TUPLE_MAX)
        system = _random_family(rng, n, min_size=1)
        transversals = [t for t in range(1 << n) if is_transversal(from_mask(t), system)]
        if not transversals:
            continue
        subset = from_mask(rng.choice(transversals))
        restricted = restrict(system, subset).system
        checked += 1
        if depth(restricted) < depth(system) - 1:
            return SuiteResult("restriction", checked, {"I": system.as_lists(), "ground": n, "J": sorted(subset),
                                                        "restricted": str(depth(restricted)),
                                                        "depth": str(depth(system))})
    return SuiteResult("restriction", checked)


def depth_cross_check_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """The free-cover depth agrees with the transversal-tuple brute force"""
    checked = 0
    for n in range(0, min(n_max, CROSS_CHECK_MAX) + 1):
        for system in _families(n):
            checked += 1
            fast, slow = depth(system), depth_bruteforce(system)
            if fast != slow:
                return SuiteResult("depth-cross-check", checked,
                                   {"I": system.as_lists(), "ground": n, "depth": str(fast), "bruteforce": str(slow)})
    return SuiteResult("depth-cross-check", checked)


def parbedding_suite(n_max: int, samples: int, rng: random.Random) -> SuiteResult:
    """The transversal construction is a parbedding of the d-cube into the S-cube"""
    checked = 0
    for n in range(1, min(n_max, 3) + 1):
        for m in range(1, 4):
            for stuple in _all_nonempty_tuples(n, m):
                for size in range(1, 4):
                    built = transversal_parbedding(stuple, range(size), 0)
                    checked += 1
                    if not verify_parbedding(built.source, built.target, built.mapping, built.beta):
                        return SuiteResult("parbedding", checked,
                                           {"S": stuple.as_lists(), "m": m, "X": size})
    return SuiteResult("parbedding", checked)


def pigeonhole_suite(n_max: int, samples: int, rng: random.Random, threshold: Optional[int] = None,
                     lengths: Sequence[int] = (100, 1000)) -> SuiteResult:
    """With one shared infinite class every strategy piles up some color class"""
    threshold = get_settings().pigeonhole_threshold if threshold is None else threshold
    checked = 0
    for name, strategy in COLORING_STRATEGIES.items():
        stream = single_class_stream(2, threshold)
        counts = []
        for length in lengths:
            counts.append(acceptability_audit(stream, strategy(stream, length), length).max_count)
        checked += 1
        if counts[0] < threshold or counts != sorted(counts):
            return SuiteResult("pigeonhole", checked, {"strategy": name, "lengths": list(lengths), "max_counts": counts})
    return SuiteResult("pigeonhole", checked)


SUITES: Dict[str, Callable[[int, int, random.Random], SuiteResult]] = {
    "depth-formula": depth_formula_suite,
    "transversal-depth": transversal_depth_suite,
    "dandy": dandy_suite,
    "fine-depth": fine_depth_suite,
    "restriction": restriction_suite,
    "depth-cross-check": depth_cross_check_suite,
    "parbedding": parbedding_suite,
    "pigeonhole": pigeonhole_suite,
}


def run_suites(n_max: int, samples: int, seed: int, names: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    """Run the named suites (all by default); each suite gets its own seeded generator"""
    results = []
    for name in names or SUITES:
        suite = SUITES[name]
        result = suite(n_max, samples, random.Random(f"{seed}:{name}"))
        status = "passed" if result.passed else "REFUTED"
        logger.info(f"suite {name}: {status} after {result.checked} checks")
        results.append(result)
    return results
