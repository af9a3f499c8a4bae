# modules/morphisms.py
"""
Checkers and backtracking search for embeddings, weak embeddings and
parbeddings between finite indexed hyperspaces.

Maps f: B -> A are tuples, f[x] being the image of element x of B.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from modules.core import Coloring, FiniteIndexedHyperspace
from modules.cubes import CubeSpec, make_cube
from modules.errors import MalformedInputError, PartialColoringError, UnverifiedWitnessError
from modules.metrics import SearchMetrics
from modules.setsystem import INFINITY, ExtendedNat, SetTuple, from_mask
from modules.settings import get_settings

logger = logging.getLogger(__name__)


class MorphismKind(Enum):
    EMBEDDING = "embed"
    WEAK = "weak"
    PARBEDDING = "parbed"


class SearchStatus(Enum):
    FOUND = "found"
    NONE = "none"
    INDETERMINATE = "indeterminate"


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class MorphismWitness:
    kind: MorphismKind
    f: Tuple[int, ...]
    pi: Optional[Tuple[int, ...]] = None
    beta: Optional[Tuple[int, ...]] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "f": list(self.f),
            "pi": None if self.pi is None else list(self.pi),
            "beta": None if self.beta is None else list(self.beta),
        }


@dataclass
class SearchOutcome:
    status: SearchStatus
    witness: Optional[MorphismWitness] = None
    metrics: SearchMetrics = field(default_factory=SearchMetrics)

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def as_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else self.witness.as_dict(),
        }


class _BudgetExhausted(Exception):
    pass


# === Checkers ===

def _check_map(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace, f: Sequence[int]) -> bool:
    """Shape check; returns injectivity"""
    if len(f) != source.size:
        raise MalformedInputError(f"map has {len(f)} entries for {source.size} elements")
    if any(not 0 <= v < target.size for v in f):
        raise MalformedInputError("map leaves the target carrier")
    return len(set(f)) == len(f)


def _is_permutation(pi: Sequence[int], n: int) -> bool:
    return sorted(pi) == list(range(n))


def verify_embedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace, f: Sequence[int]) -> bool:
    """f injective and [x]_i = [y]_i <=> [f(x)]_i = [f(y)]_i"""
    if source.n != target.n:
        raise MalformedInputError(f"arity mismatch: {source.n} vs {target.n} relations")
    return verify_weak_embedding(source, target, f, tuple(range(source.n)))


def verify_weak_embedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                          f: Sequence[int], pi: Sequence[int]) -> bool:
    """f injective and [x]_{pi(i)} = [y]_{pi(i)} <=> [f(x)]_i = [f(y)]_i"""
    if source.n != target.n:
        raise MalformedInputError(f"arity mismatch: {source.n} vs {target.n} relations")
    if not _is_permutation(pi, target.n):
        raise MalformedInputError(f"{list(pi)} is not a permutation of {target.n}")
    if not _check_map(source, target, f):
        return False
    for x, y in itertools.combinations(range(source.size), 2):
        for i in range(target.n):
            if source.same(pi[i], x, y) != target.same(i, f[x], f[y]):
                return False
    return True


def verify_parbedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                      f: Sequence[int], beta: Sequence[int]) -> bool:
    """f injective and [x]_{beta(i)} = [y]_{beta(i)} => [f(x)]_i = [f(y)]_i (one direction only)"""
    if len(beta) != target.n or any(not 0 <= b < source.n for b in beta):
        raise MalformedInputError(f"beta must map {target.n} indices into 0..{source.n - 1}")
    if not _check_map(source, target, f):
        return False
    for x, y in itertools.combinations(range(source.size), 2):
        for i in range(target.n):
            if source.same(beta[i], x, y) and not target.same(i, f[x], f[y]):
                return False
    return True


def verify_witness(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                   witness: MorphismWitness) -> bool:
    if witness.kind is MorphismKind.EMBEDDING:
        return verify_embedding(source, target, witness.f)
    if witness.kind is MorphismKind.WEAK:
        return verify_weak_embedding(source, target, witness.f, witness.pi)
    return verify_parbedding(source, target, witness.f, witness.beta)


# === Search engine ===

def _backtrack(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
               links: Sequence[Tuple[int, int, bool]], metrics: SearchMetrics,
               budget: int) -> Optional[Tuple[int, ...]]:
    """
    Lexicographically least injective f respecting every link (b, a, both):
    [x]_b = [y]_b implies [f(x)]_a = [f(y)]_a, and conversely when `both`.
    """
    size = source.size
    if size > target.size:
        return None
    if size == 0:
        return ()
    # a B-class of size s lands inside one A-class, so images need class size >= s
    domains: List[List[int]] = []
    for x in range(size):
        sig = source.signatures[x]
        dom = [v for v in range(target.size)
               if all(target.signatures[v][a] >= sig[b] for b, a, _ in links)]
        metrics.prunes += target.size - len(dom)
        if not dom:
            return None
        domains.append(dom)

    src_labels = source.labels
    tgt_labels = target.labels
    assignment = [0] * size

    def consistent(x: int, v: int, y: int, w: int) -> bool:
        for b, a, both in links:
            same_b = src_labels[b][x] == src_labels[b][y]
            same_a = tgt_labels[a][v] == tgt_labels[a][w]
            if same_b and not same_a:
                return False
            if both and same_a and not same_b:
                return False
        return True

    def extend(x: int, doms: List[List[int]]) -> bool:
        if x == size:
            return True
        for v in doms[x]:
            metrics.nodes += 1
            if metrics.nodes > budget:
                raise _BudgetExhausted()
            assignment[x] = v
            pruned = doms[:x + 1]
            ok = True
            for y in range(x + 1, size):
                metrics.candidates_tested += len(doms[y])
                dom = [w for w in doms[y] if w != v and consistent(x, v, y, w)]
                if not dom:
                    ok = False
                    break
                pruned.append(dom)
            if ok and extend(x + 1, pruned):
                return True
            metrics.backtracks += 1
        return False

    if extend(0, domains):
        return tuple(assignment)
    return None


def _run(source, target, links_iter: Iterator[Tuple[Any, Sequence[Tuple[int, int, bool]]]],
         kind: MorphismKind, budget: Optional[int]) -> SearchOutcome:
    budget = get_settings().node_budget if budget is None else budget
    metrics = SearchMetrics()
    try:
        for label, links in links_iter:
            metrics.outer_iterations += 1
            f = _backtrack(source, target, links, metrics, budget)
            if f is not None:
                witness = MorphismWitness(
                    kind, f,
                    pi=label if kind is MorphismKind.WEAK else None,
                    beta=label if kind is MorphismKind.PARBEDDING else None,
                )
                metrics.stop()
                logger.debug(f"{kind.value} search found a witness: {metrics.as_dict()}")
                return SearchOutcome(SearchStatus.FOUND, witness, metrics)
    except _BudgetExhausted:
        metrics.stop()
        logger.warning(f"{kind.value} search exhausted its budget of {budget} nodes")
        return SearchOutcome(SearchStatus.INDETERMINATE, None, metrics)
    metrics.stop()
    logger.debug(f"{kind.value} search refuted: {metrics.as_dict()}")
    return SearchOutcome(SearchStatus.NONE, None, metrics)


def find_embedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                   budget: Optional[int] = None) -> SearchOutcome:
    if source.n != target.n:
        raise MalformedInputError(f"arity mismatch: {source.n} vs {target.n} relations")
    links = [(i, i, True) for i in range(source.n)]
    return _run(source, target, iter([(None, links)]), MorphismKind.EMBEDDING, budget)


def find_weak_embedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                        budget: Optional[int] = None) -> SearchOutcome:
    """Permutations pi outermost in lexicographic order, the embedding engine inside"""
    if source.n != target.n:
        raise MalformedInputError(f"arity mismatch: {source.n} vs {target.n} relations")
    candidates = ((pi, [(pi[i], i, True) for i in range(target.n)])
                  for pi in itertools.permutations(range(target.n)))
    return _run(source, target, candidates, MorphismKind.WEAK, budget)


def find_parbedding(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                    budget: Optional[int] = None) -> SearchOutcome:
    """Maps beta: target indices -> source indices outermost, implication-only propagation inside"""
    candidates = ((beta, [(beta[i], i, False) for i in range(target.n)])
                  for beta in itertools.product(range(source.n), repeat=target.n))
    return _run(source, target, candidates, MorphismKind.PARBEDDING, budget)


FINDERS = {
    MorphismKind.EMBEDDING: find_embedding,
    MorphismKind.WEAK: find_weak_embedding,
    MorphismKind.PARBEDDING: find_parbedding,
}


def enumerate_injections_oracle(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                                kind: MorphismKind = MorphismKind.EMBEDDING) -> Optional[MorphismWitness]:
    """Exhaustive reference search over all injective maps; exponential"""
    if kind is MorphismKind.EMBEDDING:
        labels = [None]
    elif kind is MorphismKind.WEAK:
        labels = list(itertools.permutations(range(target.n)))
    else:
        labels = list(itertools.product(range(source.n), repeat=target.n))
    for label in labels:
        for f in itertools.permutations(range(target.size), source.size):
            witness = MorphismWitness(
                kind, f,
                pi=label if kind is MorphismKind.WEAK else None,
                beta=label if kind is MorphismKind.PARBEDDING else None,
            )
            if verify_witness(source, target, witness):
                return witness
    return None


# === Derived operations ===

def compose_parbeddings(f: Sequence[int], alpha: Sequence[int],
                        g: Sequence[int], beta: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    f an alpha-parbedding A0 -> A1 and g a beta-parbedding A1 -> A2 give the
    parbedding g.f of A0 into A2 with index map i -> alpha(beta(i)).
    """
    return tuple(g[v] for v in f), tuple(alpha[b] for b in beta)


def pullback_coloring(source: FiniteIndexedHyperspace, target: FiniteIndexedHyperspace,
                      coloring: Coloring, f: Sequence[int], beta: Sequence[int]) -> Coloring:
    """psi = beta . chi . f, a coloring of the source pulled back along a parbedding"""
    if len(coloring) != target.size or coloring.n != target.n:
        raise PartialColoringError("coloring does not match the target structure")
    if not verify_parbedding(source, target, f, beta):
        raise UnverifiedWitnessError("(f, beta) is not a parbedding")
    return Coloring(source.n, tuple(beta[coloring[f[x]]] for x in range(source.size)))


def embeds_all_small_cubes(space: FiniteIndexedHyperspace, stuple: SetTuple, max_factor: int,
                           node_budget: Optional[int] = None) -> Verdict:
    """
    Every S-cube with factor sizes <= max_factor embeds into the structure.

    Restricting factors gives induced substructures, so it suffices to embed
    the cube with every factor equal to max_factor.
    """
    if stuple.n != space.n:
        raise MalformedInputError(f"S has length {stuple.n}, structure has {space.n} relations")
    if max_factor < 1:
        return Verdict.TRUE
    cube = make_cube(CubeSpec(stuple, (max_factor,) * stuple.m))
    outcome = find_embedding(cube, space, node_budget)
    return {
        SearchStatus.FOUND: Verdict.TRUE,
        SearchStatus.NONE: Verdict.FALSE,
        SearchStatus.INDETERMINATE: Verdict.INDETERMINATE,
    }[outcome.status]


@dataclass(frozen=True)
class FcnEstimate:
    """Budget-relative finite cube number"""
    status: Verdict
    d: ExtendedNat
    witness: Optional[SetTuple]
    max_factor: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "d": str(self.d),
            "witness": None if self.witness is None else self.witness.as_lists(),
            "budget": self.max_factor,
            "budget_relative": True,
        }


def fcn_estimate(space: FiniteIndexedHyperspace, max_factor: int, node_budget: Optional[int] = None,
                 nonempty_only: bool = False) -> FcnEstimate:
    """
    Least d <= n such that for some n-tuple S of subsets of d every S-cube
    with factors <= max_factor embeds. Tuples are tried in lexicographic
    order of their bitmasks; `nonempty_only` skips tuples with an empty S_i.
    """
    n = space.n
    for d in range(1, n + 1):
        undecided = False
        for masks in itertools.product(range(1 << d), repeat=n):
            if nonempty_only and 0 in masks:
                continue
            stuple = SetTuple(d, tuple(from_mask(m) for m in masks))
            verdict = embeds_all_small_cubes(space, stuple, max_factor, node_budget)
            if verdict is Verdict.TRUE:
                logger.info(f"fcn estimate d={d} witnessed by {stuple} at budget {max_factor}")
                return FcnEstimate(Verdict.TRUE, ExtendedNat(d), stuple, max_factor)
            if verdict is Verdict.INDETERMINATE:
                undecided = True
        if undecided:
            return FcnEstimate(Verdict.INDETERMINATE, INFINITY, None, max_factor)
    return FcnEstimate(Verdict.FALSE, INFINITY, None, max_factor)


def witness_from_dict(data: Dict[str, Any]) -> MorphismWitness:
    try:
        kind = MorphismKind(data["kind"])
        pi = data.get("pi")
        beta = data.get("beta")
        return MorphismWitness(kind, tuple(int(v) for v in data["f"]),
                               None if pi is None else tuple(pi),
                               None if beta is None else tuple(beta))
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInputError(f"bad witness document: {e}")
