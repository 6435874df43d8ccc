"""
Nogood recording, nogood pruning (NP) and nogood dominance pruning (NDP)

When the search descends into the i-th child of a node, every earlier sibling
leaves a record ``(prior, taken)``: the sibling's assignment and the taken one, both
without the bin's seed item. Deeper candidates that could swap with the host
bin into the already-explored sibling state are pruned.
"""

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from .dominance import dominates_keys
from .gen import Side
from .models import BinAssignment, DominanceKind, Item, Key, PruningPolicy

KeysLike = Union[BinAssignment, Sequence[Key], Sequence[Item]]


class NogoodRecord(BaseModel):
    """
    Exhausted-sibling remainder ``prior`` paired with the remainder
    ``taken`` of the sibling currently descended.
    """

    model_config = ConfigDict(frozen=True)

    prior: Tuple[Key, ...]
    taken: Tuple[Key, ...]
    host_bound: int
    host_seed: Tuple[Key, ...] = ()
    side: Side = Side.PACKING

    @property
    def prior_weight(self) -> int:
        return sum(w for w, _ in self.prior)

    @property
    def taken_weight(self) -> int:
        return sum(w for w, _ in self.taken)

    @property
    def host_seed_weight(self) -> int:
        return sum(w for w, _ in self.host_seed)


class NogoodStack:
    """Per-depth frames of nogood records, pushed on descent and popped on backtrack."""

    def __init__(self, frames: Optional[List[List[NogoodRecord]]] = None):
        self._frames: List[List[NogoodRecord]] = frames if frames is not None else []

    @property
    def depth(self) -> int:
        return len(self._frames)

    @property
    def size(self) -> int:
        return sum(len(frame) for frame in self._frames)

    def push(self, frame: Iterable[NogoodRecord]) -> None:
        self._frames.append(list(frame))

    def pop(self) -> List[NogoodRecord]:
        return self._frames.pop()

    def records(self) -> Iterator[NogoodRecord]:
        for frame in self._frames:
            yield from frame

    def frames(self) -> List[List[NogoodRecord]]:
        return [list(frame) for frame in self._frames]

    def __bool__(self) -> bool:
        return any(self._frames)


def as_keys(x: KeysLike) -> Tuple[Key, ...]:
    """Keys sorted non-increasing, the order every multiset routine here expects."""
    if isinstance(x, BinAssignment):
        keys = list(x.keys)
    else:
        keys = [k.key if isinstance(k, Item) else tuple(k) for k in x]
    return tuple(sorted(keys, reverse=True))


def contains(big: Sequence[Key], small: Sequence[Key]) -> bool:
    """Sub-multiset test by linear merge over non-increasing keys."""
    i = 0
    for key in small:
        while i < len(big) and big[i] > key:
            i += 1
        if i == len(big) or big[i] != key:
            return False
        i += 1
    return True


def difference(big: Sequence[Key], small: Sequence[Key]) -> Tuple[Key, ...]:
    """Multiset difference big - small (small must be contained in big)."""
    out = []
    i = 0
    for key in big:
        if i < len(small) and small[i] == key:
            i += 1
        else:
            out.append(key)
    return tuple(out)


def _fits(side: Side, load: int, bound: int) -> bool:
    if side is Side.PACKING:
        return load <= bound
    return load >= bound


def _weight(keys: Sequence[Key]) -> int:
    return sum(w for w, _ in keys)


def _np(cand: Tuple[Key, ...], cand_weight: int, rec: NogoodRecord, candidate_bound: int) -> bool:
    if not contains(cand, rec.prior):
        return False
    return (
        _fits(rec.side, cand_weight - rec.prior_weight + rec.taken_weight, candidate_bound)
        and _fits(rec.side, rec.host_seed_weight + rec.prior_weight, rec.host_bound)
    )


def _ndp(
    remainder: Tuple[Key, ...],
    seed_weight: int,
    rec: NogoodRecord,
    candidate_bound: int,
    kind: DominanceKind,
) -> bool:
    if not (
        _fits(rec.side, seed_weight + rec.taken_weight, candidate_bound)
        and _fits(rec.side, rec.host_seed_weight + _weight(remainder), rec.host_bound)
    ):
        return False
    return dominates_keys(kind, rec.prior, remainder)


def np_prunes(candidate: KeysLike, rec: NogoodRecord, candidate_bound: int) -> bool:
    """
    Nogood pruning test.

    True iff the candidate contains ``prior`` and swapping it out for ``taken`` leaves
    both the candidate's bin and the host bin feasible.
    """
    cand = as_keys(candidate)
    return _np(cand, _weight(cand), rec, candidate_bound)


def ndp_prunes(
    candidate: KeysLike,
    rec: NogoodRecord,
    candidate_bound: int,
    kind: DominanceKind,
    candidate_seed: KeysLike = (),
) -> bool:
    """
    Nogood dominance pruning test.

    With R the candidate minus its seed: true iff ``prior`` dominates R, the
    candidate's seed plus ``taken`` fits the candidate's bin, and the host seed plus
    R fits the host bin.
    """
    cand = as_keys(candidate)
    seed = as_keys(candidate_seed)
    remainder = difference(cand, seed)
    return _ndp(remainder, _weight(seed), rec, candidate_bound, kind)


def apply_pruning(
    candidate: KeysLike,
    stack: NogoodStack,
    policy: PruningPolicy,
    candidate_bound: int,
    kind: Optional[DominanceKind] = None,
    candidate_seed: KeysLike = (),
) -> bool:
    """
    Run NP over every record, then (NDP policy) dominance pruning on survivors.

    Returns:
        True when some record prunes the candidate
    """
    if policy is PruningPolicy.NONE or not stack:
        return False

    cand = as_keys(candidate)
    cand_weight = _weight(cand)
    records = list(stack.records())
    if any(_np(cand, cand_weight, rec, candidate_bound) for rec in records):
        return True
    if policy is not PruningPolicy.NDP:
        return False
    if kind is None:
        raise ValueError("NDP needs a dominance kind")

    seed = as_keys(candidate_seed)
    remainder = difference(cand, seed)
    seed_weight = _weight(seed)
    return any(_ndp(remainder, seed_weight, rec, candidate_bound, kind) for rec in records)


def compact_stack(
    stack: NogoodStack,
    remaining: KeysLike,
    policy: PruningPolicy = PruningPolicy.NP,
) -> NogoodStack:
    """
    Drop records whose ``prior`` is no longer a sub-multiset of the remaining items.

    Under NDP the stack is returned unchanged: such a record can still prune by
    dominance. Otherwise a new stack is returned so ancestors keep theirs.
    """
    if policy is PruningPolicy.NDP:
        return stack
    pool = as_keys(remaining)
    return NogoodStack([
        [rec for rec in frame if contains(pool, rec.prior)]
        for frame in stack.frames()
    ])
