"""
Dominance criteria between bin assignments

An assignment A dominates B when committing A to a bin can never lead to a
worse optimum than committing B. Packing criteria partition B into subsets that
fit under distinct A items; covering criteria partition (part of) B into
subsets that cover distinct A items.
"""

from typing import List, Optional, Sequence, Tuple

from .models import BinAssignment, DominanceKind, Key

Witness = List[Tuple[int, List[int]]]
"""(A position, [B positions]) pairs."""


def cmt_keys(a: Sequence[Key], b: Sequence[Key]) -> Optional[Witness]:
    """One-to-one mapping of B items onto distinct, no lighter A items."""
    if len(a) < len(b):
        return None
    a_order = sorted(range(len(a)), key=lambda k: -a[k][0])
    b_order = sorted(range(len(b)), key=lambda k: -b[k][0])
    witness: Witness = []
    for ai, bi in zip(a_order, b_order):
        if b[bi][0] > a[ai][0]:
            return None
        witness.append((ai, [bi]))
    return witness


def packs_into(
    a: Sequence[Key],
    b: Sequence[Key],
    use_value: bool = False,
) -> Optional[Witness]:
    """
    Partition B into subsets, each fitting under a distinct item of A.

    With ``use_value`` the subset's value sum must also stay at or below the
    A item's value. B items are placed largest first, each into the A slot
    with the least sufficient residual first.
    """
    if sum(w for w, _ in b) > sum(w for w, _ in a):
        return None
    if use_value and sum(v for _, v in b) > sum(v for _, v in a):
        return None

    b_order = sorted(range(len(b)), key=lambda k: -b[k][0])
    res_w = [w for w, _ in a]
    res_v = [v for _, v in a]
    slots: List[List[int]] = [[] for _ in a]

    def place(depth: int) -> bool:
        if depth == len(b_order):
            return True
        bi = b_order[depth]
        w, v = b[bi]
        candidates = sorted(range(len(a)), key=lambda k: (res_w[k], res_v[k]))
        tried = set()
        for k in candidates:
            if res_w[k] < w or (use_value and res_v[k] < v):
                continue
            state = (res_w[k], res_v[k])
            if state in tried:
                continue
            tried.add(state)
            res_w[k] -= w
            res_v[k] -= v
            slots[k].append(bi)
            if place(depth + 1):
                return True
            slots[k].pop()
            res_w[k] += w
            res_v[k] += v
        return False

    if not place(0):
        return None
    return [(k, list(members)) for k, members in enumerate(slots)]


def covers(
    a: Sequence[Key],
    b: Sequence[Key],
    use_value: bool = False,
) -> Optional[Witness]:
    """
    Find disjoint subsets of B, one per A item, each covering its A item.

    A subset covers an item when its weight sum is at least the item's weight
    (and, with ``use_value``, its value sum at least the item's value). B items
    outside every subset are discarded.
    """
    b_order = sorted(range(len(b)), key=lambda k: -b[k][0])
    suffix_w = [0] * (len(b_order) + 1)
    suffix_v = [0] * (len(b_order) + 1)
    for d in range(len(b_order) - 1, -1, -1):
        suffix_w[d] = suffix_w[d + 1] + b[b_order[d]][0]
        suffix_v[d] = suffix_v[d + 1] + b[b_order[d]][1]

    need_w = [w for w, _ in a]
    need_v = [v if use_value else 0 for _, v in a]
    slots: List[List[int]] = [[] for _ in a]

    def satisfied(k: int) -> bool:
        return need_w[k] <= 0 and need_v[k] <= 0

    def assign(depth: int) -> bool:
        open_slots = [k for k in range(len(a)) if not satisfied(k)]
        if not open_slots:
            return True
        if depth == len(b_order):
            return False
        if sum(max(need_w[k], 0) for k in open_slots) > suffix_w[depth]:
            return False
        if use_value and sum(max(need_v[k], 0) for k in open_slots) > suffix_v[depth]:
            return False

        bi = b_order[depth]
        w, v = b[bi]
        tried = set()
        for k in open_slots:
            state = (need_w[k], need_v[k])
            if state in tried:
                continue
            tried.add(state)
            need_w[k] -= w
            need_v[k] -= v if use_value else 0
            slots[k].append(bi)
            if assign(depth + 1):
                return True
            slots[k].pop()
            need_w[k] += w
            need_v[k] += v if use_value else 0
        # discard
        return assign(depth + 1)

    if not assign(0):
        return None
    return [(k, list(members)) for k, members in enumerate(slots)]


def witness_keys(kind: DominanceKind, a: Sequence[Key], b: Sequence[Key]) -> Optional[Witness]:
    if kind is DominanceKind.CMT_PACKING:
        return cmt_keys(a, b)
    if kind is DominanceKind.MT_PACKING:
        return packs_into(a, b)
    if kind is DominanceKind.MKP_PACKING:
        return packs_into(a, b, use_value=True)
    if kind is DominanceKind.COVERING:
        return covers(a, b)
    return covers(a, b, use_value=True)


def dominates_keys(kind: DominanceKind, a: Sequence[Key], b: Sequence[Key]) -> bool:
    return witness_keys(kind, a, b) is not None


# BinAssignment entry points
def cmt_dominates(a: BinAssignment, b: BinAssignment) -> bool:
    return cmt_keys(a.keys, b.keys) is not None


def mt_dominates_packing(a: BinAssignment, b: BinAssignment) -> bool:
    return packs_into(a.keys, b.keys) is not None


def dominates_covering(a: BinAssignment, b: BinAssignment) -> bool:
    return covers(a.keys, b.keys) is not None


def dominates_mkp(a: BinAssignment, b: BinAssignment) -> bool:
    return packs_into(a.keys, b.keys, use_value=True) is not None


def dominates_mccp(a: BinAssignment, b: BinAssignment) -> bool:
    return covers(a.keys, b.keys, use_value=True) is not None


def dominates(kind: DominanceKind, a: BinAssignment, b: BinAssignment) -> bool:
    """Does A dominate B under the given criterion."""
    return dominates_keys(kind, a.keys, b.keys)


def find_witness(
    kind: DominanceKind,
    a: BinAssignment,
    b: BinAssignment,
) -> Optional[List[Tuple[int, List[int]]]]:
    """
    Witness partition for ``dominates(kind, a, b)``.

    Returns:
        (A item id, [B item ids]) pairs, one per A item, or None when A does
        not dominate B. B items missing from every pair are discarded
        (covering criteria only).
    """
    found = witness_keys(kind, a.keys, b.keys)
    if found is None:
        return None
    return [
        (a.items[k].id, [b.items[j].id for j in members])
        for k, members in found
    ]
