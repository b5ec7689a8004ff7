"""Penalty-table slot encoding.

A pseudo-node (or a plain cycle node) is crossed by a tour in one of three
ways, named by the pair of boundary edges the tour uses: ``CENTRE`` uses the
two cycle edges (j, l), ``LEFT`` uses the left cycle edge and the tree edge
(j, k), ``RIGHT`` uses the tree edge and the right cycle edge (k, l).

The inner structure ``a = (a1, a2)`` records, for the left and right cycle
port, whether the tour edge just inside that port is a cycle edge (bit 0) or a
tree edge (bit 1).  A port that is not used always carries bit 0, so the
feasible slots are the four CENTRE structures plus two for LEFT and two for
RIGHT.
"""
from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple


class Inner(IntEnum):
    M = 0  # (0, 0)
    L = 1  # (1, 0)
    R = 2  # (0, 1)
    B = 3  # (1, 1)

    @property
    def a1(self) -> int:
        return self.value & 1

    @property
    def a2(self) -> int:
        return self.value >> 1

    @classmethod
    def from_bits(cls, a1: int, a2: int) -> "Inner":
        return cls(a1 + 2 * a2)


class Traversal(IntEnum):
    CENTRE = 0
    LEFT = 1
    RIGHT = 2

    @property
    def ports(self) -> tuple[str, str]:
        """Boundary edges used, in the forward direction of the stored path."""
        return (("j", "l"), ("j", "k"), ("k", "l"))[self.value]


class Slot(NamedTuple):
    inner: Inner
    traversal: Traversal

    @property
    def index(self) -> int:
        return slot_index(self.inner.a1, self.inner.a2, self.traversal)

    def __str__(self) -> str:
        return f"{self.inner.name}/{self.traversal.name}"


N_SLOTS = 8
CENTRE_BASE = 0
LEFT_BASE = 4
RIGHT_BASE = 6


def slot_index(a1: int, a2: int, traversal: Traversal) -> int:
    if traversal == Traversal.CENTRE:
        return a1 + 2 * a2
    if traversal == Traversal.LEFT:
        if a2:
            raise ValueError("LEFT traversal leaves the right port unused")
        return LEFT_BASE + a1
    if a1:
        raise ValueError("RIGHT traversal leaves the left port unused")
    return RIGHT_BASE + a2


def slot_from_index(idx: int) -> Slot:
    if idx < LEFT_BASE:
        return Slot(Inner(idx), Traversal.CENTRE)
    if idx < RIGHT_BASE:
        return Slot(Inner.from_bits(idx - LEFT_BASE, 0), Traversal.LEFT)
    return Slot(Inner.from_bits(0, idx - RIGHT_BASE), Traversal.RIGHT)


SLOTS: tuple[Slot, ...] = tuple(slot_from_index(i) for i in range(N_SLOTS))


def as_slot(slot) -> Slot:
    """Accept a Slot, a slot index, or an (inner, traversal) pair."""
    if isinstance(slot, Slot):
        return slot
    if isinstance(slot, int):
        return slot_from_index(slot)
    inner, trav = slot
    inner = Inner[inner] if isinstance(inner, str) else Inner(inner)
    trav = Traversal[trav] if isinstance(trav, str) else Traversal(trav)
    return SLOTS[slot_index(inner.a1, inner.a2, trav)]
