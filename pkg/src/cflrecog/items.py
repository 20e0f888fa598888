"""Recognition subproblems and the three-valued truth domain."""

from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple


class Item(NamedTuple):
    """``[nt, i, j]``: the claim that ``nt`` derives ``w_i .. w_j`` (1-based, inclusive)."""

    nt: str
    i: int
    j: int

    def __str__(self):
        return f"[{self.nt},{self.i},{self.j}]"

    @property
    def span(self) -> tuple[int, int]:
        return (self.i, self.j)

    def valid(self, n: int) -> bool:
        return 1 <= self.i <= self.j <= n


class SlashedItem(NamedTuple):
    """``outer / inner``: outer derives its span with ``inner`` left as a hole."""

    outer: Item
    inner: Item

    def __str__(self):
        return f"{self.outer}/{self.inner}"

    def valid(self, n: int) -> bool:
        o, q = self.outer, self.inner
        return (o.valid(n) and o.i <= q.i <= q.j <= o.j
                and (q.i, q.j) != (o.i, o.j))


class Truth3(IntEnum):
    F = 0
    T = 1
    BOT = 2

    def __str__(self):
        return "⊥" if self is Truth3.BOT else str(int(self))


def and3(a: Truth3, b: Truth3) -> Truth3:
    if a == Truth3.F or b == Truth3.F:
        return Truth3.F
    if a == Truth3.T and b == Truth3.T:
        return Truth3.T
    return Truth3.BOT


def or3(a: Truth3, b: Truth3) -> Truth3:
    if a == Truth3.T or b == Truth3.T:
        return Truth3.T
    if a == Truth3.F and b == Truth3.F:
        return Truth3.F
    return Truth3.BOT


def not3(a: Truth3) -> Truth3:
    if a == Truth3.BOT:
        return a
    return Truth3.F if a == Truth3.T else Truth3.T
