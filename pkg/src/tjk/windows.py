"""Truncation windows and the doubling-based stability certificate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

__all__ = ["StabilizationError", "TruncationWindow", "WindowConfig", "certify"]

T = TypeVar("T")
W = TypeVar("W")


class StabilizationError(RuntimeError):
    """A windowed computation failed to stabilize within the doubling budget."""


@dataclass(frozen=True)
class TruncationWindow:
    """The finite box {y^i x^j : i <= max_y, j <= max_x}."""

    max_y: int
    max_x: int

    def __post_init__(self):
        if self.max_y < 0 or self.max_x < 0:
            raise ValueError("window bounds must be non-negative")

    def doubled(self) -> "TruncationWindow":
        return TruncationWindow(2 * max(1, self.max_y), 2 * max(1, self.max_x))

    @property
    def dim(self) -> int:
        return (self.max_y + 1) * (self.max_x + 1)

    def index(self, i: int, j: int) -> int:
        return i * (self.max_x + 1) + j

    def fits(self, i: int, j: int) -> bool:
        return i <= self.max_y and j <= self.max_x

    def monomials(self):
        return [(i, j) for i in range(self.max_y + 1) for j in range(self.max_x + 1)]

    @classmethod
    def parse(cls, text: str) -> "TruncationWindow":
        a, b = (int(t) for t in text.replace("x", ",").split(","))
        return cls(a, b)


@dataclass(frozen=True)
class WindowConfig:
    """How windowed quantities are certified.

    ``initial`` overrides the default starting box (generator support plus
    ``pad``); ``budget`` is the number of doublings allowed; ``rep_height``
    is the starting height for windows on realized modules.
    """

    initial: Optional[TruncationWindow] = None
    budget: int = 3
    pad: tuple = (4, 4)
    rep_height: int = 4

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")

    def start_for(self, max_y: int, max_x: int) -> TruncationWindow:
        if self.initial is not None:
            return self.initial
        return TruncationWindow(max_y + self.pad[0], max_x + self.pad[1])


def certify(compute: Callable[[W], T], start: W, budget: int,
            grow: Callable[[W], W] = lambda w: w.doubled(), what: str = "windowed quantity") -> T:
    """Evaluate ``compute`` on successively doubled windows until two
    consecutive windows agree; raise :class:`StabilizationError` once
    ``budget`` doublings are used up."""
    prev = compute(start)
    w = start
    for _ in range(budget):
        w = grow(w)
        cur = compute(w)
        if cur == prev:
            return cur
        prev = cur
    raise StabilizationError(f"{what} did not stabilize within {budget} doubling(s) from {start}")
