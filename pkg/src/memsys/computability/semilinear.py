"""Linear and semilinear subsets of N^d."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class LinearSet:
    """``{base + k1*p1 + ... + km*pm : ki in N}``."""

    base: tuple
    periods: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(int(x) for x in self.base))
        object.__setattr__(self, "periods", tuple(tuple(int(x) for x in p) for p in self.periods))
        d = len(self.base)
        if any(len(p) != d for p in self.periods):
            raise ValueError("all vectors of a linear set must share its dimension")
        if any(x < 0 for v in (self.base, *self.periods) for x in v):
            raise ValueError("linear sets live in N^d")

    @property
    def dimension(self) -> int:
        return len(self.base)

    def __contains__(self, v) -> bool:
        return linear_membership(self, tuple(v))


@dataclass(frozen=True)
class SemilinearSet:
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        dims = {c.dimension for c in self.components}
        if len(dims) > 1:
            raise ValueError("components of a semilinear set must share a dimension")

    @property
    def dimension(self) -> int | None:
        return self.components[0].dimension if self.components else None

    def __contains__(self, v) -> bool:
        return semilinear_membership(self, v)


def linear_membership(ls: LinearSet, v: tuple) -> bool:
    if len(v) != ls.dimension:
        raise ValueError(f"dimension mismatch: {len(v)} vs {ls.dimension}")
    rest = tuple(a - b for a, b in zip(v, ls.base))
    if any(x < 0 for x in rest):
        return False
    periods = tuple(p for p in ls.periods if any(p))

    @lru_cache(maxsize=None)
    def reach(i: int, r: tuple) -> bool:
        # can r be written as a non-negative combination of periods[i:]?
        if not any(r):
            return True
        if i == len(periods):
            return False
        p = periods[i]
        k = 0
        while all(x >= 0 for x in r):
            if reach(i + 1, r):
                return True
            r = tuple(a - k_ for a, k_ in zip(r, p))
            k += 1
        return False

    return reach(0, rest)


def semilinear_membership(s: SemilinearSet, v) -> bool:
    v = tuple(int(x) for x in v)
    if s.dimension is not None and len(v) != s.dimension:
        raise ValueError(f"dimension mismatch: {len(v)} vs {s.dimension}")
    return any(linear_membership(c, v) for c in s.components)


def enumerate_members(s: SemilinearSet, coefficient_bound: int) -> set:
    """All points with every coefficient at most ``coefficient_bound``."""
    out = set()
    for c in s.components:
        for ks in itertools.product(range(coefficient_bound + 1), repeat=len(c.periods)):
            point = list(c.base)
            for k, p in zip(ks, c.periods):
                for j, x in enumerate(p):
                    point[j] += k * x
            out.add(tuple(point))
    return out
