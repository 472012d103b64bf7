"""Exact permutations on arbitrary finite ground sets.

A :class:`Permutation` is a bijection of a finite set of hashable elements
(here: residues mod v, or 1-based grid positions), stored as an explicit map.
Fixed points are part of the domain, so "is a single cycle on its domain" is a
meaningful question, which is what the compatibility and characterization
checks need.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping, Sequence


class Permutation:
    """Immutable bijection on a finite ground set."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[Hashable, Hashable]):
        m = dict(mapping)
        if set(m.keys()) != set(m.values()):
            raise ValueError("mapping is not a bijection of its domain")
        self._map = m
        self._hash: int | None = None

    # -- construction ----------------------------------------------------

    @classmethod
    def identity(cls, domain: Iterable[Hashable]) -> "Permutation":
        return cls({x: x for x in domain})

    @classmethod
    def from_cycles(
        cls,
        cycles: Iterable[Sequence[Hashable]],
        domain: Iterable[Hashable] | None = None,
    ) -> "Permutation":
        """Build from disjoint cycles; extra domain elements become fixed points."""
        m: dict = {}
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                if a in m:
                    raise ValueError(f"element {a!r} appears in two cycles")
                m[a] = b
        if domain is not None:
            for x in domain:
                m.setdefault(x, x)
        return cls(m)

    # -- mapping interface -------------------------------------------------

    def __call__(self, x: Hashable) -> Hashable:
        return self._map[x]

    def __len__(self) -> int:
        return len(self._map)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self._map)

    def __contains__(self, x: Hashable) -> bool:
        return x in self._map

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def as_dict(self) -> dict:
        return dict(self._map)

    # -- algebra -------------------------------------------------------------

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other: apply ``other`` first, then ``self``."""
        if self.domain != other.domain:
            raise ValueError("composition requires equal ground sets")
        return Permutation({x: self._map[other._map[x]] for x in self._map})

    def inverse(self) -> "Permutation":
        return Permutation({v: k for k, v in self._map.items()})

    def power(self, exponent: int) -> "Permutation":
        result = {}
        for cyc in self.cycles():
            ln = len(cyc)
            for pos, x in enumerate(cyc):
                result[x] = cyc[(pos + exponent) % ln]
        return Permutation(result)

    # -- structure ---------------------------------------------------------

    def cycles(self) -> tuple[tuple[Hashable, ...], ...]:
        """Disjoint cycles (fixed points included), each rotated to start at its
        minimum, sorted by that minimum.  Elements must be orderable."""
        seen: set = set()
        out: list[tuple] = []
        for start in self._map:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self._map[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self._map[nxt]
            k = cyc.index(min(cyc))
            out.append(tuple(cyc[k:] + cyc[:k]))
        out.sort(key=lambda c: c[0])
        return tuple(out)

    def cycle_through(self, x: Hashable) -> tuple[Hashable, ...]:
        """The cycle containing ``x``, listed starting from ``x``."""
        cyc = [x]
        nxt = self._map[x]
        while nxt != x:
            cyc.append(nxt)
            nxt = self._map[nxt]
        return tuple(cyc)

    def is_single_cycle(self) -> bool:
        """True iff the permutation is one cycle covering its whole domain."""
        if not self._map:
            return False
        return len(self.cycle_through(next(iter(self._map)))) == len(self._map)

    # -- equality / hashing ----------------------------------------------------

    def key(self) -> tuple:
        """Canonical serialization: (x, image) pairs sorted by x."""
        return tuple(sorted(self._map.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        cyc = "".join(
            "(" + ",".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1
        )
        return f"Permutation[{cyc or 'id'}]"
