"""Immutable finite multisets.

Used both for markings (elements are place names) and for linkings
(elements are ``(place, place)`` pairs). Elements must be mutually
orderable so that every enumeration is deterministic.
"""

from __future__ import annotations

from typing import Any, Hashable, Iterable, Iterator, Mapping


class Multiset:
    """A finite map from elements to positive counts.

    ``+`` is multiset union, ``-`` is truncated difference and ``<=`` is
    inclusion. Instances are hashable and compare structurally.
    """

    __slots__ = ("_counts", "_key", "_hash")

    def __init__(self, counts: Mapping[Hashable, int] | Iterable[Hashable] = ()):
        if isinstance(counts, Mapping):
            items = counts.items()
        else:
            acc: dict = {}
            for x in counts:
                acc[x] = acc.get(x, 0) + 1
            items = acc.items()
        clean = {}
        for k, n in items:
            if n < 0:
                raise ValueError(f"negative count {n} for {k!r}")
            if n:
                clean[k] = n
        self._key = tuple(sorted(clean.items()))
        self._counts = dict(self._key)
        self._hash = hash(self._key)

    @classmethod
    def of(cls, *elements: Hashable) -> "Multiset":
        return cls(elements)

    @classmethod
    def _from_sorted(cls, key: tuple) -> "Multiset":
        m = object.__new__(cls)
        m._key = key
        m._counts = dict(key)
        m._hash = hash(key)
        return m

    # -- queries ---------------------------------------------------------

    def __getitem__(self, x: Hashable) -> int:
        return self._counts.get(x, 0)

    def __contains__(self, x: object) -> bool:
        return x in self._counts

    def __iter__(self) -> Iterator:
        """Iterate over the support in sorted order."""
        return (k for k, _ in self._key)

    def __len__(self) -> int:
        """Number of distinct elements (support size), not the multiset size."""
        return len(self._key)

    def __bool__(self) -> bool:
        return bool(self._key)

    @property
    def size(self) -> int:
        return sum(n for _, n in self._key)

    def items(self) -> tuple:
        return self._key

    def support(self) -> tuple:
        return tuple(k for k, _ in self._key)

    def elements(self) -> list:
        """All occurrences, sorted, repeated by multiplicity."""
        out = []
        for k, n in self._key:
            out.extend([k] * n)
        return out

    def sort_key(self) -> tuple:
        return self._key

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "Multiset") -> "Multiset":
        if not other._key:
            return self
        if not self._key:
            return other
        acc = dict(self._counts)
        for k, n in other._key:
            acc[k] = acc.get(k, 0) + n
        return Multiset._from_sorted(tuple(sorted(acc.items())))

    def __sub__(self, other: "Multiset") -> "Multiset":
        if not other._key:
            return self
        oc = other._counts
        key = tuple((k, n - oc.get(k, 0)) for k, n in self._key if n > oc.get(k, 0))
        return Multiset._from_sorted(key)

    def __mul__(self, j: int) -> "Multiset":
        if j < 0:
            raise ValueError("scalar must be non-negative")
        if j == 0:
            return EMPTY
        return Multiset._from_sorted(tuple((k, n * j) for k, n in self._key))

    __rmul__ = __mul__

    def __le__(self, other: "Multiset") -> bool:
        oc = other._counts
        return all(n <= oc.get(k, 0) for k, n in self._key)

    def __ge__(self, other: "Multiset") -> bool:
        return other <= self

    def __lt__(self, other: "Multiset") -> bool:
        return self <= other and self != other

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def map(self, f) -> "Multiset":
        """Image of the multiset under ``f``, counts summed on collisions."""
        acc: dict = {}
        for k, n in self._key:
            fk = f(k)
            acc[fk] = acc.get(fk, 0) + n
        return Multiset(acc)

    # -- display ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"Multiset({self._counts!r})"

    def __str__(self) -> str:
        return format_mset(self)


EMPTY = Multiset()


def format_mset(m: Multiset) -> str:
    """Render in the textual net syntax, e.g. ``2*s1 + s2`` or ``0``."""
    if not m:
        return "0"
    parts = []
    for k, n in m.items():
        name = k if isinstance(k, str) else "(" + ",".join(map(str, k)) + ")"
        parts.append(name if n == 1 else f"{n}*{name}")
    return " + ".join(parts)
