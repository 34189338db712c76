# reductions/ledger.py
"""
Bookkeeping shared by the value-preserving surgeries.

An OffsetLedger relates optima across a chain of transformations:
mc(transformed) = mc(original) + ledger.total. Each entry keeps the non-negative
magnitude of its correction and a direction (+1 for subdivisions, -1 for
degree-one removals).

A TransformLog is the ordered list of records needed to undo the chain.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from graphs.multigraph import format_rational

SUBDIVIDE = 'subdivide'
DEGREE_ONE = 'degree_one'

# reasons attached to subdivision records
CONFLICT = 'eliminate_conflict'
PREPROCESS = 'preprocess_crossing'
NORMALIZE = 'normalize_face'


@dataclass(frozen=True)
class LedgerEntry:
    tag: str
    ids: tuple
    magnitude: Fraction
    sign: int = 1

    @property
    def offset(self) -> Fraction:
        return self.sign * self.magnitude

    def as_dict(self) -> dict:
        return {
            'tag': self.tag,
            'ids': list(self.ids),
            'offset': format_rational(self.offset),
        }


@dataclass(frozen=True)
class OffsetLedger:
    entries: tuple = ()

    @property
    def total(self) -> Fraction:
        return sum((e.offset for e in self.entries), Fraction(0))

    def record(self, tag: str, ids, magnitude, sign=1) -> 'OffsetLedger':
        return OffsetLedger(self.entries + (LedgerEntry(tag, tuple(ids), Fraction(magnitude), sign),))

    def __add__(self, other: 'OffsetLedger') -> 'OffsetLedger':
        return OffsetLedger(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)


# Transform log records

@dataclass(frozen=True)
class Subdivide:
    """ Edge replaced by the path endpoints[0] - endpoints[1] - endpoints[2] - endpoints[3]. """
    edge: int
    weight: Fraction
    endpoints: tuple
    edges: tuple
    split: tuple
    reason: str = CONFLICT
    crossing: Optional[int] = None

    @property
    def added_vertices(self) -> tuple:
        return self.endpoints[1:3]


@dataclass(frozen=True)
class RemoveDegreeOne:
    """ A vertex removed with its only edge (edge is None for an isolated vertex). """
    vertex: int
    edge: Optional[int]
    neighbor: Optional[int]
    weight: Fraction = Fraction(0)


@dataclass(frozen=True)
class ContractCorners:
    crossing: int
    corners: tuple
    merged: int


@dataclass(frozen=True)
class ConstrainCrossing:
    crossing: int
    corners: tuple
    cycle_edges: tuple


@dataclass(frozen=True)
class AddChord:
    edge: int


@dataclass(frozen=True)
class AddHub:
    hub: int
    edges: tuple


@dataclass(frozen=True)
class TransformLog:
    records: tuple = field(default_factory=tuple)

    def append(self, *records) -> 'TransformLog':
        return TransformLog(self.records + tuple(records))

    def __add__(self, other: 'TransformLog') -> 'TransformLog':
        return TransformLog(self.records + other.records)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)
