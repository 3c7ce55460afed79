# ---------------------------------------------------------------------------
# Candidate bitmap join indexes for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
from dataclasses import dataclass, field
from functools import reduce
from typing import FrozenSet, Optional, Tuple

# Local imports
from bjia.miner.itemset import FrequentClosedItemset
from bjia.workload import JOIN, Predicate, QualifiedAttribute

NO_NON_KEY = "no non-key attribute"


@dataclass(frozen=True)
class CandidateIndex:
    id: str
    on_attributes: Tuple[QualifiedAttribute, ...]
    from_tables: FrozenSet[str]
    join_predicates: Tuple[Predicate, ...]
    combined_cardinality: int
    source_itemset: Optional[FrequentClosedItemset] = field(
        default=None, compare=False)

    @property
    def dimensions(self):
        """ Joined dimensions, in join predicate order"""
        return tuple(p.right.table for p in self.join_predicates)

    @property
    def on_dimensions(self):
        return tuple(sorted(set(a.table for a in self.on_attributes)))


@dataclass(frozen=True)
class Rejection:
    itemset: FrequentClosedItemset
    reason: str


@dataclass(frozen=True)
class CandidateSet:
    candidates: Tuple[CandidateIndex, ...] = ()
    rejections: Tuple[Rejection, ...] = ()

    def __len__(self):
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def get(self, index_id):
        for c in self.candidates:
            if c.id == index_id:
                return c
        return None


def candidate_id(on_attributes, join_predicates):
    """ Canonical name of an index from its On attributes and joins"""
    name = "bji_" + "_".join(
        ("%s_%s" % (a.table, a.attribute)).lower()
        for a in sorted(on_attributes))
    owners = set(a.table for a in on_attributes)
    extra = sorted(p.right.table for p in join_predicates
                   if p.right.table not in owners)
    if extra:
        name += "_via_" + "_".join(t.lower() for t in extra)
    return name


def make_candidate(on_attributes, cat, source=None):
    """ Index on the given dimension attributes joined to the fact table

    Returns None when an attribute's dimension cannot be joined to the fact.
    """
    joins = []
    for dim in sorted(set(a.table for a in on_attributes)):
        fk = cat.foreign_key_of(dim)
        if fk is None:
            return None
        joins.append(_join(cat, fk))
    return _build(tuple(sorted(on_attributes)), joins, cat, source)


def _join(cat, fk):
    dim, pk = cat.foreign_keys[fk]
    return Predicate(JOIN, QualifiedAttribute(cat.fact.name, fk),
                     QualifiedAttribute(dim, pk), "=")


def _build(on_attributes, joins, cat, source):
    joins = tuple(sorted(joins, key=lambda p: p.right.table))
    cardinality = reduce(
        lambda acc, a: acc * cat.attribute(a.table, a.attribute).cardinality,
        on_attributes, 1)
    tables = frozenset([cat.fact.name] + [p.right.table for p in joins])
    return CandidateIndex(candidate_id(on_attributes, joins), on_attributes,
                          tables, joins, cardinality, source)


def generate_candidate(s, cat):
    """ Bitmap join index for a frequent itemset, or a Rejection

    Fact foreign keys give the From and Where clauses, dimension primary keys
    the From clause and dimension non-key attributes the On clause. A
    dimension takes part only when its join is witnessed by its primary key
    or the referencing fact foreign key.
    """
    witnessed = set()
    on_attributes = []
    for a in s.attributes:
        if cat.is_foreign_key(a.table, a.attribute):
            witnessed.add(cat.foreign_keys[a.attribute][0])
        elif cat.dimension(a.table) is None:
            continue
        elif cat.is_primary_key(a.table, a.attribute):
            if cat.foreign_key_of(a.table) is not None:
                witnessed.add(a.table)
        else:
            on_attributes.append(a)

    if not on_attributes:
        return Rejection(s, NO_NON_KEY)
    for a in on_attributes:
        if a.table not in witnessed:
            return Rejection(s, "no witnessed join to %s" % a.table)

    joins = [_join(cat, cat.foreign_key_of(dim)) for dim in witnessed]
    return _build(tuple(sorted(on_attributes)), joins, cat, s)


def build_candidate_set(itemsets, cat):
    candidates = []
    rejections = []
    seen = set()
    for s in itemsets:
        result = generate_candidate(s, cat)
        if isinstance(result, Rejection):
            rejections.append(result)
        elif result.id not in seen:
            seen.add(result.id)
            candidates.append(result)
    return CandidateSet(tuple(candidates), tuple(rejections))
