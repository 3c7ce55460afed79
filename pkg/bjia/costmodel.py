# ---------------------------------------------------------------------------
# I/O cost models for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# Costs are expressed in number of page I/Os. Bitmap join indexes are reached
# through a b-tree whose leaves point to the bitmaps; queries not served by
# an index run every fact-dimension join as a hash join.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import math
from dataclasses import dataclass
from typing import Optional

# Local imports
from bjia.errors import CostModelError
from bjia.workload import EQUALITY_OPS, INEQUALITY_OPS


@dataclass(frozen=True)
class BitmapAccessProfile:
    d: int
    index: object

    def __post_init__(self):
        if not 1 <= self.d <= self.index.combined_cardinality:
            raise CostModelError("d=%d outside [1, %d] for %s" % (
                self.d, self.index.combined_cardinality, self.index.id))


@dataclass(frozen=True)
class QueryCostBreakdown:
    query_id: int
    index_id: Optional[str]
    index_access: float
    residual_joins: float
    baseline: float
    total: float


def _ceil_div(a, b):
    return -(-a // b)


def index_size_bytes(i, cat):
    return _ceil_div(i.combined_cardinality * cat.fact.row_count, 8)


def _bitmap_pages(i, cat):
    """ Pages holding every bitmap of the index, |A||F| / (8 S_p)"""
    return (i.combined_cardinality * cat.fact.row_count /
            (8 * cat.params.page_size_bytes))


def maintenance_fact_insert(i, cat):
    lookups = sum(cat.dimension(d).page_count for d in i.dimensions)
    return lookups + _bitmap_pages(i, cat)


def maintenance_dimension_insert(i, cat, expanding=False):
    xi = 1 if expanding else 0
    return cat.fact.page_count + (1 + xi) * _bitmap_pages(i, cat)


def btree_order(on_attrs, cat):
    width = sum(cat.attribute(a.table, a.attribute).width_bytes
                for a in on_attrs)
    entry = width + cat.params.pointer_size_bytes
    if entry > cat.params.page_size_bytes:
        raise CostModelError("key too wide for page (%d + %d > %d bytes)" % (
            width, cat.params.pointer_size_bytes,
            cat.params.page_size_bytes))
    return cat.params.page_size_bytes // entry + 1


def btree_height(keys, m):
    """ Smallest h with m^h >= keys, i.e. ceil(log_m keys)"""
    h, reach = 0, 1
    while reach < keys:
        reach *= m
        h += 1
    return h


def access_cost(i, profile, cat):
    m = btree_order(i.on_attributes, cat)
    if m <= 1:
        raise CostModelError("b-tree order %d for %s" % (m, i.id))
    keys = i.combined_cardinality
    rows = cat.fact.row_count
    p_f = cat.fact.page_count

    descent = max(0, btree_height(keys, m) - 1)
    scan = _ceil_div(keys, m - 1) + \
        profile.d * _ceil_div(rows, 8 * cat.params.page_size_bytes)
    n_r = profile.d * rows / keys
    read = p_f * -math.expm1(-n_r / p_f)
    return descent + scan + read


def hash_join_cost(p_r, p_s):
    return 3 * (p_r + p_s)


def _star_joins(q, cat):
    return tuple(p for p in q.joins
                 if cat.is_foreign_key(p.left.table, p.left.attribute) and
                 cat.dimension(p.right.table) is not None)


def baseline_cost(q, cat):
    p_f = cat.fact.page_count
    return sum(hash_join_cost(p_f, cat.dimension(p.right.table).page_count)
               for p in _star_joins(q, cat))


def _referenced(q):
    found = set(p.left for p in q.restrictions)
    found.update(q.group_by)
    return found


def applicable(q, i):
    joins = set(q.joins)
    if any(p not in joins for p in i.join_predicates):
        return False
    referenced = _referenced(q)
    return any(a in referenced for a in i.on_attributes)


def _bitmaps_for(attr, q, cardinality):
    factor = cardinality
    for p in q.restrictions:
        if p.left != attr:
            continue
        if p.operator in EQUALITY_OPS:
            f = 1
        elif p.operator == "IN":
            f = len(set(p.right))
        elif p.operator in INEQUALITY_OPS:
            f = max(1, cardinality - 1)
        else:
            f = cardinality
        factor = min(factor, f)
    return factor


def derive_d(q, i, cat):
    """ Bitmaps read to answer q through i

    Product over the On attributes of 1 for an equality, k for an IN list of
    k values and the attribute cardinality when the query does not restrict
    it; clamped to [1, |A|].
    """
    d = 1
    for a in i.on_attributes:
        d *= _bitmaps_for(a, q, cat.attribute(a.table, a.attribute).cardinality)
    return min(max(d, 1), i.combined_cardinality)


def index_option(q, i, cat):
    """ (index access, residual hash joins) when q is answered through i"""
    profile = BitmapAccessProfile(derive_d(q, i, cat), i)
    covered = set(i.join_predicates)
    p_f = cat.fact.page_count
    residual = sum(
        hash_join_cost(p_f, cat.dimension(p.right.table).page_count)
        for p in _star_joins(q, cat) if p not in covered)
    return access_cost(i, profile, cat), residual


def _breakdown(q, baseline, options):
    """ Cheapest of the baseline and the (index, access, residual) options"""
    best = None
    for i, size, access, residual in options:
        total = access + residual
        key = (total, size, i.id)
        if best is None or key < best[0]:
            best = (key, i, access, residual)
    if best is None or best[0][0] >= baseline:
        return QueryCostBreakdown(q.id, None, 0.0, baseline, baseline,
                                  baseline)
    key, i, access, residual = best
    return QueryCostBreakdown(q.id, i.id, access, residual, baseline, key[0])


def query_cost(q, config, cat):
    options = []
    for i in config:
        if applicable(q, i):
            access, residual = index_option(q, i, cat)
            options.append((i, index_size_bytes(i, cat), access, residual))
    return _breakdown(q, baseline_cost(q, cat), options)


def workload_cost(queries, config, cat):
    return sum(query_cost(q, config, cat).total for q in queries)


class CostModel:
    """ Workload costing bound to a catalog, with per (query, index) caching"""

    def __init__(self, advisor, cat, queries):
        self.advisor = advisor
        self.catalog = cat
        self.queries = tuple(queries)
        self._baselines = {q.id: baseline_cost(q, cat) for q in self.queries}
        self._options = {}
        self._sizes = {}

    def size(self, i):
        if i.id not in self._sizes:
            self._sizes[i.id] = index_size_bytes(i, self.catalog)
        return self._sizes[i.id]

    def baseline(self, q):
        return self._baselines[q.id]

    def option(self, q, i):
        """ (access, residual) for q through i, None when i does not apply"""
        key = (q.id, i.id)
        if key not in self._options:
            result = None
            if applicable(q, i):
                result = index_option(q, i, self.catalog)
            self._options[key] = result
        return self._options[key]

    def query_cost(self, q, config):
        options = []
        for i in config:
            found = self.option(q, i)
            if found is not None:
                options.append((i, self.size(i)) + found)
        return _breakdown(q, self.baseline(q), options)

    def per_query(self, config):
        return [self.query_cost(q, config) for q in self.queries]

    def totals(self, config):
        return [b.total for b in self.per_query(config)]

    def workload_cost(self, config):
        return sum(self.totals(config))

    def baseline_cost(self):
        return sum(self._baselines[q.id] for q in self.queries)

    def extended_totals(self, totals, i):
        """ Per-query totals once i joins a configuration with these totals"""
        result = []
        for q, current in zip(self.queries, totals):
            found = self.option(q, i)
            if found is not None:
                result.append(min(current, found[0] + found[1]))
            else:
                result.append(current)
        return result

    def maintenance(self, i):
        cat = self.catalog
        insert = maintenance_dimension_insert(i, cat, False)
        expanding = maintenance_dimension_insert(i, cat, True)
        return {
            "index": i.id,
            "fact_insert": maintenance_fact_insert(i, cat),
            "dimensions": [
                {"dimension": d, "insert": insert,
                 "insert_expanding": expanding}
                for d in i.on_dimensions],
        }
