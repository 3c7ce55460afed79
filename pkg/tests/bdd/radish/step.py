# -*- coding: utf-8 -*-

from radish import step, given, when, then
from radish import world

import filecmp
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pandas as pd

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.normpath(os.path.join(HERE, "..", "..", "..")))

from bjia.candidates import NO_NON_KEY, build_candidate_set  # noqa
from bjia.candidates import make_candidate  # noqa
from bjia.catalog import dump_catalog, load_catalog, parse_catalog  # noqa
from bjia.costmodel import (BitmapAccessProfile, CostModel,  # noqa
                            access_cost, baseline_cost, btree_height,
                            btree_order, derive_d, hash_join_cost,
                            index_size_bytes, maintenance_dimension_insert,
                            maintenance_fact_insert, query_cost,
                            workload_cost)
from bjia.errors import AdvisorError  # noqa
from bjia.miner.bruteforce import mine_closed_bruteforce  # noqa
from bjia.miner.close import mine_closed  # noqa
from bjia.miner.itemset import Itemset, closure, support  # noqa
from bjia.objective import hybrid, profit, ratio  # noqa
from bjia.objective.controller import SelectionState  # noqa
from bjia.report import emit_ddl, index_ddl  # noqa
from bjia.selector import ObjectiveKind, greedy_select, load_objective  # noqa
from bjia.sweep import SweepSpec, parse_values, render_csv  # noqa
from bjia.synthetic import write_synthetic  # noqa
from bjia.workload import (JOIN, RESTRICTION, Predicate,  # noqa
                           QualifiedAttribute, Query, QueryAttributeMatrix,
                           build_matrix, emit_workload,
                           extract_indexable_attributes, load_workload,
                           parse_workload, validate_workload)

IO_TOLERANCE = 0.1


def attempt(step, fn, *args, **kwargs):
    step.context.error = None
    try:
        return fn(*args, **kwargs)
    except AdvisorError as e:
        step.context.error = e
        return None


def names(text):
    return [n.strip() for n in text.split(",") if n.strip()]


def attributes(text):
    return [QualifiedAttribute(*n.split(".")) for n in names(text)]


def query(step, qid):
    for q in step.context.queries:
        if q.id == qid:
            return q
    assert False, "no query %d" % qid


def close_to(value, expected, tolerance=IO_TOLERANCE):
    assert abs(value - expected) <= tolerance, \
        "%r differs from %r by more than %g" % (value, expected, tolerance)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@step("the example catalog is loaded")
def example_catalog(step):
    step.context.catalog = load_catalog(world.catalog)


@step("I load the catalog")
def load_inline_catalog(step):
    step.context.catalog = attempt(step, parse_catalog, step.text)


@step('it fails with a {tag:w} error mentioning "{text}"')
def fails_with(step, tag, text):
    error = step.context.error
    assert error is not None, "no error was raised"
    assert error.tag == tag, "%s raised instead" % error.tag
    assert text in str(error), str(error)


@step("table {name:w} spans {pages:d} pages")
def table_pages(step, name, pages):
    assert step.context.catalog.table(name).page_count == pages


@step("the catalog is emitted and loaded back")
def catalog_round_trip(step):
    step.context.reloaded = parse_catalog(dump_catalog(step.context.catalog))


@step("both catalogs are equal")
def catalogs_equal(step):
    assert step.context.reloaded == step.context.catalog


# ---------------------------------------------------------------------------
# Workload
# ---------------------------------------------------------------------------

@step("the example workload is parsed")
def example_workload(step):
    queries = load_workload(world.workload)
    step.context.queries = validate_workload(queries, step.context.catalog)


def parse_and_validate(step, text, lenient):
    queries = parse_workload(text, lenient)
    if getattr(step.context, "catalog", None) is not None:
        queries = validate_workload(queries, step.context.catalog)
    return queries


@step("I parse the workload")
def parse_inline_workload(step):
    step.context.queries = attempt(step, parse_and_validate, step,
                                   step.text, False)


@step("I parse the workload leniently")
def parse_inline_workload_leniently(step):
    step.context.queries = attempt(step, parse_and_validate, step,
                                   step.text, True)


@step("the workload has {count:d} queries")
def workload_size(step, count):
    assert step.context.error is None, str(step.context.error)
    assert len(step.context.queries) == count


@step("query {qid:d} has {joins:d} joins and {restrictions:d} restrictions")
def query_shape(step, qid, joins, restrictions):
    q = query(step, qid)
    assert len(q.joins) == joins
    assert len(q.restrictions) == restrictions


@step("query {qid:d} restricts {attr:S} with {op:S}")
def query_restriction(step, qid, attr, op):
    q = query(step, qid)
    found = [p.operator for p in q.restrictions if str(p.left) == attr]
    assert op in found, found


@step("query {qid:d} groups by {attr:S}")
def query_grouping(step, qid, attr):
    assert attr in [str(a) for a in query(step, qid).group_by]


@step("the workload is emitted and parsed again")
def workload_round_trip(step):
    text = emit_workload(step.context.queries)
    step.context.reparsed = validate_workload(parse_workload(text),
                                              step.context.catalog)


@step("the parsed queries are unchanged")
def queries_unchanged(step):
    assert step.context.reparsed == step.context.queries


@step("the matrix is built")
def matrix_built(step):
    step.context.keys_from_metadata = False
    step.context.matrix = build_matrix(step.context.queries,
                                       step.context.catalog)


@step("the matrix is built with keys from metadata")
def matrix_built_from_metadata(step):
    step.context.keys_from_metadata = True
    step.context.matrix = build_matrix(step.context.queries,
                                       step.context.catalog, True)


@step("the matrix has {rows:d} rows and {cols:d} columns")
def matrix_shape(step, rows, cols):
    assert step.context.matrix.shape == (rows, cols)


@step('the matrix columns are "{columns}"')
def matrix_columns(step, columns):
    found = [str(c) for c in step.context.matrix.columns]
    assert found == names(columns), found


@step('query {qid:d} uses "{columns}"')
def matrix_row(step, qid, columns):
    found = sorted(str(c) for c in step.context.matrix.row(qid))
    assert found == names(columns), found


@step("every matrix cell matches the extracted attributes")
def matrix_cells(step):
    m = step.context.matrix
    cat = step.context.catalog
    for q in step.context.queries:
        extracted = extract_indexable_attributes(
            q, cat, step.context.keys_from_metadata)
        assert set(extracted) <= set(m.columns), q.id
        for a in m.columns:
            assert m.cell(q.id, a) == (a in extracted), (q.id, str(a))


# ---------------------------------------------------------------------------
# Mining
# ---------------------------------------------------------------------------

@step("I mine closed itemsets at minsup {minsup:S}")
def mine(step, minsup):
    step.context.itemsets = attempt(step, mine_closed, step.context.matrix,
                                    minsup)


@step("I mine closed itemsets exhaustively at minsup {minsup:S}")
def mine_exhaustively(step, minsup):
    step.context.itemsets = attempt(step, mine_closed_bruteforce,
                                    step.context.matrix, minsup)


@step("{count:d} closed itemsets are found")
def itemset_count(step, count):
    assert step.context.error is None, str(step.context.error)
    assert len(step.context.itemsets) == count


@step('itemset {n:d} is "{items}" with support {value:S}')
def itemset_content(step, n, items, value):
    s = step.context.itemsets[n - 1]
    assert s.names() == names(items), s.names()
    assert str(s.support) == value


def random_matrix(rng, settings):
    rows = int(rng.integers(1, settings["max_rows"] + 1))
    cols = int(rng.integers(1, settings["max_columns"] + 1))
    density = rng.uniform(0.1, 0.9)
    cells = rng.random((rows, cols)) < density
    columns = tuple(QualifiedAttribute("T", "c%02d" % c) for c in range(cols))
    return QueryAttributeMatrix(tuple(range(1, rows + 1)), columns, cells)


@step("the close miner agrees with the exhaustive miner on random matrices")
def miner_oracle(step):
    settings = step.context.settings["oracle"]
    rng = np.random.default_rng(settings["seed"])
    for n in range(settings["matrices"]):
        m = random_matrix(rng, settings)
        previous = None
        for k in range(1, settings["max_rows"] + 1):
            minsup = "%d/%d" % (k, settings["max_rows"])
            found = mine_closed(m, minsup)
            expected = mine_closed_bruteforce(m, minsup)
            current = set((s.itemset, s.support) for s in found)
            assert current == set((s.itemset, s.support) for s in expected), \
                "matrix %d, minsup %s" % (n, minsup)
            for s in found:
                assert closure(s.itemset, m) == s.itemset
                assert support(s.itemset, m) == s.support
            # raising minsup only drops itemsets
            if previous is not None:
                assert current <= previous, "matrix %d, minsup %s" % (
                    n, minsup)
            previous = current
            if k > 1:
                continue
            for s in found:
                for c in range(len(m.columns)):
                    if c in s.itemset.items:
                        continue
                    larger = Itemset(s.itemset.items + (c,))
                    assert support(larger, m) <= s.support, \
                        "matrix %d, itemset %s" % (n, s.names())


# ---------------------------------------------------------------------------
# Candidates
# ---------------------------------------------------------------------------

@step("candidates are generated")
def generate_candidates(step):
    step.context.candidates = build_candidate_set(step.context.itemsets,
                                                  step.context.catalog)


@step("{count:d} candidates are generated")
def candidate_count(step, count):
    assert len(step.context.candidates) == count, \
        [i.id for i in step.context.candidates]


@step('candidate "{cid}" is generated')
def candidate_present(step, cid):
    assert step.context.candidates.get(cid) is not None, \
        [i.id for i in step.context.candidates]


@step('itemset "{items}" is rejected because "{reason}"')
def itemset_rejected(step, items, reason):
    found = [r.reason for r in step.context.candidates.rejections
             if r.itemset.names() == names(items)]
    assert found == [reason], found


@step("every itemset made only of key attributes is rejected")
def key_only_rejected(step):
    cat = step.context.catalog
    rejected = dict((r.itemset.itemset, r.reason)
                    for r in step.context.candidates.rejections)
    for s in step.context.itemsets:
        keys_only = all(cat.is_foreign_key(a.table, a.attribute) or
                        cat.is_primary_key(a.table, a.attribute)
                        for a in s.attributes)
        if keys_only:
            assert rejected.get(s.itemset) == NO_NON_KEY, s.names()
            sources = [i.source_itemset for i in step.context.candidates]
            assert s not in sources


@step('the DDL of candidate "{cid}" is')
def candidate_ddl(step, cid):
    i = step.context.candidates.get(cid)
    assert index_ddl(i, step.context.catalog) == step.text.strip()


# ---------------------------------------------------------------------------
# Cost model
# ---------------------------------------------------------------------------

@step('an index on "{attrs}"')
def index_on(step, attrs):
    step.context.index = make_candidate(attributes(attrs),
                                        step.context.catalog)
    assert step.context.index is not None


@step("its DDL is")
def index_ddl_is(step):
    assert index_ddl(step.context.index, step.context.catalog) == \
        step.text.strip()


@step("its size is {size:d} bytes")
def index_size(step, size):
    assert index_size_bytes(step.context.index, step.context.catalog) == size


@step("its size grows linearly with the fact table")
def index_size_linear(step):
    i = step.context.index
    doc = json.loads(dump_catalog(step.context.catalog))
    sizes = []
    for k in range(1, 5):
        doc["fact"]["row_count"] = 8 * k * step.context.catalog.fact.row_count
        cat = parse_catalog(json.dumps(doc))
        sizes.append(index_size_bytes(i, cat))
    assert sizes == [k * sizes[0] for k in range(1, 5)], sizes
    assert sizes[0] == i.combined_cardinality * \
        step.context.catalog.fact.row_count, sizes


@step("its b-tree order is {m:d}")
def index_order(step, m):
    i = step.context.index
    assert btree_order(i.on_attributes, step.context.catalog) == m


@step("its b-tree order is computed")
def compute_order(step):
    attempt(step, btree_order, step.context.index.on_attributes,
            step.context.catalog)


@step("its fact insert maintenance costs {value:g} I/Os")
def fact_insert_cost(step, value):
    close_to(maintenance_fact_insert(step.context.index,
                                     step.context.catalog), value, 0.01)


@step("its dimension insert maintenance costs {value:g} I/Os")
def dimension_insert_cost(step, value):
    close_to(maintenance_dimension_insert(step.context.index,
                                          step.context.catalog), value, 0.01)


@step("its expanding dimension insert maintenance costs {value:g} I/Os")
def expanding_insert_cost(step, value):
    close_to(maintenance_dimension_insert(step.context.index,
                                          step.context.catalog, True),
             value, 0.01)


def read_cost(step, d):
    i = step.context.index
    return access_cost(i, BitmapAccessProfile(d, i), step.context.catalog)


@step("reading {d:d} bitmaps through it costs {value:g} I/Os")
def bitmap_read_cost(step, d, value):
    close_to(read_cost(step, d), value)


@step("reading more bitmaps always costs more")
def read_cost_increases(step):
    card = step.context.index.combined_cardinality
    costs = [read_cost(step, d) for d in range(1, card + 1)]
    assert all(a < b for a, b in zip(costs, costs[1:]))


@step("reading the fact table through it never exceeds its page count")
def fact_reads_bounded(step):
    cat = step.context.catalog
    i = step.context.index
    m = btree_order(i.on_attributes, cat)
    keys = i.combined_cardinality
    descent = max(0, btree_height(keys, m) - 1)
    for d in range(1, keys + 1):
        scan = -(-keys // (m - 1)) + d * -(-cat.fact.row_count //
                                             (8 * cat.params.page_size_bytes))
        read = read_cost(step, d) - descent - scan
        assert read <= cat.fact.page_count + 1e-6, (d, read)


@step("a hash join of {a:d} and {b:d} pages costs {value:d} I/Os")
def hash_join(step, a, b, value):
    assert hash_join_cost(a, b) == value


@step("query {qid:d} costs {value:g} I/Os without indexes")
def query_baseline(step, qid, value):
    q = query(step, qid)
    assert baseline_cost(q, step.context.catalog) == value
    assert query_cost(q, [], step.context.catalog).total == value


@step("the workload costs {value:g} I/Os without indexes")
def workload_baseline(step, value):
    assert workload_cost(step.context.queries, [],
                         step.context.catalog) == value


@step("query {qid:d} costs {value:g} I/Os with it")
def query_indexed(step, qid, value):
    q = query(step, qid)
    b = query_cost(q, [step.context.index], step.context.catalog)
    close_to(b.total, value)
    assert b.total <= b.baseline


@step("the workload costs {value:g} I/Os with it")
def workload_indexed(step, value):
    close_to(workload_cost(step.context.queries, [step.context.index],
                           step.context.catalog), value)


@step("it needs {d:d} bitmaps for query {qid:d}")
def bitmaps_needed(step, d, qid):
    found = derive_d(query(step, qid), step.context.index,
                     step.context.catalog)
    assert found == d, found


@step("it does not apply to query {qid:d}")
def not_applicable(step, qid):
    b = query_cost(query(step, qid), [step.context.index],
                   step.context.catalog)
    assert b.index_id is None


def random_catalog(rng):
    dims = []
    fact_attrs = []
    fks = {}
    for n in range(int(rng.integers(1, 5))):
        rows = int(rng.integers(1, 20000))
        attrs = [{"name": "k", "cardinality": rows, "width_bytes": 4,
                  "is_key": True}]
        for a in range(int(rng.integers(1, 4))):
            attrs.append({"name": "a%d" % a,
                          "cardinality": int(rng.integers(1, 60)),
                          "width_bytes": int(rng.integers(1, 40))})
        dims.append({"name": "D%d" % n, "row_count": rows,
                     "tuple_width_bytes": int(rng.integers(8, 300)),
                     "primary_key": ["k"], "attributes": attrs})
        fact_attrs.append({"name": "f%d" % n, "cardinality": max(1, rows),
                           "width_bytes": 4})
        fks["f%d" % n] = "D%d.k" % n
    doc = {
        "fact": {"name": "F", "row_count": int(rng.integers(1, 3000000)),
                 "tuple_width_bytes": int(rng.integers(16, 200)),
                 "attributes": fact_attrs, "foreign_keys": fks},
        "dimensions": dims,
    }
    return parse_catalog(json.dumps(doc))


def non_keys(cat, dim):
    return [QualifiedAttribute(dim.name, a.name) for a in dim.attributes
            if not a.is_key]


def random_restriction(rng, cat, attr):
    card = cat.attribute(attr.table, attr.attribute).cardinality
    op = ["=", "IN", "<>", "<", "BETWEEN"][int(rng.integers(0, 5))]
    if op == "IN":
        k = int(rng.integers(1, 5))
        values = tuple(int(v) for v in rng.integers(1, card + 1, size=k))
    elif op == "BETWEEN":
        values = (1, card)
    else:
        values = (int(rng.integers(1, card + 1)),)
    return Predicate(RESTRICTION, attr, values, op)


def random_queries(rng, cat):
    queries = []
    for qid in range(1, int(rng.integers(1, 7)) + 1):
        count = int(rng.integers(1, len(cat.dimensions) + 1))
        picked = rng.choice(len(cat.dimensions), size=count, replace=False)
        predicates = []
        group_by = []
        for n in sorted(picked):
            dim = cat.dimensions[n]
            fk = cat.foreign_key_of(dim.name)
            predicates.append(Predicate(
                JOIN, QualifiedAttribute(cat.fact.name, fk),
                QualifiedAttribute(dim.name, "k"), "="))
            for attr in non_keys(cat, dim):
                draw = rng.random()
                if draw < 0.4:
                    predicates.append(random_restriction(rng, cat, attr))
                elif draw < 0.6:
                    group_by.append(attr)
        tables = frozenset([cat.fact.name] +
                           [cat.dimensions[n].name for n in picked])
        queries.append(Query(qid, tables, tuple(predicates),
                             tuple(group_by)))
    return queries


def random_index(rng, cat):
    count = int(rng.integers(1, min(2, len(cat.dimensions)) + 1))
    picked = rng.choice(len(cat.dimensions), size=count, replace=False)
    on = []
    for n in picked:
        attrs = non_keys(cat, cat.dimensions[n])
        k = int(rng.integers(1, len(attrs) + 1))
        for a in rng.choice(len(attrs), size=k, replace=False):
            on.append(attrs[a])
    return make_candidate(on, cat)


def costs_are_sane(*values):
    return all(math.isfinite(v) and v >= 0 for v in values)


@step("adding an index never increases the cost of random workloads")
def dominance(step):
    settings = step.context.settings["dominance"]
    rng = np.random.default_rng(settings["seed"])
    for n in range(settings["triples"]):
        cat = random_catalog(rng)
        queries = random_queries(rng, cat)
        config = [random_index(rng, cat)
                  for k in range(int(rng.integers(0, 4)))]
        extra = random_index(rng, cat)
        before = workload_cost(queries, config, cat)
        after = workload_cost(queries, config + [extra], cat)
        assert after <= before, "triple %d: %r > %r" % (n, after, before)
        assert costs_are_sane(before, after), "triple %d" % n
        for q in queries:
            b = query_cost(q, config, cat)
            assert b.total <= baseline_cost(q, cat), "triple %d" % n
            b = query_cost(q, config + [extra], cat)
            assert costs_are_sane(b.index_access, b.residual_joins,
                                  b.baseline, b.total), "triple %d" % n
        card = extra.combined_cardinality
        for d in sorted(set([1, max(1, card // 2), card])):
            assert costs_are_sane(access_cost(
                extra, BitmapAccessProfile(d, extra), cat)), "triple %d" % n
        assert costs_are_sane(
            maintenance_fact_insert(extra, cat),
            maintenance_dimension_insert(extra, cat),
            maintenance_dimension_insert(extra, cat, True)), "triple %d" % n


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------

@step("the advisor is loaded with the example warehouse")
def advisor_example(step):
    step.context.advisor.load_inputs(world.catalog, world.workload)


@step("the advisor is loaded with the synthetic warehouse")
def advisor_synthetic(step):
    settings = step.context.settings["synthetic"]
    catalog, workload = write_synthetic(step.context.workdir,
                                        settings["seed"], settings["scale"])
    step.context.advisor.load_inputs(catalog, workload)


@step("minsup is {minsup:S}")
def set_minsup(step, minsup):
    step.context.advisor.minsup = minsup


@step("the objective is {kind:w}")
def set_objective(step, kind):
    step.context.advisor.objective = kind


@step("the budget is {budget:S}")
def set_budget(step, budget):
    step.context.advisor.budget = budget


@step("at most {n:d} index per dimension is allowed")
def set_max_per_table(step, n):
    step.context.advisor.max_per_table = n


@step("the maintenance weight is {weight:g}")
def set_maintenance_weight(step, weight):
    step.context.advisor.maintenance_weight = weight


def select(step, **kwargs):
    step.context.run = attempt(step, step.context.advisor.advise, **kwargs)


@step("indexes are selected with the {kind:w} objective")
def select_unbounded(step, kind):
    select(step, objective=kind)


@step("indexes are selected with the {kind:w} objective and a budget of "
      "{budget:S}")
def select_bounded(step, kind, budget):
    select(step, objective=kind, budget=budget)


@step("indexes are selected with the hybrid objective, alpha {alpha:g} and "
      "a budget of {budget:S}")
def select_hybrid(step, alpha, budget):
    select(step, objective="hybrid", budget=budget, alpha=alpha)


def configuration(step):
    assert step.context.error is None, str(step.context.error)
    return step.context.run.configuration


@step('the selected indexes are "{ids}"')
def selected_indexes(step, ids):
    found = configuration(step).ids
    assert found == names(ids), found


@step("no index is selected")
def nothing_selected(step):
    assert configuration(step).ids == []


@step("the trace has {n:d} steps")
def trace_length(step, n):
    assert len(configuration(step).trace) == n


@step("the final cost is {value:g} I/Os")
def final_cost(step, value):
    close_to(configuration(step).final_cost, value)


@step("the final cost equals the baseline")
def final_cost_is_baseline(step):
    config = configuration(step)
    assert config.final_cost == config.baseline_cost


@step("the final cost equals the cost of all candidates")
def final_cost_is_unpruned(step):
    config = configuration(step)
    assert config.final_cost == step.context.run.unpruned.final_cost


@step("the trace costs decrease at every step")
def trace_decreases(step):
    config = configuration(step)
    costs = [config.baseline_cost] + [s.workload_cost for s in config.trace]
    assert all(a > b for a, b in zip(costs, costs[1:])), costs
    sizes = [s.total_bytes for s in config.trace]
    assert sizes == sorted(sizes)


@step("at most {size:d} bytes are used")
def bytes_used(step, size):
    config = configuration(step)
    assert config.total_bytes <= size
    assert all(s.total_bytes <= size for s in config.trace)


@step("the DDL is")
def ddl_is(step):
    run = step.context.run
    assert emit_ddl(run.configuration, run.catalog) == step.text.strip() + "\n"


class ScaledCostModel(CostModel):

    def size(self, i):
        return 1000 * super().size(i)


@step("scaling index sizes does not change the profit selection")
def argmax_invariance(step):
    advisor = step.context.advisor
    _, _, candidates = advisor.mine()
    obj = ObjectiveKind("profit")
    plain = greedy_select(candidates, advisor.queries, advisor.catalog, obj)
    scaled = greedy_select(candidates, advisor.queries, advisor.catalog, obj,
                           costs=ScaledCostModel(None, advisor.catalog,
                                                 advisor.queries))
    assert plain.ids == scaled.ids
    assert plain.ids


@step("budgets are respected on random runs")
def budget_safety(step):
    settings = step.context.settings["budget"]
    rng = np.random.default_rng(settings["seed"])
    for n in range(settings["runs"]):
        cat = random_catalog(rng)
        queries = random_queries(rng, cat)
        candidates = {}
        for k in range(int(rng.integers(1, 8))):
            i = random_index(rng, cat)
            candidates[i.id] = i
        total = sum(index_size_bytes(i, cat) for i in candidates.values())
        budget = int(rng.integers(0, total + 1))
        if rng.random() < 0.5:
            obj = ObjectiveKind("ratio", budget_bytes=budget)
        else:
            obj = ObjectiveKind("hybrid", float(rng.random()), budget)
        config = greedy_select(list(candidates.values()), queries, cat, obj)
        assert config.total_bytes <= budget, "run %d" % n
        for s in config.trace:
            assert s.total_bytes <= budget, "run %d" % n


def footprint(advisor):
    _, _, candidates = advisor.mine()
    return sum(advisor.costs.size(i) for i in candidates)


@step("the hybrid objective with alpha 0 selects like the ratio objective")
def hybrid_low_endpoint(step):
    advisor = step.context.advisor
    budget = footprint(advisor) // 3
    by_hybrid = advisor.advise(objective="hybrid", alpha=0.0, budget=budget)
    by_ratio = advisor.advise(objective="ratio", budget=budget)
    assert by_hybrid.configuration.ids == by_ratio.configuration.ids
    assert by_hybrid.configuration.ids


@step("the hybrid objective with alpha 1 selects like the profit objective")
def hybrid_high_endpoint(step):
    advisor = step.context.advisor
    budget = 2 * footprint(advisor)
    by_hybrid = advisor.advise(objective="hybrid", alpha=1.0, budget=budget)
    by_profit = advisor.advise(objective="profit")
    assert by_hybrid.configuration.ids == by_profit.configuration.ids
    assert by_hybrid.configuration.ids


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------

def selection(step):
    return getattr(step.context, "selection", [])


@step('the index on "{attrs}" is already selected')
def already_selected(step, attrs):
    i = make_candidate(attributes(attrs), step.context.catalog)
    assert i is not None
    step.context.selection = [i]


@step("its profit from an empty selection is {value:g} I/Os")
def profit_from_empty(step, value):
    close_to(profit.profit(step.context.index, [], step.context.queries,
                           step.context.catalog), value)


@step("its profit once selected is 0")
def profit_once_selected(step):
    i = step.context.index
    assert profit.profit(i, [i], step.context.queries,
                         step.context.catalog) == 0


@step("its ratio is its profit per byte")
def ratio_per_byte(step):
    i = step.context.index
    Q, cat = step.context.queries, step.context.catalog
    expected = profit.profit(i, [], Q, cat) / index_size_bytes(i, cat)
    close_to(ratio.ratio(i, [], Q, cat), expected, 1e-9)


@step("with alpha {alpha:g} and {used:d} of {budget:d} bytes used the "
      "hybrid objective scores it by {kind:w}")
def hybrid_branch(step, alpha, used, budget, kind):
    i = step.context.index
    Q, cat = step.context.queries, step.context.catalog
    score = hybrid.hybrid(i, [], Q, cat, alpha, budget, used)
    expected = {"profit": profit.profit, "ratio": ratio.ratio}[kind]
    close_to(score, expected(i, [], Q, cat), 1e-9)


def objective_score(step, obj):
    cat = step.context.catalog
    costs = CostModel(None, cat, step.context.queries)
    chosen = selection(step)
    state = SelectionState(costs, costs.totals(chosen),
                           sum(costs.size(s) for s in chosen),
                           obj.budget_bytes)
    return load_objective(obj).evaluate(step.context.index, state)


@step("the profit objective scores it as its profit")
def profit_objective(step):
    score = objective_score(step, ObjectiveKind("profit"))
    close_to(score, profit.profit(step.context.index, selection(step),
                                  step.context.queries,
                                  step.context.catalog), 1e-6)


@step("the ratio objective scores it as its ratio")
def ratio_objective(step):
    budget = 10 * index_size_bytes(step.context.index, step.context.catalog)
    score = objective_score(step, ObjectiveKind("ratio", budget_bytes=budget))
    close_to(score, ratio.ratio(step.context.index, selection(step),
                                step.context.queries,
                                step.context.catalog), 1e-9)


@step("the hybrid objective with alpha {alpha:g} and a budget of "
      "{budget:d} scores it as hybrid does")
def hybrid_objective(step, alpha, budget):
    cat = step.context.catalog
    chosen = selection(step)
    used = sum(index_size_bytes(s, cat) for s in chosen)
    score = objective_score(step, ObjectiveKind("hybrid", alpha=alpha,
                                                budget_bytes=budget))
    close_to(score, hybrid.hybrid(step.context.index, chosen,
                                  step.context.queries, cat, alpha, budget,
                                  used), 1e-6)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@step('I sweep {variable:w} over "{values}"')
def sweep(step, variable, values):
    spec = SweepSpec(variable, tuple(parse_values(values)))
    step.context.table = step.context.advisor.sweep(spec)


@step("the sweep has {n:d} rows")
def sweep_rows(step, n):
    assert len(step.context.table) == n


@step("the candidate count never increases")
def candidates_monotone(step):
    assert step.context.table["candidates"].is_monotonic_decreasing


@step("the selected count never increases")
def selected_monotone(step):
    assert step.context.table["selected"].is_monotonic_decreasing


@step("the final cost never decreases")
def cost_non_decreasing(step):
    assert step.context.table["workload_cost"].is_monotonic_increasing


@step("the final cost never increases")
def cost_non_increasing(step):
    assert step.context.table["workload_cost"].is_monotonic_decreasing


@step("the first row costs the baseline")
def first_row_baseline(step):
    row = step.context.table.iloc[0]
    assert row["workload_cost"] == row["baseline_cost"]


@step("the last row costs the baseline")
def last_row_baseline(step):
    row = step.context.table.iloc[-1]
    assert row["workload_cost"] == row["baseline_cost"]
    assert row["selected"] == 0


@step("the last row costs as much as the profit run")
def last_row_profit(step):
    row = step.context.table.iloc[-1]
    by_profit = step.context.advisor.advise(objective="profit", budget=None)
    close_to(row["workload_cost"], by_profit.configuration.final_cost, 1e-6)


@step("the row for {value:S} selects like the {kind:w} objective")
def sweep_endpoint(step, value, kind):
    table = step.context.table
    row = table[table["value"] == value].iloc[0]
    run = step.context.advisor.advise(objective=kind)
    assert row["selection"] == " ".join(run.configuration.ids)


@step("the CSV output has a header and {n:d} rows")
def sweep_csv(step, n):
    text = render_csv(step.context.table)
    table = pd.read_csv(io.StringIO(text))
    assert list(table.columns) == list(step.context.table.columns)
    assert len(table) == n


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def run_cli(step, args):
    workdir = step.context.workdir
    args = args.replace("$WORKLOAD", world.workload)
    args = args.replace("$CATALOG", world.catalog)
    args = args.replace("$WORKDIR", workdir)
    env = dict(os.environ)
    env.pop("BJIA_DEBUG", None)
    env["HOME"] = workdir
    env["PYTHONPATH"] = os.pathsep.join(
        [world.root, env.get("PYTHONPATH", "")])
    return subprocess.run([sys.executable, world.cli] + args.split(),
                          cwd=workdir, env=env, capture_output=True,
                          text=True)


@step('I run "{args}"')
def run_once(step, args):
    step.context.result = run_cli(step, args)


@step('I run "{args}" twice')
def run_twice(step, args):
    step.context.first = run_cli(step, args)
    step.context.result = run_cli(step, args)


@step('a file "{name}" containing')
def write_file(step, name):
    with open(os.path.join(step.context.workdir, name), "w") as f:
        f.write(step.text + "\n")


@step("the exit code is {code:d}")
def exit_code(step, code):
    result = step.context.result
    assert result.returncode == code, "%d: %s" % (result.returncode,
                                                  result.stderr)


@step('stdout mentions "{text}"')
def stdout_mentions(step, text):
    assert text in step.context.result.stdout, step.context.result.stdout


@step('stderr mentions "{text}"')
def stderr_mentions(step, text):
    assert text in step.context.result.stderr, step.context.result.stderr


@step("both outputs are identical")
def outputs_identical(step):
    assert step.context.first.stdout == step.context.result.stdout
    assert step.context.result.stdout


@step('file "{name}" contains')
def file_contains(step, name):
    with open(os.path.join(step.context.workdir, name)) as f:
        assert f.read() == step.text.strip() + "\n"


@step('files "{a}" and "{b}" are identical')
def files_identical(step, a, b):
    workdir = step.context.workdir
    assert filecmp.cmp(os.path.join(workdir, a), os.path.join(workdir, b),
                       shallow=False)


@step('the workload "{workload}" has {n:d} queries against "{catalog}"')
def synthetic_parses(step, workload, n, catalog):
    workdir = step.context.workdir
    cat = load_catalog(os.path.join(workdir, catalog))
    queries = validate_workload(
        load_workload(os.path.join(workdir, workload)), cat)
    assert len(queries) == n
    assert cat.origin.startswith("synthetic")
