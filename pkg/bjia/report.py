# ---------------------------------------------------------------------------
# Advisor reports and DDL for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import datetime
import json
from dataclasses import dataclass, field
from typing import Dict, List

# Local imports
from bjia import __version__
from bjia.costmodel import index_size_bytes


@dataclass
class AdvisorRun:
    inputs: Dict
    catalog: object
    matrix: object
    itemsets: List
    candidates: object
    configuration: object
    unpruned: object
    per_query: List = field(default_factory=list)
    maintenance: List = field(default_factory=list)


def index_ddl(i, cat):
    tables = [cat.fact.name] + list(i.dimensions)
    where = " AND ".join(str(p) for p in i.join_predicates)
    return "CREATE BITMAP INDEX %s ON %s(%s) FROM %s WHERE %s;" % (
        i.id, cat.fact.name, ", ".join(str(a) for a in i.on_attributes),
        ", ".join(tables), where)


def emit_ddl(config, cat):
    """ One CREATE BITMAP INDEX statement per selected index"""
    return "".join("%s\n" % index_ddl(i, cat) for i in config.selected)


def _gain(value, reference):
    if not reference:
        return 0.0
    return 1.0 - value / reference


def _index(i, size):
    return {
        "id": i.id,
        "on": [str(a) for a in i.on_attributes],
        "from": sorted(i.from_tables),
        "where": [str(p) for p in i.join_predicates],
        "size_bytes": size,
    }


def _maintenance_totals(entries):
    totals = {"fact_insert": 0.0, "dimension_insert": 0.0,
              "dimension_insert_expanding": 0.0}
    for entry in entries:
        totals["fact_insert"] += entry["fact_insert"]
        for dim in entry["dimensions"]:
            totals["dimension_insert"] += dim["insert"]
            totals["dimension_insert_expanding"] += dim["insert_expanding"]
    return totals


def build_report(run, stable=False):
    config = run.configuration
    unpruned = run.unpruned
    doc = {
        "tool": "bjia",
        "version": __version__,
    }
    if stable is False:
        doc["generated"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat(timespec="seconds")
    doc["inputs"] = dict(run.inputs)
    doc["matrix"] = {"rows": run.matrix.shape[0],
                     "cols": run.matrix.shape[1]}
    doc["itemsets"] = len(run.itemsets)
    doc["candidates"] = len(run.candidates)
    doc["rejections"] = [
        {"items": r.itemset.names(), "reason": r.reason}
        for r in run.candidates.rejections]

    selected = [_index(i, index_size_bytes(i, run.catalog))
                for i in config.selected]

    doc["configuration"] = {
        "selected": selected,
        "trace": [
            {"index": s.index_id, "objective": s.objective,
             "workload_cost": s.workload_cost, "total_bytes": s.total_bytes}
            for s in config.trace],
        "total_bytes": config.total_bytes,
        "baseline_cost": config.baseline_cost,
        "final_cost": config.final_cost,
        "saving_ratio": config.saving_ratio,
        "space_gain": _gain(config.total_bytes, unpruned.total_bytes),
        "time_gain": config.saving_ratio,
    }
    doc["unpruned"] = {
        "count": len(unpruned.selected),
        "total_bytes": unpruned.total_bytes,
        "final_cost": unpruned.final_cost,
        "time_gain": unpruned.saving_ratio,
    }
    doc["per_query"] = [
        {"query": b.query_id, "index": b.index_id,
         "index_access": b.index_access, "residual_joins": b.residual_joins,
         "baseline": b.baseline, "total": b.total}
        for b in run.per_query]
    doc["maintenance"] = run.maintenance
    doc["maintenance_totals"] = _maintenance_totals(run.maintenance)
    return doc


def render_json(run, stable=False):
    return json.dumps(build_report(run, stable), indent=2) + "\n"


def render_text(run, stable=False):
    doc = build_report(run, stable)
    config = doc["configuration"]
    inputs = doc["inputs"]
    lines = []
    lines.append("bjia %s" % doc["version"])
    if "generated" in doc:
        lines.append("generated: %s" % doc["generated"])
    lines.append("workload: %s (%d queries, %d indexable attributes)" % (
        inputs.get("workload"), doc["matrix"]["rows"], doc["matrix"]["cols"]))
    if inputs.get("origin"):
        lines.append("catalog origin: %s" % inputs["origin"])
    lines.append("objective: %s, minsup %s" % (
        inputs.get("objective"), inputs.get("minsup")))
    lines.append("%d closed itemsets, %d candidates, %d rejected" % (
        doc["itemsets"], doc["candidates"], len(doc["rejections"])))
    lines.append("")

    lines.append("selected indexes:")
    if not config["selected"]:
        lines.append("  (none)")
    for i, step in zip(config["selected"], config["trace"]):
        lines.append("  %-40s %12d bytes  F=%-12.6g cost %.2f" % (
            i["id"], i["size_bytes"], step["objective"],
            step["workload_cost"]))
    lines.append("")

    lines.append("baseline cost:  %14.2f" % config["baseline_cost"])
    lines.append("final cost:     %14.2f (%.2f%% saved)" % (
        config["final_cost"], 100 * config["saving_ratio"]))
    lines.append("space:          %14d bytes (%.2f%% less than all %d "
                 "candidates)" % (config["total_bytes"],
                                  100 * config["space_gain"],
                                  doc["unpruned"]["count"]))
    lines.append("all candidates: %14.2f (%.2f%% saved)" % (
        doc["unpruned"]["final_cost"], 100 * doc["unpruned"]["time_gain"]))
    lines.append("")

    lines.append("per query:")
    for b in doc["per_query"]:
        lines.append("  Q%-4d %-40s %14.2f / %.2f" % (
            b["query"], b["index"] or "-", b["total"], b["baseline"]))

    if doc["maintenance"]:
        lines.append("")
        lines.append("maintenance (I/Os per insert):")
        for entry in doc["maintenance"]:
            lines.append("  %s: fact %.2f" % (entry["index"],
                                              entry["fact_insert"]))
            for dim in entry["dimensions"]:
                lines.append("    %s: %.2f, %.2f with a new value" % (
                    dim["dimension"], dim["insert"], dim["insert_expanding"]))
    return "\n".join(lines) + "\n"


RENDERERS = {
    "json": render_json,
    "text": render_text,
}
