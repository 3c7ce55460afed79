# ---------------------------------------------------------------------------
# Warehouse catalog for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

# Local imports
from bjia.errors import CatalogError

FACT = "fact"
DIMENSION = "dimension"

DEFAULT_PAGE_SIZE = 8192
DEFAULT_POINTER_SIZE = 4


@dataclass(frozen=True)
class SystemParams:
    page_size_bytes: int = DEFAULT_PAGE_SIZE
    pointer_size_bytes: int = DEFAULT_POINTER_SIZE


@dataclass(frozen=True)
class AttributeStats:
    name: str
    cardinality: int
    width_bytes: int
    is_key: bool = False


@dataclass(frozen=True)
class TableStats:
    name: str
    row_count: int
    tuple_width_bytes: int
    attributes: Tuple[AttributeStats, ...]
    role: str
    primary_key: Tuple[str, ...]
    page_count: int

    def attribute(self, name):
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass(frozen=True)
class SchemaCatalog:
    fact: TableStats
    dimensions: Tuple[TableStats, ...]
    # fact attribute => (dimension, primary key attribute)
    foreign_keys: Dict[str, Tuple[str, str]]
    params: SystemParams
    origin: Optional[str] = field(default=None, compare=False)

    def table(self, name):
        if name == self.fact.name:
            return self.fact
        return self.dimension(name)

    def dimension(self, name):
        for dim in self.dimensions:
            if dim.name == name:
                return dim
        return None

    def attribute(self, table, name):
        stats = self.table(table)
        if stats is None:
            return None
        return stats.attribute(name)

    def is_foreign_key(self, table, name):
        return table == self.fact.name and name in self.foreign_keys

    def is_primary_key(self, table, name):
        dim = self.dimension(table)
        return dim is not None and name in dim.primary_key

    def foreign_key_of(self, dimension):
        """ Fact attribute referencing the given dimension, None if unjoinable"""
        for fk, (dim, pk) in self.foreign_keys.items():
            if dim == dimension:
                return fk
        return None


def page_count(rows, tuple_width, params):
    """ Pages needed to store rows of tuple_width bytes, at least one"""
    pages = -(-rows * tuple_width // params.page_size_bytes)
    return max(1, pages)


def _fail(path, msg):
    raise CatalogError("%s: %s" % (path, msg))


def _get(obj, key, path, kind, required=True, default=None):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    if key not in obj:
        if required:
            _fail(path, "missing field '%s'" % key)
        return default
    value = obj[key]
    # bool is an int subclass; keep flags and counts apart
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        _fail("%s.%s" % (path, key), "expected an integer")
    if kind is not int and not isinstance(value, kind):
        _fail("%s.%s" % (path, key), "expected %s" % kind.__name__)
    return value


def _load_params(obj, defaults):
    if obj is None:
        params = defaults
    else:
        params = SystemParams(
            _get(obj, "page_size_bytes", "params", int),
            _get(obj, "pointer_size_bytes", "params", int))
    if not params.page_size_bytes > params.pointer_size_bytes > 0:
        _fail("params", "page_size_bytes > pointer_size_bytes > 0 violated "
                        "(%d, %d)" % (params.page_size_bytes,
                                      params.pointer_size_bytes))
    return params


def _load_attribute(obj, path):
    attr = AttributeStats(
        _get(obj, "name", path, str),
        _get(obj, "cardinality", path, int),
        _get(obj, "width_bytes", path, int),
        _get(obj, "is_key", path, bool, required=False, default=False))
    if not attr.name:
        _fail(path, "empty attribute name")
    if attr.cardinality < 1:
        _fail(path, "attribute '%s' has cardinality %d (must be >= 1)" % (
              attr.name, attr.cardinality))
    if attr.width_bytes < 1:
        _fail(path, "attribute '%s' has width %d (must be >= 1)" % (
              attr.name, attr.width_bytes))
    return attr


def _load_table(obj, path, role, params):
    name = _get(obj, "name", path, str)
    if not name:
        _fail(path, "empty table name")
    rows = _get(obj, "row_count", path, int)
    width = _get(obj, "tuple_width_bytes", path, int)
    if rows < 0:
        _fail(path, "table '%s' has a negative row_count" % name)
    if width < 1:
        _fail(path, "table '%s' has tuple_width_bytes < 1" % name)

    items = _get(obj, "attributes", path, list)
    attributes = tuple(_load_attribute(a, "%s.attributes[%d]" % (path, n))
                       for n, a in enumerate(items))
    names = [a.name for a in attributes]
    for n in names:
        if names.count(n) > 1:
            _fail(path, "table '%s' declares attribute '%s' twice" % (name, n))

    primary_key = tuple(_get(obj, "primary_key", path, list,
                             required=False, default=[]))
    for key in primary_key:
        if key not in names:
            _fail(path, "primary key '%s.%s' is not an attribute" % (
                  name, key))
    for attr in attributes:
        if attr.is_key != (attr.name in primary_key):
            _fail(path, "attribute '%s.%s': is_key disagrees with "
                        "primary_key" % (name, attr.name))

    return TableStats(name, rows, width, attributes, role, primary_key,
                      page_count(rows, width, params))


def _load_foreign_keys(obj, fact, dimensions):
    result = {}
    targets = {}
    for fk, ref in obj.items():
        path = "fact.foreign_keys.%s" % fk
        if fact.attribute(fk) is None:
            _fail(path, "'%s' is not an attribute of %s" % (fk, fact.name))
        if not isinstance(ref, str) or ref.count(".") != 1:
            _fail(path, "expected 'Dimension.key', got %r" % (ref,))
        dim_name, pk = ref.split(".")
        dim = None
        for d in dimensions:
            if d.name == dim_name:
                dim = d
        if dim is None:
            _fail(path, "foreign key '%s' references unknown dimension "
                        "'%s'" % (fk, dim_name))
        if dim.primary_key != (pk,):
            _fail(path, "foreign key '%s' does not reference the primary key "
                        "of %s" % (fk, dim_name))
        if dim_name in targets:
            _fail(path, "dimension '%s' is referenced by both '%s' and "
                        "'%s'" % (dim_name, targets[dim_name], fk))
        targets[dim_name] = fk
        result[fk] = (dim_name, pk)
    return result


def parse_catalog(text, defaults=None):
    """ Build a SchemaCatalog from the JSON catalog format"""
    if defaults is None:
        defaults = SystemParams()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CatalogError("line %d, column %d: %s" % (
            e.lineno, e.colno, e.msg))
    if not isinstance(doc, dict):
        _fail("catalog", "expected a top-level object")

    params = _load_params(doc.get("params"), defaults)
    fact_obj = _get(doc, "fact", "catalog", dict)
    fact = _load_table(fact_obj, "fact", FACT, params)
    dimensions = tuple(
        _load_table(d, "dimensions[%d]" % n, DIMENSION, params)
        for n, d in enumerate(_get(doc, "dimensions", "catalog", list)))

    seen = [fact.name]
    for dim in dimensions:
        if dim.name in seen:
            _fail("dimensions", "duplicate table name '%s'" % dim.name)
        seen.append(dim.name)

    fks = _load_foreign_keys(
        _get(fact_obj, "foreign_keys", "fact", dict, required=False,
             default={}), fact, dimensions)
    origin = doc.get("origin")
    return SchemaCatalog(fact, dimensions, fks, params, origin)


def load_catalog(path, defaults=None):
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise CatalogError("%s: %s" % (path, e.strerror))
    return parse_catalog(text, defaults)


def _dump_table(table, fks=None):
    obj = {
        "name": table.name,
        "row_count": table.row_count,
        "tuple_width_bytes": table.tuple_width_bytes,
        "primary_key": list(table.primary_key),
        "attributes": [
            {"name": a.name, "cardinality": a.cardinality,
             "width_bytes": a.width_bytes, "is_key": a.is_key}
            for a in table.attributes],
    }
    if fks is not None:
        obj["foreign_keys"] = {
            fk: "%s.%s" % target for fk, target in fks.items()}
    return obj


def dump_catalog(cat):
    """ Emit a catalog in the format accepted by parse_catalog"""
    doc = {
        "params": {
            "page_size_bytes": cat.params.page_size_bytes,
            "pointer_size_bytes": cat.params.pointer_size_bytes,
        },
        "fact": _dump_table(cat.fact, cat.foreign_keys),
        "dimensions": [_dump_table(d) for d in cat.dimensions],
    }
    if cat.origin is not None:
        doc["origin"] = cat.origin
    return json.dumps(doc, indent=2) + "\n"
