# ---------------------------------------------------------------------------
# Star-join workload parser for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Tuple, Union

import numpy as np
import sqlparse
from sqlparse import tokens as T

# Local imports
from bjia.errors import WorkloadSyntaxError, WorkloadValidationError

JOIN = "join"
RESTRICTION = "restriction"

EQUALITY_OPS = ("=",)
INEQUALITY_OPS = ("<>", "!=")
RANGE_OPS = ("<", "<=", ">", ">=", "BETWEEN")
_COMPARISONS = EQUALITY_OPS + INEQUALITY_OPS + RANGE_OPS[:-1]

# Keywords the restricted grammar understands; any other keyword found where
# an identifier is expected is taken as an identifier (e.g. a bare "month")
_GRAMMAR = ("SELECT", "FROM", "WHERE", "AND", "IN", "GROUP BY", "AS",
            "BETWEEN")
_UNSUPPORTED = ("OR", "NOT", "JOIN", "INNER JOIN", "LEFT JOIN",
                "RIGHT JOIN", "FULL JOIN", "CROSS JOIN", "ON", "HAVING",
                "ORDER BY", "LIMIT", "UNION", "EXISTS", "LIKE", "IS",
                "DISTINCT", "WITH", "INSERT", "UPDATE", "DELETE")


class UnsupportedConstruct(WorkloadSyntaxError):
    """ Valid SQL outside of the restricted star-join grammar"""


@dataclass(frozen=True, order=True)
class QualifiedAttribute:
    table: str
    attribute: str

    def __str__(self):
        return "%s.%s" % (self.table, self.attribute)


@dataclass(frozen=True)
class Predicate:
    kind: str
    left: QualifiedAttribute
    right: Union[QualifiedAttribute, Tuple]
    operator: str = "="

    def __str__(self):
        if self.kind == JOIN:
            return "%s = %s" % (self.left, self.right)
        if self.operator == "IN":
            return "%s IN (%s)" % (
                self.left, ", ".join(_literal(v) for v in self.right))
        if self.operator == "BETWEEN":
            return "%s BETWEEN %s AND %s" % (
                self.left, _literal(self.right[0]), _literal(self.right[1]))
        return "%s %s %s" % (self.left, self.operator,
                             _literal(self.right[0]))


@dataclass(frozen=True)
class Query:
    id: int
    tables: FrozenSet[str]
    predicates: Tuple[Predicate, ...]
    group_by: Tuple[QualifiedAttribute, ...]
    text: str = field(default="", compare=False)

    @property
    def joins(self):
        return tuple(p for p in self.predicates if p.kind == JOIN)

    @property
    def restrictions(self):
        return tuple(p for p in self.predicates if p.kind == RESTRICTION)


@dataclass(frozen=True, eq=False)
class QueryAttributeMatrix:
    rows: Tuple[int, ...]
    columns: Tuple[QualifiedAttribute, ...]
    cells: np.ndarray

    @property
    def shape(self):
        return (len(self.rows), len(self.columns))

    def cell(self, query_id, attribute):
        return bool(self.cells[self.rows.index(query_id),
                               self.columns.index(attribute)])

    def row(self, query_id):
        r = self.rows.index(query_id)
        return frozenset(c for n, c in enumerate(self.columns)
                         if self.cells[r, n])


def _literal(value):
    if isinstance(value, str):
        return "'%s'" % value.replace("'", "''")
    return repr(value)


class _Token:
    __slots__ = ("kind", "value", "offset")

    def __init__(self, kind, value, offset):
        self.kind = kind
        self.value = value
        self.offset = offset


def _tokenize(text):
    result = []
    offset = 0
    for statement in sqlparse.parse(text):
        for tok in statement.flatten():
            start = offset
            offset += len(tok.value)
            ttype = tok.ttype
            if tok.is_whitespace or ttype in T.Comment:
                continue
            if ttype in T.Keyword:
                word = " ".join(tok.value.split()).upper()
                result.append(_Token("kw", word, start))
            elif ttype in T.Name:
                result.append(_Token("name", tok.value, start))
            elif ttype in T.Literal.String.Symbol:
                result.append(_Token("name", tok.value[1:-1], start))
            elif ttype in T.Literal.String:
                value = tok.value[1:-1].replace("''", "'")
                result.append(_Token("str", value, start))
            elif ttype in T.Literal.Number.Integer:
                result.append(_Token("num", int(tok.value), start))
            elif ttype in T.Literal.Number:
                result.append(_Token("num", float(tok.value), start))
            elif ttype in T.Operator.Comparison:
                result.append(_Token("op", tok.value.upper(), start))
            else:
                result.append(_Token("punct", tok.value, start))
    return result


class _StatementParser:

    def __init__(self, text, index):
        self.text = text
        self.index = index
        self.tokens = _tokenize(text)
        self.pos = 0
        self.aliases = {}
        self.tables = []

    def error(self, msg, tok=None, unsupported=False):
        if tok is None:
            tok = self.peek()
        offset = len(self.text) if tok is None else tok.offset
        cls = UnsupportedConstruct if unsupported else WorkloadSyntaxError
        raise cls(msg, self.index, offset)

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def take(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of statement")
        self.pos += 1
        return tok

    def at(self, kind, value=None):
        tok = self.peek()
        if tok is None or tok.kind != kind:
            return False
        return value is None or tok.value == value

    def expect(self, kind, value):
        tok = self.take()
        if tok.kind != kind or tok.value != value:
            self._unexpected(tok, "expected '%s'" % value)
        return tok

    def _unexpected(self, tok, msg):
        if tok.kind == "kw" and tok.value in _UNSUPPORTED:
            self.error("unsupported construct '%s'" % tok.value, tok, True)
        if tok.kind == "kw" and tok.value == "SELECT":
            self.error("nested queries are not supported", tok, True)
        self.error("%s, got '%s'" % (msg, tok.value), tok)

    def identifier(self):
        tok = self.take()
        if tok.kind == "name":
            return tok.value
        if tok.kind == "kw" and tok.value not in _GRAMMAR \
           and tok.value not in _UNSUPPORTED:
            return tok.value.lower()
        self._unexpected(tok, "expected an identifier")

    def parse(self, qid):
        if self.peek() is None:
            return None
        self.expect("kw", "SELECT")
        self.select_list()
        self.expect("kw", "FROM")
        self.from_list()
        predicates = []
        group_by = []
        if self.at("kw", "WHERE"):
            self.take()
            predicates.append(self.predicate())
            while self.at("kw", "AND"):
                self.take()
                predicates.append(self.predicate())
        if self.at("kw", "GROUP BY"):
            self.take()
            group_by.append(self.column())
            while self.at("punct", ","):
                self.take()
                group_by.append(self.column())
        if self.at("punct", ";"):
            self.take()
        tok = self.peek()
        if tok is not None:
            self._unexpected(tok, "expected end of statement")
        return Query(qid, frozenset(self.tables), tuple(predicates),
                     tuple(group_by), self.text)

    def select_list(self):
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                self.error("missing FROM clause")
            if depth == 0 and tok.kind == "kw" and tok.value == "FROM":
                return
            if tok.kind == "kw" and tok.value == "SELECT":
                self.error("nested queries are not supported", tok, True)
            if tok.kind == "punct" and tok.value == "(":
                depth += 1
            elif tok.kind == "punct" and tok.value == ")":
                depth -= 1
            self.pos += 1

    def from_list(self):
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "punct" and tok.value == "(":
                self.error("derived tables are not supported", tok, True)
            name = self.identifier()
            alias = name
            if self.at("kw", "AS"):
                self.take()
                alias = self.identifier()
            elif self.at("name"):
                alias = self.identifier()
            if alias.lower() in self.aliases:
                self.error("duplicate table or alias '%s'" % alias)
            self.aliases[alias.lower()] = name
            if alias != name:
                self.aliases.setdefault(name.lower(), name)
            if name not in self.tables:
                self.tables.append(name)
            if not self.at("punct", ","):
                return
            self.take()

    def column(self):
        tok = self.peek()
        first = self.identifier()
        if self.at("punct", "."):
            self.take()
            attr = self.identifier()
            table = self.aliases.get(first.lower())
            if table is None:
                self.error("unknown table or alias '%s'" % first, tok)
            return QualifiedAttribute(table, attr)
        if len(self.tables) != 1:
            self.error("ambiguous column '%s'" % first, tok)
        return QualifiedAttribute(self.tables[0], first)

    def literal(self):
        tok = self.take()
        if tok.kind in ("str", "num"):
            return tok.value
        if tok.kind == "punct" and tok.value in ("-", "+"):
            num = self.take()
            if num.kind != "num":
                self.error("expected a number", num)
            return -num.value if tok.value == "-" else num.value
        self._unexpected(tok, "expected a literal")

    def _is_literal(self):
        tok = self.peek()
        return tok is not None and (
            tok.kind in ("str", "num") or
            (tok.kind == "punct" and tok.value in ("-", "+")))

    def predicate(self):
        tok = self.peek()
        if tok is not None and tok.kind == "punct" and tok.value == "(":
            self.error("parenthesized predicates are not supported", tok,
                       True)
        if self._is_literal():
            # literal <op> column, mirrored
            value = self.literal()
            op = self.take()
            if op.kind != "op" or op.value not in _COMPARISONS:
                self._unexpected(op, "expected a comparison operator")
            col = self.column()
            mirror = {"<": ">", ">": "<", "<=": ">=", ">=": "<="}
            return Predicate(RESTRICTION, col, (value,),
                             mirror.get(op.value, op.value))

        left = self.column()
        op = self.take()
        if op.kind == "kw" and op.value == "IN":
            self.expect("punct", "(")
            if self.at("kw", "SELECT"):
                self.error("nested queries are not supported", None, True)
            values = [self.literal()]
            while self.at("punct", ","):
                self.take()
                values.append(self.literal())
            self.expect("punct", ")")
            return Predicate(RESTRICTION, left, tuple(values), "IN")
        if op.kind == "kw" and op.value == "BETWEEN":
            low = self.literal()
            self.expect("kw", "AND")
            high = self.literal()
            return Predicate(RESTRICTION, left, (low, high), "BETWEEN")
        if op.kind != "op":
            self._unexpected(op, "expected a comparison operator")
        if op.value not in _COMPARISONS:
            self.error("unsupported operator '%s'" % op.value, op, True)
        if self._is_literal():
            return Predicate(RESTRICTION, left, (self.literal(),), op.value)
        right = self.column()
        if op.value != "=":
            self.error("only equi-joins are supported", op, True)
        return Predicate(JOIN, left, right, "=")


def split_statements(text):
    """ Split a workload into statements, dropping comment-only chunks"""
    result = []
    for statement in sqlparse.split(text):
        stripped = sqlparse.format(statement, strip_comments=True).strip()
        if stripped and stripped != ";":
            result.append(statement)
    return result


def parse_workload(text, lenient=False, advisor=None):
    """ Parse a workload of star-join SELECT statements

    Returns one Query per statement in file order with ids starting at 1.
    Statements using constructs outside of the restricted grammar raise
    UnsupportedConstruct, or are skipped with a warning when lenient.
    """
    queries = []
    for index, statement in enumerate(split_statements(text), start=1):
        parser = _StatementParser(statement, index)
        try:
            query = parser.parse(len(queries) + 1)
        except UnsupportedConstruct as e:
            if lenient is False:
                raise
            if advisor is not None:
                advisor.debug(1, "skipping %s" % str(e))
            continue
        if query is not None:
            queries.append(query)
    return queries


def load_workload(path, lenient=False, advisor=None):
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise WorkloadSyntaxError("%s: %s" % (path, e.strerror))
    return parse_workload(text, lenient, advisor)


def emit_query(q):
    """ Render a query back into the restricted grammar"""
    sql = "SELECT COUNT(*) FROM %s" % ", ".join(sorted(q.tables))
    if q.predicates:
        sql += " WHERE %s" % " AND ".join(str(p) for p in q.predicates)
    if q.group_by:
        sql += " GROUP BY %s" % ", ".join(str(a) for a in q.group_by)
    return sql + ";"


def emit_workload(queries):
    return "".join("%s\n" % emit_query(q) for q in queries)


def _canonical_table(name, cat):
    for table in (cat.fact,) + tuple(cat.dimensions):
        if table.name.lower() == name.lower():
            return table
    return None


def validate_query(q, cat):
    """ Resolve a parsed query against the catalog

    Table and attribute names are mapped onto their catalog spelling and join
    predicates are oriented fact foreign key first. References to tables the
    catalog does not know are kept as written.
    """
    names = {}
    for name in q.tables:
        table = _canonical_table(name, cat)
        names[name] = table.name if table is not None else name

    def resolve(qa):
        table = _canonical_table(qa.table, cat)
        if table is None:
            return QualifiedAttribute(names.get(qa.table, qa.table),
                                      qa.attribute)
        for attr in table.attributes:
            if attr.name.lower() == qa.attribute.lower():
                return QualifiedAttribute(table.name, attr.name)
        raise WorkloadValidationError("query %d: unknown attribute %s" % (
                                      q.id, qa))

    predicates = []
    for p in q.predicates:
        left = resolve(p.left)
        if p.kind == RESTRICTION:
            predicates.append(replace(p, left=left))
            continue
        right = resolve(p.right)
        known = cat.table(left.table) is not None and \
            cat.table(right.table) is not None
        if known:
            if cat.is_foreign_key(right.table, right.attribute):
                left, right = right, left
            ok = cat.is_foreign_key(left.table, left.attribute) and \
                cat.foreign_keys[left.attribute] == (right.table,
                                                     right.attribute)
            if not ok:
                raise WorkloadValidationError(
                    "query %d: join %s = %s is not a fact foreign key to "
                    "dimension primary key" % (q.id, left, right))
        predicates.append(replace(p, left=left, right=right))

    return replace(q, tables=frozenset(names.values()),
                   predicates=tuple(predicates),
                   group_by=tuple(resolve(a) for a in q.group_by))


def validate_workload(queries, cat):
    return [validate_query(q, cat) for q in queries]


def extract_indexable_attributes(q, cat, keys_from_metadata=False):
    """ Where and Group-by attributes of a validated query, catalog tables only

    Join key attributes are taken from the join predicates or, with
    keys_from_metadata, injected from the catalog for the dimensions owning
    an extracted non-key attribute.
    """
    found = set()
    for p in q.restrictions:
        found.add(p.left)
    found.update(q.group_by)
    found = set(a for a in found if cat.attribute(a.table, a.attribute))

    joins = [p for p in q.joins
             if cat.table(p.left.table) is not None and
             cat.table(p.right.table) is not None]
    if keys_from_metadata is False:
        for p in joins:
            found.add(p.left)
            found.add(p.right)
    else:
        joined = set(p.right.table for p in joins)
        owners = set(a.table for a in found
                     if cat.dimension(a.table) is not None and
                     not cat.is_primary_key(a.table, a.attribute))
        for dim in sorted(owners & joined):
            fk = cat.foreign_key_of(dim)
            found.add(QualifiedAttribute(cat.fact.name, fk))
            found.add(QualifiedAttribute(dim, cat.foreign_keys[fk][1]))
    return frozenset(found)


def build_matrix(queries, cat, keys_from_metadata=False):
    extracted = [extract_indexable_attributes(q, cat, keys_from_metadata)
                 for q in queries]
    columns = tuple(sorted(set().union(*extracted))) if extracted else ()
    cells = np.zeros((len(queries), len(columns)), dtype=bool)
    position = {c: n for n, c in enumerate(columns)}
    for r, attrs in enumerate(extracted):
        for a in attrs:
            cells[r, position[a]] = True
    return QueryAttributeMatrix(tuple(q.id for q in queries), columns, cells)
