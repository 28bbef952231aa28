# Copyright 2026 PyUnnest development team
#
# This file is part of the PyUnnest library.
#
# The PyUnnest library is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.
#
# The PyUnnest library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received copies of the GNU Lesser General Public License
# along with the PyUnnest library.  If not, see https://www.gnu.org/licenses/.

"""Plan text: s-expression syntax for plans, relations and scripts (tables followed by a plan).

    plan     (djoin (= y x) (scan R) (select (> y 1) (scan S)))
    relation rel (a b) { (1 NULL) x3 (2 2) }
    script   table R rel (x) { (1) (2) }  table S rel (y) { (1) x2 }  plan (djoin ...)

Attributes print as base#id. Parsing a printed attribute that is still alive in this session gives back that very
attribute, so parse(print(plan)) reproduces plan exactly within one session and up to renumbering across sessions.
"""

import re

import pyparsing

import pyunnest.unnest_plan as plan_ir
from pyunnest.unnest_attribute import fresh_attribute, lookup_attribute, sorted_attributes
from pyunnest.unnest_errors import PlanSyntaxError, SchemaViolationError, UnknownTableError
from pyunnest.unnest_expression import (And, Arith, AttrRef, Compare, IsNull, Literal, Not, NullSafeEq, Or,
                                        ARITHMETIC_OPERATORS, COMPARISON_OPERATORS)
from pyunnest.unnest_plan import AggFn
from pyunnest.unnest_relation import Relation, Tuple, format_value

_ATTRIBUTE_WITH_ID = re.compile(r"^(.+)#(\d+)$")
_MULTIPLICITY = re.compile(r"^x(\d+)$")
_INDENT = "  "


# ------------------------------------------------------ READER -------------------------------------------------------

class Atom:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column) -> None:
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column

    def __repr__(self):
        return "Atom(" + self.kind + ", " + repr(self.text) + ")"


class SList:
    """A parenthesized (or braced) list of atoms and lists."""

    __slots__ = ("bracket", "items", "line", "column")

    def __init__(self, bracket, items, line, column) -> None:
        self.bracket = bracket
        self.items = items
        self.line = line
        self.column = column

    def __repr__(self):
        return "SList(" + self.bracket + ", " + repr(self.items) + ")"


def _located(kind):
    def action(s, loc, toks):
        return Atom(kind, toks[0], pyparsing.lineno(loc, s), pyparsing.col(loc, s))
    return action


def _list_of(bracket):
    def action(s, loc, toks):
        return SList(bracket, list(toks), pyparsing.lineno(loc, s), pyparsing.col(loc, s))
    return action


def _build_reader():
    expression = pyparsing.Forward()
    string = pyparsing.QuotedString(quote_char='"', esc_char='\\', multiline=True,
                                    convert_whitespace_escapes=False).set_parse_action(_located("string"))
    integer = pyparsing.Regex(r'-?\d+(?![^\s(){}";])').set_parse_action(_located("int"))
    symbol = pyparsing.Regex(r'[^\s(){}";]+').set_parse_action(_located("symbol"))
    parens = (pyparsing.Suppress("(") + pyparsing.ZeroOrMore(expression) + pyparsing.Suppress(")"))
    braces = (pyparsing.Suppress("{") + pyparsing.ZeroOrMore(expression) + pyparsing.Suppress("}"))
    expression <<= (string | integer | symbol | parens.set_parse_action(_list_of("("))
                    | braces.set_parse_action(_list_of("{")))
    document = pyparsing.ZeroOrMore(expression)
    document.ignore(pyparsing.Regex(r";[^\n]*"))
    return document


_reader = _build_reader()


def read_sexpressions(text):
    try:
        return list(_reader.parse_string(text, parse_all=True))
    except pyparsing.ParseException as error:
        raise PlanSyntaxError(error.msg, error.lineno, error.col) from None


def _end_position(text):
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def _error(node, message):
    return PlanSyntaxError(message, node.line, node.column)


def _is_symbol(node, text=None):
    return isinstance(node, Atom) and node.kind == "symbol" and (text is None or node.text == text)


def _expect_list(node, what, bracket="("):
    if not isinstance(node, SList) or node.bracket != bracket:
        raise _error(node, "expected " + what)
    return node.items


def _expect_symbol(node, what):
    if not _is_symbol(node):
        raise _error(node, "expected " + what)
    return node.text


# ----------------------------------------------------- RESOLVER ------------------------------------------------------

class _Resolver:
    """Turns s-expressions into plans, relations and scripts, keeping the label -> attribute map of one parse."""

    def __init__(self, catalog=None) -> None:
        self._labels = {}
        # ids handed out by this parse; a printed label never resolves to one of them
        self._created = set()
        self._catalog = dict(catalog or {})
        for relation in self._catalog.values():
            self._register(relation.schema)

    def _register(self, attributes):
        for attribute in attributes:
            self._labels[str(attribute)] = attribute

    def catalog(self):
        return self._catalog

    def _live(self, match):
        attribute = lookup_attribute(int(match.group(2)), match.group(1))
        if attribute is None or attribute.id in self._created:
            return None
        return attribute

    def _fresh(self, base):
        attribute = fresh_attribute(base)
        self._created.add(attribute.id)
        return attribute

    # ----------------------------------------------------- attributes -----------------------------------------------------

    def reference(self, node):
        """An attribute used by an expression or an attribute list."""
        label = _expect_symbol(node, "an attribute")
        if label in self._labels:
            return self._labels[label]
        match = _ATTRIBUTE_WITH_ID.match(label)
        if match:
            attribute = self._live(match)
            if attribute is None:
                raise _error(node, "unknown attribute '" + label + "'")
            self._labels[label] = attribute
            return attribute
        candidates = set(a for a in self._labels.values() if a.base == label)
        if len(candidates) > 1:
            raise _error(node, "ambiguous attribute '" + label + "', use base#id")
        if not candidates:
            raise _error(node, "unknown attribute '" + label + "'")
        return candidates.pop()

    def declaration(self, node):
        """An attribute introduced by a relation header, a map, a rename or an aggregate."""
        label = _expect_symbol(node, "an attribute")
        if label in self._labels:
            return self._labels[label]
        match = _ATTRIBUTE_WITH_ID.match(label)
        attribute = None
        if match:
            attribute = self._live(match)
            if attribute is None:
                attribute = self._fresh(match.group(1))
        else:
            attribute = self._fresh(label)
        self._labels[label] = attribute
        return attribute

    def attribute_list(self, node, declare=False):
        items = _expect_list(node, "an attribute list")
        resolve = self.declaration if declare else self.reference
        attributes = [resolve(item) for item in items]
        if len(set(attributes)) != len(attributes):
            raise _error(node, "duplicate attribute in list")
        return attributes

    # ---------------------------------------------------- expressions ----------------------------------------------------

    def expression(self, node):
        if isinstance(node, Atom):
            if node.kind == "int":
                return Literal(int(node.text))
            if node.kind == "string":
                return Literal(node.text)
            if node.text == "NULL":
                return Literal(None)
            if node.text == "true":
                return Literal(True)
            if node.text == "false":
                return Literal(False)
            return AttrRef(self.reference(node))

        items = _expect_list(node, "an expression")
        if not items:
            raise _error(node, "empty expression")
        op = _expect_symbol(items[0], "an operator")
        operands = [self.expression(item) for item in items[1:]]
        if op in ARITHMETIC_OPERATORS or op in COMPARISON_OPERATORS or op == "<=>":
            if len(operands) != 2:
                raise _error(node, "operator " + op + " takes two operands")
            if op == "<=>":
                return NullSafeEq(operands[0], operands[1])
            if op in ARITHMETIC_OPERATORS:
                return Arith(op, operands[0], operands[1])
            return Compare(op, operands[0], operands[1])
        if op in ("and", "or"):
            if len(operands) < 2:
                raise _error(node, op + " takes at least two operands")
            connective = And if op == "and" else Or
            result = operands[0]
            for operand in operands[1:]:
                result = connective(result, operand)
            return result
        if op in ("not", "is-null"):
            if len(operands) != 1:
                raise _error(node, op + " takes one operand")
            return Not(operands[0]) if op == "not" else IsNull(operands[0])
        raise _error(items[0], "unknown operator '" + op + "'")

    # ------------------------------------------------------- plans -------------------------------------------------------

    def plan(self, node):
        items = _expect_list(node, "a plan")
        if not items:
            raise _error(node, "empty plan")
        keyword = _expect_symbol(items[0], "an operator")
        kind = plan_ir.KIND_BY_KEYWORD.get(keyword)
        if kind is None:
            raise _error(items[0], "unknown operator '" + keyword + "'")
        args = items[1:]
        try:
            result = self._plan(kind, node, args)
            plan_ir.schema_of(result)
        except SchemaViolationError as error:
            raise _error(node, str(error)) from None
        return result

    def _arity(self, node, args, count):
        if len(args) != count:
            raise _error(node, "expected " + str(count) + " arguments, got " + str(len(args)))

    def _plan(self, kind, node, args):
        if kind is plan_ir.Scan:
            self._arity(node, args, 1)
            table = _expect_symbol(args[0], "a table name")
            if table not in self._catalog:
                raise UnknownTableError(table)
            return plan_ir.Scan(table, self._catalog[table].schema)
        if kind is plan_ir.Select:
            self._arity(node, args, 2)
            child = self.plan(args[1])
            return plan_ir.Select(self.expression(args[0]), child)
        if kind is plan_ir.Map:
            self._arity(node, args, 3)
            child = self.plan(args[2])
            expression = self.expression(args[1])
            return plan_ir.Map(self.declaration(args[0]), expression, child)
        if kind in (plan_ir.ProjectDistinct, plan_ir.Project):
            self._arity(node, args, 2)
            child = self.plan(args[1])
            return kind(self.attribute_list(args[0]), child)
        if kind is plan_ir.NullPad:
            self._arity(node, args, 2)
            child = self.plan(args[1])
            return kind(self.attribute_list(args[0], declare=True), child)
        if kind is plan_ir.Rename:
            self._arity(node, args, 3)
            child = self.plan(args[2])
            old = self.reference(args[1])
            return plan_ir.Rename(self.declaration(args[0]), old, child)
        if kind in (plan_ir.Union, plan_ir.Intersect, plan_ir.Except, plan_ir.Cross):
            self._arity(node, args, 2)
            left = self.plan(args[0])
            return kind(left, self.plan(args[1]))
        if kind is plan_ir.GroupBy:
            self._arity(node, args, 3)
            child = self.plan(args[2])
            keys = self.attribute_list(args[0])
            aggregates = [self._aggregate(item) for item in _expect_list(args[1], "an aggregate list")]
            return plan_ir.GroupBy(keys, aggregates, child)
        # joins carrying a predicate
        self._arity(node, args, 3)
        left = self.plan(args[1])
        right = self.plan(args[2])
        return kind(self.expression(args[0]), left, right)

    def _aggregate(self, node):
        items = _expect_list(node, "(attribute aggregate)")
        if len(items) != 2:
            raise _error(node, "expected (attribute aggregate)")
        function = _expect_list(items[1], "an aggregate function")
        if not function:
            raise _error(items[1], "empty aggregate function")
        name = _expect_symbol(function[0], "an aggregate function")
        if name not in AggFn.KINDS:
            raise _error(function[0], "unknown aggregate function '" + name + "'")
        if name == AggFn.COUNT_STAR:
            if len(function) != 1:
                raise _error(items[1], "count* takes no argument")
            f = AggFn(name)
        else:
            if len(function) != 2:
                raise _error(items[1], name + " takes one attribute")
            f = AggFn(name, self.reference(function[1]))
        return self.declaration(items[0]), f

    # ----------------------------------------------------- relations -----------------------------------------------------

    def relation(self, keyword, header, body):
        if not _is_symbol(keyword, "rel"):
            raise _error(keyword, "expected 'rel'")
        schema = self.attribute_list(header, declare=True)
        items = _expect_list(body, "a relation body { ... }", bracket="{")
        rows = []
        index = 0
        while index < len(items):
            row = items[index]
            values = [self._value(item) for item in _expect_list(row, "a row")]
            if len(values) != len(schema):
                raise _error(row, "row has " + str(len(values)) + " values, the schema has " + str(len(schema)))
            index += 1
            count = 1
            if index < len(items) and _is_symbol(items[index]):
                count, index = self._multiplicity(items, index)
            rows.append((Tuple(dict(zip(schema, values))), count))
        return Relation.from_rows(schema, rows)

    def _multiplicity(self, items, index):
        token = items[index]
        match = _MULTIPLICITY.match(token.text)
        if match:
            count, index = int(match.group(1)), index + 1
        elif token.text == "x" and index + 1 < len(items) and isinstance(items[index + 1], Atom) \
                and items[index + 1].kind == "int":
            count, index = int(items[index + 1].text), index + 2
        else:
            raise _error(token, "expected a multiplicity xN")
        if count <= 0:
            raise _error(token, "multiplicity must be positive")
        return count, index

    @staticmethod
    def _value(node):
        if isinstance(node, Atom):
            if node.kind == "int":
                return int(node.text)
            if node.kind == "string":
                return node.text
            if node.text == "NULL":
                return None
            if node.text in ("true", "false"):
                return node.text == "true"
        raise _error(node, "expected a value")

    # ------------------------------------------------------ scripts ------------------------------------------------------

    def script(self, items, text):
        index = 0
        while index < len(items) and _is_symbol(items[index], "table"):
            if index + 4 >= len(items):
                raise PlanSyntaxError("incomplete table definition", *_end_position(text))
            name = _expect_symbol(items[index + 1], "a table name")
            if name in self._catalog:
                raise _error(items[index + 1], "table '" + name + "' defined twice")
            relation = self.relation(items[index + 2], items[index + 3], items[index + 4])
            self._catalog[name] = relation
            index += 5
        if index >= len(items) or not _is_symbol(items[index], "plan"):
            if index < len(items):
                raise _error(items[index], "expected 'table' or 'plan'")
            raise PlanSyntaxError("expected 'plan'", *_end_position(text))
        if index + 2 != len(items):
            raise PlanSyntaxError("expected exactly one plan after 'plan'", *_end_position(text))
        return self.plan(items[index + 1])


def _single(text, what):
    sexpressions = read_sexpressions(text)
    if len(sexpressions) != 1:
        if sexpressions:
            raise _error(sexpressions[1], "unexpected input after the " + what)
        raise PlanSyntaxError("expected a " + what, *_end_position(text))
    return sexpressions[0]


def parse_plan(text, catalog):
    """Parses one plan; table attributes are taken from catalog (table name -> Relation)."""
    return _Resolver(catalog).plan(_single(text, "plan"))


def parse_relation(text):
    items = read_sexpressions(text)
    if len(items) != 3:
        raise PlanSyntaxError("expected rel (attributes) { rows }", *_end_position(text))
    return _Resolver().relation(items[0], items[1], items[2])


def parse_script(text):
    """Parses table definitions followed by a plan; returns (plan, catalog)."""
    resolver = _Resolver()
    plan = resolver.script(read_sexpressions(text), text)
    return plan, resolver.catalog()


# ------------------------------------------------------ PRINTER ------------------------------------------------------

def print_expression(e):
    if isinstance(e, AttrRef):
        return str(e.attribute)
    if isinstance(e, Literal):
        return format_value(e.value)
    if isinstance(e, (Arith, Compare)):
        return "(" + e.op + " " + print_expression(e.left) + " " + print_expression(e.right) + ")"
    if isinstance(e, NullSafeEq):
        return "(<=> " + print_expression(e.left) + " " + print_expression(e.right) + ")"
    if isinstance(e, (And, Or)):
        # only the left spine is flattened so that reparsing rebuilds the same tree
        operands = [e.right]
        left = e.left
        while type(left) is type(e):
            operands.append(left.right)
            left = left.left
        operands.append(left)
        keyword = "and" if isinstance(e, And) else "or"
        return "(" + keyword + " " + " ".join(print_expression(o) for o in reversed(operands)) + ")"
    if isinstance(e, Not):
        return "(not " + print_expression(e.operand) + ")"
    if isinstance(e, IsNull):
        return "(is-null " + print_expression(e.operand) + ")"
    raise TypeError("unknown expression " + repr(e))


def _attribute_list(attributes):
    return "(" + " ".join(str(a) for a in attributes) + ")"


def _aggregate_text(f):
    if f.attribute is None:
        return "(" + f.kind + ")"
    return "(" + f.kind + " " + str(f.attribute) + ")"


def _header(p):
    if isinstance(p, plan_ir.Scan):
        return [p.table]
    if isinstance(p, plan_ir.Select):
        return [print_expression(p.predicate)]
    if isinstance(p, plan_ir.Map):
        return [str(p.attribute), print_expression(p.expression)]
    if isinstance(p, (plan_ir.ProjectDistinct, plan_ir.Project, plan_ir.NullPad)):
        return [_attribute_list(p.attributes)]
    if isinstance(p, plan_ir.Rename):
        return [str(p.new), str(p.old)]
    if isinstance(p, plan_ir.GroupBy):
        aggregates = " ".join("(" + str(a) + " " + _aggregate_text(f) + ")" for a, f in p.aggregates)
        return [_attribute_list(p.keys), "(" + aggregates + ")"]
    if isinstance(p, plan_ir.PredicateJoin):
        return [print_expression(p.predicate)]
    return []


def _print_lines(p, depth, lines):
    lines.append(_INDENT * depth + "(" + " ".join([p.keyword] + _header(p)))
    for child in p.children():
        _print_lines(child, depth + 1, lines)
    lines[-1] += ")"


def print_plan(p):
    """Canonical text of p: one operator per line, children indented by two spaces."""
    lines = []
    _print_lines(p, 0, lines)
    return "\n".join(lines)


def print_relation(r, show_ids=True):
    """Canonical text of r on one line: columns and rows in attribute-id order, every multiplicity explicit.
    Without ids the text only depends on the creation order of the attributes, which keeps golden files stable."""
    attributes = sorted_attributes(r.schema)
    names = [str(a) if show_ids else a.base for a in attributes]
    header = "rel (" + " ".join(names) + ") {"
    if r.is_empty():
        return header + " }"
    rows = ["(" + " ".join(format_value(t[a]) for a in attributes) + ") x" + str(n) for t, n in r.items()]
    return " ".join([header] + rows + ["}"])


def print_catalog(catalog):
    return "\n".join("table " + name + " " + print_relation(catalog[name]) for name in sorted(catalog))


def print_script(plan, catalog):
    tables = [print_catalog(catalog)] if catalog else []
    return "\n".join(tables + ["plan", print_plan(plan)]) + "\n"
