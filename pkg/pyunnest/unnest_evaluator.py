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

"""Reference evaluator: executes a plan against a catalog by computing characteristic functions node by node.

This module is the correctness oracle used by every equivalence check. It mirrors the operator definitions literally,
dependent joins included (the right side is re-evaluated for every distinct left tuple), and makes no attempt at
being fast."""

import enum
import logging

import pyunnest.unnest_plan as plan_ir
from pyunnest.unnest_attribute import sorted_attributes
from pyunnest.unnest_errors import (NonBooleanPredicateError, SchemaViolationError, TypeMismatchError,
                                    UnboundAttributeError, UnknownTableError, UnsupportedOperatorError)
from pyunnest.unnest_expression import (And, Arith, AttrRef, Compare, IsNull, Literal, Not, NullSafeEq, Or)
from pyunnest.unnest_plan import AggFn
from pyunnest.unnest_relation import (Relation, Tuple, tuple_concat, tuple_restrict, value_tag,
                                      values_identical)

logger = logging.getLogger(__name__)


class Truth(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"

    @staticmethod
    def of(value):
        if value is None:
            return Truth.UNKNOWN
        return Truth.TRUE if value else Truth.FALSE

    def as_value(self):
        if self is Truth.UNKNOWN:
            return None
        return self is Truth.TRUE

    def and_(self, other):
        if self is Truth.FALSE or other is Truth.FALSE:
            return Truth.FALSE
        if self is Truth.TRUE and other is Truth.TRUE:
            return Truth.TRUE
        return Truth.UNKNOWN

    def or_(self, other):
        if self is Truth.TRUE or other is Truth.TRUE:
            return Truth.TRUE
        if self is Truth.FALSE and other is Truth.FALSE:
            return Truth.FALSE
        return Truth.UNKNOWN

    def not_(self):
        if self is Truth.UNKNOWN:
            return Truth.UNKNOWN
        return Truth.FALSE if self is Truth.TRUE else Truth.TRUE


# ------------------------------------------------ SCALAR EXPRESSIONS -------------------------------------------------

def _lookup(attribute, t, env):
    if attribute in t:
        return t[attribute]
    if env is not None and attribute in env:
        return env[attribute]
    raise UnboundAttributeError(attribute)


def _integer(value, op):
    if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
        raise TypeMismatchError("operator " + op + " expects integers, got " + repr(value))
    return value


def eval_scalar(e, t, env=None):
    """Value of e under tuple t, attributes missing from t are looked up in the binding environment env.
    Arithmetic over NULL yields NULL; boolean-valued expressions yield True, False or None (unknown)."""
    if isinstance(e, AttrRef):
        return _lookup(e.attribute, t, env)
    if isinstance(e, Literal):
        return e.value
    if isinstance(e, Arith):
        left = _integer(eval_scalar(e.left, t, env), e.op)
        right = _integer(eval_scalar(e.right, t, env), e.op)
        if left is None or right is None:
            return None
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right
    return eval_predicate(e, t, env).as_value()


def _compare(op, left, right):
    if left is None or right is None:
        return Truth.UNKNOWN
    if value_tag(left) != value_tag(right):
        raise TypeMismatchError("cannot compare " + repr(left) + " with " + repr(right))
    if op == "=":
        return Truth.of(left == right)
    if op == "!=":
        return Truth.of(left != right)
    if op == "<":
        return Truth.of(left < right)
    if op == "<=":
        return Truth.of(left <= right)
    if op == ">":
        return Truth.of(left > right)
    return Truth.of(left >= right)


def eval_predicate(e, t, env=None):
    """Three-valued truth of e under t. Plain comparisons with a NULL operand are UNKNOWN; the null-safe equality
    treats NULL as an ordinary value."""
    if isinstance(e, Compare):
        return _compare(e.op, eval_scalar(e.left, t, env), eval_scalar(e.right, t, env))
    if isinstance(e, NullSafeEq):
        return Truth.of(values_identical(eval_scalar(e.left, t, env), eval_scalar(e.right, t, env)))
    if isinstance(e, And):
        left = eval_predicate(e.left, t, env)
        if left is Truth.FALSE:
            return left
        return left.and_(eval_predicate(e.right, t, env))
    if isinstance(e, Or):
        left = eval_predicate(e.left, t, env)
        if left is Truth.TRUE:
            return left
        return left.or_(eval_predicate(e.right, t, env))
    if isinstance(e, Not):
        return eval_predicate(e.operand, t, env).not_()
    if isinstance(e, IsNull):
        return Truth.of(eval_scalar(e.operand, t, env) is None)
    if isinstance(e, (AttrRef, Literal)):
        value = eval_scalar(e, t, env)
        if value is None or isinstance(value, bool):
            return Truth.of(value)
        raise NonBooleanPredicateError("predicate evaluated to " + repr(value))
    raise NonBooleanPredicateError("expression " + repr(e) + " is not a predicate")


# ---------------------------------------------------- AGGREGATES -----------------------------------------------------

def aggregate(f, r):
    """f(r) over a relation r: COUNT* counts all tuples, the others skip NULL inputs; SUM/MIN/MAX of no values is
    NULL."""
    if f.kind == AggFn.COUNT_STAR:
        return r.total()
    if f.attribute not in r.schema:
        raise SchemaViolationError("groupby", "aggregate input missing from the input", (f.attribute,))

    values = [(t[f.attribute], n) for t, n in r.items() if t[f.attribute] is not None]
    if f.kind == AggFn.COUNT:
        return sum(n for _, n in values)
    if not values:
        return None

    if f.kind == AggFn.SUM:
        return sum(_integer(v, "sum") * n for v, n in values)

    tags = set(value_tag(v) for v, _ in values)
    if len(tags) > 1:
        raise TypeMismatchError(f.kind + " over values of different types")
    if f.kind == AggFn.MIN:
        return min(v for v, _ in values)
    return max(v for v, _ in values)


# ----------------------------------------------------- OPERATORS -----------------------------------------------------

class _Counts:
    # characteristic function under construction
    def __init__(self):
        self.counts = {}

    def add(self, t, n):
        if n > 0:
            self.counts[t] = self.counts.get(t, 0) + n

    def relation(self, schema):
        return Relation(schema, self.counts)


def _scan(node, catalog, env):
    if node.table not in catalog:
        raise UnknownTableError(node.table)
    relation = catalog[node.table]
    if relation.schema != node.schema:
        raise SchemaViolationError("scan", "table '" + node.table + "' does not have the scanned attributes",
                                   relation.schema.symmetric_difference(node.schema))
    return relation


def _select(node, catalog, env):
    result = _Counts()
    for t, n in _evaluate(node.child, catalog, env):
        if eval_predicate(node.predicate, t, env) is Truth.TRUE:
            result.add(t, n)
    return result.relation(node.schema)


def _map(node, catalog, env):
    result = _Counts()
    for t, n in _evaluate(node.child, catalog, env):
        result.add(tuple_concat(t, Tuple.single(node.attribute, eval_scalar(node.expression, t, env))), n)
    return result.relation(node.schema)


def _project_distinct(node, catalog, env):
    result = {}
    for t, _ in _evaluate(node.child, catalog, env):
        result[tuple_restrict(t, node.attributes)] = 1
    return Relation(node.schema, result)


def _project(node, catalog, env):
    result = _Counts()
    for t, n in _evaluate(node.child, catalog, env):
        result.add(tuple_restrict(t, node.attributes), n)
    return result.relation(node.schema)


def _rename(node, catalog, env):
    kept = node.child.schema - {node.old}
    result = _Counts()
    for t, n in _evaluate(node.child, catalog, env):
        result.add(tuple_concat(tuple_restrict(t, kept), Tuple.single(node.new, t[node.old])), n)
    return result.relation(node.schema)


def _nullpad(node, catalog, env):
    padding = Tuple(dict((a, None) for a in node.attributes))
    result = _Counts()
    for t, n in _evaluate(node.child, catalog, env):
        result.add(tuple_concat(t, padding), n)
    return result.relation(node.schema)


def _set_operation(node, catalog, env):
    left = _evaluate(node.left, catalog, env)
    right = _evaluate(node.right, catalog, env)
    result = _Counts()
    for t in set(t for t, _ in left.items()) | set(t for t, _ in right.items()):
        m_left, m_right = left.multiplicity(t), right.multiplicity(t)
        if isinstance(node, plan_ir.Union):
            result.add(t, m_left + m_right)
        elif isinstance(node, plan_ir.Intersect):
            result.add(t, min(m_left, m_right))
        else:
            result.add(t, max(m_left - m_right, 0))
    return result.relation(node.schema)


def _product(left, right, predicate, env, result, factor=1):
    for l, n in left:
        for r, m in right:
            t = tuple_concat(l, r)
            if predicate is None or eval_predicate(predicate, t, env) is Truth.TRUE:
                result.add(t, factor * n * m)


def _cross(node, catalog, env):
    result = _Counts()
    _product(_evaluate(node.left, catalog, env), _evaluate(node.right, catalog, env), None, env, result)
    return result.relation(node.schema)


def _join(node, catalog, env):
    result = _Counts()
    _product(_evaluate(node.left, catalog, env), _evaluate(node.right, catalog, env), node.predicate, env, result)
    return result.relation(node.schema)


def _dependent_join(node, catalog, env):
    bound = node.right.free_vars & node.left.schema
    result = _Counts()
    for l, n in _evaluate(node.left, catalog, env):
        inner_env = dict(env)
        inner_env.update(tuple_restrict(l, bound).as_dict())
        right = _evaluate(node.right, catalog, inner_env)
        _product([(l, n)], right, node.predicate, env, result)
    return result.relation(node.schema)


def _has_match(l, right, predicate, env):
    for r, _ in right:
        if eval_predicate(predicate, tuple_concat(l, r), env) is Truth.TRUE:
            return True
    return False


def _semi_or_anti_join(node, catalog, env):
    right = _evaluate(node.right, catalog, env)
    keep_matches = isinstance(node, plan_ir.SemiJoin)
    result = _Counts()
    for l, n in _evaluate(node.left, catalog, env):
        if _has_match(l, right, node.predicate, env) == keep_matches:
            result.add(l, n)
    return result.relation(node.schema)


def _outer_join(node, catalog, env):
    left = _evaluate(node.left, catalog, env)
    right = _evaluate(node.right, catalog, env)
    padding = Tuple(dict((a, None) for a in sorted_attributes(node.right.schema)))
    result = _Counts()
    _product(left, right, node.predicate, env, result)
    for l, n in left:
        if not _has_match(l, right, node.predicate, env):
            result.add(tuple_concat(l, padding), n)
    return result.relation(node.schema)


def _group_by(node, catalog, env):
    groups = {}
    for t, n in _evaluate(node.child, catalog, env):
        # restriction keys compare NULL equal to NULL, so NULL forms its own group
        groups.setdefault(tuple_restrict(t, node.keys), {})[t] = n
    result = {}
    for key, members in groups.items():
        group = Relation(node.child.schema, members)
        values = dict((a, aggregate(f, group)) for a, f in node.aggregates)
        result[tuple_concat(key, Tuple(values))] = 1
    return Relation(node.schema, result)


_OPERATORS = {
    plan_ir.Scan: _scan,
    plan_ir.Select: _select,
    plan_ir.Map: _map,
    plan_ir.ProjectDistinct: _project_distinct,
    plan_ir.Project: _project,
    plan_ir.Rename: _rename,
    plan_ir.NullPad: _nullpad,
    plan_ir.Union: _set_operation,
    plan_ir.Intersect: _set_operation,
    plan_ir.Except: _set_operation,
    plan_ir.Cross: _cross,
    plan_ir.Join: _join,
    plan_ir.DependentJoin: _dependent_join,
    plan_ir.SemiJoin: _semi_or_anti_join,
    plan_ir.AntiJoin: _semi_or_anti_join,
    plan_ir.OuterJoin: _outer_join,
    plan_ir.GroupBy: _group_by,
}


def _evaluate(node, catalog, env):
    operator = _OPERATORS.get(type(node))
    if operator is None:
        raise UnsupportedOperatorError("no evaluation rule for " + type(node).__name__)
    return operator(node, catalog, env)


def evaluate(plan, catalog, env=None):
    """Evaluates plan against catalog (table name -> Relation) with the free variables of plan bound by env
    (attribute -> value)."""
    env = dict(env or {})
    plan_ir.validate_plan(plan)
    unbound = sorted_attributes(plan.free_vars - set(env))
    if unbound:
        raise UnboundAttributeError(unbound[0])
    logger.debug("evaluating %s plan with %d bound attributes", plan.keyword, len(env))
    return _evaluate(plan, catalog, env)
