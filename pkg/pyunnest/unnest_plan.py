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

"""Logical plan IR: one node kind per relational operator, plus schema and free-variable analysis."""

import dataclasses
from dataclasses import dataclass
from functools import cached_property

import pyunnest.unnest_expression
from pyunnest.unnest_attribute import Attribute, fresh_attribute, sorted_attributes
from pyunnest.unnest_errors import SchemaViolationError
from pyunnest.unnest_expression import ScalarExpr, free_vars_expr


def _attribute_tuple(attributes):
    attributes = tuple(attributes)
    for attribute in attributes:
        if not isinstance(attribute, Attribute):
            raise TypeError("expected an attribute, got " + repr(attribute))
    if len(set(attributes)) != len(attributes):
        raise ValueError("duplicate attribute in " + ", ".join(str(a) for a in attributes))
    return sorted_attributes(attributes)


class AggFn:
    """Aggregation function: COUNT-STAR, or COUNT/SUM/MIN/MAX over one input attribute."""

    COUNT_STAR = "count*"
    COUNT = "count"
    SUM = "sum"
    MIN = "min"
    MAX = "max"
    KINDS = (COUNT_STAR, COUNT, SUM, MIN, MAX)

    __slots__ = ("kind", "attribute")

    def __init__(self, kind, attribute=None) -> None:
        if kind not in AggFn.KINDS:
            raise NameError('Aggregation function must be "count*" or "count" or "sum" or "min" or "max"')
        if (kind == AggFn.COUNT_STAR) != (attribute is None):
            raise ValueError(kind + " takes " + ("no" if kind == AggFn.COUNT_STAR else "one") + " input attribute")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "attribute", attribute)

    def __setattr__(self, key, value):
        raise AttributeError("AggFn is immutable")

    def __eq__(self, other):
        return isinstance(other, AggFn) and self.kind == other.kind and self.attribute == other.attribute

    def __hash__(self):
        return hash((self.kind, self.attribute))

    def __repr__(self):
        if self.attribute is None:
            return "AggFn(" + self.kind + ")"
        return "AggFn(" + self.kind + ", " + str(self.attribute) + ")"


class Plan:
    keyword = None

    def children(self):
        return ()

    def with_children(self, children):
        return self

    def expressions(self):
        return ()

    @cached_property
    def schema(self):
        return frozenset(self._compute_schema())

    @cached_property
    def free_vars(self):
        return frozenset(self._compute_free_vars())

    def _compute_schema(self):
        raise NotImplementedError

    def _compute_free_vars(self):
        result = frozenset()
        for child in self.children():
            result = result | child.free_vars
        return result

    def _violation(self, message, attributes=()):
        return SchemaViolationError(self.keyword, message, sorted_attributes(attributes))


class UnaryPlan(Plan):
    def children(self):
        return (self.child,)

    def with_children(self, children):
        (child,) = children
        if child is self.child:
            return self
        return dataclasses.replace(self, child=child)


class BinaryPlan(Plan):
    def children(self):
        return self.left, self.right

    def with_children(self, children):
        left, right = children
        if left is self.left and right is self.right:
            return self
        return dataclasses.replace(self, left=left, right=right)

    def _require_disjoint(self):
        overlap = self.left.schema & self.right.schema
        if overlap:
            raise self._violation("inputs must have disjoint schemas", overlap)

    def _require_identical(self):
        if self.left.schema != self.right.schema:
            raise self._violation("inputs must have identical schemas",
                                  self.left.schema.symmetric_difference(self.right.schema))


@dataclass(frozen=True)
class Scan(Plan):
    table: str
    attributes: tuple

    keyword = "scan"

    def __post_init__(self):
        object.__setattr__(self, "attributes", _attribute_tuple(self.attributes))

    def _compute_schema(self):
        return self.attributes


@dataclass(frozen=True)
class Select(UnaryPlan):
    predicate: ScalarExpr
    child: Plan

    keyword = "select"

    def expressions(self):
        return (self.predicate,)

    def _compute_schema(self):
        return self.child.schema

    def _compute_free_vars(self):
        return self.child.free_vars | (free_vars_expr(self.predicate) - self.child.schema)


@dataclass(frozen=True)
class Map(UnaryPlan):
    attribute: Attribute
    expression: ScalarExpr
    child: Plan

    keyword = "map"

    def expressions(self):
        return (self.expression,)

    def _compute_schema(self):
        if self.attribute in self.child.schema:
            raise self._violation("mapped attribute already defined by the input", (self.attribute,))
        return self.child.schema | {self.attribute}

    def _compute_free_vars(self):
        return self.child.free_vars | (free_vars_expr(self.expression) - self.child.schema)


@dataclass(frozen=True)
class ProjectDistinct(UnaryPlan):
    attributes: tuple
    child: Plan

    keyword = "project-distinct"

    def __post_init__(self):
        object.__setattr__(self, "attributes", _attribute_tuple(self.attributes))

    def _compute_schema(self):
        missing = set(self.attributes) - self.child.schema
        if missing:
            raise self._violation("projected attributes missing from the input", missing)
        return self.attributes


@dataclass(frozen=True)
class Project(UnaryPlan):
    """Duplicate-preserving projection."""
    attributes: tuple
    child: Plan

    keyword = "project"

    def __post_init__(self):
        object.__setattr__(self, "attributes", _attribute_tuple(self.attributes))

    def _compute_schema(self):
        missing = set(self.attributes) - self.child.schema
        if missing:
            raise self._violation("projected attributes missing from the input", missing)
        return self.attributes


@dataclass(frozen=True)
class Rename(UnaryPlan):
    new: Attribute
    old: Attribute
    child: Plan

    keyword = "rename"

    def _compute_schema(self):
        if self.new in self.child.schema:
            raise self._violation("new name already defined by the input", (self.new,))
        if self.old not in self.child.schema:
            raise self._violation("renamed attribute missing from the input", (self.old,))
        return (self.child.schema - {self.old}) | {self.new}


@dataclass(frozen=True)
class NullPad(UnaryPlan):
    attributes: tuple
    child: Plan

    keyword = "nullpad"

    def __post_init__(self):
        object.__setattr__(self, "attributes", _attribute_tuple(self.attributes))

    def _compute_schema(self):
        overlap = set(self.attributes) & self.child.schema
        if overlap:
            raise self._violation("padded attributes already defined by the input", overlap)
        return self.child.schema | set(self.attributes)


@dataclass(frozen=True)
class GroupBy(UnaryPlan):
    """Group by keys; aggregates is a tuple of (output attribute, AggFn) pairs."""
    keys: tuple
    aggregates: tuple
    child: Plan

    keyword = "groupby"

    def __post_init__(self):
        object.__setattr__(self, "keys", _attribute_tuple(self.keys))
        aggregates = tuple((a, f) for a, f in self.aggregates)
        object.__setattr__(self, "aggregates", tuple(sorted(aggregates, key=lambda item: item[0].id)))

    def _compute_schema(self):
        child_schema = self.child.schema
        missing = set(self.keys) - child_schema
        if missing:
            raise self._violation("grouping keys missing from the input", missing)
        outputs = [a for a, _ in self.aggregates]
        clashing = set(outputs) & (child_schema | set(self.keys))
        if clashing or len(set(outputs)) != len(outputs):
            raise self._violation("aggregate outputs must be new and distinct", clashing)
        inputs = set(f.attribute for _, f in self.aggregates if f.attribute is not None)
        if inputs - child_schema:
            raise self._violation("aggregate inputs missing from the input", inputs - child_schema)
        return set(self.keys) | set(outputs)


@dataclass(frozen=True)
class Union(BinaryPlan):
    left: Plan
    right: Plan

    keyword = "union"

    def _compute_schema(self):
        self._require_identical()
        return self.left.schema


@dataclass(frozen=True)
class Intersect(BinaryPlan):
    left: Plan
    right: Plan

    keyword = "intersect"

    def _compute_schema(self):
        self._require_identical()
        return self.left.schema


@dataclass(frozen=True)
class Except(BinaryPlan):
    left: Plan
    right: Plan

    keyword = "except"

    def _compute_schema(self):
        self._require_identical()
        return self.left.schema


@dataclass(frozen=True)
class Cross(BinaryPlan):
    left: Plan
    right: Plan

    keyword = "cross"

    def _compute_schema(self):
        self._require_disjoint()
        return self.left.schema | self.right.schema


class PredicateJoin(BinaryPlan):
    """Shared behaviour of the joins carrying a predicate."""

    def expressions(self):
        return (self.predicate,)

    def _compute_schema(self):
        self._require_disjoint()
        return self.left.schema | self.right.schema

    def _compute_free_vars(self):
        bound = self.left.schema | self.right.schema
        return self.left.free_vars | self.right.free_vars | (free_vars_expr(self.predicate) - bound)


@dataclass(frozen=True)
class Join(PredicateJoin):
    predicate: ScalarExpr
    left: Plan
    right: Plan

    keyword = "join"


@dataclass(frozen=True)
class DependentJoin(PredicateJoin):
    """The right side is evaluated once per left tuple with the left tuple's attributes bound."""
    predicate: ScalarExpr
    left: Plan
    right: Plan

    keyword = "djoin"

    def _compute_free_vars(self):
        bound = self.left.schema | self.right.schema
        return (self.left.free_vars | (self.right.free_vars - self.left.schema)
                | (free_vars_expr(self.predicate) - bound))


@dataclass(frozen=True)
class SemiJoin(PredicateJoin):
    predicate: ScalarExpr
    left: Plan
    right: Plan

    keyword = "semijoin"

    def _compute_schema(self):
        self._require_disjoint()
        return self.left.schema


@dataclass(frozen=True)
class AntiJoin(PredicateJoin):
    predicate: ScalarExpr
    left: Plan
    right: Plan

    keyword = "antijoin"

    def _compute_schema(self):
        self._require_disjoint()
        return self.left.schema


@dataclass(frozen=True)
class OuterJoin(PredicateJoin):
    """Left outer join."""
    predicate: ScalarExpr
    left: Plan
    right: Plan

    keyword = "outerjoin"


NODE_KINDS = (Scan, Select, Map, ProjectDistinct, Project, Rename, Union, Intersect, Except, Cross, Join,
              DependentJoin, SemiJoin, AntiJoin, OuterJoin, NullPad, GroupBy)

KIND_BY_KEYWORD = dict((kind.keyword, kind) for kind in NODE_KINDS)


def schema_of(plan):
    """A(plan). Raises SchemaViolationError when an operator-local precondition fails anywhere below."""
    return plan.schema


def free_vars_plan(plan):
    """F(plan): attributes referenced inside plan but not produced by an operator inside plan."""
    return plan.free_vars


def validate_plan(plan):
    """Checks every operator-local precondition and that no node references an attribute it also produces."""
    for node in walk(plan):
        schema = node.schema
        clash = node.free_vars & schema
        if clash:
            raise SchemaViolationError(node.keyword, "attributes are both free and produced",
                                       sorted_attributes(clash))
        if isinstance(node, DependentJoin):
            # the right side may only see the left attributes as outer references
            produced = frozenset().union(*(inner.schema for inner in walk(node.right)))
            shadowed = produced & node.left.schema
            if shadowed:
                raise SchemaViolationError(node.keyword, "right side redefines attributes of the left side",
                                           sorted_attributes(shadowed))
    return plan.schema


def walk(plan):
    """Pre-order traversal."""
    stack = [plan]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def walk_with_paths(plan, path=()):
    """Pre-order traversal yielding (path, node); a path is the tuple of child indices from the root."""
    yield path, plan
    for index, child in enumerate(plan.children()):
        yield from walk_with_paths(child, path + (index,))


def node_at(plan, path):
    for index in path:
        plan = plan.children()[index]
    return plan


def count_nodes(plan, kind=None):
    return sum(1 for node in walk(plan) if kind is None or isinstance(node, kind))


def kind_histogram(plan):
    histogram = dict((kind.keyword, 0) for kind in NODE_KINDS)
    for node in walk(plan):
        histogram[node.keyword] += 1
    return histogram


def transform_bottom_up(plan, function):
    children = tuple(transform_bottom_up(child, function) for child in plan.children())
    return function(plan.with_children(children))


def clone_plan(plan):
    """A structurally equal copy made of new node objects."""
    children = dict(zip(("child",) if isinstance(plan, UnaryPlan) else ("left", "right"),
                        (clone_plan(child) for child in plan.children())))
    return dataclasses.replace(plan, **children)


def rename_references(plan, mapping):
    """Substitutes attribute references inside every predicate and expression of plan.

    Only references are affected; attribute lists (projections, keys, scans) are left alone, so mapping must only
    name attributes that are free in plan."""
    if not mapping:
        return plan
    children = tuple(rename_references(child, mapping) for child in plan.children())
    node = plan.with_children(children)
    if isinstance(node, Select):
        predicate = pyunnest.unnest_expression.substitute(node.predicate, mapping)
        if predicate is not node.predicate:
            node = dataclasses.replace(node, predicate=predicate)
    elif isinstance(node, Map):
        expression = pyunnest.unnest_expression.substitute(node.expression, mapping)
        if expression is not node.expression:
            node = dataclasses.replace(node, expression=expression)
    elif isinstance(node, PredicateJoin):
        predicate = pyunnest.unnest_expression.substitute(node.predicate, mapping)
        if predicate is not node.predicate:
            node = dataclasses.replace(node, predicate=predicate)
    return node


def plan_attributes(plan):
    """Every attribute mentioned anywhere in plan, in pre-order of first mention."""
    seen = []
    known = set()

    def note(attribute):
        if attribute not in known:
            known.add(attribute)
            seen.append(attribute)

    def note_expr(e):
        if isinstance(e, pyunnest.unnest_expression.AttrRef):
            note(e.attribute)
        for child in e.children():
            note_expr(child)

    for node in walk(plan):
        if isinstance(node, Scan):
            for a in node.attributes:
                note(a)
        elif isinstance(node, Map):
            note(node.attribute)
        elif isinstance(node, Rename):
            note(node.new)
            note(node.old)
        elif isinstance(node, (ProjectDistinct, Project, NullPad)):
            for a in node.attributes:
                note(a)
        elif isinstance(node, GroupBy):
            for a in node.keys:
                note(a)
            for a, f in node.aggregates:
                note(a)
                if f.attribute is not None:
                    note(f.attribute)
        for e in node.expressions():
            note_expr(e)
    return seen


def alpha_equivalent(left, right):
    """Structural equality up to a consistent one-to-one renaming of attributes."""
    forward = {}
    backward = {}

    def same_attribute(a, b):
        if forward.get(a, b) != b or backward.get(b, a) != a:
            return False
        forward[a] = b
        backward[b] = a
        return a.base == b.base

    def same_definitions(xs, ys):
        # attributes defined by one node keep their relative id order under renumbering
        return len(xs) == len(ys) and all(same_attribute(x, y) for x, y in zip(xs, ys))

    def same_attributes(xs, ys):
        # references are sets; attributes bound below must map into ys, only free ones are paired by base
        if len(xs) != len(ys):
            return False
        targets = set(ys)
        if any(forward[x] not in targets for x in xs if x in forward):
            return False
        free_xs = [x for x in xs if x not in forward]
        free_ys = [y for y in ys if y not in backward]
        return len(free_xs) == len(free_ys) and all(same_attribute(x, y) for x, y in
                                                    zip(_by_base(free_xs), _by_base(free_ys)))

    def same_expr(e, f):
        if type(e) is not type(f):
            return False
        if isinstance(e, pyunnest.unnest_expression.AttrRef):
            return same_attribute(e.attribute, f.attribute)
        if isinstance(e, pyunnest.unnest_expression.Literal):
            return e == f
        if getattr(e, "op", None) != getattr(f, "op", None):
            return False
        return all(same_expr(c, d) for c, d in zip(e.children(), f.children()))

    def same(p, q):
        if type(p) is not type(q):
            return False
        if isinstance(p, Scan):
            return p.table == q.table and same_definitions(p.attributes, q.attributes)
        if len(p.children()) != len(q.children()):
            return False
        if not all(same(c, d) for c, d in zip(p.children(), q.children())):
            return False
        if not all(same_expr(e, f) for e, f in zip(p.expressions(), q.expressions())):
            return False
        if isinstance(p, Map):
            return same_attribute(p.attribute, q.attribute)
        if isinstance(p, Rename):
            return same_attribute(p.old, q.old) and same_attribute(p.new, q.new)
        if isinstance(p, (ProjectDistinct, Project, NullPad)):
            return same_attributes(p.attributes, q.attributes)
        if isinstance(p, GroupBy):
            if not same_attributes(p.keys, q.keys) or len(p.aggregates) != len(q.aggregates):
                return False
            for (a, f), (b, g) in zip(p.aggregates, q.aggregates):
                if f.kind != g.kind or not same_attribute(a, b):
                    return False
                if (f.attribute is None) != (g.attribute is None):
                    return False
                if f.attribute is not None and not same_attribute(f.attribute, g.attribute):
                    return False
        return True

    return same(left, right)


def _by_base(attributes):
    return sorted(attributes, key=lambda a: (a.base, a.id))


def natural_join(kind, predicate, left, right):
    """left ⋈_{predicate ∧ natural} right for kind in Join, SemiJoin, AntiJoin and OuterJoin.

    The attributes both inputs share are renamed to fresh ones on the right, compared with the null-safe equality,
    and the fresh copies are dropped again by a duplicate-preserving projection."""
    if kind not in (Join, SemiJoin, AntiJoin, OuterJoin):
        raise ValueError("natural join of kind " + repr(kind) + " is not supported")
    common = sorted_attributes(left.schema & right.schema)
    renamed = right
    conditions = [predicate]
    for attribute in common:
        copy = fresh_attribute(attribute.base)
        renamed = Rename(copy, attribute, renamed)
        conditions.append(pyunnest.unnest_expression.null_safe_eq(attribute, copy))
    joined = kind(pyunnest.unnest_expression.conjunction(conditions), left, renamed)
    if kind in (SemiJoin, AntiJoin):
        return joined
    return Project(left.schema | right.schema, joined)
