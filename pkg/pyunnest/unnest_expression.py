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

"""Scalar expressions: attribute references, literals, arithmetic, comparisons and boolean connectives."""

from dataclasses import dataclass

import pyunnest.unnest_relation

ARITHMETIC_OPERATORS = ("+", "-", "*")
COMPARISON_OPERATORS = ("=", "!=", "<", "<=", ">", ">=")


class ScalarExpr:
    __slots__ = ()

    def children(self):
        return ()


@dataclass(frozen=True)
class AttrRef(ScalarExpr):
    attribute: object


@dataclass(frozen=True, eq=False)
class Literal(ScalarExpr):
    value: object

    def __post_init__(self):
        if not pyunnest.unnest_relation.is_value(self.value):
            raise TypeError("unsupported literal " + repr(self.value))

    def __eq__(self, other):
        return isinstance(other, Literal) and pyunnest.unnest_relation.values_identical(self.value, other.value)

    def __hash__(self):
        return hash(pyunnest.unnest_relation.value_key(self.value))


@dataclass(frozen=True)
class Arith(ScalarExpr):
    op: str
    left: ScalarExpr
    right: ScalarExpr

    def __post_init__(self):
        if self.op not in ARITHMETIC_OPERATORS:
            raise ValueError("unknown arithmetic operator " + repr(self.op))

    def children(self):
        return self.left, self.right


@dataclass(frozen=True)
class Compare(ScalarExpr):
    op: str
    left: ScalarExpr
    right: ScalarExpr

    def __post_init__(self):
        if self.op not in COMPARISON_OPERATORS:
            raise ValueError("unknown comparison operator " + repr(self.op))

    def children(self):
        return self.left, self.right


@dataclass(frozen=True)
class NullSafeEq(ScalarExpr):
    """Equality where NULL equals NULL; used for every machine-generated natural or domain condition."""
    left: ScalarExpr
    right: ScalarExpr

    def children(self):
        return self.left, self.right


@dataclass(frozen=True)
class And(ScalarExpr):
    left: ScalarExpr
    right: ScalarExpr

    def children(self):
        return self.left, self.right


@dataclass(frozen=True)
class Or(ScalarExpr):
    left: ScalarExpr
    right: ScalarExpr

    def children(self):
        return self.left, self.right


@dataclass(frozen=True)
class Not(ScalarExpr):
    operand: ScalarExpr

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class IsNull(ScalarExpr):
    operand: ScalarExpr

    def children(self):
        return (self.operand,)


TRUE = Literal(True)
FALSE = Literal(False)


def ref(attribute):
    return AttrRef(attribute)


def lit(value):
    return Literal(value)


def eq(left, right):
    return Compare("=", _as_expr(left), _as_expr(right))


def null_safe_eq(left, right):
    return NullSafeEq(_as_expr(left), _as_expr(right))


def _as_expr(value):
    if isinstance(value, ScalarExpr):
        return value
    if pyunnest.unnest_relation.is_value(value):
        return Literal(value)
    return AttrRef(value)


def free_vars_expr(e):
    """F(e): every attribute referenced in e."""
    if isinstance(e, AttrRef):
        return frozenset((e.attribute,))
    result = frozenset()
    for child in e.children():
        result = result | free_vars_expr(child)
    return result


def substitute(e, mapping):
    """Replaces attribute references according to mapping (attribute -> attribute or expression).
    Unmapped references and unchanged subtrees are returned as they are."""
    if isinstance(e, AttrRef):
        if e.attribute not in mapping:
            return e
        return _as_expr(mapping[e.attribute])
    if isinstance(e, Literal):
        return e
    if isinstance(e, (Arith, Compare)):
        left, right = substitute(e.left, mapping), substitute(e.right, mapping)
        if left is e.left and right is e.right:
            return e
        return type(e)(e.op, left, right)
    if isinstance(e, (NullSafeEq, And, Or)):
        left, right = substitute(e.left, mapping), substitute(e.right, mapping)
        if left is e.left and right is e.right:
            return e
        return type(e)(left, right)
    if isinstance(e, (Not, IsNull)):
        operand = substitute(e.operand, mapping)
        if operand is e.operand:
            return e
        return type(e)(operand)
    raise TypeError("unknown expression " + repr(e))


def conjuncts(e):
    """Top-level conjuncts of e, left to right."""
    if isinstance(e, And):
        return conjuncts(e.left) + conjuncts(e.right)
    return [e]


def conjunction(parts):
    """Left-deep conjunction; literal true parts are dropped and an empty conjunction is true."""
    parts = [p for p in parts if p != TRUE]
    if not parts:
        return TRUE
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result
