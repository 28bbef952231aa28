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

"""Seeded generators of relations and of correlated plans over small bounded domains."""

import json
import logging

import numpy as np

import pyunnest.unnest_plan as plan_ir
from pyunnest.unnest_attribute import fresh_attribute, sorted_attributes
from pyunnest.unnest_expression import (And, Arith, AttrRef, Compare, IsNull, Literal, Not, NullSafeEq, Or,
                                        TRUE)
from pyunnest.unnest_plan import AggFn
from pyunnest.unnest_relation import Relation, Tuple

logger = logging.getLogger(__name__)

INT = "int"
BOOL = "bool"

_UNARY_KINDS = ("select", "map", "project-distinct", "project", "rename", "nullpad", "groupby")
_BINARY_KINDS = ("union", "intersect", "except", "cross", "join", "semijoin", "antijoin", "outerjoin", "djoin")


class GenSpec:
    """
        Bounds of the generated instances.

        Input data
        -----------
        json file containing a "generator" section with:
        max_arity: attributes per generated table
        max_rows: distinct tuples per generated table
        max_count: multiplicity of a generated tuple
        value_pool: the values generated tables draw from (null is NULL)
        max_plan_depth: operator nesting above the scans
        max_dependent_joins: dependent joins per plan, nested ones included
        max_scans: scans per plan
        seed: base seed of a run
        """

    def __init__(self, max_arity=3, max_rows=6, max_count=3, value_pool=(0, 1, 2, None), max_plan_depth=4,
                 max_dependent_joins=2, max_scans=4, seed=0) -> None:
        self._max_arity = max_arity
        self._max_rows = max_rows
        self._max_count = max_count
        self._value_pool = tuple(value_pool)
        self._max_plan_depth = max_plan_depth
        self._max_dependent_joins = max_dependent_joins
        self._max_scans = max_scans
        self._seed = seed
        self._check()

    def _check(self):
        for name in ('max_arity', 'max_count', 'max_plan_depth', 'max_dependent_joins'):
            if getattr(self, '_' + name) < 1:
                raise ValueError(name + " must be positive")
        if self._max_scans < 2:
            raise ValueError("max_scans must be at least 2, a dependent join needs two inputs")
        if self._max_rows < 0:
            raise ValueError("max_rows must not be negative")
        if not any(v is not None for v in self._value_pool):
            raise ValueError("value_pool needs at least one non-NULL integer")
        for value in self._value_pool:
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                raise ValueError("value_pool may only contain integers and null, got " + repr(value))

    def read_initial_condition_from_json_file(self, filename):
        # read json parameters file
        with open(filename) as data_file:
            data = json.load(data_file)
            if 'generator' not in data:
                raise ValueError("Missing ['generator'] entry in json")
            section = data['generator']
            self._max_arity = int(section.get('max_arity', self._max_arity))
            self._max_rows = int(section.get('max_rows', self._max_rows))
            self._max_count = int(section.get('max_count', self._max_count))
            self._value_pool = tuple(section.get('value_pool', self._value_pool))
            self._max_plan_depth = int(section.get('max_plan_depth', self._max_plan_depth))
            self._max_dependent_joins = int(section.get('max_dependent_joins', self._max_dependent_joins))
            self._max_scans = int(section.get('max_scans', self._max_scans))
            self._seed = int(section.get('seed', self._seed))
            self._check()

    def replace(self, **changes):
        values = dict(max_arity=self._max_arity, max_rows=self._max_rows, max_count=self._max_count,
                      value_pool=self._value_pool, max_plan_depth=self._max_plan_depth,
                      max_dependent_joins=self._max_dependent_joins, max_scans=self._max_scans, seed=self._seed)
        values.update(changes)
        return GenSpec(**values)

    def as_dict(self):
        return {'max_arity': self._max_arity, 'max_rows': self._max_rows, 'max_count': self._max_count,
                'value_pool': list(self._value_pool), 'max_plan_depth': self._max_plan_depth,
                'max_dependent_joins': self._max_dependent_joins, 'max_scans': self._max_scans, 'seed': self._seed}

    @property
    def max_arity(self):
        return self._max_arity

    @property
    def max_rows(self):
        return self._max_rows

    @property
    def max_count(self):
        return self._max_count

    @property
    def value_pool(self):
        return self._value_pool

    @property
    def max_plan_depth(self):
        return self._max_plan_depth

    @property
    def max_dependent_joins(self):
        return self._max_dependent_joins

    @property
    def max_scans(self):
        return self._max_scans

    @property
    def seed(self):
        return self._seed

    def __repr__(self):
        return "GenSpec(" + ", ".join(k + "=" + repr(v) for k, v in self.as_dict().items()) + ")"


def pick(rng, sequence):
    # by index: numpy would turn plain ints into numpy scalars
    return sequence[int(rng.integers(len(sequence)))]


def coin(rng, probability):
    return bool(rng.random() < probability)


def sub_seed(rng):
    return int(rng.integers(0, 2 ** 62))


def gen_relation(spec, schema, seed, duplicate_free=False, types=None):
    """A pseudo-random relation over schema, a pure function of (spec, schema, seed). types maps attributes to
    "int" or "bool" (default "int"). In duplicate-free mode every multiplicity is 1."""
    rng = np.random.default_rng(seed)
    attributes = sorted_attributes(schema)
    types = types or {}
    rows = {}
    for _ in range(int(rng.integers(0, spec.max_rows + 1))):
        values = {}
        for attribute in attributes:
            if types.get(attribute, INT) == BOOL:
                values[attribute] = pick(rng, (True, False, None))
            else:
                values[attribute] = pick(rng, spec.value_pool)
        count = 1 if duplicate_free else int(rng.integers(1, spec.max_count + 1))
        t = Tuple(values)
        rows[t] = 1 if duplicate_free else rows.get(t, 0) + count
    return Relation(attributes, rows)


class PlanGenerator:
    """Builds one random plan and the catalog of the tables it scans."""

    def __init__(self, spec, seed) -> None:
        self._spec = spec
        self._rng = np.random.default_rng(seed)
        self._catalog = {}
        self._types = {}
        self._scans_left = spec.max_scans
        self._dependent_joins_left = spec.max_dependent_joins

    def get_catalog(self):
        return self._catalog

    def get_types(self):
        return dict(self._types)

    def generate(self):
        plan = self._plan(self._spec.max_plan_depth, (), force_dependent_join=True)
        plan_ir.validate_plan(plan)
        return plan

    # ------------------------------------------------------ leaves ------------------------------------------------------

    def _scan(self):
        self._scans_left -= 1
        name = "t" + str(len(self._catalog))
        arity = int(self._rng.integers(1, self._spec.max_arity + 1))
        schema = [fresh_attribute(name + "_" + "abc"[i % 3] + ("" if i < 3 else str(i))) for i in range(arity)]
        for attribute in schema:
            self._types[attribute] = INT
        self._catalog[name] = gen_relation(self._spec, schema, sub_seed(self._rng), types=self._types)
        return plan_ir.Scan(name, schema)

    def _fresh(self, base, kind):
        attribute = fresh_attribute(base)
        self._types[attribute] = kind
        return attribute

    # ---------------------------------------------------- expressions ----------------------------------------------------

    def _of_type(self, attributes, kind):
        return [a for a in sorted_attributes(attributes) if self._types.get(a, INT) == kind]

    def _literal(self):
        return Literal(pick(self._rng, [v for v in self._spec.value_pool if v is not None]))

    def _atom(self, local, outer):
        """One comparison over local attributes, referencing an outer attribute now and then."""
        ints = self._of_type(local, INT)
        outer_ints = self._of_type(outer, INT)
        bools = self._of_type(local, BOOL) + self._of_type(outer, BOOL)
        if outer_ints and ints and coin(self._rng, 0.5):
            # the correlation shape equivalences are collected from
            return Compare("=", AttrRef(pick(self._rng, outer_ints)), AttrRef(pick(self._rng, ints)))
        candidates = ints + outer_ints
        if bools and (not candidates or coin(self._rng, 0.15)):
            return AttrRef(pick(self._rng, bools))
        if not candidates:
            return TRUE
        left = AttrRef(pick(self._rng, candidates))
        roll = self._rng.random()
        if roll < 0.1:
            return IsNull(left)
        right = AttrRef(pick(self._rng, candidates)) if coin(self._rng, 0.5) else self._literal()
        if roll < 0.2:
            return NullSafeEq(left, right)
        return Compare(pick(self._rng, ("=", "=", "!=", "<", "<=", ">", ">=")), left, right)

    def _predicate(self, local, outer):
        result = self._atom(local, outer)
        if coin(self._rng, 0.3):
            connective = And if coin(self._rng, 0.6) else Or
            result = connective(result, self._atom(local, outer))
        if coin(self._rng, 0.05):
            result = Not(result)
        return result

    def _expression(self, local, outer):
        """Returns (expression, type)."""
        ints = self._of_type(local, INT) + self._of_type(outer, INT)
        if not ints or coin(self._rng, 0.2):
            return self._predicate(local, outer), BOOL
        left = AttrRef(pick(self._rng, ints))
        right = AttrRef(pick(self._rng, ints)) if coin(self._rng, 0.4) else self._literal()
        return Arith(pick(self._rng, ("+", "-", "*")), left, right), INT

    # ------------------------------------------------------- plans -------------------------------------------------------

    def _choose_kind(self, depth, force_dependent_join):
        if force_dependent_join:
            # the forced branch keeps at least two scans for its dependent join
            if depth == 1 or coin(self._rng, 0.5):
                return "djoin"
            kinds = list(_UNARY_KINDS)
            if self._scans_left >= 3:
                kinds += ["cross", "join", "semijoin", "antijoin", "outerjoin"]
            if self._dependent_joins_left >= 2:
                kinds += ["union", "intersect", "except"]
            return pick(self._rng, kinds)
        kinds = list(_UNARY_KINDS)
        if self._scans_left >= 2:
            kinds += [k for k in _BINARY_KINDS if k != "djoin" or self._dependent_joins_left > 0]
        return pick(self._rng, kinds)

    def _plan(self, depth, outer, force_dependent_join=False):
        if not force_dependent_join and (depth == 0 or coin(self._rng, 0.15)):
            return self._scan()
        kind = self._choose_kind(depth, force_dependent_join)
        if kind in _UNARY_KINDS:
            child = self._plan(depth - 1, outer, force_dependent_join)
            return self._unary(kind, child, outer)
        if kind == "djoin":
            return self._dependent_join(depth, outer)
        if kind in ("union", "intersect", "except"):
            return self._set_operation(kind, depth, outer, force_dependent_join)
        return self._join(kind, depth, outer, force_dependent_join)

    def _unary(self, kind, child, outer):
        schema = child.schema
        if kind == "select":
            return plan_ir.Select(self._predicate(schema, outer), child)
        if kind == "map":
            expression, expression_type = self._expression(schema, outer)
            return plan_ir.Map(self._fresh("m", expression_type), expression, child)
        if kind in ("project-distinct", "project"):
            attributes = self._subset(schema, minimum=1)
            node_kind = plan_ir.ProjectDistinct if kind == "project-distinct" else plan_ir.Project
            return node_kind(attributes, child)
        if kind == "rename":
            old = pick(self._rng, sorted_attributes(schema))
            return plan_ir.Rename(self._fresh("r", self._types.get(old, INT)), old, child)
        if kind == "nullpad":
            return plan_ir.NullPad([self._fresh("n", INT)], child)
        keys = self._subset(schema, minimum=0)
        aggregates = [self._aggregate(schema) for _ in range(int(self._rng.integers(1, 3)))]
        return plan_ir.GroupBy(keys, aggregates, child)

    def _subset(self, schema, minimum):
        attributes = sorted_attributes(schema)
        size = int(self._rng.integers(minimum, len(attributes) + 1))
        chosen = self._rng.permutation(len(attributes))[:size]
        return [attributes[int(i)] for i in sorted(chosen)]

    def _aggregate(self, schema):
        ints = self._of_type(schema, INT)
        kind = pick(self._rng, AggFn.KINDS)
        if kind == AggFn.COUNT_STAR or kind == AggFn.SUM and not ints:
            return self._fresh("cnt", INT), AggFn(AggFn.COUNT_STAR)
        attribute = pick(self._rng, ints if kind == AggFn.SUM else sorted_attributes(schema))
        output_type = INT if kind in (AggFn.COUNT, AggFn.SUM) else self._types.get(attribute, INT)
        return self._fresh(kind, output_type), AggFn(kind, attribute)

    def _two_inputs(self, depth, outer, force_left=False, correlate_right=False):
        # one scan stays reserved for the right input while the left one is generated
        self._scans_left -= 1
        left = self._plan(depth - 1, outer, force_left)
        self._scans_left += 1
        right_outer = tuple(sorted_attributes(set(outer) | left.schema)) if correlate_right else outer
        right = self._plan(depth - 1, right_outer)
        return left, right

    def _set_operation(self, kind, depth, outer, force_dependent_join=False):
        # both inputs share one schema: the second is a filtered copy of the first, so every dependent join of
        # the first input is paid for twice
        budget = self._dependent_joins_left
        self._dependent_joins_left = budget // 2
        left = self._plan(depth - 1, outer, force_dependent_join)
        used = budget // 2 - self._dependent_joins_left
        self._dependent_joins_left = budget - 2 * used
        right = plan_ir.Select(self._predicate(left.schema, outer), plan_ir.clone_plan(left))
        node_kind = {"union": plan_ir.Union, "intersect": plan_ir.Intersect, "except": plan_ir.Except}[kind]
        return node_kind(left, right) if coin(self._rng, 0.5) else node_kind(right, left)

    def _join(self, kind, depth, outer, force_dependent_join):
        if force_dependent_join:
            # the forced input is generated first so it sees the larger scan budget
            forced, other = self._two_inputs(depth, outer, force_left=True)
            left, right = (forced, other) if coin(self._rng, 0.5) else (other, forced)
        else:
            left, right = self._two_inputs(depth, outer)
        if kind == "cross":
            return plan_ir.Cross(left, right)
        predicate = self._predicate(left.schema | right.schema, outer)
        node_kind = {"join": plan_ir.Join, "semijoin": plan_ir.SemiJoin, "antijoin": plan_ir.AntiJoin,
                     "outerjoin": plan_ir.OuterJoin}[kind]
        return node_kind(predicate, left, right)

    def _dependent_join(self, depth, outer):
        self._dependent_joins_left -= 1
        left, right = self._two_inputs(depth, outer, correlate_right=True)
        if not right.free_vars & left.schema:
            # every generated dependent join is correlated
            right = plan_ir.Select(self._correlation(left.schema, right.schema), right)
        predicate = TRUE if coin(self._rng, 0.5) else self._predicate(left.schema | right.schema, outer)
        return plan_ir.DependentJoin(predicate, left, right)

    def _correlation(self, outer_schema, local_schema):
        outer_ints = self._of_type(outer_schema, INT)
        local_ints = self._of_type(local_schema, INT)
        if outer_ints and local_ints:
            return Compare("=", AttrRef(pick(self._rng, outer_ints)), AttrRef(pick(self._rng, local_ints)))
        if outer_ints:
            return Compare("<=", AttrRef(pick(self._rng, outer_ints)), self._literal())
        return IsNull(AttrRef(pick(self._rng, sorted_attributes(outer_schema))))


def gen_correlated_plan(spec, seed):
    """A random valid plan with at least one correlated dependent join, and the catalog of its scans."""
    generator = PlanGenerator(spec, seed)
    plan = generator.generate()
    logger.debug("generated plan with %d operators for seed %d", plan_ir.count_nodes(plan), seed)
    return plan, generator.get_catalog()
