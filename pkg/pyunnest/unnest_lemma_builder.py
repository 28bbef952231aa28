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

"""Random inputs of one lemma trial: generated tables, duplicate-free domains and predicates correlated with them."""

import numpy as np

from pyunnest.unnest_attribute import fresh_attribute, sorted_attributes
from pyunnest.unnest_expression import And, Arith, AttrRef, Compare, IsNull, Literal, NullSafeEq, Or
from pyunnest.unnest_generator import coin, gen_relation, pick, sub_seed
from pyunnest.unnest_plan import AggFn, Scan, Select
from pyunnest.unnest_relation import Relation, Tuple


def _column_names(prefix, arity):
    return [prefix + "_" + "abc"[i % 3] + ("" if i < 3 else str(i)) for i in range(arity)]


class TrialBuilder:
    """Every table the builder creates is registered in its catalog under a fresh name. All attributes are
    integer valued."""

    def __init__(self, spec, seed) -> None:
        self._spec = spec
        self._rng = np.random.default_rng(seed)
        self._catalog = {}

    def get_catalog(self):
        return self._catalog

    def coin(self, probability=0.5):
        return coin(self._rng, probability)

    def choice(self, sequence):
        return pick(self._rng, sequence)

    def arity(self, maximum=None):
        maximum = min(maximum or self._spec.max_arity, self._spec.max_arity)
        return int(self._rng.integers(1, maximum + 1))

    def _register(self, prefix, relation):
        name = prefix + str(len(self._catalog))
        self._catalog[name] = relation
        return name

    def table(self, prefix="r", arity=None, schema=None, duplicate_free=False):
        """A scan of a new generated table, over fresh attributes unless schema is given."""
        if schema is None:
            schema = [fresh_attribute(name) for name in _column_names(prefix + str(len(self._catalog)),
                                                                      arity or self.arity())]
        relation = gen_relation(self._spec, schema, sub_seed(self._rng), duplicate_free=duplicate_free)
        return Scan(self._register(prefix, relation), schema)

    def table_with_rows(self, prefix, schema, rows):
        """A scan of a table holding exactly rows (mappings attribute -> value), each once."""
        relation = Relation(schema, dict((Tuple(row), 1) for row in rows))
        return Scan(self._register(prefix, relation), schema)

    def domain(self, arity=None, with_null=False):
        """A scan of a duplicate-free table over fresh attributes d1, d2, ... With with_null the all-NULL tuple is
        always part of it."""
        schema = [fresh_attribute("d" + str(i + 1)) for i in range(arity or self.arity(2))]
        relation = gen_relation(self._spec, schema, sub_seed(self._rng), duplicate_free=True)
        if with_null:
            counts = dict(relation.items())
            counts[Tuple(dict((a, None) for a in schema))] = 1
            relation = Relation(schema, counts)
        return Scan(self._register("d", relation), schema)

    def value_pool(self):
        return self._spec.value_pool

    def subset(self, schema, minimum=1):
        attributes = sorted_attributes(schema)
        size = int(self._rng.integers(minimum, len(attributes) + 1))
        chosen = self._rng.permutation(len(attributes))[:size]
        return [attributes[int(i)] for i in sorted(chosen)]

    def literal(self):
        return Literal(self.choice([v for v in self._spec.value_pool if v is not None] or [0]))

    def atom(self, local, outer=()):
        """One comparison over local; when outer is not empty its left operand is an outer attribute."""
        left = AttrRef(self.choice(sorted_attributes(outer or local)))
        roll = self._rng.random()
        if roll < 0.1:
            return IsNull(left)
        right = AttrRef(self.choice(sorted_attributes(local))) if roll < 0.7 else self.literal()
        op = self.choice(("=", "=", "!=", "<", "<=", ">=", "<=>"))
        if op == "<=>":
            return NullSafeEq(left, right)
        return Compare(op, left, right)

    def predicate(self, local, outer=()):
        """A random predicate over local, correlated with outer when outer is not empty."""
        result = self.atom(local, outer)
        if self.coin(0.3):
            connective = And if self.coin(0.6) else Or
            result = connective(result, self.atom(local))
        return result

    def expression(self, attributes):
        attributes = sorted_attributes(attributes)
        right = AttrRef(self.choice(attributes)) if self.coin(0.4) else self.literal()
        return Arith(self.choice(("+", "-", "*")), AttrRef(self.choice(attributes)), right)

    def aggregate(self, schema):
        kind = self.choice(AggFn.KINDS)
        if kind == AggFn.COUNT_STAR:
            return fresh_attribute("cnt"), AggFn(kind)
        return fresh_attribute(kind), AggFn(kind, self.choice(sorted_attributes(schema)))

    def correlated(self, outer, prefix="r", arity=None):
        """A new table filtered by a predicate referencing outer."""
        scan = self.table(prefix, arity)
        return Select(self.predicate(scan.schema, outer), scan)

    def independent(self, prefix="r", arity=None):
        """A new table, sometimes filtered by a local predicate."""
        scan = self.table(prefix, arity)
        if self.coin(0.5):
            return Select(self.predicate(scan.schema), scan)
        return scan

    def filtered(self, child, outer=()):
        return Select(self.predicate(child.schema, outer), child)
