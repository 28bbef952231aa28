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

"""Suites for the join lemmas: dependent joins without correlation, the natural join, the column copy of a domain
and the decomposition of a dependent join into a join with its domain."""

from pyunnest.base.unnest_base_lemma_suite import CONTAINMENT, EXPECTED, LemmaTrial, UnnestBaseLemmaSuite
from pyunnest.unnest_attribute import fresh_attribute, sorted_attributes
from pyunnest.unnest_expression import TRUE, eq, ref
from pyunnest.unnest_plan import (Cross, DependentJoin, Join, Map, Project, ProjectDistinct, Select, Union,
                                  natural_join)
from pyunnest.unnest_relation import Relation, values_identical


def _join_predicate(builder, schema):
    return TRUE if builder.coin(0.3) else builder.predicate(schema)


def brute_force_natural_join(left, right):
    """The natural join computed from the characteristic functions: every pair of tuples agreeing on the common
    attributes, NULL agreeing with NULL, contributes the product of their multiplicities."""
    common = left.schema & right.schema
    only_right = right.schema - common
    counts = {}
    for t1, n1 in left.items():
        for t2, n2 in right.items():
            if all(values_identical(t1[a], t2[a]) for a in common):
                t = t1.concat(t2.restrict(only_right))
                counts[t] = counts.get(t, 0) + n1 * n2
    return Relation(left.schema | right.schema, counts)


class UncorrelatedDependentJoinSuite(UnnestBaseLemmaSuite):
    """R1 ▶_p R2 ≡ R1 ⋈_p R2 when R2 does not reference R1."""

    def get_lemma_id(self):
        return "L3.1"

    def build_trial(self, builder):
        left = builder.independent("r")
        right = builder.independent("s")
        predicate = _join_predicate(builder, left.schema | right.schema)
        return LemmaTrial(DependentJoin(predicate, left, right), Join(predicate, left, right), builder.get_catalog())


class NaturalJoinSuite(UnnestBaseLemmaSuite):
    """The rename-based natural join against the product of the characteristic functions."""

    def get_lemma_id(self):
        return "L3.2"

    def build_trial(self, builder):
        common = [fresh_attribute("c" + str(i + 1)) for i in range(builder.arity(2))]
        left = builder.table("r", schema=common + [fresh_attribute("a") for _ in range(builder.arity(2) - 1)])
        right = builder.table("s", schema=common + [fresh_attribute("b") for _ in range(builder.arity(2) - 1)])
        catalog = builder.get_catalog()
        expected = brute_force_natural_join(catalog[left.table], catalog[right.table])
        return LemmaTrial(natural_join(Join, TRUE, left, right), None, catalog, comparison=EXPECTED,
                          expected=expected)


class ColumnCopySuite(UnnestBaseLemmaSuite):
    """σ_{d=a}(D × R) is contained in σ_{d=a}(χ_{d:a}(R)) with equal multiplicities on its support."""

    def get_lemma_id(self):
        return "L4.2"

    def build_trial(self, builder):
        domain = builder.domain(arity=1)
        d = domain.attributes[0]
        relation = builder.table("r")
        a = builder.choice(relation.attributes)
        original = Select(eq(d, a), Cross(domain, relation))
        rewritten = Select(eq(d, a), Map(d, ref(a), relation))
        return LemmaTrial(original, rewritten, builder.get_catalog(), comparison=CONTAINMENT)


class DomainDecompositionSuite(UnnestBaseLemmaSuite):
    """R1 ▶_p R2 ≡ R1 ⋈_{p ∧ natural} (D ▶ R2) with D the distinct projection of R1 on the attributes R2 reads.

    With superset set, D is a strict duplicate-free superset of that projection."""

    def __init__(self, superset=False) -> None:
        self._superset = superset

    def get_lemma_id(self):
        return "T4.1+" if self._superset else "T4.1"

    def build_trial(self, builder):
        left = builder.independent("r")
        right = builder.correlated(left.schema, "s")
        if builder.coin(0.3):
            right = Map(fresh_attribute("m"), builder.expression(right.schema | left.schema), right)
        predicate = _join_predicate(builder, left.schema | right.schema)
        outer = sorted_attributes(right.free_vars & left.schema)
        domain = ProjectDistinct(outer, left)
        if self._superset:
            domain = ProjectDistinct(outer, Union(Project(outer, left), self._extra_rows(builder, outer)))
        rewritten = natural_join(Join, predicate, left, DependentJoin(TRUE, domain, right))
        return LemmaTrial(DependentJoin(predicate, left, right), rewritten, builder.get_catalog())

    @staticmethod
    def _extra_rows(builder, outer):
        # values outside the generated ones keep the superset strict
        pool = [v for v in builder.value_pool() if v is not None] or [0]
        unseen = dict((a, max(pool) + 1) for a in outer)
        fixed = builder.table_with_rows("e", outer, [unseen])
        return Union(fixed, builder.table("e", schema=outer))
