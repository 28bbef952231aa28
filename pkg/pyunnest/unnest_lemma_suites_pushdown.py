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

"""Suites for moving a dependent join with a duplicate-free domain D down through each operator."""

from abc import abstractmethod

from pyunnest.base.unnest_base_lemma_suite import LemmaTrial, UnnestBaseLemmaSuite
from pyunnest.unnest_attribute import fresh_attribute
from pyunnest.unnest_expression import TRUE
from pyunnest.unnest_plan import (AntiJoin, Cross, DependentJoin, Except, GroupBy, Intersect, Join, Map, OuterJoin,
                                  Project, ProjectDistinct, Select, SemiJoin, Union, natural_join)


def dependent(domain, plan):
    return DependentJoin(TRUE, domain, plan)


class PushDownSuite(UnnestBaseLemmaSuite):
    """Shared setup: a domain, and inputs that reference it."""

    def _input(self, builder, domain, prefix="r", correlated=True):
        if correlated:
            return builder.correlated(domain.schema, prefix)
        return builder.independent(prefix)

    @staticmethod
    def _predicate(builder, local, domain):
        if builder.coin(0.25):
            return TRUE
        return builder.predicate(local, domain.schema if builder.coin(0.4) else ())

    def build_trial(self, builder):
        domain = builder.domain()
        original, rewritten = self._shapes(builder, domain)
        return LemmaTrial(dependent(domain, original), rewritten, builder.get_catalog())

    @abstractmethod
    def _shapes(self, builder, domain):
        """Returns (T, rewritten) for D ▶ T."""
        pass


class ProjectDistinctPushDownSuite(PushDownSuite):
    def get_lemma_id(self):
        return "L4.3"

    def _shapes(self, builder, domain):
        relation = self._input(builder, domain)
        attributes = builder.subset(relation.schema)
        return (ProjectDistinct(attributes, relation),
                ProjectDistinct(set(attributes) | domain.schema, dependent(domain, relation)))


class ProjectPushDownSuite(PushDownSuite):
    def get_lemma_id(self):
        return "L4.4"

    def _shapes(self, builder, domain):
        relation = self._input(builder, domain)
        attributes = builder.subset(relation.schema)
        return (Project(attributes, relation),
                Project(set(attributes) | domain.schema, dependent(domain, relation)))


class SetOperationPushDownSuite(PushDownSuite):
    """Both branches filter the same table, each with its own predicate."""

    LEMMAS = {Union: "L4.5", Intersect: "L4.6", Except: "L4.7"}

    def __init__(self, kind) -> None:
        self._kind = kind

    def get_lemma_id(self):
        return self.LEMMAS[self._kind]

    def _shapes(self, builder, domain):
        left = self._input(builder, domain)
        scan = left.child
        right = builder.filtered(scan, domain.schema) if builder.coin(0.8) else scan
        return (self._kind(left, right),
                self._kind(dependent(domain, left), dependent(domain, right)))


class SelectPushDownSuite(PushDownSuite):
    def get_lemma_id(self):
        return "L4.8"

    def _shapes(self, builder, domain):
        relation = self._input(builder, domain, correlated=builder.coin(0.5))
        predicate = builder.predicate(relation.schema, domain.schema)
        return Select(predicate, relation), Select(predicate, dependent(domain, relation))


class MapPushDownSuite(PushDownSuite):
    def get_lemma_id(self):
        return "L4.9"

    def _shapes(self, builder, domain):
        relation = self._input(builder, domain, correlated=builder.coin(0.5))
        attribute = fresh_attribute("m")
        expression = builder.expression(relation.schema | domain.schema)
        return Map(attribute, expression, relation), Map(attribute, expression, dependent(domain, relation))


class OneSidedJoinPushDownSuite(PushDownSuite):
    """Only one input references D; each trial picks which one."""

    def __init__(self, kind) -> None:
        self._kind = kind

    def get_lemma_id(self):
        return "L4.10" if self._kind is Cross else "L4.11"

    def _shapes(self, builder, domain):
        right_independent = builder.coin(0.5)
        left = self._input(builder, domain, "r", correlated=right_independent)
        right = self._input(builder, domain, "s", correlated=not right_independent)
        if self._kind is Cross:
            build = Cross
        else:
            predicate = self._predicate(builder, left.schema | right.schema, domain)
            build = lambda l, r: Join(predicate, l, r)
        if right_independent:
            return build(left, right), build(dependent(domain, left), right)
        return build(left, right), build(left, dependent(domain, right))


class TwoSidedJoinPushDownSuite(PushDownSuite):
    """Both inputs reference D: D is replicated and the copies are joined naturally."""

    def __init__(self, kind) -> None:
        self._kind = kind

    def get_lemma_id(self):
        return "L4.12" if self._kind is Cross else "L4.13"

    def _shapes(self, builder, domain):
        left = self._input(builder, domain, "r", correlated=builder.coin(0.8))
        right = self._input(builder, domain, "s", correlated=builder.coin(0.8))
        if self._kind is Cross:
            return Cross(left, right), natural_join(Join, TRUE, dependent(domain, left), dependent(domain, right))
        predicate = self._predicate(builder, left.schema | right.schema, domain)
        return (Join(predicate, left, right),
                natural_join(Join, predicate, dependent(domain, left), dependent(domain, right)))


class GroupByPushDownSuite(PushDownSuite):
    """The domain attributes become additional grouping keys; the keys of T may be empty."""

    def get_lemma_id(self):
        return "L4.14"

    def _shapes(self, builder, domain):
        relation = self._input(builder, domain)
        keys = builder.subset(relation.schema, minimum=0)
        aggregates = [builder.aggregate(relation.schema) for _ in range(1 + int(builder.coin(0.4)))]
        return (GroupBy(keys, aggregates, relation),
                GroupBy(set(keys) | domain.schema, aggregates, dependent(domain, relation)))


class FilteringJoinPushDownSuite(PushDownSuite):
    """Semi, anti and outer joins: the general form joins both copies naturally, the special form applies when the
    right input does not reference D."""

    LEMMAS = {SemiJoin: "L4.15", AntiJoin: "L4.16", OuterJoin: "L4.17"}

    def __init__(self, kind) -> None:
        self._kind = kind

    def get_lemma_id(self):
        return self.LEMMAS[self._kind]

    def _shapes(self, builder, domain):
        left = self._input(builder, domain, "r", correlated=builder.coin(0.8))
        right_independent = builder.coin(0.4)
        right = self._input(builder, domain, "s", correlated=not right_independent)
        predicate = self._predicate(builder, left.schema | right.schema, domain)
        original = self._kind(predicate, left, right)
        if right_independent:
            return original, self._kind(predicate, dependent(domain, left), right)
        return original, natural_join(self._kind, predicate, dependent(domain, left), dependent(domain, right))


class NestedDependentJoinPushDownSuite(PushDownSuite):
    """D ▶ (R1 ▶_p R2) ≡ (D ▶ R1) ▶_p R2, R2 reading R1 and sometimes D."""

    def get_lemma_id(self):
        return "L4.18"

    def _shapes(self, builder, domain):
        left = self._input(builder, domain, "r", correlated=builder.coin(0.8))
        outer = left.schema | domain.schema if builder.coin(0.5) else left.schema
        right = builder.correlated(outer, "s")
        predicate = self._predicate(builder, left.schema | right.schema, domain)
        return (DependentJoin(predicate, left, right),
                DependentJoin(predicate, dependent(domain, left), right))
