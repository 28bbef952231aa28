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

"""Deliberately broken versions of the two-sided cross product rewrite. Each of them must be caught by the harness,
which shows that the suites can tell a wrong rewrite from a right one."""

from abc import abstractmethod

from pyunnest.base.unnest_base_lemma_suite import LemmaTrial, UnnestBaseLemmaSuite
from pyunnest.unnest_attribute import fresh_attribute, sorted_attributes
from pyunnest.unnest_expression import IsNull, Or, conjunction, eq, null_safe_eq, ref
from pyunnest.unnest_lemma_suites_pushdown import dependent
from pyunnest.unnest_plan import Cross, Join, Project, Rename, Select


def _joined_on_domain(domain, left, right, comparison):
    """(D ▶ left) joined with (D ▶ right) on the renamed domain attributes, compared with comparison (None drops
    the conditions)."""
    renamed = dependent(domain, right)
    conditions = []
    for attribute in sorted_attributes(domain.schema):
        copy = fresh_attribute(attribute.base)
        renamed = Rename(copy, attribute, renamed)
        if comparison is not None:
            conditions.append(comparison(attribute, copy))
    joined = Join(conjunction(conditions), dependent(domain, left), renamed)
    return Project(domain.schema | left.schema | right.schema, joined)


class MutationSuite(UnnestBaseLemmaSuite):
    """D ▶ (R1 × R2) against a broken rewrite; the domain always holds the all-NULL tuple."""

    def expects_failure(self):
        return True

    def build_trial(self, builder):
        domain = builder.domain(with_null=True)
        left = self._input(builder, domain, "r")
        right = self._input(builder, domain, "s")
        return LemmaTrial(dependent(domain, Cross(left, right)), self._rewrite(domain, left, right),
                          builder.get_catalog())

    @staticmethod
    def _input(builder, domain, prefix):
        # rows survive a NULL domain tuple, so the NULL group is never empty by construction
        scan = builder.table(prefix)
        d = builder.choice(sorted_attributes(domain.schema))
        return Select(Or(IsNull(ref(d)), builder.predicate(scan.schema, domain.schema)), scan)

    @abstractmethod
    def _rewrite(self, domain, left, right):
        pass


class ReplicationMutationSuite(MutationSuite):
    """The right input is no longer paired with its own domain tuple."""

    def get_lemma_id(self):
        return "M-replication"

    def _rewrite(self, domain, left, right):
        return Cross(dependent(domain, left), Project(right.schema, dependent(domain, right)))


class NaturalConditionMutationSuite(MutationSuite):
    """Both copies of the domain are kept but never compared."""

    def get_lemma_id(self):
        return "M-natural"

    def _rewrite(self, domain, left, right):
        return _joined_on_domain(domain, left, right, None)


class NullSafetyMutationSuite(MutationSuite):
    """The copies are compared with = instead of the null-safe equality, which loses the NULL domain tuple."""

    def get_lemma_id(self):
        return "M-3vl"

    def _rewrite(self, domain, left, right):
        return _joined_on_domain(domain, left, right, eq)


class NullSafeControlSuite(MutationSuite):
    """The unbroken rewrite over the same inputs as the mutations."""

    def expects_failure(self):
        return False

    def get_lemma_id(self):
        return "M-control"

    def _rewrite(self, domain, left, right):
        return _joined_on_domain(domain, left, right, null_safe_eq)
