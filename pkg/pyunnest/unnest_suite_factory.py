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

import pyunnest.unnest_lemma_suites_join
import pyunnest.unnest_lemma_suites_mutation
import pyunnest.unnest_lemma_suites_pushdown
import pyunnest.base.unnest_base_lemma_suite
from pyunnest.unnest_errors import UnknownLemmaError
from pyunnest.unnest_plan import AntiJoin, Cross, Except, Intersect, Join, OuterJoin, SemiJoin, Union


def _all_suites():
    join = pyunnest.unnest_lemma_suites_join
    pushdown = pyunnest.unnest_lemma_suites_pushdown
    mutation = pyunnest.unnest_lemma_suites_mutation
    return [join.UncorrelatedDependentJoinSuite(),
            join.NaturalJoinSuite(),
            join.ColumnCopySuite(),
            pushdown.ProjectDistinctPushDownSuite(),
            pushdown.ProjectPushDownSuite(),
            pushdown.SetOperationPushDownSuite(Union),
            pushdown.SetOperationPushDownSuite(Intersect),
            pushdown.SetOperationPushDownSuite(Except),
            pushdown.SelectPushDownSuite(),
            pushdown.MapPushDownSuite(),
            pushdown.OneSidedJoinPushDownSuite(Cross),
            pushdown.OneSidedJoinPushDownSuite(Join),
            pushdown.TwoSidedJoinPushDownSuite(Cross),
            pushdown.TwoSidedJoinPushDownSuite(Join),
            pushdown.GroupByPushDownSuite(),
            pushdown.FilteringJoinPushDownSuite(SemiJoin),
            pushdown.FilteringJoinPushDownSuite(AntiJoin),
            pushdown.FilteringJoinPushDownSuite(OuterJoin),
            pushdown.NestedDependentJoinPushDownSuite(),
            join.DomainDecompositionSuite(),
            join.DomainDecompositionSuite(superset=True),
            mutation.ReplicationMutationSuite(),
            mutation.NaturalConditionMutationSuite(),
            mutation.NullSafetyMutationSuite(),
            mutation.NullSafeControlSuite()]


class UnnestSuiteFactory:
    """Looks up lemma suites by id, in the order the lemmas build on each other."""

    def __init__(self) -> None:
        self._suites = {}
        for suite in _all_suites():
            assert isinstance(suite, pyunnest.base.unnest_base_lemma_suite.UnnestBaseLemmaSuite)
            self._suites[suite.get_lemma_id()] = suite

    def get_lemma_ids(self, mutations=False):
        """Ids of the suites expected to pass, or of the mutations when mutations is set."""
        return [lemma for lemma, suite in self._suites.items() if suite.expects_failure() == mutations]

    def get_suite(self, lemma):
        if lemma not in self._suites:
            raise UnknownLemmaError('Lemma must be ' + ' or '.join('"' + k + '"' for k in self._suites))
        return self._suites[lemma]
