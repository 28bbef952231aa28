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

import unittest

import pyunnest.unnest_plan as plan_ir
from pyunnest.unnest_attribute import fresh_attribute
from pyunnest.unnest_evaluator import evaluate
from pyunnest.unnest_generator import BOOL, GenSpec, gen_correlated_plan, gen_relation
from pyunnest.unnest_plan_text import print_plan, print_relation
from pyunnest.unnest_rewriter import find_dependent_joins


class MyTestCase(unittest.TestCase):
    def setUp(self):
        self.spec = GenSpec()
        self.schema = [fresh_attribute("a"), fresh_attribute("b"), fresh_attribute("c")]

    def test_gen_relation_is_deterministic(self):
        self.assertEqual(gen_relation(self.spec, self.schema, 42), gen_relation(self.spec, self.schema, 42))

    def test_gen_relation_respects_bounds(self):
        for seed in range(200):
            relation = gen_relation(self.spec, self.schema, seed)
            self.assertEqual(relation.schema, set(self.schema))
            self.assertLessEqual(len(relation), self.spec.max_rows)
            for t, n in relation.items():
                for attribute in self.schema:
                    self.assertIn(t[attribute], self.spec.value_pool)

    def test_no_rows(self):
        spec = self.spec.replace(max_rows=0)
        for seed in range(20):
            self.assertTrue(gen_relation(spec, self.schema, seed).is_empty())

    def test_duplicate_free_mode(self):
        for seed in range(100):
            self.assertTrue(gen_relation(self.spec, self.schema, seed, duplicate_free=True).is_duplicate_free())

    def test_boolean_columns(self):
        relation = gen_relation(self.spec, self.schema, 5, types={self.schema[0]: BOOL})
        for t, _ in relation.items():
            self.assertIn(t[self.schema[0]], (True, False, None))

    def test_gen_correlated_plan_is_deterministic(self):
        plan1, catalog1 = gen_correlated_plan(self.spec, 9)
        plan2, catalog2 = gen_correlated_plan(self.spec, 9)
        self.assertTrue(plan_ir.alpha_equivalent(plan1, plan2))
        self.assertEqual(sorted(catalog1), sorted(catalog2))
        for name in catalog1:
            self.assertEqual(print_relation(catalog1[name], show_ids=False),
                             print_relation(catalog2[name], show_ids=False))
        self.assertEqual(evaluate(plan1, catalog1).total(), evaluate(plan2, catalog2).total())

    def test_generated_plans_are_valid_and_correlated(self):
        for seed in range(300):
            plan, catalog = gen_correlated_plan(self.spec, seed)
            with self.subTest(seed=seed, plan=print_plan(plan)):
                plan_ir.validate_plan(plan)
                self.assertEqual(plan.free_vars, frozenset())
                self.assertTrue(find_dependent_joins(plan))
                self.assertLessEqual(plan_ir.count_nodes(plan, plan_ir.DependentJoin), self.spec.max_dependent_joins)
                for node in plan_ir.walk(plan):
                    if isinstance(node, plan_ir.DependentJoin):
                        self.assertTrue(node.right.free_vars & node.left.schema)
                evaluate(plan, catalog)

    def test_kind_coverage(self):
        histogram = dict((kind.keyword, 0) for kind in plan_ir.NODE_KINDS)
        group_by_under_dependent_join = 0
        dependent_join_in_set_operation = 0
        for seed in range(1000):
            plan, _ = gen_correlated_plan(self.spec, seed)
            for kind, count in plan_ir.kind_histogram(plan).items():
                histogram[kind] += count
            for node in plan_ir.walk(plan):
                if isinstance(node, plan_ir.DependentJoin) and plan_ir.count_nodes(node.right, plan_ir.GroupBy):
                    group_by_under_dependent_join += 1
                    break
            if any(isinstance(node, (plan_ir.Union, plan_ir.Intersect, plan_ir.Except))
                   and plan_ir.count_nodes(node, plan_ir.DependentJoin) for node in plan_ir.walk(plan)):
                dependent_join_in_set_operation += 1
        for kind, count in histogram.items():
            self.assertGreater(count, 0, kind)
        self.assertGreater(group_by_under_dependent_join, 0)
        self.assertGreater(dependent_join_in_set_operation, 0)


if __name__ == '__main__':
    unittest.main()
