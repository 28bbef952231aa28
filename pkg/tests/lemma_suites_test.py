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
from pyunnest.base.unnest_base_lemma_suite import COMPARISONS, UnnestBaseLemmaSuite
from pyunnest.unnest_attribute import fresh_attribute
from pyunnest.unnest_errors import UnknownLemmaError
from pyunnest.unnest_generator import GenSpec
from pyunnest.unnest_harness import run_lemma_suite
from pyunnest.unnest_lemma_builder import TrialBuilder
from pyunnest.unnest_lemma_suites_join import brute_force_natural_join
from pyunnest.unnest_relation import Relation, Tuple
from pyunnest.unnest_suite_factory import UnnestSuiteFactory

LEMMAS = ["L3.1", "L3.2", "L4.2", "L4.3", "L4.4", "L4.5", "L4.6", "L4.7", "L4.8", "L4.9", "L4.10", "L4.11", "L4.12",
          "L4.13", "L4.14", "L4.15", "L4.16", "L4.17", "L4.18", "T4.1"]
MUTATIONS = ["M-replication", "M-natural", "M-3vl"]


class MyTestCase(unittest.TestCase):
    def setUp(self):
        self.spec = GenSpec()
        self.factory = UnnestSuiteFactory()

    def test_factory_lists_every_suite(self):
        self.assertEqual(self.factory.get_lemma_ids(), LEMMAS + ["T4.1+", "M-control"])
        self.assertEqual(self.factory.get_lemma_ids(mutations=True), MUTATIONS)
        for lemma in LEMMAS + MUTATIONS:
            self.assertIsInstance(self.factory.get_suite(lemma), UnnestBaseLemmaSuite)

    def test_unknown_lemma(self):
        with self.assertRaises(UnknownLemmaError):
            self.factory.get_suite("L9.9")

    def test_trials_are_valid_and_deterministic(self):
        for lemma in self.factory.get_lemma_ids() + self.factory.get_lemma_ids(mutations=True):
            suite = self.factory.get_suite(lemma)
            for seed in range(20):
                with self.subTest(lemma=lemma, seed=seed):
                    trial = suite.build_trial(TrialBuilder(self.spec, seed))
                    again = suite.build_trial(TrialBuilder(self.spec, seed))
                    self.assertIn(trial.comparison, COMPARISONS)
                    plan_ir.validate_plan(trial.original)
                    self.assertEqual(trial.original.free_vars, frozenset())
                    self.assertTrue(plan_ir.alpha_equivalent(trial.original, again.original))
                    if trial.rewritten is not None:
                        plan_ir.validate_plan(trial.rewritten)
                        self.assertEqual(trial.rewritten.schema, trial.original.schema)

    def test_lemma_suites_pass(self):
        for lemma in LEMMAS:
            with self.subTest(lemma=lemma):
                report = run_lemma_suite(lemma, 200, self.spec)
                self.assertEqual(report.get_trials(), 200)
                self.assertEqual(report.get_failures(), [])
                self.assertTrue(report.is_success())

    def test_superset_domain_passes(self):
        report = run_lemma_suite("T4.1+", 100, self.spec)
        self.assertTrue(report.all_passed())

    def test_mutations_are_caught(self):
        for lemma in MUTATIONS:
            with self.subTest(lemma=lemma):
                report = run_lemma_suite(lemma, 500, self.spec)
                self.assertTrue(report.expects_failure())
                self.assertGreater(len(report.get_failures()), 0)
                self.assertTrue(report.is_success())

    def test_null_safe_control_passes(self):
        report = run_lemma_suite("M-control", 500, self.spec)
        self.assertFalse(report.expects_failure())
        self.assertTrue(report.all_passed())

    def test_brute_force_natural_join(self):
        c, a, b = fresh_attribute("c"), fresh_attribute("a"), fresh_attribute("b")
        left = Relation.from_rows([c, a], [(Tuple({c: None, a: 1}), 2), Tuple({c: 1, a: 2})])
        right = Relation.from_rows([c, b], [(Tuple({c: None, b: 3}), 3), Tuple({c: 2, b: 4})])
        self.assertEqual(brute_force_natural_join(left, right),
                         Relation.from_rows([a, b, c], [(Tuple({c: None, a: 1, b: 3}), 6)]))

    def test_builder_domains(self):
        for seed in range(50):
            builder = TrialBuilder(self.spec, seed)
            domain = builder.domain(with_null=True)
            relation = builder.get_catalog()[domain.table]
            self.assertTrue(relation.is_duplicate_free())
            self.assertEqual(relation.multiplicity(Tuple(dict((a, None) for a in domain.attributes))), 1)
            self.assertLessEqual(len(domain.attributes), 2)

    def test_builder_registers_fresh_table_names(self):
        builder = TrialBuilder(self.spec, 0)
        first = builder.table("r")
        second = builder.table("r")
        self.assertNotEqual(first.table, second.table)
        self.assertFalse(first.schema & second.schema)
        self.assertEqual(set(builder.get_catalog()), {first.table, second.table})


if __name__ == '__main__':
    unittest.main()
