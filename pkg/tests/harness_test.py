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

import json
import unittest

from pyunnest.unnest_attribute import fresh_attribute
from pyunnest.unnest_config import UnnestConfig
from pyunnest.unnest_expression import ref
from pyunnest.unnest_generator import GenSpec
from pyunnest.unnest_harness import (EquivalenceReport, TrialOutcome, check_equivalence, check_result,
                                     run_fuzz, run_lemma_suite, shrink_failure)
from pyunnest.unnest_logger import UnnestLogger
from pyunnest.unnest_plan import Intersect, Map, Scan, Union
from pyunnest.unnest_relation import Relation, Tuple


class MyTestCase(unittest.TestCase):
    def setUp(self):
        self.a = fresh_attribute("a")
        self.r = Scan("R", [self.a])
        self.s = Scan("S", [self.a])
        self.catalog = {"R": Relation.from_rows([self.a], [Tuple({self.a: 1})]),
                        "S": Relation.from_rows([self.a], [Tuple({self.a: 2})])}
        UnnestLogger().clear()

    def tearDown(self):
        UnnestLogger().clear()

    def test_equivalence_is_reflexive(self):
        outcome = check_equivalence(Union(self.r, self.s), Union(self.r, self.s), self.catalog)
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.measurements["rows"], 2)

    def test_union_against_intersect(self):
        outcome = check_equivalence(Union(self.r, self.s), Intersect(self.r, self.s), self.catalog)
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.diff, "tuple [" + str(self.a) + ":1] counts 1 vs 0")
        self.assertEqual(len(outcome.plans), 2)
        self.assertIn("table R", outcome.inputs)

    def test_one_sided_comparison(self):
        self.assertTrue(check_equivalence(self.r, Union(self.r, self.s), self.catalog, one_sided=True).passed)
        self.assertFalse(check_equivalence(Union(self.r, self.s), self.r, self.catalog, one_sided=True).passed)

    def test_schema_mismatch(self):
        m = fresh_attribute("m")
        outcome = check_equivalence(self.r, Map(m, ref(self.a), self.r), self.catalog)
        self.assertFalse(outcome.passed)
        self.assertTrue(outcome.diff.startswith("schemas differ"))

    def test_evaluation_errors_are_failures(self):
        outcome = check_equivalence(self.r, Scan("T", [self.a]), self.catalog)
        self.assertFalse(outcome.passed)
        self.assertTrue(outcome.diff.startswith("second plan: UnknownTableError"))

    def test_check_result(self):
        self.assertTrue(check_result(self.r, self.catalog["R"], self.catalog).passed)
        self.assertFalse(check_result(self.r, self.catalog["S"], self.catalog).passed)

    def test_report(self):
        report = EquivalenceReport("L4.5")
        report.add_outcome(TrialOutcome(True, seed=0, lemma="L4.5"))
        self.assertTrue(report.all_passed())
        report.add_outcome(TrialOutcome(False, ("(scan R)",), "table R rel (a#1) { }", "tuple counts 1 vs 0", 1,
                                        "L4.5", GenSpec().as_dict()))
        self.assertEqual(report.get_trials(), 2)
        self.assertFalse(report.is_success())
        self.assertEqual(report.summary()["failures"], 1)
        record = json.loads(report.to_json_lines())
        self.assertEqual(record["seed"], 1)
        self.assertEqual(record["lemma"], "L4.5")
        self.assertEqual(record["plans"], ["(scan R)"])
        self.assertEqual(set(record), {"seed", "lemma", "plans", "inputs", "diff", "spec"})

    def test_report_expecting_failures(self):
        report = EquivalenceReport("M-3vl", expects_failure=True)
        report.add_outcome(TrialOutcome(True))
        self.assertFalse(report.is_success())
        report.add_outcome(TrialOutcome(False))
        self.assertTrue(report.is_success())

    def test_shrink_failure_reports_smallest_failing_configuration(self):
        calls = []

        def run(spec, seed):
            calls.append(spec)
            return TrialOutcome(spec.max_rows < 2 or spec.max_plan_depth < 3, seed=seed, spec=spec.as_dict())

        spec = GenSpec(max_rows=4, max_plan_depth=4)
        outcome = shrink_failure(run, spec, 7, run(spec, 7))
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.spec["max_rows"], 2)
        self.assertEqual(outcome.spec["max_plan_depth"], 3)
        self.assertEqual(outcome.seed, 7)

    def test_trials_are_logged(self):
        run_lemma_suite("L3.1", 5, GenSpec(seed=3))
        self.assertEqual(UnnestLogger().get_trials(), ["L3.1/" + str(seed) for seed in range(3, 8)])
        self.assertEqual(UnnestLogger().get_values("passed"), [1] * 5)

    def test_fuzz_never(self):
        report = run_fuzz(500, GenSpec(), UnnestConfig(UnnestConfig.NEVER))
        self.assertEqual(report.get_trials(), 500)
        self.assertEqual(report.get_failures(), [])
        self.assertTrue(all(visits <= 1 for visits in UnnestLogger().get_values("max_visits")))

    def test_fuzz_auto(self):
        report = run_fuzz(500, GenSpec(), UnnestConfig(UnnestConfig.AUTO))
        self.assertEqual(report.get_failures(), [])
        self.assertEqual(set(UnnestLogger().get_values("dependent_joins")) - {1, 2}, set())

    def test_parallel_runs_give_the_same_verdicts(self):
        sequential = run_lemma_suite("M-3vl", 40, GenSpec(seed=5))
        parallel = run_lemma_suite("M-3vl", 40, GenSpec(seed=5), jobs=2)
        self.assertEqual([f.seed for f in sequential.get_failures()], [f.seed for f in parallel.get_failures()])
        fuzz_sequential = run_fuzz(30, GenSpec(seed=40))
        fuzz_parallel = run_fuzz(30, GenSpec(seed=40), jobs=2)
        self.assertEqual(fuzz_sequential.summary(), fuzz_parallel.summary())


if __name__ == '__main__':
    unittest.main()
