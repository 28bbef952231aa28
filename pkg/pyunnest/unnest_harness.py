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

"""Property-test harness: evaluates both sides of each lemma, and of each generated plan and its unnested form, on
seeded random inputs, and collects the failures into reports."""

import dataclasses
import functools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import pyunnest.unnest_plan as plan_ir
from pyunnest.base.unnest_base_lemma_suite import CONTAINMENT, EQUAL, EXPECTED
from pyunnest.unnest_attribute import sorted_attributes
from pyunnest.unnest_config import UnnestConfig
from pyunnest.unnest_errors import UnnestError
from pyunnest.unnest_evaluator import evaluate
from pyunnest.unnest_generator import GenSpec, gen_correlated_plan
from pyunnest.unnest_lemma_builder import TrialBuilder
from pyunnest.unnest_logger import UnnestLogger
from pyunnest.unnest_plan_text import print_catalog, print_plan
from pyunnest.unnest_relation import first_difference
from pyunnest.unnest_rewriter import PushDownCounter, Unnester
from pyunnest.unnest_suite_factory import UnnestSuiteFactory

logger = logging.getLogger(__name__)

_LEMMA = "lemma"
_FUZZ = "fuzz"


@dataclass
class TrialOutcome:
    """Verdict of one trial. Plans, inputs and diff are kept as text so that outcomes can leave worker processes."""
    passed: bool
    plans: tuple = ()
    inputs: str = ""
    diff: str = ""
    seed: int = None
    lemma: str = None
    spec: dict = None
    measurements: dict = field(default_factory=dict)

    def as_record(self):
        return {"seed": self.seed, "lemma": self.lemma, "plans": list(self.plans), "inputs": self.inputs,
                "diff": self.diff, "spec": self.spec}


class EquivalenceReport:
    """Trials of one lemma (or of one fuzz run) and the outcomes of those that failed.

    For a suite that expects failures, success means that at least one trial failed."""

    def __init__(self, lemma, expects_failure=False) -> None:
        self._lemma = lemma
        self._expects_failure = expects_failure
        self._trials = 0
        self._failures = []

    def add_outcome(self, outcome):
        self._trials += 1
        if not outcome.passed:
            self._failures.append(outcome)

    def get_lemma(self):
        return self._lemma

    def get_trials(self):
        return self._trials

    def get_failures(self):
        return list(self._failures)

    def expects_failure(self):
        return self._expects_failure

    def all_passed(self):
        return not self._failures

    def is_success(self):
        return bool(self._failures) if self._expects_failure else not self._failures

    def summary(self):
        return {"lemma": self._lemma, "trials": self._trials, "failures": len(self._failures),
                "expects_failure": self._expects_failure, "success": self.is_success()}

    def to_json_lines(self):
        """One JSON record per failure."""
        return "\n".join(json.dumps(outcome.as_record(), sort_keys=True) for outcome in self._failures)

    def __repr__(self):
        return ("EquivalenceReport(" + self._lemma + ": " + str(len(self._failures)) + " of " + str(self._trials)
                + " trials failed)")


# ------------------------------------------------------ CHECKS -------------------------------------------------------

def _evaluated(plan, catalog):
    """(relation, None), or (None, message) when the plan cannot be evaluated."""
    try:
        return evaluate(plan, catalog), None
    except UnnestError as error:
        return None, type(error).__name__ + ": " + str(error)


def _failure(plans, catalog, diff):
    return TrialOutcome(False, plans, print_catalog(catalog), diff)


def _compare(plans, catalog, left, right, one_sided=False):
    if left.schema != right.schema:
        names = ", ".join(str(a) for a in sorted_attributes(left.schema ^ right.schema))
        return _failure(plans, catalog, "schemas differ on " + names)
    if one_sided:
        difference = next(((t, n, right.multiplicity(t)) for t, n in left.items() if right.multiplicity(t) != n),
                          None)
    else:
        difference = first_difference(left, right)
    if difference is not None:
        t, m_left, m_right = difference
        return _failure(plans, catalog, "tuple " + repr(t) + " counts " + str(m_left) + " vs " + str(m_right))
    return TrialOutcome(True, plans, measurements={"rows": left.total()})


def check_equivalence(p1, p2, catalog, one_sided=False):
    """Evaluates both plans and compares the results exactly. With one_sided, only the tuples of p1 are checked:
    each must have the same multiplicity in p2."""
    plans = (print_plan(p1), print_plan(p2))
    left, error = _evaluated(p1, catalog)
    if error is not None:
        return _failure(plans, catalog, "first plan: " + error)
    right, error = _evaluated(p2, catalog)
    if error is not None:
        return _failure(plans, catalog, "second plan: " + error)
    return _compare(plans, catalog, left, right, one_sided)


def check_result(plan, expected, catalog):
    """Evaluates plan and compares its result with the expected relation."""
    plans = (print_plan(plan),)
    result, error = _evaluated(plan, catalog)
    if error is not None:
        return _failure(plans, catalog, error)
    return _compare(plans, catalog, result, expected)


# ------------------------------------------------------ TRIALS -------------------------------------------------------

def _lemma_trial(suite, spec, seed):
    trial = suite.build_trial(TrialBuilder(spec, seed))
    if trial.comparison == EQUAL:
        outcome = check_equivalence(trial.original, trial.rewritten, trial.catalog)
    elif trial.comparison == CONTAINMENT:
        outcome = check_equivalence(trial.original, trial.rewritten, trial.catalog, one_sided=True)
    elif trial.comparison == EXPECTED:
        outcome = check_result(trial.original, trial.expected, trial.catalog)
    else:
        raise NameError('Comparison must be "equal" or "containment" or "expected"')
    outcome.measurements.update(passed=int(outcome.passed), nodes=plan_ir.count_nodes(trial.original))
    return dataclasses.replace(outcome, seed=seed, lemma=suite.get_lemma_id(), spec=spec.as_dict())


def _fuzz_trial(config, spec, seed):
    plan, catalog = gen_correlated_plan(spec, seed)
    lemma = "unnest-" + config.get_perfect_mode()
    counter = PushDownCounter()
    try:
        unnested = Unnester(config, counter).unnest(plan)
        again = Unnester(config).unnest(unnested)
    except UnnestError as error:
        outcome = _failure((print_plan(plan),), catalog, "unnest failed: " + type(error).__name__ + ": " + str(error))
        return dataclasses.replace(outcome, seed=seed, lemma=lemma, spec=spec.as_dict())

    problems = []
    remaining = plan_ir.count_nodes(unnested, plan_ir.DependentJoin)
    if remaining:
        problems.append(str(remaining) + " dependent joins left")
    if counter.max_visits() > 1:
        problems.append("a node was pushed down " + str(counter.max_visits()) + " times")
    if again != unnested:
        problems.append("unnesting the unnested plan changed it")
    outcome = check_equivalence(plan, unnested, catalog)
    if problems:
        outcome = dataclasses.replace(outcome, passed=False, inputs=print_catalog(catalog),
                                      diff="; ".join(problems + ([outcome.diff] if outcome.diff else [])))

    measurements = dict(("kind_" + kind, n) for kind, n in plan_ir.kind_histogram(plan).items())
    measurements.update(outcome.measurements)
    measurements.update(passed=int(outcome.passed), nodes=plan_ir.count_nodes(plan),
                        dependent_joins=plan_ir.count_nodes(plan, plan_ir.DependentJoin),
                        unnested_nodes=plan_ir.count_nodes(unnested), push_down_visits=counter.total(),
                        max_visits=counter.max_visits())
    return dataclasses.replace(outcome, seed=seed, lemma=lemma, spec=spec.as_dict(), measurements=measurements)


def _smaller(spec):
    if spec.max_rows > 0:
        yield spec.replace(max_rows=spec.max_rows - 1)
    if spec.max_plan_depth > 1:
        yield spec.replace(max_plan_depth=spec.max_plan_depth - 1)


def shrink_failure(run, spec, seed, outcome):
    """Lowers max_rows and max_plan_depth one step at a time, rerunning the same seed, for as long as the trial
    keeps failing. Returns the outcome of the smallest failing configuration."""
    shrinking = True
    while shrinking:
        shrinking = False
        for candidate in _smaller(spec):
            result = run(candidate, seed)
            if not result.passed:
                logger.debug("seed %d still fails with %r", seed, candidate)
                spec, outcome, shrinking = candidate, result, True
                break
    return outcome


def _run_task(task):
    # module level so that worker processes can unpickle it
    kind, name, spec_values, seed, shrink, max_depth = task
    spec = GenSpec(**spec_values)
    if kind == _LEMMA:
        suite = UnnestSuiteFactory().get_suite(name)
        run = functools.partial(_lemma_trial, suite)
        shrink = shrink and not suite.expects_failure()
    else:
        run = functools.partial(_fuzz_trial, UnnestConfig(name, max_depth))
    outcome = run(spec, seed)
    if shrink and not outcome.passed:
        outcome = shrink_failure(run, spec, seed, outcome)
    return outcome


def _run_tasks(tasks, jobs):
    if jobs <= 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        # map keeps task order, which is seed order
        return list(executor.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _collect(report, outcomes):
    unnest_logger = UnnestLogger()
    for outcome in outcomes:
        report.add_outcome(outcome)
        unnest_logger.add_variables(outcome.lemma + "/" + str(outcome.seed),
                                    dict(outcome.measurements, lemma=outcome.lemma, seed=outcome.seed))
        if not outcome.passed:
            logger.info("%s failed for seed %d: %s", outcome.lemma, outcome.seed, outcome.diff)
    return report


def run_lemma_suite(lemma, trials, spec, jobs=1, shrink=True):
    """Runs trials instances of the lemma, with seeds spec.seed, spec.seed + 1, ..."""
    suite = UnnestSuiteFactory().get_suite(lemma)
    logger.info("running %s for %d trials from seed %d", lemma, trials, spec.seed)
    tasks = [(_LEMMA, lemma, spec.as_dict(), spec.seed + trial, shrink, None) for trial in range(trials)]
    report = EquivalenceReport(lemma, suite.expects_failure())
    return _collect(report, _run_tasks(tasks, jobs))


def run_fuzz(trials, spec, config=None, jobs=1, shrink=True):
    """Generates trials correlated plans and checks that each unnests into an equivalent plan without dependent
    joins, in one pass over its nodes, and that unnesting the result again leaves it unchanged."""
    config = config if config is not None else UnnestConfig()
    mode = config.get_perfect_mode()
    logger.info("fuzzing %d plans from seed %d with perfect mode %s", trials, spec.seed, mode)
    tasks = [(_FUZZ, mode, spec.as_dict(), spec.seed + trial, shrink, config.get_max_depth())
             for trial in range(trials)]
    return _collect(EquivalenceReport("unnest-" + mode), _run_tasks(tasks, jobs))


class HarnessSettings:
    """
        Settings of a harness run.

        Input data
        -----------
        json file containing a "harness" section with:
        trials: trials per lemma suite or fuzz run (null keeps the default of each command)
        jobs: worker processes running trials in parallel
        shrink: whether failing trials are shrunk before they are reported
        """

    def __init__(self, trials=None, jobs=1, shrink=True) -> None:
        self._trials = trials
        self._jobs = jobs
        self._shrink = shrink

    def read_initial_condition_from_json_file(self, filename):
        # read json parameters file
        with open(filename) as data_file:
            data = json.load(data_file)
            if 'harness' not in data:
                raise ValueError("Missing ['harness'] entry in json")
            section = data['harness']
            self._trials = section.get('trials', self._trials)
            self._jobs = int(section.get('jobs', self._jobs))
            self._shrink = bool(section.get('shrink', self._shrink))
        if self._trials is not None and int(self._trials) <= 0:
            raise ValueError("trials must be positive")
        if self._jobs <= 0:
            raise ValueError("jobs must be positive")

    def get_trials(self, default):
        return default if self._trials is None else int(self._trials)

    def set_trials(self, trials):
        self._trials = trials

    def get_jobs(self):
        return self._jobs

    def set_jobs(self, jobs):
        self._jobs = jobs

    def get_shrink(self):
        return self._shrink

    def set_shrink(self, shrink):
        self._shrink = shrink
