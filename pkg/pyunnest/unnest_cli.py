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

"""Command-line entry point: unnest, eval, check, lemmas and fuzz."""

import argparse
import json
import logging
import sys

import pyunnest.unnest_harness
from pyunnest.unnest_config import UnnestConfig
from pyunnest.unnest_errors import UnnestError
from pyunnest.unnest_evaluator import evaluate
from pyunnest.unnest_generator import GenSpec
from pyunnest.unnest_logger import UnnestLogger
from pyunnest.unnest_plan_text import parse_script, print_plan, print_relation
from pyunnest.unnest_relation import first_difference
from pyunnest.unnest_rewriter import unnest
from pyunnest.unnest_suite_factory import UnnestSuiteFactory

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LEMMA_TRIALS = 200
SUPERSET_TRIALS = 100
MUTATION_TRIALS = 500
FUZZ_TRIALS = 500


def _build_parser():
    parser = argparse.ArgumentParser(prog="main_unnest.py",
                                     description='Unnests, evaluates and checks relational algebra plans.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='template.json', type=str,
                        help='json file with "unnest_config", "generator" and "harness" sections')
    common.add_argument('--perfect', choices=UnnestConfig.PERFECT_MODES,
                        help='replace the join with the domain by column copies: auto, always or never')
    common.add_argument('--json', action='store_true', help='structured output, one JSON record per line')
    common.add_argument('--verbose', action='store_true', help='log progress on the error stream')

    randomized = argparse.ArgumentParser(add_help=False)
    randomized.add_argument('--trials', type=int, help='trials per suite')
    randomized.add_argument('--seed', type=int, help='seed of the first trial')
    randomized.add_argument('--jobs', type=int, help='worker processes')
    randomized.add_argument('--no-shrink', action='store_true', help='report failures without shrinking them')

    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, text in (('unnest', 'print the plan without dependent joins'),
                       ('eval', 'print the result of the plan'),
                       ('check', 'evaluate the plan and its unnested form and compare the results')):
        command = subparsers.add_parser(name, parents=[common], help=text)
        command.add_argument('plan_file', metavar='FILE.plan', type=str)
        if name != 'unnest':
            command.add_argument('--ids', action='store_true', help='print attributes with their ids')

    lemmas = subparsers.add_parser('lemmas', parents=[common, randomized], help='run the lemma suites')
    lemmas.add_argument('--only', metavar='ID', type=str, help='run this lemma suite only')
    fuzz = subparsers.add_parser('fuzz', parents=[common, randomized],
                                 help='unnest generated plans and compare them with the originals')
    fuzz.add_argument('--log', metavar='FILE.csv', type=str, help='write per-trial measurements as CSV')
    return parser


def _settings(args):
    config = UnnestConfig()
    spec = GenSpec()
    harness = pyunnest.unnest_harness.HarnessSettings()
    if args.config:
        config.read_initial_condition_from_json_file(args.config)
        spec.read_initial_condition_from_json_file(args.config)
        harness.read_initial_condition_from_json_file(args.config)
    if args.perfect:
        config.set_perfect_mode(args.perfect)
    if getattr(args, 'seed', None) is not None:
        spec = spec.replace(seed=args.seed)
    if getattr(args, 'trials', None) is not None:
        if args.trials <= 0:
            raise ValueError("--trials must be positive")
        harness.set_trials(args.trials)
    if getattr(args, 'jobs', None) is not None:
        if args.jobs <= 0:
            raise ValueError("--jobs must be positive")
        harness.set_jobs(args.jobs)
    if getattr(args, 'no_shrink', False):
        harness.set_shrink(False)
    return config, spec, harness


def _read_script(filename):
    with open(filename, encoding='utf-8') as plan_file:
        return parse_script(plan_file.read())


# ------------------------------------------------------ COMMANDS -----------------------------------------------------

def _unnest(args, config, out):
    plan, _ = _read_script(args.plan_file)
    rewritten = unnest(plan, config)
    if args.json:
        print(json.dumps({"plan": print_plan(rewritten)}), file=out)
    else:
        print(print_plan(rewritten), file=out)
    return EXIT_OK


def _eval(args, config, out):
    plan, catalog = _read_script(args.plan_file)
    result = evaluate(plan, catalog)
    if args.json:
        print(json.dumps({"relation": print_relation(result, args.ids), "rows": result.total()}), file=out)
    else:
        print(print_relation(result, args.ids), file=out)
    return EXIT_OK


def _check(args, config, out):
    plan, catalog = _read_script(args.plan_file)
    rewritten = unnest(plan, config)
    original, unnested = evaluate(plan, catalog), evaluate(rewritten, catalog)
    difference = first_difference(original, unnested) if original.schema == unnested.schema else None
    identical = original.schema == unnested.schema and difference is None
    diff = ""
    if not identical:
        diff = "schemas differ" if difference is None else (
            "tuple " + repr(difference[0]) + " counts " + str(difference[1]) + " vs " + str(difference[2]))
    if args.json:
        print(json.dumps({"identical": identical, "original": print_relation(original, args.ids),
                          "unnested": print_relation(unnested, args.ids), "diff": diff}), file=out)
    else:
        print(print_relation(original, args.ids), file=out)
        print(print_relation(unnested, args.ids), file=out)
        print("identical" if identical else "DIFFERENT: " + diff, file=out)
    return EXIT_OK if identical else EXIT_FAILURE


def _print_report(report, as_json, out):
    if as_json:
        if report.get_failures() and not report.expects_failure():
            print(report.to_json_lines(), file=out)
        print(json.dumps(dict(report.summary(), record="summary"), sort_keys=True), file=out)
        return
    summary = report.summary()
    if report.expects_failure():
        verdict = "caught" if report.is_success() else "MISSED"
    else:
        verdict = "ok" if report.is_success() else "FAILED"
    print("{:<14}{:>6} trials{:>6} failures  {}".format(summary["lemma"], summary["trials"], summary["failures"],
                                                          verdict), file=out)
    if not report.expects_failure():
        for failure in report.get_failures()[:1]:
            print("  seed " + str(failure.seed) + ": " + failure.diff, file=out)
            for plan in failure.plans:
                print("\n".join("    " + line for line in plan.split("\n")), file=out)


def _lemma_trials(suite, harness):
    if suite.expects_failure():
        default = MUTATION_TRIALS
    elif suite.get_lemma_id() == "T4.1+":
        default = SUPERSET_TRIALS
    else:
        default = LEMMA_TRIALS
    return harness.get_trials(default)


def _lemmas(args, spec, harness, out):
    factory = UnnestSuiteFactory()
    if args.only:
        lemmas = [args.only]
        factory.get_suite(args.only)
    else:
        lemmas = factory.get_lemma_ids() + factory.get_lemma_ids(mutations=True)
    success = True
    for lemma in lemmas:
        trials = _lemma_trials(factory.get_suite(lemma), harness)
        report = pyunnest.unnest_harness.run_lemma_suite(lemma, trials, spec, harness.get_jobs(),
                                                        harness.get_shrink())
        _print_report(report, args.json, out)
        success = success and report.is_success()
    return EXIT_OK if success else EXIT_FAILURE


def _fuzz(args, config, spec, harness, out):
    unnest_logger = UnnestLogger()
    unnest_logger.clear()
    report = pyunnest.unnest_harness.run_fuzz(harness.get_trials(FUZZ_TRIALS), spec, config, harness.get_jobs(),
                                              harness.get_shrink())
    _print_report(report, args.json, out)
    if args.log:
        unnest_logger.write_values_to_file(args.log)
    return EXIT_OK if report.is_success() else EXIT_FAILURE


def run_cli(argv, out=None, err=None):
    """Runs one command; returns 0 on success, 1 when an equivalence check failed and 2 on usage or input
    errors."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=err)
    try:
        config, spec, harness = _settings(args)
        if args.command == 'unnest':
            return _unnest(args, config, out)
        if args.command == 'eval':
            return _eval(args, config, out)
        if args.command == 'check':
            return _check(args, config, out)
        if args.command == 'lemmas':
            return _lemmas(args, spec, harness, out)
        return _fuzz(args, config, spec, harness, out)
    except (OSError, ValueError, NameError, UnnestError) as error:
        logger.debug("command failed", exc_info=True)
        print("error: " + str(error), file=err)
        return EXIT_USAGE
