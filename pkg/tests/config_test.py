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

import os
import unittest

import pyunnest.unnest_config
import pyunnest.unnest_generator
import pyunnest.unnest_harness

RESOURCES = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'resources')


class MyTestCase(unittest.TestCase):
    def test_read_initial_condition_from_json_file(self):
        filename = os.path.join(RESOURCES, 'input_parameters_unnest.json')
        config = pyunnest.unnest_config.UnnestConfig()
        config.read_initial_condition_from_json_file(filename)
        self.assertEqual(config.get_perfect_mode(), "never")
        self.assertEqual(config.get_max_depth(), 8)

    def test_generator_section(self):
        filename = os.path.join(RESOURCES, 'input_parameters_unnest.json')
        spec = pyunnest.unnest_generator.GenSpec()
        spec.read_initial_condition_from_json_file(filename)
        self.assertEqual(spec.max_arity, 2)
        self.assertEqual(spec.max_rows, 4)
        self.assertEqual(spec.value_pool, (0, 1, None))
        self.assertEqual(spec.max_scans, 3)
        self.assertEqual(spec.seed, 11)

    def test_harness_section(self):
        filename = os.path.join(RESOURCES, 'input_parameters_unnest.json')
        settings = pyunnest.unnest_harness.HarnessSettings()
        settings.read_initial_condition_from_json_file(filename)
        self.assertEqual(settings.get_trials(200), 25)
        self.assertEqual(settings.get_jobs(), 2)
        self.assertFalse(settings.get_shrink())
        self.assertEqual(pyunnest.unnest_harness.HarnessSettings().get_trials(200), 200)

    def test_shipped_template(self):
        filename = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'resource',
                                'template.json')
        config = pyunnest.unnest_config.UnnestConfig()
        config.read_initial_condition_from_json_file(filename)
        spec = pyunnest.unnest_generator.GenSpec()
        spec.read_initial_condition_from_json_file(filename)
        self.assertEqual(config.get_perfect_mode(), "auto")
        self.assertEqual(spec.as_dict(), pyunnest.unnest_generator.GenSpec().as_dict())

    def test_missing_section(self):
        filename = os.path.join(RESOURCES, 'input_parameters_missing_sections.json')
        with self.assertRaises(ValueError):
            pyunnest.unnest_config.UnnestConfig().read_initial_condition_from_json_file(filename)
        with self.assertRaises(ValueError):
            pyunnest.unnest_harness.HarnessSettings().read_initial_condition_from_json_file(filename)
        spec = pyunnest.unnest_generator.GenSpec()
        spec.read_initial_condition_from_json_file(filename)
        self.assertEqual(spec.max_rows, 2)
        self.assertEqual(spec.max_arity, 3)

    def test_invalid_perfect_mode(self):
        filename = os.path.join(RESOURCES, 'input_parameters_invalid_unnest.json')
        with self.assertRaises(NameError):
            pyunnest.unnest_config.UnnestConfig().read_initial_condition_from_json_file(filename)

    def test_setters_validate(self):
        config = pyunnest.unnest_config.UnnestConfig()
        config.set_perfect_mode("always")
        self.assertEqual(config.get_perfect_mode(), "always")
        with self.assertRaises(ValueError):
            config.set_max_depth(0)
        with self.assertRaises(NameError):
            pyunnest.unnest_config.UnnestConfig(perfect_mode="maybe")

    def test_generator_bounds_must_be_positive(self):
        with self.assertRaises(ValueError):
            pyunnest.unnest_generator.GenSpec(max_arity=0)
        with self.assertRaises(ValueError):
            pyunnest.unnest_generator.GenSpec(value_pool=(None,))
        with self.assertRaises(ValueError):
            pyunnest.unnest_generator.GenSpec(max_scans=1)
        self.assertEqual(pyunnest.unnest_generator.GenSpec().replace(max_rows=0).max_rows, 0)


if __name__ == '__main__':
    unittest.main()
