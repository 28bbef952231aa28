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

import csv


class Singleton(type):
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(Singleton, cls).__call__(*args, **kwargs)
        return cls._instances[cls]


class UnnestLogger(metaclass=Singleton):
    """Collects per-trial measurements (one row per trial, one column per variable) and writes them as CSV."""

    def __init__(self):
        self._rows = []
        self._row_by_trial = {}

    def add_variable(self, variable_name, trial, value):
        row = self._row_by_trial.get(trial)
        if row is None:
            # add a new entry
            row = {'trial': trial}
            self._rows.append(row)
            self._row_by_trial[trial] = row
        row[variable_name] = value

    def add_variables(self, trial, values):
        for variable_name, value in values.items():
            self.add_variable(variable_name, trial, value)

    def get_values(self, variable_name):
        return [row.get(variable_name, None) for row in self._rows]

    def get_trials(self):
        return [row['trial'] for row in self._rows]

    def write_values_to_file(self, filename):
        if len(self._rows) > 0:
            fieldnames = ['trial']
            for row in self._rows:
                for name in row:
                    if name not in fieldnames:
                        fieldnames.append(name)

            with open(filename, 'w', newline='') as csvfile:
                writer = csv.DictWriter(csvfile, fieldnames=fieldnames)
                writer.writeheader()
                for row in self._rows:
                    writer.writerow(row)

    def clear(self):
        self._rows = []
        self._row_by_trial = {}
