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


class UnnestConfig:
    """
        Settings of the unnesting rewriter.

        Input data
        -----------
        json file containing an "unnest_config" section with:
        perfect_mode: "auto" maps domain columns onto collected equivalent expressions whenever every column is
        covered, "always" requires that coverage (and fails otherwise), "never" always joins with the domain
        max_depth: bound on the nesting of dependent joins handled in one rewrite
        """

    AUTO = "auto"
    ALWAYS = "always"
    NEVER = "never"
    PERFECT_MODES = (AUTO, ALWAYS, NEVER)

    def __init__(self, perfect_mode=AUTO, max_depth=32) -> None:
        self._perfect_mode = self._check_perfect_mode(perfect_mode)
        self._max_depth = self._check_max_depth(max_depth)

    @staticmethod
    def _check_perfect_mode(perfect_mode):
        if perfect_mode not in UnnestConfig.PERFECT_MODES:
            raise NameError('Perfect mode must be "auto" or "always" or "never"')
        return perfect_mode

    @staticmethod
    def _check_max_depth(max_depth):
        if isinstance(max_depth, bool) or int(max_depth) != max_depth or max_depth <= 0:
            raise ValueError("max_depth must be a positive integer, got " + repr(max_depth))
        return int(max_depth)

    def read_initial_condition_from_json_file(self, filename):
        # read json parameters file
        with open(filename) as data_file:
            data = json.load(data_file)
            if 'unnest_config' not in data:
                raise ValueError("Missing ['unnest_config'] entry in json")
            section = data['unnest_config']
            self._perfect_mode = self._check_perfect_mode(section.get('perfect_mode', self._perfect_mode))
            self._max_depth = self._check_max_depth(section.get('max_depth', self._max_depth))

    def get_perfect_mode(self):
        return self._perfect_mode

    def set_perfect_mode(self, perfect_mode):
        self._perfect_mode = self._check_perfect_mode(perfect_mode)

    def get_max_depth(self):
        return self._max_depth

    def set_max_depth(self, max_depth):
        self._max_depth = self._check_max_depth(max_depth)

    def __repr__(self):
        return "UnnestConfig(perfect_mode=" + repr(self._perfect_mode) + ", max_depth=" + str(self._max_depth) + ")"
