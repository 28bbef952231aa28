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

import sys

import pyunnest.unnest_cli

if __name__ == "__main__":
    # examples:
    #   python main_unnest.py check fixtures/intro_query.plan
    #   python main_unnest.py lemmas --only L4.14 --trials 200 --seed 7
    #   python main_unnest.py fuzz --perfect never --trials 500 --log fuzz.csv
    sys.exit(pyunnest.unnest_cli.run_cli(sys.argv[1:]))
