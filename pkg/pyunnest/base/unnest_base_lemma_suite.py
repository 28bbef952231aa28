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

# from abc import ABC, abstractmethod -> python 3.4
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass

EQUAL = "equal"
CONTAINMENT = "containment"
EXPECTED = "expected"
COMPARISONS = (EQUAL, CONTAINMENT, EXPECTED)


@dataclass
class LemmaTrial:
    """Both sides of one instance of a lemma, over one catalog.

    comparison "equal" asks for identical results, "containment" asks that every tuple of the original keeps its
    multiplicity in the rewritten plan, "expected" compares the original against the relation in expected."""
    original: object
    rewritten: object
    catalog: dict
    comparison: str = EQUAL
    expected: object = None


class UnnestBaseLemmaSuite(metaclass=ABCMeta):
    @abstractmethod
    def get_lemma_id(self):
        pass

    @abstractmethod
    def build_trial(self, builder):
        """Returns a LemmaTrial built from the tables of builder (a TrialBuilder)."""
        pass

    def expects_failure(self):
        return False
