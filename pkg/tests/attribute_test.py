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

import pickle
import unittest

from hypothesis import given, strategies as st

import pyunnest.unnest_attribute
from pyunnest.unnest_attribute import Attribute, fresh_attribute, lookup_attribute, sorted_attributes


class MyTestCase(unittest.TestCase):
    def test_fresh_attribute_ids_are_unique_and_increasing(self):
        attributes = [fresh_attribute("a") for _ in range(50)]
        ids = [a.id for a in attributes]
        self.assertEqual(len(set(ids)), 50)
        self.assertEqual(ids, sorted(ids))

    def test_equality_is_by_id_only(self):
        a = fresh_attribute("price")
        self.assertEqual(a, Attribute("other", a.id))
        self.assertNotEqual(a, fresh_attribute("price"))
        self.assertEqual(hash(a), hash(Attribute("price", a.id)))

    def test_printed_form(self):
        a = fresh_attribute("o_custkey")
        self.assertEqual(str(a), "o_custkey#" + str(a.id))

    def test_invalid_base_name(self):
        with self.assertRaises(ValueError):
            fresh_attribute("")

    def test_attribute_is_immutable(self):
        a = fresh_attribute("a")
        with self.assertRaises(AttributeError):
            a.id = 3

    def test_lookup_live_attribute(self):
        a = fresh_attribute("k")
        self.assertIs(lookup_attribute(a.id), a)
        self.assertIs(lookup_attribute(a.id, "k"), a)
        self.assertIsNone(lookup_attribute(a.id, "other"))

    def test_pickled_attribute_keeps_its_identity(self):
        a = fresh_attribute("p")
        self.assertIs(pickle.loads(pickle.dumps(a)), a)

    def test_unpickled_unknown_attribute_is_adopted(self):
        future_id = fresh_attribute("probe").id + 1000
        restored = pyunnest.unnest_attribute._restore_attribute("late", future_id)
        self.assertEqual(restored.id, future_id)
        self.assertGreater(fresh_attribute("next").id, future_id)

    @given(st.lists(st.text(alphabet="abcxyz_", min_size=1, max_size=4), min_size=1, max_size=8))
    def test_sorted_attributes_orders_by_id(self, bases):
        attributes = [fresh_attribute(base) for base in bases]
        self.assertEqual(list(sorted_attributes(reversed(attributes))), attributes)


if __name__ == '__main__':
    unittest.main()
