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

import itertools
import threading


class Attribute:
    """A column identity. Two attributes are the same column iff their ids are equal; the base name is only used
    for display.

    Attributes are created through fresh_attribute(), which hands out session-unique, strictly increasing ids.
    """

    __slots__ = ("base", "id")

    def __init__(self, base, attribute_id) -> None:
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "id", attribute_id)

    def __setattr__(self, key, value):
        raise AttributeError("Attribute is immutable")

    def __eq__(self, other):
        return isinstance(other, Attribute) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return "Attribute(" + repr(self.base) + ", " + str(self.id) + ")"

    def __str__(self):
        return self.base + "#" + str(self.id)

    def __reduce__(self):
        return (_restore_attribute, (self.base, self.id))


class _AttributeSession:
    # the counter is the only mutable session state, every access goes through the lock

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counter = itertools.count(1)
        self._issued = {}

    def fresh(self, base):
        with self._lock:
            attribute = Attribute(base, next(self._counter))
            self._issued[attribute.id] = attribute
            return attribute

    def lookup(self, attribute_id):
        with self._lock:
            return self._issued.get(attribute_id)

    def adopt(self, base, attribute_id):
        with self._lock:
            attribute = self._issued.get(attribute_id)
            if attribute is None:
                attribute = Attribute(base, attribute_id)
                self._issued[attribute_id] = attribute
                # keep ids strictly increasing past adopted ones
                current = next(self._counter)
                self._counter = itertools.count(max(current, attribute_id + 1))
            return attribute


_session = _AttributeSession()


def fresh_attribute(base):
    """Returns an attribute whose id has never been issued in this session."""
    if not isinstance(base, str) or base == "":
        raise ValueError("attribute base name must be a non-empty string")
    return _session.fresh(base)


def lookup_attribute(attribute_id, base=None):
    """Returns the live attribute with this id, or None. When base is given, a live attribute with another base
    name does not count as a match."""
    attribute = _session.lookup(attribute_id)
    if attribute is not None and base is not None and attribute.base != base:
        return None
    return attribute


def _restore_attribute(base, attribute_id):
    # unpickling in a worker process registers the attribute there so fresh ids never collide with it
    return _session.adopt(base, attribute_id)


def sorted_attributes(attributes):
    return tuple(sorted(attributes, key=lambda a: a.id))
