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

import pyunnest.unnest_attribute
from pyunnest.unnest_errors import AttributeOverlapError, MissingAttributeError, SchemaViolationError

# value domain: None (NULL), bool, int, str
_TAG_NULL = 0
_TAG_BOOL = 1
_TAG_INT = 2
_TAG_STR = 3


def is_value(value):
    return value is None or isinstance(value, (bool, int, str))


def value_tag(value):
    if value is None:
        return _TAG_NULL
    if isinstance(value, bool):
        return _TAG_BOOL
    if isinstance(value, int):
        return _TAG_INT
    if isinstance(value, str):
        return _TAG_STR
    raise TypeError("unsupported value " + repr(value))


def value_key(value):
    tag = value_tag(value)
    if tag == _TAG_NULL:
        return tag, 0
    if tag == _TAG_BOOL:
        return tag, int(value)
    return tag, value


def values_identical(left, right):
    """Identity of domain values, NULL included. True and 1 are different values."""
    return value_key(left) == value_key(right)


def format_value(value):
    tag = value_tag(value)
    if tag == _TAG_NULL:
        return "NULL"
    if tag == _TAG_BOOL:
        return "true" if value else "false"
    if tag == _TAG_INT:
        return str(value)
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


class Tuple:
    """An unordered mapping from attributes to values.

    Equality and hashing use the canonical key: the entries in ascending attribute-id order, values tagged by
    type. Two tuples over the same attributes with the same values are therefore the same multiset element."""

    __slots__ = ("_entries", "_key")

    def __init__(self, entries=None) -> None:
        entries = dict(entries or {})
        for attribute, value in entries.items():
            if not isinstance(attribute, pyunnest.unnest_attribute.Attribute):
                raise TypeError("tuple keys must be attributes, got " + repr(attribute))
            if not is_value(value):
                raise TypeError("unsupported value " + repr(value) + " for " + str(attribute))
        self._entries = entries
        self._key = tuple((a.id,) + value_key(entries[a]) for a in sorted(entries, key=lambda a: a.id))

    @classmethod
    def single(cls, attribute, value):
        return cls({attribute: value})

    def attributes(self):
        return frozenset(self._entries)

    def key(self):
        return self._key

    def items(self):
        return [(a, self._entries[a]) for a in pyunnest.unnest_attribute.sorted_attributes(self._entries)]

    def get(self, attribute, default=None):
        return self._entries.get(attribute, default)

    def __getitem__(self, attribute):
        try:
            return self._entries[attribute]
        except KeyError:
            raise MissingAttributeError(attribute) from None

    def __contains__(self, attribute):
        return attribute in self._entries

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, Tuple) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "[" + ", ".join(str(a) + ":" + format_value(v) for a, v in self.items()) + "]"

    def restrict(self, attributes):
        return tuple_restrict(self, attributes)

    def concat(self, other):
        return tuple_concat(self, other)

    def as_dict(self):
        return dict(self._entries)


EMPTY_TUPLE = Tuple()


def tuple_restrict(t, attributes):
    """t|A' : the tuple with exactly the attributes A', values copied from t."""
    restricted = {}
    for attribute in attributes:
        if attribute not in t:
            raise MissingAttributeError(attribute)
        restricted[attribute] = t[attribute]
    return Tuple(restricted)


def tuple_concat(t1, t2):
    """t1 o t2, defined only for disjoint attribute sets."""
    entries = t1.as_dict()
    for attribute, value in t2.items():
        if attribute in entries:
            raise AttributeOverlapError(attribute)
        entries[attribute] = value
    return Tuple(entries)


class Relation:
    """A finite multiset of tuples over one schema, stored as its characteristic function: tuple -> multiplicity.

    Absent tuples have multiplicity 0, stored multiplicities are >= 1."""

    __slots__ = ("_schema", "_counts")

    def __init__(self, schema, counts=None) -> None:
        self._schema = frozenset(schema)
        self._counts = {}
        for t, n in (counts or {}).items():
            self._accumulate(t, n)

    @classmethod
    def from_rows(cls, schema, rows):
        """rows: iterable of tuples or (tuple, count) pairs; repeated tuples add up."""
        relation = cls(schema)
        for row in rows:
            if isinstance(row, Tuple):
                relation._accumulate(row, 1)
            else:
                t, n = row
                relation._accumulate(t, n)
        return relation

    def _accumulate(self, t, n):
        # construction only, relations are never mutated once handed out
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValueError("multiplicity must be a nonnegative integer, got " + repr(n))
        if t.attributes() != self._schema:
            raise SchemaViolationError("relation", "tuple " + repr(t) + " does not match the schema",
                                       self._schema.symmetric_difference(t.attributes()))
        if n > 0:
            self._counts[t] = self._counts.get(t, 0) + n

    @property
    def schema(self):
        return self._schema

    def multiplicity(self, t):
        return self._counts.get(t, 0)

    def items(self):
        """(tuple, multiplicity) pairs in canonical key order."""
        return sorted(self._counts.items(), key=lambda item: item[0].key())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._counts)

    def total(self):
        return sum(self._counts.values())

    def is_empty(self):
        return not self._counts

    def is_duplicate_free(self):
        return all(n == 1 for n in self._counts.values())

    def __eq__(self, other):
        return isinstance(other, Relation) and self._schema == other._schema and self._counts == other._counts

    def __hash__(self):
        return hash((self._schema, frozenset(self._counts.items())))

    def __repr__(self):
        header = " ".join(str(a) for a in pyunnest.unnest_attribute.sorted_attributes(self._schema))
        rows = " ".join(repr(t) + "x" + str(n) for t, n in self.items())
        return "Relation((" + header + ") {" + rows + "})"


def empty_relation(schema):
    return Relation(schema)


def first_difference(left, right):
    """Returns (tuple, m_left, m_right) for the first tuple, in canonical order, whose multiplicities differ, or
    None when both characteristic functions are identical."""
    candidates = set(t for t, _ in left.items()) | set(t for t, _ in right.items())
    for t in sorted(candidates, key=lambda c: c.key()):
        if left.multiplicity(t) != right.multiplicity(t):
            return t, left.multiplicity(t), right.multiplicity(t)
    return None
