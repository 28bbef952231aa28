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


class UnnestError(Exception):
    pass


class SchemaViolationError(UnnestError, ValueError):
    """Raised when an operator-local precondition of a plan node fails."""

    def __init__(self, node_kind, message, attributes=()):
        self.node_kind = node_kind
        self.attributes = tuple(attributes)
        names = ", ".join(str(a) for a in self.attributes)
        if names:
            message = message + " [" + names + "]"
        super().__init__(node_kind + ": " + message)


class MissingAttributeError(UnnestError, KeyError):
    def __init__(self, attribute):
        self.attribute = attribute
        super().__init__("attribute " + str(attribute) + " is not part of the tuple")

    def __str__(self):
        return self.args[0]


class AttributeOverlapError(UnnestError, ValueError):
    def __init__(self, attribute):
        self.attribute = attribute
        super().__init__("attribute " + str(attribute) + " is defined on both sides of the concatenation")


class UnboundAttributeError(UnnestError, LookupError):
    def __init__(self, attribute):
        self.attribute = attribute
        super().__init__("attribute " + str(attribute) + " is neither in the tuple nor bound by the environment")


class UnknownTableError(UnnestError, LookupError):
    def __init__(self, table):
        self.table = table
        super().__init__("unknown table '" + str(table) + "'")


class TypeMismatchError(UnnestError, TypeError):
    pass


class NonBooleanPredicateError(UnnestError, TypeError):
    pass


class UnsupportedOperatorError(UnnestError, NotImplementedError):
    pass


class DepthExceededError(UnnestError, RecursionError):
    pass


class MissingRepresentativeError(UnnestError, KeyError):
    def __init__(self, attribute):
        self.attribute = attribute
        super().__init__("no representative registered for " + str(attribute))

    def __str__(self):
        return self.args[0]


class IncompleteEquivalenceError(UnnestError, ValueError):
    pass


class PlanSyntaxError(UnnestError, ValueError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(str(line) + ":" + str(column) + ": " + message)


class UnknownLemmaError(UnnestError, NameError):
    pass
