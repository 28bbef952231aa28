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

import unittest

from hypothesis import given, strategies as st

from pyunnest.unnest_attribute import fresh_attribute
from pyunnest.unnest_errors import (NonBooleanPredicateError, SchemaViolationError, TypeMismatchError,
                                    UnboundAttributeError, UnknownTableError)
from pyunnest.unnest_evaluator import Truth, aggregate, eval_predicate, eval_scalar, evaluate
from pyunnest.unnest_expression import (And, Arith, Compare, IsNull, Not, Or, TRUE, eq, lit, null_safe_eq, ref)
from pyunnest.unnest_plan import (AggFn, AntiJoin, Cross, DependentJoin, Except, GroupBy, Intersect, Join, Map,
                                  NullPad, OuterJoin, Project, ProjectDistinct, Rename, Scan, Select, SemiJoin, Union)
from pyunnest.unnest_relation import EMPTY_TUPLE, Relation, Tuple

values = st.sampled_from([0, 1, 2, None])
one_column = st.lists(st.tuples(values, st.integers(1, 3)), max_size=5)
two_columns = st.lists(st.tuples(values, values, st.integers(1, 3)), max_size=5)
comparisons = st.sampled_from(["=", "!=", "<", "<=", ">", ">="])


class MyTestCase(unittest.TestCase):
    def setUp(self):
        self.x = fresh_attribute("x")
        self.y = fresh_attribute("y")
        self.z = fresh_attribute("z")
        self.r = Scan("R", [self.x])
        self.s = Scan("S", [self.y, self.z])
        self.catalog = {
            "R": Relation.from_rows([self.x], [(Tuple({self.x: 1}), 2), Tuple({self.x: 2}), Tuple({self.x: None})]),
            "S": Relation.from_rows([self.y, self.z], [Tuple({self.y: 1, self.z: 10}), (Tuple({self.y: 1, self.z: 20}), 3),
                                                       Tuple({self.y: None, self.z: 30})]),
        }

    def rows(self, schema, *rows):
        result = []
        for row in rows:
            values, count = (row[:-1], row[-1]) if len(row) == len(schema) + 1 else (row, 1)
            result.append((Tuple(dict(zip(schema, values))), count))
        return Relation.from_rows(schema, result)

    # ---------------------------------------------------- predicates ----------------------------------------------------

    def test_three_valued_logic(self):
        t = Tuple({self.x: None, self.y: 1})
        self.assertIs(eval_predicate(eq(self.x, 1), t), Truth.UNKNOWN)
        self.assertIs(eval_predicate(Not(eq(self.x, 1)), t), Truth.UNKNOWN)
        self.assertIs(eval_predicate(And(eq(self.x, 1), eq(self.y, 2)), t), Truth.FALSE)
        self.assertIs(eval_predicate(Or(eq(self.x, 1), eq(self.y, 1)), t), Truth.TRUE)
        self.assertIs(eval_predicate(Or(eq(self.x, 1), eq(self.y, 2)), t), Truth.UNKNOWN)
        self.assertIs(eval_predicate(IsNull(ref(self.x)), t), Truth.TRUE)
        self.assertIs(eval_predicate(null_safe_eq(self.x, lit(None)), t), Truth.TRUE)
        self.assertIs(eval_predicate(null_safe_eq(self.x, self.y), t), Truth.FALSE)

    def test_arithmetic_with_null_is_null(self):
        t = Tuple({self.x: None, self.y: 4})
        self.assertIsNone(eval_scalar(Arith("+", ref(self.x), ref(self.y)), t))
        self.assertEqual(eval_scalar(Arith("*", ref(self.y), lit(3)), t), 12)

    def test_environment_binds_outer_attributes(self):
        self.assertEqual(eval_scalar(Arith("-", ref(self.x), ref(self.y)), Tuple({self.x: 5}), {self.y: 2}), 3)
        with self.assertRaises(UnboundAttributeError):
            eval_scalar(ref(self.z), Tuple({self.x: 5}), {self.y: 2})

    def test_type_errors(self):
        with self.assertRaises(TypeMismatchError):
            eval_predicate(Compare("<", lit(1), lit("a")), EMPTY_TUPLE)
        with self.assertRaises(TypeMismatchError):
            eval_scalar(Arith("+", lit(True), lit(1)), EMPTY_TUPLE)
        with self.assertRaises(NonBooleanPredicateError):
            eval_predicate(lit(3), EMPTY_TUPLE)

    # ---------------------------------------------------- aggregates ----------------------------------------------------

    def test_aggregates(self):
        relation = self.catalog["R"]
        self.assertEqual(aggregate(AggFn(AggFn.COUNT_STAR), relation), 4)
        self.assertEqual(aggregate(AggFn(AggFn.COUNT, self.x), relation), 3)
        self.assertEqual(aggregate(AggFn(AggFn.SUM, self.x), relation), 4)
        self.assertEqual(aggregate(AggFn(AggFn.MIN, self.x), relation), 1)
        self.assertEqual(aggregate(AggFn(AggFn.MAX, self.x), relation), 2)

    def test_aggregates_over_no_values(self):
        only_null = self.rows([self.x], (None, 2))
        self.assertEqual(aggregate(AggFn(AggFn.COUNT_STAR), only_null), 2)
        self.assertEqual(aggregate(AggFn(AggFn.COUNT, self.x), only_null), 0)
        self.assertIsNone(aggregate(AggFn(AggFn.SUM, self.x), only_null))
        self.assertIsNone(aggregate(AggFn(AggFn.MAX, self.x), Relation([self.x])))

    # ---------------------------------------------------- operators -----------------------------------------------------

    def test_scan(self):
        self.assertEqual(evaluate(self.r, self.catalog), self.catalog["R"])
        with self.assertRaises(UnknownTableError):
            evaluate(Scan("T", [self.x]), self.catalog)
        with self.assertRaises(SchemaViolationError):
            evaluate(Scan("R", [self.y]), self.catalog)

    def test_select_keeps_only_true_tuples(self):
        result = evaluate(Select(Compare(">=", ref(self.x), lit(1)), self.r), self.catalog)
        self.assertEqual(result, self.rows([self.x], (1, 2), (2,)))

    def test_map_and_rename(self):
        m = fresh_attribute("m")
        result = evaluate(Map(m, Arith("+", ref(self.x), lit(1)), self.r), self.catalog)
        self.assertEqual(result, self.rows([self.x, m], (1, 2, 2), (2, 3), (None, None)))
        w = fresh_attribute("w")
        self.assertEqual(evaluate(Rename(w, self.x, self.r), self.catalog),
                         self.rows([w], (1, 2), (2,), (None,)))

    def test_projections(self):
        self.assertEqual(evaluate(Project([self.y], self.s), self.catalog), self.rows([self.y], (1, 4), (None,)))
        self.assertEqual(evaluate(ProjectDistinct([self.y], self.s), self.catalog), self.rows([self.y], (1,), (None,)))

    def test_nullpad(self):
        n = fresh_attribute("n")
        result = evaluate(NullPad([n], self.r), self.catalog)
        self.assertEqual(result.multiplicity(Tuple({self.x: 1, n: None})), 2)

    def test_set_operations(self):
        w = fresh_attribute("w")
        other = Rename(self.x, w, Project([w], Rename(w, self.y, self.s)))
        self.assertEqual(evaluate(Union(self.r, other), self.catalog), self.rows([self.x], (1, 6), (2,), (None, 2)))
        self.assertEqual(evaluate(Intersect(self.r, other), self.catalog), self.rows([self.x], (1, 2), (None,)))
        self.assertEqual(evaluate(Except(self.r, other), self.catalog), self.rows([self.x], (2,)))
        self.assertEqual(evaluate(Except(other, self.r), self.catalog), self.rows([self.x], (1, 2)))

    def test_cross_and_join(self):
        self.assertEqual(evaluate(Cross(self.r, self.s), self.catalog).total(), 4 * 5)
        joined = evaluate(Join(eq(self.x, self.y), self.r, self.s), self.catalog)
        self.assertEqual(joined, self.rows([self.x, self.y, self.z], (1, 1, 10, 2), (1, 1, 20, 6)))

    def test_semi_anti_and_outer_join(self):
        predicate = eq(self.x, self.y)
        self.assertEqual(evaluate(SemiJoin(predicate, self.r, self.s), self.catalog), self.rows([self.x], (1, 2)))
        self.assertEqual(evaluate(AntiJoin(predicate, self.r, self.s), self.catalog),
                         self.rows([self.x], (2,), (None,)))
        outer = evaluate(OuterJoin(predicate, self.r, self.s), self.catalog)
        self.assertEqual(outer, self.rows([self.x, self.y, self.z], (1, 1, 10, 2), (1, 1, 20, 6),
                                          (2, None, None), (None, None, None)))

    def test_group_by(self):
        cnt = fresh_attribute("cnt")
        total = fresh_attribute("total")
        plan = GroupBy([self.y], [(cnt, AggFn(AggFn.COUNT_STAR)), (total, AggFn(AggFn.SUM, self.z))], self.s)
        self.assertEqual(evaluate(plan, self.catalog), self.rows([self.y, cnt, total], (1, 4, 70), (None, 1, 30)))

    def test_group_by_without_keys(self):
        cnt = fresh_attribute("cnt")
        plan = GroupBy([], [(cnt, AggFn(AggFn.COUNT_STAR))], self.s)
        self.assertEqual(evaluate(plan, self.catalog), self.rows([cnt], (5,)))
        empty = GroupBy([], [(cnt, AggFn(AggFn.COUNT_STAR))], Select(eq(self.y, 7), self.s))
        self.assertTrue(evaluate(empty, self.catalog).is_empty())

    def test_dependent_join_reevaluates_per_left_tuple(self):
        total = fresh_attribute("total")
        inner = GroupBy([], [(total, AggFn(AggFn.SUM, self.z))], Select(eq(self.y, self.x), self.s))
        result = evaluate(DependentJoin(TRUE, self.r, inner), self.catalog)
        self.assertEqual(result, self.rows([self.x, total], (1, 70, 2)))

    def test_dependent_join_predicate(self):
        correlated = Select(Compare("<=", ref(self.y), ref(self.x)), self.s)
        result = evaluate(DependentJoin(Compare(">", ref(self.z), lit(15)), self.r, correlated), self.catalog)
        self.assertEqual(result, self.rows([self.x, self.y, self.z], (1, 1, 20, 6), (2, 1, 20, 3)))

    def test_unbound_free_variable(self):
        with self.assertRaises(UnboundAttributeError):
            evaluate(Select(eq(self.x, self.y), self.s), self.catalog)
        result = evaluate(Select(eq(self.x, self.y), self.s), self.catalog, {self.x: 1})
        self.assertEqual(result.total(), 4)

    # -------------------------------------------------- random inputs ---------------------------------------------------

    def random_catalog(self, r_rows, s_rows, other_rows=()):
        def table(schema, rows):
            return Relation.from_rows(schema, [(Tuple(dict(zip(schema, row[:-1]))), row[-1]) for row in rows])

        return {"R": table([self.x], r_rows), "S": table([self.y, self.z], s_rows),
                "S2": table([self.y, self.z], other_rows)}

    @given(one_column, two_columns, comparisons)
    def test_filtering_joins_are_contained_in_their_left_input(self, r_rows, s_rows, op):
        catalog = self.random_catalog(r_rows, s_rows)
        predicate = Compare(op, ref(self.x), ref(self.z))
        left = catalog["R"]
        for kind in (SemiJoin, AntiJoin):
            result = evaluate(kind(predicate, self.r, self.s), catalog)
            self.assertEqual(result.schema, left.schema)
            for t, n in result.items():
                self.assertEqual(n, left.multiplicity(t))

    @given(one_column, two_columns, comparisons)
    def test_outer_join_is_join_plus_padded_antijoin(self, r_rows, s_rows, op):
        catalog = self.random_catalog(r_rows, s_rows)
        predicate = Compare(op, ref(self.x), ref(self.y))
        padded = NullPad([self.y, self.z], AntiJoin(predicate, self.r, self.s))
        self.assertEqual(evaluate(OuterJoin(predicate, self.r, self.s), catalog),
                         evaluate(Union(Join(predicate, self.r, self.s), padded), catalog))

    @given(two_columns)
    def test_projection_map_and_rename_conserve_multiplicity(self, s_rows):
        catalog = self.random_catalog([], s_rows)
        source = catalog["S"]
        m = fresh_attribute("m")
        w = fresh_attribute("w")
        total = Arith("+", ref(self.y), ref(self.z))
        self.assertEqual(evaluate(Project([self.y], self.s), catalog).total(), source.total())
        mapped = evaluate(Map(m, total, self.s), catalog)
        renamed = evaluate(Rename(w, self.y, self.s), catalog)
        self.assertEqual(mapped.total(), source.total())
        for t, n in source.items():
            self.assertEqual(mapped.multiplicity(t.concat(Tuple({m: eval_scalar(total, t)}))), n)
            self.assertEqual(renamed.multiplicity(Tuple({w: t[self.y], self.z: t[self.z]})), n)

    @given(one_column, two_columns)
    def test_cross_multiplicities_are_products(self, r_rows, s_rows):
        catalog = self.random_catalog(r_rows, s_rows)
        crossed = evaluate(Cross(self.r, self.s), catalog)
        self.assertEqual(crossed.total(), catalog["R"].total() * catalog["S"].total())
        for l, n in catalog["R"].items():
            for r, m in catalog["S"].items():
                self.assertEqual(crossed.multiplicity(l.concat(r)), n * m)

    @given(two_columns, two_columns)
    def test_set_operations_combine_multiplicities(self, first_rows, second_rows):
        catalog = self.random_catalog([], first_rows, second_rows)
        first, second = catalog["S"], catalog["S2"]
        other = Scan("S2", [self.y, self.z])
        tuples = set(t for t, _ in first.items()) | set(t for t, _ in second.items())
        for kind, combine in ((Union, lambda a, b: a + b), (Intersect, min), (Except, lambda a, b: max(a - b, 0))):
            result = evaluate(kind(self.s, other), catalog)
            for t in tuples:
                self.assertEqual(result.multiplicity(t), combine(first.multiplicity(t), second.multiplicity(t)))

    @given(one_column, two_columns)
    def test_results_have_the_plan_schema(self, r_rows, s_rows):
        catalog = self.random_catalog(r_rows, s_rows)
        cnt = fresh_attribute("cnt")
        total = fresh_attribute("total")
        m = fresh_attribute("m")
        w = fresh_attribute("w")
        duplicate_free = [ProjectDistinct([self.y], self.s),
                          GroupBy([self.y], [(cnt, AggFn(AggFn.COUNT_STAR))], self.s),
                          GroupBy([], [(total, AggFn(AggFn.SUM, self.z))], self.s)]
        others = [Project([self.z], self.s), Map(m, Arith("*", ref(self.y), lit(2)), self.s),
                  Rename(w, self.x, self.r), NullPad([w], self.r), Join(eq(self.x, self.y), self.r, self.s),
                  SemiJoin(eq(self.x, self.y), self.r, self.s), OuterJoin(eq(self.x, self.y), self.r, self.s),
                  DependentJoin(TRUE, self.r, Select(eq(self.y, self.x), self.s))]
        for plan in duplicate_free + others:
            self.assertEqual(evaluate(plan, catalog).schema, plan.schema)
        for plan in duplicate_free:
            self.assertTrue(evaluate(plan, catalog).is_duplicate_free())


if __name__ == '__main__':
    unittest.main()
