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

"""Top-down unnesting of dependent joins.

Every correlated dependent join L ▶_p R is decomposed into L ⋈_{p ∧ natural} (D ▶ R) where D is the duplicate-free
projection of L onto the attributes R needs. The dependent join with D is then pushed down R operator by operator
until the remaining subtree no longer depends on D, where it is replaced by a plain cross product with (a renamed
copy of) D or, when the selections above have proven every domain column equal to a local expression, by maps
computing those columns. Each operator of the input is processed by the push-down at most once."""

import dataclasses
import logging
from dataclasses import dataclass, field

import pyunnest.unnest_config
import pyunnest.unnest_plan as plan_ir
from pyunnest.unnest_attribute import fresh_attribute, sorted_attributes
from pyunnest.unnest_errors import (DepthExceededError, IncompleteEquivalenceError, MissingRepresentativeError,
                                    UnsupportedOperatorError)
from pyunnest.unnest_expression import (AttrRef, Compare, TRUE, conjunction, conjuncts, free_vars_expr,
                                        null_safe_eq, substitute)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnnestingInfo:
    """State handed down the push-down of one domain D.

    rename_map gives, for every domain attribute, the attribute the current subtree's output must carry it under.
    equivalences maps a domain attribute to a local expression a selection above has proven equal to it; only
    expressions over the current subtree's schema are kept."""
    domain_plan: plan_ir.Plan
    outer_refs: frozenset
    rename_map: dict
    equivalences: dict = field(default_factory=dict)
    depth: int = 0

    def targets(self):
        return [self.rename_map[d] for d in sorted_attributes(self.outer_refs)]

    def with_targets(self, rename_map):
        return dataclasses.replace(self, rename_map=rename_map)

    def restricted_to(self, attributes):
        kept = dict((d, e) for d, e in self.equivalences.items() if free_vars_expr(e) <= attributes)
        if len(kept) == len(self.equivalences):
            return self
        return dataclasses.replace(self, equivalences=kept)

    def without_equivalences(self):
        if not self.equivalences:
            return self
        return dataclasses.replace(self, equivalences={})


class PushDownCounter:
    """Counts how often the push-down processed each input node."""

    def __init__(self) -> None:
        # nodes are kept alive so their ids cannot be reused while counting
        self._entries = {}

    def record(self, node):
        _, count = self._entries.get(id(node), (node, 0))
        self._entries[id(node)] = (node, count + 1)

    def visits(self, node):
        return self._entries.get(id(node), (node, 0))[1]

    def max_visits(self):
        return max((count for _, count in self._entries.values()), default=0)

    def total(self):
        return sum(count for _, count in self._entries.values())

    def clear(self):
        self._entries = {}


# -------------------------------------------------- ANALYSIS HELPERS -------------------------------------------------

def _is_correlated(node):
    return bool(node.right.free_vars & node.left.schema)


def find_dependent_joins(plan):
    """Paths (tuples of child indices) of the correlated dependent joins in plan, topmost first."""
    return [path for path, node in plan_ir.walk_with_paths(plan)
            if isinstance(node, plan_ir.DependentJoin) and _is_correlated(node)]


def compute_domain(left, right_free_vars):
    """D = the duplicate-eliminating projection of left onto the attributes the right side needs from it."""
    domain = plan_ir.ProjectDistinct(sorted_attributes(right_free_vars), left)
    plan_ir.schema_of(domain)
    return domain


def rewrite_columns(info, e):
    """Replaces every domain attribute referenced in e by its current representative."""
    used = free_vars_expr(e) & info.outer_refs
    mapping = {}
    for d in sorted_attributes(used):
        if d not in info.rename_map:
            raise MissingRepresentativeError(d)
        mapping[d] = info.rename_map[d]
    return substitute(e, mapping)


def collect_equivalences(info, pred, available=None):
    """Records, for each top-level conjunct d = e (or e = d) with d a domain attribute and e free of domain
    attributes, e as an equivalent of d. Existing entries are kept. When available is given, only expressions over
    those attributes qualify."""
    equivalences = dict(info.equivalences)
    for conjunct in conjuncts(pred):
        if not isinstance(conjunct, Compare) or conjunct.op != "=":
            continue
        for side, other in ((conjunct.left, conjunct.right), (conjunct.right, conjunct.left)):
            if not isinstance(side, AttrRef) or side.attribute not in info.outer_refs:
                continue
            local = free_vars_expr(other)
            if local & info.outer_refs:
                continue
            if available is not None and not local <= available:
                continue
            equivalences.setdefault(side.attribute, other)
    if equivalences == info.equivalences:
        return info
    return dataclasses.replace(info, equivalences=equivalences)


# ---------------------------------------------- SIMPLE DEPENDENT JOINS -----------------------------------------------

def _eliminate(node):
    if not isinstance(node, plan_ir.DependentJoin):
        return node
    if not _is_correlated(node):
        return plan_ir.Join(node.predicate, node.left, node.right)

    spine = []
    rest = node.right
    while isinstance(rest, (plan_ir.Select, plan_ir.Map)):
        spine.append(rest)
        rest = rest.child
    if not spine or rest.free_vars & node.left.schema:
        return node

    result = plan_ir.Join(TRUE, node.left, rest)
    for hoisted in reversed(spine):
        result = hoisted.with_children((result,))
    if node.predicate != TRUE:
        result = plan_ir.Select(node.predicate, result)
    return result


def simple_djoin_elimination(plan):
    """Moves selections and maps whose correlation lives in their own predicate or expression above the dependent
    join, and turns dependent joins whose right side is then independent of the left into joins. Dependent joins
    this cannot decorrelate are returned unchanged."""
    return plan_ir.transform_bottom_up(plan, _eliminate)


# ------------------------------------------------------ REWRITER -----------------------------------------------------

class Unnester:
    def __init__(self, config=None, counter=None) -> None:
        self._config = config if config is not None else pyunnest.unnest_config.UnnestConfig()
        self._counter = counter if counter is not None else PushDownCounter()

    def get_counter(self):
        return self._counter

    def unnest(self, plan):
        plan_ir.validate_plan(plan)
        plan = simple_djoin_elimination(plan)
        if plan_ir.count_nodes(plan, plan_ir.DependentJoin) == 0:
            return plan
        return self._unnest(plan)

    def _unnest(self, node):
        if plan_ir.count_nodes(node, plan_ir.DependentJoin) == 0:
            return node
        if isinstance(node, plan_ir.DependentJoin):
            return self.decompose(node.predicate, self._unnest(node.left), node.right, 0)
        return node.with_children(tuple(self._unnest(child) for child in node.children()))

    def decompose(self, predicate, left, right, depth):
        """left ▶_predicate right, with left already free of dependent joins, as a join with D ▶ right."""
        if depth > self._config.get_max_depth():
            raise DepthExceededError("dependent joins nested deeper than " + str(self._config.get_max_depth()))
        free = right.free_vars & left.schema
        if not free:
            return plan_ir.Join(predicate, left, self._unnest(right))

        domain = compute_domain(left, free)
        rename_map = dict((d, fresh_attribute(d.base)) for d in sorted_attributes(free))
        info = UnnestingInfo(domain, frozenset(free), rename_map, {}, depth)
        logger.debug("decomposing dependent join over %s at depth %d",
                     ", ".join(str(d) for d in sorted_attributes(free)), depth)

        pushed = self.push_down(info, right)
        condition = conjunction([predicate] + [null_safe_eq(d, rename_map[d]) for d in sorted_attributes(free)])
        return plan_ir.Project(left.schema | right.schema, plan_ir.Join(condition, left, pushed))

    def push_down(self, info, node):
        """A plan equivalent to D ▶ node with every domain attribute d carried as info.rename_map[d]."""
        self._counter.record(node)
        if not node.free_vars & info.outer_refs:
            return self._stop(info, node)
        rule = _RULES.get(type(node))
        if rule is None:
            raise UnsupportedOperatorError("no push-down rule for " + type(node).__name__)
        return rule(self, info, node)

    # ---------------------------------------------------- stop rule ----------------------------------------------------

    def _stop(self, info, node):
        inner = self._unnest(node)
        mode = self._config.get_perfect_mode()
        uncovered = [d for d in sorted_attributes(info.outer_refs)
                     if d not in info.equivalences or not free_vars_expr(info.equivalences[d]) <= inner.schema]

        if mode == pyunnest.unnest_config.UnnestConfig.ALWAYS and uncovered:
            raise IncompleteEquivalenceError("no local equivalent for " + ", ".join(str(d) for d in uncovered))
        if mode != pyunnest.unnest_config.UnnestConfig.NEVER and not uncovered:
            result = inner
            for d in sorted_attributes(info.outer_refs):
                result = plan_ir.Map(info.rename_map[d], info.equivalences[d], result)
            return result
        return plan_ir.Cross(self._renamed_domain(info), inner)

    @staticmethod
    def _renamed_domain(info):
        result = info.domain_plan
        for d in sorted_attributes(info.outer_refs):
            result = plan_ir.Rename(info.rename_map[d], d, result)
        return result

    # ------------------------------------------------------ rules ------------------------------------------------------

    def _push_projection(self, info, node):
        child = self.push_down(info.restricted_to(node.child.schema), node.child)
        return type(node)(tuple(node.attributes) + tuple(info.targets()), child)

    def _push_select(self, info, node):
        inner = collect_equivalences(info, node.predicate, node.child.schema)
        return plan_ir.Select(rewrite_columns(info, node.predicate), self.push_down(inner, node.child))

    def _push_map(self, info, node):
        child = self.push_down(info.restricted_to(node.child.schema), node.child)
        return plan_ir.Map(node.attribute, rewrite_columns(info, node.expression), child)

    def _push_rename(self, info, node):
        child = self.push_down(info.restricted_to(node.child.schema - {node.old}), node.child)
        return plan_ir.Rename(node.new, node.old, child)

    def _push_nullpad(self, info, node):
        return plan_ir.NullPad(node.attributes, self.push_down(info.restricted_to(node.child.schema), node.child))

    def _push_group_by(self, info, node):
        child = self.push_down(info.restricted_to(frozenset(node.keys)), node.child)
        return plan_ir.GroupBy(tuple(node.keys) + tuple(info.targets()), node.aggregates, child)

    def _push_set_operation(self, info, node):
        # both inputs keep the same representatives so their schemas stay identical
        return type(node)(self.push_down(info, node.left), self.push_down(info, node.right))

    def _split(self, info):
        right_map = dict((d, fresh_attribute(t.base)) for d, t in info.rename_map.items())
        condition = [null_safe_eq(info.rename_map[d], right_map[d]) for d in sorted_attributes(info.outer_refs)]
        return right_map, condition

    def _predicate(self, info, node):
        return TRUE if isinstance(node, plan_ir.Cross) else rewrite_columns(info, node.predicate)

    def _push_join(self, info, node):
        predicate = self._predicate(info, node)
        kind = plan_ir.Join if predicate != TRUE or isinstance(node, plan_ir.Join) else plan_ir.Cross
        if not node.right.free_vars & info.outer_refs:
            left = self.push_down(info.restricted_to(node.left.schema), node.left)
            return self._rebuild(kind, predicate, left, self._unnest(node.right))
        if not node.left.free_vars & info.outer_refs:
            right = self.push_down(info.restricted_to(node.right.schema), node.right)
            return self._rebuild(kind, predicate, self._unnest(node.left), right)

        right_map, condition = self._split(info)
        left = self.push_down(info.restricted_to(node.left.schema), node.left)
        right = self.push_down(info.with_targets(right_map).restricted_to(node.right.schema), node.right)
        joined = plan_ir.Join(conjunction([predicate] + condition), left, right)
        return plan_ir.Project(node.schema | set(info.targets()), joined)

    @staticmethod
    def _rebuild(kind, predicate, left, right):
        if kind is plan_ir.Cross:
            return plan_ir.Cross(left, right)
        return kind(predicate, left, right)

    def _push_semi_or_anti_join(self, info, node):
        predicate = rewrite_columns(info, node.predicate)
        left = self.push_down(info.restricted_to(node.left.schema), node.left)
        if not node.right.free_vars & info.outer_refs:
            return type(node)(predicate, left, self._unnest(node.right))
        right_map, condition = self._split(info)
        right = self.push_down(info.with_targets(right_map).without_equivalences(), node.right)
        return type(node)(conjunction([predicate] + condition), left, right)

    def _push_outer_join(self, info, node):
        predicate = rewrite_columns(info, node.predicate)
        left = self.push_down(info.restricted_to(node.left.schema), node.left)
        if not node.right.free_vars & info.outer_refs:
            return plan_ir.OuterJoin(predicate, left, self._unnest(node.right))
        right_map, condition = self._split(info)
        right = self.push_down(info.with_targets(right_map).without_equivalences(), node.right)
        joined = plan_ir.OuterJoin(conjunction([predicate] + condition), left, right)
        return plan_ir.Project(node.schema | set(info.targets()), joined)

    def _push_dependent_join(self, info, node):
        left = self.push_down(info.restricted_to(node.left.schema), node.left)
        mapping = dict((d, info.rename_map[d]) for d in info.outer_refs)
        right = plan_ir.rename_references(node.right, mapping)
        predicate = substitute(node.predicate, mapping)
        return self.decompose(predicate, left, right, info.depth + 1)


_RULES = {
    plan_ir.Select: Unnester._push_select,
    plan_ir.Map: Unnester._push_map,
    plan_ir.ProjectDistinct: Unnester._push_projection,
    plan_ir.Project: Unnester._push_projection,
    plan_ir.Rename: Unnester._push_rename,
    plan_ir.NullPad: Unnester._push_nullpad,
    plan_ir.GroupBy: Unnester._push_group_by,
    plan_ir.Union: Unnester._push_set_operation,
    plan_ir.Intersect: Unnester._push_set_operation,
    plan_ir.Except: Unnester._push_set_operation,
    plan_ir.Cross: Unnester._push_join,
    plan_ir.Join: Unnester._push_join,
    plan_ir.SemiJoin: Unnester._push_semi_or_anti_join,
    plan_ir.AntiJoin: Unnester._push_semi_or_anti_join,
    plan_ir.OuterJoin: Unnester._push_outer_join,
    plan_ir.DependentJoin: Unnester._push_dependent_join,
}


def push_down(info, subtree, cfg=None, counter=None):
    return Unnester(cfg, counter).push_down(info, subtree)


def unnest(plan, cfg=None, counter=None):
    """A plan without dependent joins that evaluates to the same relation as plan on every catalog."""
    return Unnester(cfg, counter).unnest(plan)
