"""AIT*: a reverse LPA* over the implicit graph feeding a lazy forward A*."""
from __future__ import annotations

import math
from typing import Dict, List, Set, Tuple

from .queue import LexQueue
from .search import BATCH, FORWARD, REVERSE, BatchSearch

INF = math.inf
Edge = Tuple[int, int]


class AitSearch(BatchSearch):
    """One AIT* run.

    The reverse search computes ``h_con``/``h_exp`` labels with LPA* and the
    admissible edge heuristic only, so it never checks collisions. The forward
    search pops edges by ``g_F(s) + c_hat(s, t) + h_con[t]`` and validates them
    lazily. Forward keys are kept current: they are re-keyed whenever
    ``g_F(s)`` or ``h_con[t]`` changes.
    """

    planner_id = "ait"

    def reset_searches(self) -> None:
        g = self.graph
        self.h_con: Dict[int, float] = {}
        self.h_exp: Dict[int, float] = {}
        self.rparent: Dict[int, int] = {}
        self.rchildren: Dict[int, Set[int]] = {}
        self.QR = LexQueue()
        self.QF = LexQueue()
        self.fwd_in: Dict[int, Set[Edge]] = {}
        self.fwd_out: Dict[int, Set[Edge]] = {}
        # Targets of queued forward edges: the inconsistent ones, and all of them
        # keyed by their negated reverse key so the maximum is on top.
        self._incons_targets: Set[int] = set()
        self._target_keys = LexQueue()
        for gl in g.goals:
            self.h_con[gl] = 0.0
            self.h_exp[gl] = INF
            self._push_reverse(gl)
        self._expand_forward(g.start)

    # -- labels ---------------------------------------------------------------------

    def hcon(self, x: int) -> float:
        return self.h_con.get(x, INF)

    def hexp(self, x: int) -> float:
        return self.h_exp.get(x, INF)

    def is_consistent(self, x: int) -> bool:
        return self.h_con.get(x, INF) == self.h_exp.get(x, INF)

    def reverse_key(self, x: int) -> Tuple[float, float]:
        m = min(self.h_con.get(x, INF), self.h_exp.get(x, INF))
        return (m + self.graph.ghat[x], m)

    def forward_key(self, s: int, t: int) -> Tuple[float, float, float]:
        g = self.graph
        gs = g.gF(s)
        gc = gs + self.objective.admissible_edge_heuristic(g.coords[s], g.coords[t])
        return (gc + self.h_con.get(t, INF), gc, gs)

    def _push_reverse(self, x: int) -> None:
        self.counters.queue_pushes += 1
        self.QR.push(x, self.reverse_key(x) + (x,))

    # -- forward queue bookkeeping ---------------------------------------------------------

    def _fq_push(self, s: int, t: int) -> None:
        e = (s, t)
        self.counters.queue_pushes += 1
        self.QF.push(e, self.forward_key(s, t) + e)
        ins = self.fwd_in.get(t)
        if ins is None:
            ins = self.fwd_in[t] = set()
        if e in ins:
            return
        ins.add(e)
        self.fwd_out.setdefault(s, set()).add(e)
        if len(ins) == 1:
            self._track_target(t)

    def _fq_discard(self, e: Edge) -> None:
        self.QF.remove(e)
        s, t = e
        ins = self.fwd_in.get(t)
        if ins is not None and e in ins:
            ins.discard(e)
            self.fwd_out[s].discard(e)
            if not ins:
                del self.fwd_in[t]
                self._incons_targets.discard(t)
                self._target_keys.remove(t)

    def _fq_pop(self) -> Edge:
        e, _ = self.QF.peek()
        self._fq_discard(e)
        return e

    def _track_target(self, t: int) -> None:
        if self.is_consistent(t):
            self._incons_targets.discard(t)
        else:
            self._incons_targets.add(t)
        a, b = self.reverse_key(t)
        self._target_keys.push(t, (-a, -b))

    def _labels_changed(self, x: int, hcon_changed: bool) -> None:
        ins = self.fwd_in.get(x)
        if not ins:
            return
        self._track_target(x)
        if hcon_changed:
            for e in ins:
                self.QF.push(e, self.forward_key(*e) + e)

    def _g_changed(self, xs: List[int]) -> None:
        for x in xs:
            for e in self.fwd_out.get(x, ()):
                self.QF.push(e, self.forward_key(*e) + e)

    def _expand_forward(self, x: int) -> None:
        for y in self.graph.neighbors(x):
            self._fq_push(x, y)

    # -- reverse search --------------------------------------------------------------------

    def update_state(self, x: int) -> None:
        """Reconnect ``x`` to its best reverse neighbour and requeue it if inconsistent."""
        g = self.graph
        if x in g.goal_set:
            return
        best, parent = INF, None
        h_exp = self.h_exp
        for y, c in g.neighbor_costs(x):
            v = h_exp.get(y, INF) + c
            if v < best:
                best, parent = v, y
        old = self.rparent.get(x)
        if parent != old:
            if old is not None:
                self.rchildren[old].discard(x)
                del self.rparent[x]
            if parent is not None:
                self.rparent[x] = parent
                self.rchildren.setdefault(parent, set()).add(x)
        changed = best != self.h_con.get(x, INF)
        self.h_con[x] = best
        if self.is_consistent(x):
            self.QR.remove(x)
        else:
            self._push_reverse(x)
        self._labels_changed(x, changed)

    def iterate_reverse(self) -> None:
        x, _ = self.QR.pop()
        if self.hcon(x) < self.hexp(x):
            self.h_exp[x] = self.h_con[x]
            self._labels_changed(x, False)
        else:
            self.h_exp[x] = INF
            self._labels_changed(x, False)
            self.update_state(x)
            if x in self.graph.goal_set and not self.is_consistent(x):
                self._push_reverse(x)
        for y in self.graph.neighbors(x):
            self.update_state(y)

    def invalidate_reverse_branch(self, x: int) -> None:
        """Reset the reverse subtree rooted at ``x`` and let LPA* repair it.

        All labels of the branch are cleared before any state is updated, so no
        repaired state can pick up a stale label from the branch. Goals keep
        their labels. With zero-cost edges parent pointers can form cycles, so
        the walk tracks visited states.
        """
        goals = self.graph.goal_set
        branch, stack, seen = [], [x], {x}
        while stack:
            u = stack.pop()
            branch.append(u)
            for c in sorted(self.rchildren.get(u, ()), reverse=True):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        for u in branch:
            if u in goals:
                continue
            p = self.rparent.pop(u, None)
            if p is not None:
                self.rchildren[p].discard(u)
            self.h_con[u] = INF
            self.h_exp[u] = INF
            self.QR.remove(u)
            self._labels_changed(u, True)
        for u in reversed(branch):
            self.update_state(u)

    def reverse_suspended(self) -> bool:
        if not self.QR or not self.QF:
            return True
        (s, t), fkey = self.QF.peek()
        if not self.is_consistent(t):
            return False
        rkey = self.QR.peek_key()
        if rkey[0] >= fkey[0]:
            return True
        if not self._incons_targets:
            neg = self._target_keys.peek_key()
            if (-neg[0], -neg[1]) <= rkey[:2]:
                return True
        return False

    # -- forward search ------------------------------------------------------------------------

    def forward_ready(self) -> bool:
        return bool(self.QF) and self.QF.peek_key()[0] < self.c_current

    def next_action(self) -> str:
        if not self.reverse_suspended():
            return REVERSE
        if self.forward_ready():
            return FORWARD
        return BATCH

    def iterate_forward(self) -> None:
        g = self.graph
        s, t = self._fq_pop()
        if g.is_forward_edge(s, t):
            self._expand_forward(t)
            return
        gs = g.gF(s)
        if gs + self.objective.admissible_edge_heuristic(g.coords[s], g.coords[t]) >= g.gF(t):
            return
        if g.validate_edge(s, t):
            c = g.edge_cost(s, t)
            if gs + c + self.hcon(t) < self.c_current and gs + c < g.gF(t) and not g.is_forward_ancestor(t, s):
                old = g.parent.get(t)
                changed = g.set_forward_parent(t, s, c)
                self._g_changed(changed)
                if old is not None and old not in g.neighbors(t):
                    # The old tree edge was the only thing making these two neighbours.
                    self.update_state(t)
                    self.update_state(old)
                self._expand_forward(t)
                self.refresh_solution()
        else:
            g.blacklist_edge(s, t)
            self._fq_discard((t, s))
            if self.rparent.get(s) == t:
                self.invalidate_reverse_branch(s)
            elif self.rparent.get(t) == s:
                self.invalidate_reverse_branch(t)

    # -- views ---------------------------------------------------------------------------------

    def reverse_edges(self) -> List[tuple]:
        return sorted((p, c) for c, p in self.rparent.items())

    def settled_states(self) -> List[int]:
        """States whose labels LPA* guarantees correct at the current suspension point."""
        if not self.QR:
            return sorted(set(self.h_con) | set(self.h_exp))
        bound = self.QR.peek_key()[:2]
        return sorted(x for x in self.h_con if self.is_consistent(x) and self.reverse_key(x) <= bound)
