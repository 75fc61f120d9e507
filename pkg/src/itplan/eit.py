"""EIT*: a reverse edge-queue A* with sparse collision checks feeding an AEES-style forward search."""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

from .queue import LexQueue
from .search import BATCH, FORWARD, REVERSE, BatchSearch

INF = math.inf
Edge = Tuple[int, int]


def inflate(w: float, x: float) -> float:
    """w * x with the convention that an infinite factor leaves zero at zero."""
    if x == 0.0:
        return 0.0
    return INF if math.isinf(w) else w * x


class ForwardEstimates(NamedTuple):
    edge: Edge
    s_hat: float
    s_bar: float
    r_bar: float


def select_forward_edge(entries: Iterable[ForwardEstimates], w: float) -> ForwardEstimates:
    """Pick the next forward edge from (edge, s_hat, s_bar, r_bar) entries.

    Prefers the least-effort edge among those whose inadmissible estimate lies
    within ``w`` of the best one, then the best inadmissible estimate, then
    the best admissible bound. Ties fall to (r_bar, s_hat, source, target).
    """
    entries = list(entries)
    if not entries:
        raise ValueError("no forward edges to select from")
    e_hat = min(entries, key=lambda e: (e.s_hat, e.r_bar, e.edge))
    e_bar = min(entries, key=lambda e: (e.s_bar, e.r_bar, e.s_hat, e.edge))
    cap = inflate(w, e_bar.s_bar)
    within = [e for e in entries if e.s_bar <= cap and not math.isinf(e.s_bar)]
    limit = inflate(w, e_hat.s_hat)
    if within:
        e_eff = min(within, key=lambda e: (e.r_bar, e.s_hat, e.edge))
        if e_eff.s_bar <= limit:
            return e_eff
    if e_bar.s_bar <= limit:
        return e_bar
    return e_hat


class EitSearch(BatchSearch):
    """One EIT* run.

    ``initial_inflation`` is the inflation factor before the first solution and
    ``final_inflation`` the one afterwards. The sparse collision-checking
    resolution starts at ``initial_resolution`` each batch and doubles whenever
    the forward search finds a reverse-tree edge in collision.
    """

    planner_id = "eit"

    def __init__(self, problem, *, initial_inflation: float = INF, final_inflation: float = 1.0,
                 initial_resolution: int = 1, **kwargs):
        if not initial_inflation >= 1 or not final_inflation >= 1:
            raise ValueError("inflation factors must be >= 1")
        if int(initial_resolution) < 1:
            raise ValueError(f"initial_resolution must be >= 1, got {initial_resolution}")
        self.initial_inflation = float(initial_inflation)
        self.final_inflation = float(final_inflation)
        self.initial_resolution = int(initial_resolution)
        self.w = self.initial_inflation
        self.d = self.initial_resolution
        # (batch, d) each time the resolution is set
        self.resolution_trace: List[Tuple[int, int]] = []
        self.restarts = 0
        super().__init__(problem, **kwargs)

    def params(self) -> dict:
        p = super().params()
        p.update(initial_inflation=None if math.isinf(self.initial_inflation) else self.initial_inflation,
                 final_inflation=self.final_inflation, initial_resolution=self.initial_resolution)
        return p

    # -- setup ------------------------------------------------------------------------

    def reset_searches(self) -> None:
        g = self.graph
        self.QF_hat = LexQueue()
        self.QF_bar = LexQueue()
        self.QF_eff = LexQueue()
        self.fwd_in: Dict[int, Set[Edge]] = {}
        self.fwd_out: Dict[int, Set[Edge]] = {}
        self._edge_h: Dict[Edge, Tuple[float, float, float]] = {}
        self.d = self.initial_resolution
        self.resolution_trace.append((g.batches, self.d))
        self._reset_reverse()
        self._expand_forward(g.start)

    def _reset_reverse(self) -> None:
        g = self.graph
        self.h_hat: Dict[int, float] = {gl: 0.0 for gl in g.goals}
        self.h_bar: Dict[int, float] = {gl: 0.0 for gl in g.goals}
        self.e_bar: Dict[int, float] = {gl: 0.0 for gl in g.goals}
        self.closed: Set[int] = set()
        self.rparent: Dict[int, int] = {}
        self.rchildren: Dict[int, Set[int]] = {}
        self.QR = LexQueue()
        self._n_closed = 0
        self._n_in_tree = sum(len(self.fwd_in.get(gl, ())) for gl in g.goals)
        for gl in g.goals:
            self._expand_reverse(gl)

    def restart_reverse(self) -> None:
        """Double the sparse resolution and search the reverse tree from scratch."""
        self.d *= 2
        self.resolution_trace.append((self.graph.batches, self.d))
        self.restarts += 1
        self._reset_reverse()
        for e in list(self.QF_hat):
            self._fq_key(e)

    # -- heuristics -------------------------------------------------------------------------

    def edge_heuristics(self, s: int, t: int) -> Tuple[float, float, float]:
        """(c_hat, c_bar, e_bar) of edge (s, t), cached for the batch."""
        e = (s, t)
        h = self._edge_h.get(e)
        if h is None:
            h = self._edge_h.get((t, s))
        if h is None:
            g = self.graph
            a, b = g.coords[s], g.coords[t]
            obj = self.objective
            chat = obj.admissible_edge_heuristic(a, b)
            if hasattr(obj, "inadmissible_from_deltas"):
                cbar = obj.inadmissible_from_deltas(g.delta(s), g.delta(t))
            else:
                cbar = obj.inadmissible_edge_heuristic(a, b)
            h = (chat, cbar, obj.effort_edge_heuristic(a, b))
            self._edge_h[e] = h
        return h

    def hhat(self, x: int) -> float:
        return self.h_hat.get(x, INF)

    def hbar(self, x: int) -> float:
        return self.h_bar.get(x, INF)

    def ebar(self, x: int) -> float:
        return self.e_bar.get(x, INF)

    def compute_s_hat(self, s: int, t: int) -> float:
        return self.graph.gF(s) + self.edge_heuristics(s, t)[0] + self.h_hat.get(t, INF)

    def compute_s_bar(self, s: int, t: int) -> float:
        return self.graph.gF(s) + self.edge_heuristics(s, t)[1] + self.h_bar.get(t, INF)

    def compute_r_bar(self, s: int, t: int) -> float:
        return self.edge_heuristics(s, t)[2] + self.e_bar.get(t, INF)

    def estimates(self, s: int, t: int) -> ForwardEstimates:
        return ForwardEstimates((s, t), self.compute_s_hat(s, t), self.compute_s_bar(s, t), self.compute_r_bar(s, t))

    def in_reverse_tree(self, x: int) -> bool:
        return x in self.rparent or x in self.graph.goal_set

    # -- forward queue ---------------------------------------------------------------------------

    def _fq_key(self, e: Edge) -> None:
        est = self.estimates(*e)
        self.counters.queue_pushes += 1
        self.QF_hat.push(e, (est.s_hat, est.r_bar) + e)
        self.QF_bar.push(e, (est.s_bar, est.r_bar, est.s_hat) + e)
        self.QF_eff.push(e, (est.r_bar, est.s_hat) + e)

    def _fq_push(self, s: int, t: int) -> None:
        e = (s, t)
        self._fq_key(e)
        ins = self.fwd_in.setdefault(t, set())
        if e in ins:
            return
        ins.add(e)
        self.fwd_out.setdefault(s, set()).add(e)
        if t in self.closed:
            self._n_closed += 1
        if self.in_reverse_tree(t):
            self._n_in_tree += 1

    def _fq_discard(self, e: Edge) -> None:
        if e not in self.QF_hat:
            return
        self.QF_hat.remove(e)
        self.QF_bar.remove(e)
        self.QF_eff.remove(e)
        s, t = e
        self.fwd_in[t].discard(e)
        self.fwd_out[s].discard(e)
        if t in self.closed:
            self._n_closed -= 1
        if self.in_reverse_tree(t):
            self._n_in_tree -= 1

    def _expand_forward(self, x: int) -> None:
        for y in self.graph.neighbors(x):
            self._fq_push(x, y)

    def _target_changed(self, t: int) -> None:
        for e in self.fwd_in.get(t, ()):
            self._fq_key(e)

    def _g_changed(self, xs: List[int]) -> None:
        for x in xs:
            for e in self.fwd_out.get(x, ()):
                self._fq_key(e)

    def forward_entries(self) -> List[ForwardEstimates]:
        return [self.estimates(*e) for e in self.QF_hat]

    def get_best_forward_edge(self) -> Edge:
        """The forward edge to process next; uses the heaps directly for w in {1, inf}."""
        w = self.w
        best_hat, key_hat = self.QF_hat.peek()
        best_bar, key_bar = self.QF_bar.peek()
        s_hat_min, s_bar_min = key_hat[0], key_bar[0]
        if w == 1.0:
            return best_bar if s_bar_min <= s_hat_min else best_hat
        if math.isinf(w) and s_hat_min > 0.0 and s_bar_min > 0.0:
            best_eff, key_eff = self.QF_eff.peek()
            if not math.isinf(key_eff[0]) and not math.isinf(self.compute_s_bar(*best_eff)):
                return best_eff
            return best_bar
        return select_forward_edge(self.forward_entries(), w).edge

    # -- reverse search -----------------------------------------------------------------------------

    def reverse_key(self, s: int, t: int) -> Tuple[float, float]:
        g = self.graph
        chat, _, ebar = self.edge_heuristics(s, t)
        return (self.h_hat.get(s, INF) + chat + g.ghat[t], self.e_bar.get(s, INF) + ebar + g.dbar[t])

    def _expand_reverse(self, x: int) -> None:
        for y in self.graph.neighbors(x):
            self.counters.queue_pushes += 1
            self.QR.push((x, y), self.reverse_key(x, y) + (x, y))

    def _close(self, x: int) -> None:
        if x not in self.closed:
            self.closed.add(x)
            self._n_closed += len(self.fwd_in.get(x, ()))

    def iterate_reverse(self) -> None:
        g = self.graph
        (s, t), _ = self.QR.pop()
        self._close(s)
        if g.is_blacklisted(s, t):
            return
        witness = g.sparse_collision(s, t, self.d)
        if witness is not None:
            g.blacklist_edge(s, t, witness)
            self._fq_discard((s, t))
            self._fq_discard((t, s))
            return
        chat, cbar, ebar = self.edge_heuristics(t, s)
        changed = False
        hb = self.h_bar[s] + cbar
        if hb < self.h_bar.get(t, INF):
            self.h_bar[t] = hb
            changed = True
        eb = self.e_bar[s] + ebar
        if eb < self.e_bar.get(t, INF):
            self.e_bar[t] = eb
            changed = True
        hh = self.h_hat[s] + chat
        if self.h_hat.get(t, INF) > hh:
            self.h_hat[t] = hh
            old = self.rparent.get(t)
            if old is not None:
                self.rchildren[old].discard(t)
            elif t not in g.goal_set:
                self._n_in_tree += len(self.fwd_in.get(t, ()))
            self.rparent[t] = s
            self.rchildren.setdefault(s, set()).add(t)
            changed = True
            self._expand_reverse(t)
        if self.h_bar.get(t, INF) < self.h_hat.get(t, INF):
            self.h_bar[t] = self.h_hat[t]
        if changed:
            self._target_changed(t)

    def reverse_suspended(self) -> bool:
        if not self.QR or not self.QF_hat:
            return True
        if self._n_closed == len(self.QF_hat):
            return True
        if math.isinf(self.w) and self._n_in_tree > 0:
            return True
        (_, t), key_hat = self.QF_hat.peek()
        if t not in self.closed:
            return False
        return self.QR.peek_key()[0] >= key_hat[0]

    # -- forward search ---------------------------------------------------------------------------------

    def forward_ready(self) -> bool:
        return bool(self.QF_hat) and self.QF_hat.peek_key()[0] < self.c_current

    def next_action(self) -> str:
        if not self.reverse_suspended():
            return REVERSE
        if self.forward_ready():
            return FORWARD
        return BATCH

    def iterate_forward(self) -> None:
        g = self.graph
        s, t = self.get_best_forward_edge()
        self._fq_discard((s, t))
        if g.is_forward_edge(s, t):
            self._expand_forward(t)
            return
        gs = g.gF(s)
        if gs + self.edge_heuristics(s, t)[0] >= g.gF(t):
            return
        if g.validate_edge(s, t):
            c = g.edge_cost(s, t)
            if gs + c + self.hhat(t) < self.c_current and gs + c < g.gF(t) and not g.is_forward_ancestor(t, s):
                changed = g.set_forward_parent(t, s, c)
                self._g_changed(changed)
                self._expand_forward(t)
                self.refresh_solution()
        else:
            g.blacklist_edge(s, t)
            self._fq_discard((t, s))
            if self.rparent.get(s) == t or self.rparent.get(t) == s:
                self.restart_reverse()

    def on_solution_improved(self) -> None:
        self.w = self.final_inflation

    # -- views -----------------------------------------------------------------------------------------

    def reverse_edges(self) -> List[tuple]:
        return sorted((p, c) for c, p in self.rparent.items())

    def settled_states(self) -> List[int]:
        """Closed states, or every labelled state once the reverse queue is empty."""
        if not self.QR:
            return sorted(self.h_hat)
        return sorted(self.closed)
