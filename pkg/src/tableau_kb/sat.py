"""A small CDCL SAT solver used by the finite-model oracle.

Literals are non-zero integers in the DIMACS convention. Decisions follow a
fixed variable order with a per-variable preferred polarity and there are no
restarts, so a given clause set always yields the same model.
"""

from __future__ import annotations


class BudgetExhausted(Exception):
    pass


class Solver:
    def __init__(self):
        self.nvars = 0
        self.clauses = []
        self.watches = {}
        self.units = []
        self.trivially_unsat = False
        self.preferred = {}
        self.order = []

    def new_var(self, prefer_true=False) -> int:
        self.nvars += 1
        v = self.nvars
        self.order.append(v)
        if prefer_true:
            self.preferred[v] = True
        return v

    def add_clause(self, lits) -> None:
        clause = []
        seen = set()
        for lit in lits:
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        if not clause:
            self.trivially_unsat = True
        elif len(clause) == 1:
            self.units.append(clause[0])
        else:
            self._attach(clause)

    def _attach(self, clause):
        self.clauses.append(clause)
        self.watches.setdefault(clause[0], []).append(clause)
        self.watches.setdefault(clause[1], []).append(clause)

    # -- search state helpers
    def _value(self, lit):
        v = self.val[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit, reason):
        var = abs(lit)
        self.val[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)

    def _propagate(self):
        trail = self.trail
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            watching = self.watches.get(false_lit)
            if not watching:
                continue
            kept = []
            i = 0
            n = len(watching)
            conflict = None
            while i < n:
                c = watching[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if self._value(first) == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(c)):
                    if self._value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches.setdefault(c[1], []).append(c)
                        break
                else:
                    kept.append(c)
                    if self._value(first) == -1:
                        conflict = c
                        kept.extend(watching[i:])
                        break
                    self._enqueue(first, c)
            self.watches[false_lit] = kept
            if conflict is not None:
                return conflict
        return None

    def _analyze(self, conflict):
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        clause = conflict
        idx = len(self.trail) - 1
        current = len(self.trail_lim)
        while True:
            for q in clause:
                if p is not None and q == p:
                    continue
                v = abs(q)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                if self.level[v] == current:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[abs(p)]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda j: self.level[abs(learnt[j])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backjump(self, level):
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            var = abs(lit)
            self.val[var] = 0
            self.reason[var] = None
            pos = self.position[var]
            if pos < self.next_pos:
                self.next_pos = pos
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def solve(self, budget=None):
        """Return ``{var: bool}`` for a model, or None if unsatisfiable.

        ``budget`` bounds decisions plus conflicts; exceeding it raises
        BudgetExhausted.
        """
        if self.trivially_unsat:
            return None
        n = self.nvars
        self.val = [0] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason = [None] * (n + 1)
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.position = [0] * (n + 1)
        for i, v in enumerate(self.order):
            self.position[v] = i
        self.next_pos = 0
        self.steps = 0
        for lit in self.units:
            val = self._value(lit)
            if val == -1:
                return None
            if val == 0:
                self._enqueue(lit, None)
        order = self.order
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.steps += 1
                if not self.trail_lim:
                    return None
                learnt, level = self._analyze(conflict)
                self._backjump(level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self._enqueue(learnt[0], learnt)
                continue
            while self.next_pos < len(order) and self.val[order[self.next_pos]] != 0:
                self.next_pos += 1
            if self.next_pos == len(order):
                return {v: self.val[v] == 1 for v in range(1, n + 1)}
            self.steps += 1
            if budget is not None and self.steps > budget:
                raise BudgetExhausted(self.steps)
            var = order[self.next_pos]
            self.trail_lim.append(len(self.trail))
            self._enqueue(var if self.preferred.get(var) else -var, None)
