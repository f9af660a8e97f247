"""Exact combinatorial feasibility back-ends.

Transportation feasibility is decided by rational max-flow with shortest
augmenting paths (greedy warm start, then BFS augmentation); linear
feasibility by a phase-1 simplex with Bland's rule.  Everything is exact, so
certificates never depend on a tolerance.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .rational import Rational, ZERO, as_rat


@dataclass(frozen=True)
class TransportInstance:
    supplies: tuple
    demands: tuple
    edges: tuple  # (supply index, demand index) pairs; order fixes determinism

    @staticmethod
    def build(supplies: Sequence, demands: Sequence, edges: Sequence) -> "TransportInstance":
        return TransportInstance(
            tuple(as_rat(s) for s in supplies),
            tuple(as_rat(d) for d in demands),
            tuple((int(i), int(j)) for i, j in edges),
        )


@dataclass(frozen=True)
class TransportResult:
    feasible: bool
    plan: Optional[dict]  # (i, j) -> positive flow, exact conservation
    cut: Optional[frozenset]  # supply indices with deficient neighborhood


def _validate_transport(inst: TransportInstance) -> None:
    m, k = len(inst.supplies), len(inst.demands)
    if any(s < 0 for s in inst.supplies) or any(d < 0 for d in inst.demands):
        raise ValueError("supplies and demands must be nonnegative")
    if sum(inst.supplies, ZERO) != sum(inst.demands, ZERO):
        raise ValueError("total supply must equal total demand")
    for i, j in inst.edges:
        if not (0 <= i < m and 0 <= j < k):
            raise ValueError(f"edge ({i}, {j}) out of range")


def transport_feasible(inst: TransportInstance) -> TransportResult:
    """Decide feasibility, returning an exact plan or a deficient supply set.

    The cut certificate is a set A of supply indices whose admissible demand
    neighborhood has strictly smaller total demand than the supply of A.
    """
    _validate_transport(inst)
    m, k = len(inst.supplies), len(inst.demands)
    adj: list[list[int]] = [[] for _ in range(m)]
    radj: list[list[int]] = [[] for _ in range(k)]
    seen_edges = set()
    for i, j in inst.edges:
        if (i, j) not in seen_edges:
            seen_edges.add((i, j))
            adj[i].append(j)
            radj[j].append(i)
    flow: dict[tuple, Rational] = {}
    r_s = list(inst.supplies)
    r_d = list(inst.demands)

    # warm start: greedy saturation in edge order
    for i, j in inst.edges:
        if r_s[i] > 0 and r_d[j] > 0:
            push = min(r_s[i], r_d[j])
            flow[(i, j)] = flow.get((i, j), ZERO) + push
            r_s[i] -= push
            r_d[j] -= push

    visited_s = [False] * m
    while True:
        visited_s = [False] * m
        visited_d = [False] * k
        prev_d: dict[int, int] = {}  # demand j discovered from supply i
        prev_s: dict[int, Optional[int]] = {}  # supply i discovered from demand j (None = root)
        queue: deque[int] = deque()
        for i in range(m):
            if r_s[i] > 0:
                visited_s[i] = True
                prev_s[i] = None
                queue.append(i)
        target = None
        while queue and target is None:
            i = queue.popleft()
            for j in adj[i]:
                if visited_d[j]:
                    continue
                visited_d[j] = True
                prev_d[j] = i
                if r_d[j] > 0:
                    target = j
                    break
                for i2 in radj[j]:
                    if not visited_s[i2] and flow.get((i2, j), ZERO) > 0:
                        visited_s[i2] = True
                        prev_s[i2] = j
                        queue.append(i2)
        if target is None:
            break
        # reconstruct the alternating path back to a root supply
        path: list[tuple] = []  # (i, j, forward)
        j = target
        while True:
            i = prev_d[j]
            path.append((i, j, True))
            back = prev_s[i]
            if back is None:
                break
            path.append((i, back, False))
            j = back
        root = path[-1][0]
        bottleneck = min(r_d[target], r_s[root])
        for i, j, forward in path:
            if not forward and flow[(i, j)] < bottleneck:
                bottleneck = flow[(i, j)]
        for i, j, forward in path:
            if forward:
                flow[(i, j)] = flow.get((i, j), ZERO) + bottleneck
            else:
                flow[(i, j)] -= bottleneck
        r_s[root] -= bottleneck
        r_d[target] -= bottleneck

    if all(r == 0 for r in r_s):
        plan = {e: f for e, f in flow.items() if f > 0}
        return TransportResult(feasible=True, plan=plan, cut=None)
    cut = frozenset(i for i in range(m) if visited_s[i])
    return TransportResult(feasible=False, plan=None, cut=cut)


@dataclass(frozen=True)
class LinearFeasibility:
    """Find x >= 0 with A_ub x <= b_ub and A_eq x = b_eq, exactly."""

    num_vars: int
    ineq_rows: tuple  # (coefficients, rhs) meaning a . x <= b
    eq_rows: tuple  # (coefficients, rhs) meaning a . x = b

    @staticmethod
    def build(num_vars: int, ineq_rows: Sequence = (), eq_rows: Sequence = ()) -> "LinearFeasibility":
        def conv(rows):
            out = []
            for coeffs, rhs in rows:
                coeffs = tuple(as_rat(c) for c in coeffs)
                if len(coeffs) != num_vars:
                    raise ValueError("row length does not match num_vars")
                out.append((coeffs, as_rat(rhs)))
            return tuple(out)

        return LinearFeasibility(num_vars, conv(ineq_rows), conv(eq_rows))


def lp_feasible(inst: LinearFeasibility) -> Optional[list]:
    """Phase-1 simplex with Bland's rule; returns a feasible point or None.

    Every returned point is re-checked exactly against all rows before it is
    handed back; infeasibility is declared only when the phase-1 optimum is
    strictly positive.
    """
    n = inst.num_vars
    n_ineq = len(inst.ineq_rows)
    rows = []  # each: (coeffs over x, slack coefficient or 0, rhs) sign-normalized
    for idx, (coeffs, rhs) in enumerate(inst.ineq_rows):
        if rhs >= 0:
            rows.append((coeffs, idx, as_rat(1), rhs))
        else:
            rows.append((tuple(-c for c in coeffs), idx, as_rat(-1), -rhs))
    for coeffs, rhs in inst.eq_rows:
        if rhs >= 0:
            rows.append((coeffs, None, None, rhs))
        else:
            rows.append((tuple(-c for c in coeffs), None, None, -rhs))

    # columns: x (n) | slacks (n_ineq) | artificials (added as needed) | rhs
    tableau: list[list] = []
    basis: list[int] = []
    art_rows: list[int] = []
    num_art = 0
    for coeffs, slack_idx, slack_coeff, rhs in rows:
        row = list(coeffs) + [ZERO] * n_ineq
        if slack_idx is not None:
            row[n + slack_idx] = slack_coeff
        tableau.append([*row, rhs])
        if slack_idx is not None and slack_coeff > 0:
            basis.append(n + slack_idx)
        else:
            basis.append(-1)  # placeholder for an artificial
            art_rows.append(len(tableau) - 1)
            num_art += 1
    total_cols = n + n_ineq + num_art
    for r, row in enumerate(tableau):
        rhs = row.pop()
        row.extend([ZERO] * num_art)
        row.append(rhs)
        if r in art_rows:
            a = n + n_ineq + art_rows.index(r)
            row[a] = as_rat(1)
            basis[r] = a

    # objective: minimize the sum of artificials
    obj = [ZERO] * (total_cols + 1)
    for a in range(num_art):
        obj[n + n_ineq + a] = as_rat(1)
    for r, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [o - f * t for o, t in zip(obj, tableau[r])]

    def pivot(row_idx: int, col: int) -> None:
        nonlocal obj
        prow = tableau[row_idx]
        p = prow[col]
        tableau[row_idx] = [c / p for c in prow]
        prow = tableau[row_idx]
        for r in range(len(tableau)):
            if r != row_idx and tableau[r][col] != 0:
                f = tableau[r][col]
                tableau[r] = [a - f * b for a, b in zip(tableau[r], prow)]
        if obj[col] != 0:
            f = obj[col]
            obj = [a - f * b for a, b in zip(obj, prow)]
        basis[row_idx] = col

    while True:
        entering = next((j for j in range(total_cols) if obj[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for r in range(len(tableau)):
            a = tableau[r][entering]
            if a > 0:
                ratio = tableau[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leaving]):
                    best = ratio
                    leaving = r
        if leaving is None:
            # phase-1 objective is bounded below by 0, so this cannot happen
            raise RuntimeError("phase-1 simplex detected an unbounded direction")
        pivot(leaving, entering)

    if -obj[-1] > 0:  # optimum value of sum of artificials
        return None
    x = [ZERO] * n
    for r, b in enumerate(basis):
        if b < n:
            x[b] = tableau[r][-1]
    _check_solution(inst, x)
    return x


def _check_solution(inst: LinearFeasibility, x: Sequence) -> None:
    if any(v < 0 for v in x):
        raise RuntimeError("simplex returned a negative component")
    for coeffs, rhs in inst.ineq_rows:
        if sum(c * v for c, v in zip(coeffs, x)) > rhs:
            raise RuntimeError("simplex returned a point violating an inequality row")
    for coeffs, rhs in inst.eq_rows:
        if sum(c * v for c, v in zip(coeffs, x)) != rhs:
            raise RuntimeError("simplex returned a point violating an equality row")
