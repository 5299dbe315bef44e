"""Cell-by-cell enumeration of a joint distribution over (A, U, S, Y).

This is a deliberately naive second route to every quantity the oracle
computes. It builds the ``8k`` cell probabilities ``P(a, u, s, y)``
explicitly and answers each question by summing matching cells, without
sharing any code with :mod:`selectionbias.oracle`. Parameters are found by
scanning every ordered pair of U levels rather than taking max and min.
"""

from __future__ import annotations

from itertools import product

import numpy as np

__all__ = ["cell_table", "enumerate_quantities"]


def cell_table(d) -> dict[tuple[int, int, int, int], np.ndarray]:
    """Map ``(a, u, s, y)`` to ``P(A=a, U=u, S=s, Y=y)`` (arrays over any batch axes)."""
    cells = {}
    for a, u, s, y in product((0, 1), range(d.k), (0, 1), (0, 1)):
        ps = d.p_s_given_au[..., a, u]
        py = d.p_y_given_au[..., a, u]
        cells[a, u, s, y] = d.p_au[..., a, u] * (ps if s else 1 - ps) * (py if y else 1 - py)
    return cells


def enumerate_quantities(d) -> dict[str, np.ndarray]:
    cells = cell_table(d)
    k = d.k

    def prob(a=None, u=None, s=None, y=None):
        total = 0.0
        for (ca, cu, cs, cy), p in cells.items():
            if (a is None or ca == a) and (u is None or cu == u) and (s is None or cs == s) and (
                y is None or cy == y
            ):
                total = total + p
        return total

    def risk_selected(a):
        return prob(a=a, s=1, y=1) / prob(a=a, s=1)

    def risk_total(a):
        return prob(a=a, y=1) / prob(a=a)

    def risk_au(a, u):
        return prob(a=a, u=u, y=1) / prob(a=a, u=u)

    def p_u(a, u, s):
        return prob(a=a, u=u, s=s) / prob(a=a, s=s)

    def risk_in_selected_std(a):
        # standardised to the U distribution of the selected population
        return sum(
            prob(a=a, u=u, s=1, y=1) / prob(a=a, u=u, s=1) * prob(u=u, s=1) / prob(s=1)
            for u in range(k)
        )

    def pair_max(values):
        best = None
        for i, j in product(range(k), repeat=2):
            r = values[i] / values[j]
            best = r if best is None else np.maximum(best, r)
        return best

    def ratio_max(num, den):
        best = None
        for i in range(k):
            r = num[i] / den[i]
            best = r if best is None else np.maximum(best, r)
        return best

    risks = {a: [risk_au(a, u) for u in range(k)] for a in (0, 1)}
    rr_uy_a1 = pair_max(risks[1])
    rr_uy_a0 = pair_max(risks[0])
    q = {(a, s): [p_u(a, u, s) for u in range(k)] for a in (0, 1) for s in (0, 1)}

    best_num = best_den = None
    for i in range(k):
        best_num = q[1, 1][i] if best_num is None else np.maximum(best_num, q[1, 1][i])
        best_den = q[0, 1][i] if best_den is None else np.minimum(best_den, q[0, 1][i])

    return {
        "observed_rr": risk_selected(1) / risk_selected(0),
        "true_rr_total": risk_total(1) / risk_total(0),
        "true_rr_selected": risk_in_selected_std(1) / risk_in_selected_std(0),
        "selection_ratio_a1": risk_selected(1) / (prob(a=1, s=0, y=1) / prob(a=1, s=0)),
        "selection_ratio_a0": risk_selected(0) / (prob(a=0, s=0, y=1) / prob(a=0, s=0)),
        "rr_uy_a1": rr_uy_a1,
        "rr_uy_a0": rr_uy_a0,
        "rr_su_a1": ratio_max(q[1, 1], q[1, 0]),
        "rr_su_a0": ratio_max(q[0, 0], q[0, 1]),
        "rr_uy_s1": np.maximum(rr_uy_a1, rr_uy_a0),
        "rr_au_s1": best_num / best_den,
        "total_mass": prob(),
    }
