"""Weighted stable matching between two indexed sets.

Both sides rank the other side by ascending cost of the pair, so the
preferences are aligned: a single cost function drives everyone.  Ties
are broken by the partner's tie key (smaller wins), which makes the
result deterministic and, because the tie-broken preferences are induced
by one global order on pairs, unique.

The algorithm is deferred acceptance with the left side proposing.
Participants that run out of acceptable partners stay unmatched and are
dropped from the result.
"""

from __future__ import annotations

from collections.abc import Sequence

__all__ = ["stable_match"]


def stable_match(
    costs: Sequence[Sequence[float]],
    left_ties: Sequence[int] | None = None,
    right_ties: Sequence[int] | None = None,
) -> list[tuple[int, int]]:
    """Match left indexes to right indexes under aligned cost preferences.

    ``costs[i][j]`` is the cost of pairing left ``i`` with right ``j``;
    lower is better for both sides.  ``left_ties``/``right_ties`` break
    cost ties (defaults: the indexes themselves).  Returns ``(i, j)``
    pairs sorted by left index; the shorter side is fully matched.
    """
    n_left = len(costs)
    n_right = len(costs[0]) if n_left else 0
    if n_left == 0 or n_right == 0:
        return []
    lt = list(left_ties) if left_ties is not None else list(range(n_left))
    rt = list(right_ties) if right_ties is not None else list(range(n_right))

    prefs = [sorted(range(n_right), key=lambda j, i=i: (costs[i][j], rt[j])) for i in range(n_left)]
    next_choice = [0] * n_left
    partner_of_right: dict[int, int] = {}
    free = list(range(n_left))
    while free:
        i = free.pop(0)
        while next_choice[i] < n_right:
            j = prefs[i][next_choice[i]]
            next_choice[i] += 1
            current = partner_of_right.get(j)
            if current is None:
                partner_of_right[j] = i
                break
            if (costs[i][j], lt[i]) < (costs[current][j], lt[current]):
                partner_of_right[j] = i
                free.append(current)
                break
    return sorted((i, j) for j, i in partner_of_right.items())
