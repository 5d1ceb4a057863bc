"""Pure-Python selection primitives with exact comparison counting.

These back the instrumented mode of the selection-based marking routines.
The hot (untimed-instrumentation-free) paths use numpy instead; the routines
here trade speed for countability and worst-case guarantees:
``select_rank_value`` is the classical median-of-medians selection with
groups of five, so rank selection stays linear even on adversarial inputs.

Comparison counts are accumulated in a one-element list (``box``) to keep the
inner loops on local operations.
"""

from __future__ import annotations

__all__ = ["select_rank_value", "partition_synced", "xstar_counted"]


def _insertion_sort(a: list[float], lo: int, hi: int, box: list[int]) -> None:
    cmp = 0
    for i in range(lo + 1, hi):
        key = a[i]
        j = i - 1
        while j >= lo:
            cmp += 1
            if a[j] > key:
                a[j + 1] = a[j]
                j -= 1
            else:
                break
        a[j + 1] = key
    box[0] += cmp


def _select(a: list[float], lo: int, hi: int, k: int, box: list[int]) -> float:
    """Value of ascending rank ``k`` within ``a[lo:hi]``; reorders that slice."""
    while True:
        m = hi - lo
        if m <= 5:
            _insertion_sort(a, lo, hi, box)
            return a[lo + k]

        # medians of groups of five, swapped to the front of the slice
        ng = 0
        g = lo
        while g < hi:
            ge = g + 5
            if ge > hi:
                ge = hi
            _insertion_sort(a, g, ge, box)
            med = (g + ge - 1) // 2
            front = lo + ng
            a[front], a[med] = a[med], a[front]
            ng += 1
            g = ge
        pv = _select(a, lo, lo + ng, (ng - 1) // 2, box)

        lt: list[float] = []
        eq: list[float] = []
        gt: list[float] = []
        cmp = 0
        for j in range(lo, hi):
            val = a[j]
            if val < pv:
                cmp += 1
                lt.append(val)
            elif val > pv:
                cmp += 2
                gt.append(val)
            else:
                cmp += 2
                eq.append(val)
        box[0] += cmp
        a[lo:hi] = lt + eq + gt

        n_lt = len(lt)
        n_eq = len(eq)
        if k < n_lt:
            hi = lo + n_lt
        elif k < n_lt + n_eq:
            return pv
        else:
            k -= n_lt + n_eq
            lo += n_lt + n_eq


def select_rank_value(values: list[float], k: int, box: list[int]) -> float:
    """Ascending rank-``k`` value of ``values`` without touching the input."""
    if not 0 <= k < len(values):
        raise IndexError(f"rank {k} out of range for {len(values)} values")
    scratch = list(values)
    return _select(scratch, 0, len(scratch), k, box)


def partition_synced(
    perm: list[int],
    xp: list[float],
    lo: int,
    hi: int,
    pivot_value: float,
    box: list[int],
) -> tuple[int, int]:
    """Stable three-way partition of the synced (perm, value) pair on [lo, hi).

    After the call the slice holds the strictly-greater block, then the
    equal-to-pivot block, then the strictly-smaller block, each in the
    previous relative order.  Returns (end of greater block, start of smaller
    block).
    """
    gp: list[int] = []
    gv: list[float] = []
    ep: list[int] = []
    ev: list[float] = []
    lp: list[int] = []
    lv: list[float] = []
    cmp = 0
    for j in range(lo, hi):
        val = xp[j]
        if val > pivot_value:
            cmp += 1
            gp.append(perm[j])
            gv.append(val)
        elif val < pivot_value:
            cmp += 2
            lp.append(perm[j])
            lv.append(val)
        else:
            cmp += 2
            ep.append(perm[j])
            ev.append(val)
    box[0] += cmp
    perm[lo:hi] = gp + ep + lp
    xp[lo:hi] = gv + ev + lv
    greater_end = lo + len(gp)
    return greater_end, greater_end + len(ep)


def xstar_counted(values: list[float], goal: float, box: list[int]) -> float:
    """Counted mirror of the destructive two-way threshold kernel.

    Repeatedly places the midpoint rank of the active slice, sums the upper
    side and narrows to the side containing the threshold.  Works on its own
    copy of ``values``.
    """
    a = list(values)
    lo, hi = 0, len(a)
    v = goal
    while hi - lo > 1:
        k = (lo + hi) // 2
        pv = _select(a, lo, hi, k - lo, box)
        # lay the slice out ascending around the pivot value
        lt: list[float] = []
        eq: list[float] = []
        gt: list[float] = []
        cmp = 0
        for val in a[lo:hi]:
            if val < pv:
                cmp += 1
                lt.append(val)
            elif val > pv:
                cmp += 2
                gt.append(val)
            else:
                cmp += 2
                eq.append(val)
        box[0] += cmp
        a[lo:hi] = lt + eq + gt

        upper_sum = 0.0
        for val in a[k + 1 : hi]:
            upper_sum += val
        box[0] += 1
        if upper_sum >= v:
            lo = k + 1
            continue
        box[0] += 1
        if upper_sum + pv >= v:
            return pv
        v -= upper_sum + pv
        hi = k
    return a[lo]
