"""Pure numpy fallback for batched first-crossing sampling.

Draws interarrival chunks, forms their running sum once, and walks the
sample boundaries through a precomputed searchsorted jump table.  Each
jump is validated against the exact partial-sum comparison (the jump
table compares against a rounded target, which can be off by one draw in
borderline cases).  A sample that straddles a chunk boundary carries its
partial sum into the next chunk.

Used when the compiled kernel is unavailable or disabled.  Both backends
consume the identical variate stream, but they accumulate crossing sums
with different rounding, so agreement is statistical rather than bitwise.
"""
from __future__ import annotations

import numpy as np

IS_COMPILED = False

LAW_EXPONENTIAL = 1
LAW_UNIFORM = 2
LAW_GAMMA = 3

_CHUNK_MAX = 1 << 18


def _drawer(law: int, p0: float, p1: float, gen: np.random.Generator):
    if law == LAW_EXPONENTIAL:
        return lambda size: gen.standard_exponential(size) / p0, 1.0 / p0
    if law == LAW_UNIFORM:
        return lambda size: gen.uniform(p0, p1, size), 0.5 * (p0 + p1)
    if law == LAW_GAMMA:
        return lambda size: gen.standard_gamma(p0, size) * p1, p0 * p1
    raise ValueError(f"unknown law id {law}")


def exit_batch(
    law: int,
    p0: float,
    p1: float,
    threshold: float,
    n: int,
    bit_generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """n independent first-crossing samples of the running interarrival sum.

    Returns (nu, t_pre, t_exit): the 1-based index of the first partial
    sum at or above the threshold, the partial sum just before it, and
    the crossing sum itself.  t_pre < threshold <= t_exit holds exactly.
    """
    gen = np.random.Generator(bit_generator)
    draw, mean = _drawer(law, p0, p1, gen)

    nu = np.empty(n, dtype=np.int64)
    pre = np.empty(n, dtype=np.float64)
    exi = np.empty(n, dtype=np.float64)
    filled = 0

    per_sample = threshold / mean + 1.0
    chunk = int(min(max(4096, n * per_sample * 1.10 + 64), _CHUNK_MAX))

    carry_sum = 0.0  # partial sum of the in-progress sample
    carry_cnt = 0
    while filled < n:
        x = draw(chunk)
        # C[p] = carry + first p draws, accumulated strictly left to right
        C = np.cumsum(np.concatenate(((carry_sum,), x)))
        top = C.shape[0] - 1

        # finish the in-progress sample; its base is 0 so searchsorted
        # against the bare threshold is already the exact comparison
        j = int(np.searchsorted(C, threshold, side="left"))
        if j > top:
            carry_cnt += top
            carry_sum = float(C[top])
            continue
        nu[filled] = carry_cnt + j
        pre[filled] = C[j - 1]
        exi[filled] = C[j]
        filled += 1
        carry_cnt = 0

        # boundary walk for the samples wholly inside this chunk
        s = j
        if filled < n and s < top:
            jumps = np.searchsorted(C, C + threshold, side="left").tolist()
            vals = C.tolist()
            starts: list[int] = []
            ends: list[int] = []
            room = n - filled
            while len(starts) < room:
                e = jumps[s]
                base = vals[s]
                while e <= top and vals[e] - base < threshold:
                    e += 1
                if e > top:
                    break
                while e - 1 > s and vals[e - 1] - base >= threshold:
                    e -= 1
                starts.append(s)
                ends.append(e)
                s = e
            if starts:
                s_arr = np.asarray(starts)
                e_arr = np.asarray(ends)
                stop = filled + len(starts)
                nu[filled:stop] = e_arr - s_arr
                pre[filled:stop] = C[e_arr - 1] - C[s_arr]
                exi[filled:stop] = C[e_arr] - C[s_arr]
                filled = stop

        carry_cnt = top - s
        carry_sum = float(C[top] - C[s])

    return nu, pre, exi
