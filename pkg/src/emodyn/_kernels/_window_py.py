"""Pure-Python window kernel, semantically identical to the compiled core.

Each window's sum is recomputed from scratch left to right (no sliding
accumulator): Python floats are IEEE doubles, so the result is bitwise
identical to the C loop in the compiled backend.
"""


def fill_window_states(scores, matched, window, step, valid, out_idx, out_val):
    n_pos = valid.shape[0]
    scores_l = scores.tolist()
    matched_l = matched.tolist()
    valid_l = valid.tolist()
    m = 0
    for p in range(n_pos):
        if not valid_l[p]:
            continue
        i = p * step
        total = 0.0
        k = 0
        for j in range(i, i + window):
            if matched_l[j]:
                total += scores_l[j]
                k += 1
        if k:
            out_idx[m] = i
            out_val[m] = total / k
            m += 1
    return m
