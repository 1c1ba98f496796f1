"""Hot sliding-window kernel with a compiled core and a pure-Python fallback.

Both backends compute, for every admissible window start, the mean of the
matched token scores inside the window using plain left-to-right IEEE double
summation, so their outputs are bitwise identical.  The compiled extension is
preferred when it was built; `BACKEND` records which one is active.
"""

from . import _window_py

try:
    from . import _window as _window_cy
except ImportError:
    _window_cy = None

BACKEND = "cython" if _window_cy is not None else "python"

_impl = _window_cy if _window_cy is not None else _window_py


def window_states(scores, matched, window, step=1, valid=None):
    """Mean matched score per rolling window.

    scores:  float64 array of per-token scores (unmatched slots ignored)
    matched: uint8 array, 1 where the token has a lexicon score
    window:  window length in tokens (>= 1)
    step:    stride between window starts (>= 1)
    valid:   optional uint8 mask over window start positions; windows at
             masked-out positions are skipped (used to forbid windows that
             cross utterance boundaries)

    Returns (indices, values): int64/float64 arrays holding the token index
    of each window start that produced a state and its mean score.  Windows
    containing no matched token produce no state.
    """
    return _prepare_and_run(_impl, scores, matched, window, step, valid)


def window_states_python(scores, matched, window, step=1, valid=None):
    """Force the pure-Python backend (benchmarking and parity tests)."""
    return _prepare_and_run(_window_py, scores, matched, window, step, valid)


def window_states_compiled(scores, matched, window, step=1, valid=None):
    """Force the compiled backend; raises if the extension is not built."""
    if _window_cy is None:
        raise RuntimeError("compiled window kernel is not available")
    return _prepare_and_run(_window_cy, scores, matched, window, step, valid)


def _prepare_and_run(impl, scores, matched, window, step, valid):
    import numpy as np

    scores = np.ascontiguousarray(scores, dtype=np.float64)
    matched = np.ascontiguousarray(matched, dtype=np.uint8)
    n = scores.shape[0]
    if matched.shape[0] != n:
        raise ValueError("scores and matched must have equal length")
    if window < 1:
        raise ValueError("window must be >= 1")
    if step < 1:
        raise ValueError("step must be >= 1")
    if n < window:
        raise ValueError("insufficient_tokens: stream shorter than window")
    n_pos = (n - window) // step + 1
    if valid is None:
        valid = np.ones(n_pos, dtype=np.uint8)
    else:
        valid = np.ascontiguousarray(valid, dtype=np.uint8)
        if valid.shape[0] != n_pos:
            raise ValueError("valid mask must have one entry per window start")
    out_idx = np.empty(n_pos, dtype=np.int64)
    out_val = np.empty(n_pos, dtype=np.float64)
    k = impl.fill_window_states(scores, matched, window, step, valid, out_idx, out_val)
    return out_idx[:k], out_val[:k]
