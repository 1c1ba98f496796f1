import numpy as np
import pytest

from emodyn._kernels import (BACKEND, window_states, window_states_compiled,
                             window_states_python)


def brute_force(scores, matched, window, step=1, valid=None):
    n = len(scores)
    indices, values = [], []
    for p in range((n - window) // step + 1):
        if valid is not None and not valid[p]:
            continue
        i = p * step
        vals = [scores[j] for j in range(i, i + window) if matched[j]]
        if vals:
            total = 0.0
            for v in vals:
                total += v
            indices.append(i)
            values.append(total / len(vals))
    return indices, values


def test_compiled_backend_is_active():
    # the build compiles the extension in this environment
    assert BACKEND == "cython"


@pytest.mark.parametrize("seed", range(25))
def test_backends_bitwise_identical_and_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 500))
    window = int(rng.integers(1, min(n, 25) + 1))
    step = int(rng.integers(1, 4))
    scores = rng.random(n)
    matched = (rng.random(n) < 0.7).astype(np.uint8)
    i_py, v_py = window_states_python(scores, matched, window, step)
    i_cy, v_cy = window_states_compiled(scores, matched, window, step)
    assert i_py.tolist() == i_cy.tolist()
    assert v_py.tolist() == v_cy.tolist()  # bitwise
    exp_i, exp_v = brute_force(scores.tolist(), matched.tolist(), window, step)
    assert i_py.tolist() == exp_i
    assert v_py.tolist() == exp_v


def test_valid_mask_skips_positions():
    scores = np.array([1.0, 2.0, 3.0, 4.0])
    matched = np.ones(4, dtype=np.uint8)
    valid = np.array([1, 0, 1], dtype=np.uint8)
    idx, vals = window_states(scores, matched, 2, 1, valid)
    assert idx.tolist() == [0, 2]
    assert vals.tolist() == [1.5, 3.5]


def test_all_unmatched_yields_no_states():
    scores = np.zeros(10)
    matched = np.zeros(10, dtype=np.uint8)
    idx, vals = window_states(scores, matched, 5)
    assert len(idx) == 0 and len(vals) == 0


def test_stream_shorter_than_window_rejected():
    with pytest.raises(ValueError, match="insufficient_tokens"):
        window_states(np.zeros(3), np.zeros(3, dtype=np.uint8), 5)


def test_bad_mask_length_rejected():
    with pytest.raises(ValueError, match="valid mask"):
        window_states(np.zeros(10), np.ones(10, dtype=np.uint8), 3,
                      valid=np.ones(5, dtype=np.uint8))


def test_python_fallback_selected_when_extension_missing(monkeypatch):
    import importlib
    import sys

    import emodyn._kernels as kernels

    # a None entry in sys.modules makes the extension import fail; the
    # parent's cached submodule attribute must go too or `from . import`
    # falls back to it
    monkeypatch.setitem(sys.modules, "emodyn._kernels._window", None)
    monkeypatch.delattr(kernels, "_window", raising=False)
    try:
        reloaded = importlib.reload(kernels)
        assert reloaded.BACKEND == "python"
        idx, vals = reloaded.window_states(
            np.array([1.0, 2.0]), np.array([1, 1], dtype=np.uint8), 2)
        assert vals.tolist() == [1.5]
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
    assert kernels.BACKEND == "cython"
