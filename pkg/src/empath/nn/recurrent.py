"""LSTM cell with backpropagation through time, plus embedding lookup.

Gate layout in the stacked weight matrices is [input, forget, candidate,
output], each block of `hidden` rows. The forget-gate bias is initialized to
1.0 to stabilize early training; all other biases start at 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptySequence, IndexOutOfRange, ShapeMismatch
from ..rng import Rng
from .layers import glorot_uniform


@dataclass
class LstmParams:
    w_x: np.ndarray  # (4h, d)
    w_h: np.ndarray  # (4h, h)
    b: np.ndarray  # (4h,)

    @property
    def hidden_size(self) -> int:
        return self.w_h.shape[1]

    @property
    def input_size(self) -> int:
        return self.w_x.shape[1]


def init_lstm(rng: Rng, input_size: int, hidden_size: int) -> LstmParams:
    w_x = glorot_uniform(rng.split("w_x"), (4 * hidden_size, input_size), input_size, hidden_size)
    w_h = glorot_uniform(rng.split("w_h"), (4 * hidden_size, hidden_size), hidden_size, hidden_size)
    b = np.zeros(4 * hidden_size)
    b[hidden_size : 2 * hidden_size] = 1.0  # forget gate
    return LstmParams(w_x=w_x, w_h=w_h, b=b)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lstm_forward(inputs: np.ndarray, params: LstmParams) -> tuple[np.ndarray, dict]:
    """Run the cell over a (T, d) input sequence from zero initial state.

    Returns the (T, h) hidden-state sequence and the cache needed by
    lstm_backward. The final hidden state is hiddens[-1].
    """
    if len(inputs) == 0:
        raise EmptySequence("LSTM input sequence is empty")
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != params.input_size:
        raise ShapeMismatch(
            f"inputs {inputs.shape} disagree with input size {params.input_size}"
        )
    h_size = params.hidden_size
    h = np.zeros(h_size)
    c = np.zeros(h_size)
    hiddens = np.zeros((len(inputs), h_size))
    steps = []
    for t, x in enumerate(inputs):
        z = params.w_x @ x + params.w_h @ h + params.b
        i = _sigmoid(z[:h_size])
        f = _sigmoid(z[h_size : 2 * h_size])
        g = np.tanh(z[2 * h_size : 3 * h_size])
        o = _sigmoid(z[3 * h_size :])
        c_new = f * c + i * g
        tanh_c = np.tanh(c_new)
        h_new = o * tanh_c
        steps.append((x, h, c, i, f, g, o, c_new, tanh_c))
        h, c = h_new, c_new
        hiddens[t] = h
    return hiddens, {"steps": steps, "params": params}


def lstm_backward(
    grad_hiddens: np.ndarray, cache: dict
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Backpropagation through time.

    grad_hiddens: (T, h) gradient w.r.t. every hidden state (zeros for unused
    steps). Returns (grad_inputs, grad_w_x, grad_w_h, grad_b).
    """
    params: LstmParams = cache["params"]
    steps = cache["steps"]
    h_size = params.hidden_size
    if grad_hiddens.shape != (len(steps), h_size):
        raise ShapeMismatch("grad_hiddens shape disagrees with the forward sequence")

    grad_w_x = np.zeros_like(params.w_x)
    grad_w_h = np.zeros_like(params.w_h)
    grad_b = np.zeros_like(params.b)
    grad_inputs = np.zeros((len(steps), params.input_size))

    dh_next = np.zeros(h_size)
    dc_next = np.zeros(h_size)
    for t in range(len(steps) - 1, -1, -1):
        x, h_prev, c_prev, i, f, g, o, c_new, tanh_c = steps[t]
        dh = grad_hiddens[t] + dh_next
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        di = dc * g
        df = dc * c_prev
        dg = dc * i
        dc_next = dc * f

        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g**2),
                do * o * (1.0 - o),
            ]
        )
        grad_w_x += np.outer(dz, x)
        grad_w_h += np.outer(dz, h_prev)
        grad_b += dz
        grad_inputs[t] = params.w_x.T @ dz
        dh_next = params.w_h.T @ dz
    return grad_inputs, grad_w_x, grad_w_h, grad_b


def embedding_lookup(table: np.ndarray, indices: list[int]) -> np.ndarray:
    """Gather rows of a (V, d) table; index V is the zero out-of-vocabulary row.

    Indices above V (or negative) raise IndexOutOfRange.
    """
    v, d = table.shape
    out = np.zeros((len(indices), d))
    for pos, idx in enumerate(indices):
        if idx < 0 or idx > v:
            raise IndexOutOfRange(f"index {idx} outside [0, {v}]")
        if idx < v:
            out[pos] = table[idx]
    return out


def embedding_backward(grad_out: np.ndarray, table_shape: tuple[int, int], indices: list[int]) -> np.ndarray:
    """Scatter-add sequence gradients into a (V, d) table gradient.

    The out-of-vocabulary row is fixed at zero and receives no gradient.
    """
    v, d = table_shape
    if grad_out.shape != (len(indices), d):
        raise ShapeMismatch("grad_out shape disagrees with the looked-up sequence")
    grad_table = np.zeros((v, d))
    for pos, idx in enumerate(indices):
        if idx < v:
            grad_table[idx] += grad_out[pos]
    return grad_table
