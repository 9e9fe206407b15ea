#!/usr/bin/env python3
# Finite-difference verification of the hand-written backward passes.

import numpy as np

from empath import nn
from empath.nn.optim import gradient_check
from empath.rng import Rng

rng = Rng(7)

# a dense layer under a random projection loss
proj = rng.uniform(-1, 1, (3,))
params = {
    "w": rng.uniform(-1, 1, (3, 5)),
    "b": rng.uniform(-1, 1, (3,)),
    "x": rng.uniform(-1, 1, (5,)),
}

def dense_loss(p):
    out = nn.dense_forward(p["x"], p["w"], p["b"])
    gx, gw, gb = nn.dense_backward(proj, p["x"], p["w"])
    return float((out * proj).sum()), {"w": gw, "b": gb, "x": gx}

print(f"dense layer max relative error: {gradient_check(dense_loss, params):.2e}")

# an LSTM over 3 steps, checking weights, biases, and inputs together
init = nn.init_lstm(Rng(12), 4, 3)
inputs = rng.uniform(-1, 1, (3, 4))
hproj = rng.uniform(-1, 1, (3, 3))
lstm_params = {"w_x": init.w_x, "w_h": init.w_h, "b": init.b, "inp": inputs}

def lstm_loss(p):
    lp = nn.LstmParams(w_x=p["w_x"], w_h=p["w_h"], b=p["b"])
    hiddens, cache = nn.lstm_forward(p["inp"], lp)
    gi, gwx, gwh, gb = nn.lstm_backward(hproj, cache)
    return float((hiddens * hproj).sum()), {"w_x": gwx, "w_h": gwh, "b": gb, "inp": gi}

print(f"LSTM max relative error:        {gradient_check(lstm_loss, lstm_params):.2e}")

# softmax cross-entropy: gradient rows sum to zero by construction
loss, grad = nn.softmax_cross_entropy(rng.uniform(-2, 2, (6,)), 2)
print(f"softmax-CE loss {loss:.4f}, gradient sum {grad.sum():.1e}")
