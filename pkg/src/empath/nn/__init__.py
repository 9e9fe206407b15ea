"""Minimal trainable neural-network engine: layers, LSTM, Adam, checkpoints."""

from .checkpoint import load_checkpoint, save_checkpoint
from .layers import (
    conv2d_backward,
    conv2d_forward,
    dense_backward,
    dense_forward,
    glorot_uniform,
    maxpool2d_backward,
    maxpool2d_forward,
    relu,
    relu_backward,
    softmax,
    softmax_cross_entropy,
)
from .optim import AdamState, adam_update, gradient_check
from .recurrent import (
    LstmParams,
    embedding_backward,
    embedding_lookup,
    init_lstm,
    lstm_backward,
    lstm_forward,
)

__all__ = [
    "AdamState",
    "LstmParams",
    "adam_update",
    "conv2d_backward",
    "conv2d_forward",
    "dense_backward",
    "dense_forward",
    "embedding_backward",
    "embedding_lookup",
    "glorot_uniform",
    "gradient_check",
    "init_lstm",
    "load_checkpoint",
    "lstm_backward",
    "lstm_forward",
    "maxpool2d_backward",
    "maxpool2d_forward",
    "relu",
    "relu_backward",
    "save_checkpoint",
    "softmax",
    "softmax_cross_entropy",
]
