"""Feed-forward classification network with explicit backpropagation."""

from deep_coral.net.checkpoint import load_checkpoint, save_checkpoint
from deep_coral.net.labels import LabelBatch, as_labels
from deep_coral.net.layers import Layer, LayerKind
from deep_coral.net.loss import class_loss_and_grad, predict, softmax
from deep_coral.net.network import (
    ForwardPass,
    Network,
    ParamGrads,
    backward,
    forward,
    init_network,
)
from deep_coral.net.optim import Velocity, scheduled_lr, sgd_step

__all__ = [
    "ForwardPass",
    "LabelBatch",
    "Layer",
    "LayerKind",
    "Network",
    "ParamGrads",
    "Velocity",
    "as_labels",
    "backward",
    "class_loss_and_grad",
    "forward",
    "init_network",
    "load_checkpoint",
    "predict",
    "save_checkpoint",
    "scheduled_lr",
    "sgd_step",
    "softmax",
]
