from .loss import PROB_CLIP, LossValue, cross_entropy, softmax_ce_grad, softmax_cross_entropy
from .adam import AdamHyperParams, AdamState, adam_step

__all__ = [
    "PROB_CLIP",
    "LossValue",
    "cross_entropy",
    "softmax_ce_grad",
    "softmax_cross_entropy",
    "AdamHyperParams",
    "AdamState",
    "adam_step",
]
