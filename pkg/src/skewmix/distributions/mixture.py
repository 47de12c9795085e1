"""Two-component mixtures ``alpha * f1 + (1 - alpha) * f0``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..errors import PreconditionError
from . import core
from .params import FamilyParams, same_family


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """``known`` is f1 (weight ``alpha``); ``unknown`` is f0."""

    alpha: float
    known: FamilyParams
    unknown: FamilyParams

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise PreconditionError("alpha must lie strictly between 0 and 1")
        same_family(self.known, self.unknown)
        object.__setattr__(self, "alpha", alpha)

    @property
    def family(self) -> str:
        return self.known.family

    @property
    def dim(self) -> int:
        return self.known.dim


def mixture_log_pdf(model: MixtureModel, x, **kw):
    a = np.log(model.alpha) + np.asarray(core.log_pdf(model.known, x, **kw))
    b = np.log1p(-model.alpha) + np.asarray(core.log_pdf(model.unknown, x, **kw))
    out = logsumexp(np.stack([a, b]), axis=0)
    return float(out) if out.ndim == 0 else out


def mixture_pdf(model: MixtureModel, x, **kw):
    return model.alpha * core.pdf(model.known, x, **kw) + (1.0 - model.alpha) * core.pdf(model.unknown, x, **kw)


def mixture_cf(model: MixtureModel, t):
    return model.alpha * core.cf(model.known, t) + (1.0 - model.alpha) * core.cf(model.unknown, t)


def mixture_sample(model: MixtureModel, rng: np.random.Generator, n: int, *, return_labels: bool = False):
    """Label each draw ``Bernoulli(alpha)`` (1 = known component), then sample it."""
    if int(n) != n or n < 1:
        raise PreconditionError("n must be a positive integer")
    labels = rng.random(int(n)) < model.alpha
    n1 = int(labels.sum())
    shape = (int(n),) if model.family == "sn" else (int(n), model.dim)
    out = np.empty(shape)
    if n1:
        out[labels] = core.sample(model.known, rng, n1)
    if n1 < n:
        out[~labels] = core.sample(model.unknown, rng, int(n) - n1)
    return (out, labels.astype(np.int8)) if return_labels else out
