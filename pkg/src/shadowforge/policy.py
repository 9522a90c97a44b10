"""Augmentation policies: ordered steps behind Bernoulli gates.

Each step carries an application probability; the pipeline draws one
uniform deviate per step to decide whether it fires, then the step's own
parameter deviates. Policies serialize to a canonical JSON shape used by
both the policy-file CLI input and the run manifest:

    {"steps": [{"op": "...", "prob": 0.5, ...}, ...], "master_seed": 7}

``master_seed`` is optional in files; the CLI seed flag wins over it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from .brightness import BrightnessJitterRange
from .shadow import PoleShadowModel, ShadowSpec, preset_polygons

__all__ = [
    "OP_FLIP",
    "OP_SHADOW",
    "OP_POLE_SHADOW",
    "OP_REDUCE_BRIGHTNESS",
    "OP_JITTER_BRIGHTNESS",
    "FlipStep",
    "ShadowStep",
    "PoleShadowStep",
    "ReduceBrightnessStep",
    "JitterBrightnessStep",
    "PolicyStep",
    "AugmentationPolicy",
    "policy_to_dict",
    "policy_from_dict",
    "preset_policy",
    "preset_names",
]

OP_FLIP = "horizontal_flip"
OP_SHADOW = "shadow"
OP_POLE_SHADOW = "pole_shadow"
OP_REDUCE_BRIGHTNESS = "reduce_brightness"
OP_JITTER_BRIGHTNESS = "jitter_brightness"

_MASK64 = (1 << 64) - 1


def _check_prob(prob: float) -> None:
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"step probability must lie in [0, 1], got {prob}")


@dataclass(frozen=True)
class FlipStep:
    prob: float

    def __post_init__(self) -> None:
        _check_prob(self.prob)


@dataclass(frozen=True)
class ShadowStep:
    """Apply one spec chosen uniformly from ``specs`` when the gate fires."""

    prob: float
    specs: tuple[ShadowSpec, ...]

    def __post_init__(self) -> None:
        _check_prob(self.prob)
        if not self.specs:
            raise ValueError("shadow step needs at least one spec")
        object.__setattr__(self, "specs", tuple(self.specs))


@dataclass(frozen=True)
class PoleShadowStep:
    prob: float
    models: tuple[PoleShadowModel, ...]

    def __post_init__(self) -> None:
        _check_prob(self.prob)
        if not self.models:
            raise ValueError("pole shadow step needs at least one model")
        object.__setattr__(self, "models", tuple(self.models))


@dataclass(frozen=True)
class ReduceBrightnessStep:
    prob: float
    factor: float

    def __post_init__(self) -> None:
        _check_prob(self.prob)
        if not 0.0 < self.factor <= 1.0:
            raise ValueError(f"brightness factor must lie in (0, 1], got {self.factor}")


@dataclass(frozen=True)
class JitterBrightnessStep:
    prob: float
    jitter: BrightnessJitterRange

    def __post_init__(self) -> None:
        _check_prob(self.prob)


PolicyStep = Union[
    FlipStep, ShadowStep, PoleShadowStep, ReduceBrightnessStep, JitterBrightnessStep
]


@dataclass(frozen=True)
class AugmentationPolicy:
    """Ordered augmentation steps plus the master seed for per-image seeding."""

    steps: tuple[PolicyStep, ...]
    master_seed: int = 0

    def __post_init__(self) -> None:
        if not self.steps:
            raise ValueError("policy needs at least one step")
        object.__setattr__(self, "steps", tuple(self.steps))
        if not 0 <= self.master_seed <= _MASK64:
            raise ValueError(f"master_seed must be an unsigned 64-bit value, got {self.master_seed}")


def _step_to_dict(step: PolicyStep) -> dict[str, Any]:
    if isinstance(step, FlipStep):
        return {"op": OP_FLIP, "prob": step.prob}
    if isinstance(step, ShadowStep):
        return {"op": OP_SHADOW, "prob": step.prob, "specs": [s.to_dict() for s in step.specs]}
    if isinstance(step, PoleShadowStep):
        return {
            "op": OP_POLE_SHADOW,
            "prob": step.prob,
            "models": [m.to_dict() for m in step.models],
        }
    if isinstance(step, ReduceBrightnessStep):
        return {"op": OP_REDUCE_BRIGHTNESS, "prob": step.prob, "factor": step.factor}
    if isinstance(step, JitterBrightnessStep):
        return {
            "op": OP_JITTER_BRIGHTNESS,
            "prob": step.prob,
            "range": {"low": step.jitter.low, "high": step.jitter.high},
        }
    raise TypeError(f"unknown policy step type {type(step).__name__}")


def _step_from_dict(payload: dict[str, Any]) -> PolicyStep:
    try:
        op = payload["op"]
        prob = float(payload["prob"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad policy step: {exc}") from exc
    if op == OP_FLIP:
        return FlipStep(prob)
    if op == OP_SHADOW:
        specs = payload.get("specs")
        if not isinstance(specs, list) or not specs:
            raise ValueError("shadow step needs a nonempty 'specs' list")
        return ShadowStep(prob, tuple(ShadowSpec.from_dict(s) for s in specs))
    if op == OP_POLE_SHADOW:
        models = payload.get("models")
        if not isinstance(models, list) or not models:
            raise ValueError("pole_shadow step needs a nonempty 'models' list")
        return PoleShadowStep(prob, tuple(PoleShadowModel.from_dict(m) for m in models))
    if op == OP_REDUCE_BRIGHTNESS:
        try:
            return ReduceBrightnessStep(prob, float(payload["factor"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad reduce_brightness step: {exc}") from exc
    if op == OP_JITTER_BRIGHTNESS:
        rng = payload.get("range")
        if not isinstance(rng, dict):
            raise ValueError("jitter_brightness step needs a 'range' object")
        try:
            jitter = BrightnessJitterRange(float(rng["low"]), float(rng["high"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad jitter range: {exc}") from exc
        return JitterBrightnessStep(prob, jitter)
    raise ValueError(f"unknown policy op {op!r}")


def policy_to_dict(policy: AugmentationPolicy) -> dict[str, Any]:
    """Canonical steps-only JSON shape (the seed travels alongside)."""
    return {"steps": [_step_to_dict(s) for s in policy.steps]}


def policy_from_dict(payload: dict[str, Any], master_seed: int | None = None) -> AugmentationPolicy:
    """Parse a policy JSON object; ``master_seed`` overrides any seed in the payload."""
    steps = payload.get("steps")
    if not isinstance(steps, list) or not steps:
        raise ValueError("policy needs a nonempty 'steps' list")
    if master_seed is None:
        master_seed = int(payload.get("master_seed", 0))
    return AugmentationPolicy(tuple(_step_from_dict(s) for s in steps), master_seed)


def _paper_shadow(seed: int) -> AugmentationPolicy:
    specs = tuple(ShadowSpec(p, 0.5) for p in preset_polygons())
    return AugmentationPolicy((FlipStep(0.5), ShadowStep(0.5, specs)), seed)


def _brightness50(seed: int) -> AugmentationPolicy:
    return AugmentationPolicy((ReduceBrightnessStep(1.0, 0.5),), seed)


def _brightness50_p50(seed: int) -> AugmentationPolicy:
    return AugmentationPolicy((ReduceBrightnessStep(0.5, 0.5),), seed)


def _jitter_025_1(seed: int) -> AugmentationPolicy:
    return AugmentationPolicy(
        (JitterBrightnessStep(1.0, BrightnessJitterRange(0.25, 1.0)),), seed
    )


# Named presets: the canonical shadow policy (flip half the images, then
# shadow half with one of the four preset regions at factor 0.5) and the
# three brightness comparison rows. The brightness presets consist of the
# brightness op alone so their outputs are pure functions of the input.
_PRESETS = {
    "paper-shadow": _paper_shadow,
    "brightness50": _brightness50,
    "brightness50-p50": _brightness50_p50,
    "jitter-025-1": _jitter_025_1,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset_policy(name: str, master_seed: int = 0) -> AugmentationPolicy:
    """Build a named preset policy with the given master seed."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available presets: {', '.join(preset_names())}"
        ) from None
    return factory(master_seed)
