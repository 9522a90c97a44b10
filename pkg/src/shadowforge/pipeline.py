"""Deterministic batch augmentation over class-folder datasets.

Determinism contract: every image's random stream is seeded from
(master_seed, relative_path) alone, so output bytes depend on neither
traversal order nor worker count. Within an image, deviates are consumed
in a fixed order: one uniform gate draw per policy step and, when the
gate fires, the step's parameter deviates (all of them, whether or not a
value ends up mattering downstream). Augmented images are always written
as PNG so reruns can be compared bit-for-bit.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .brightness import jitter_brightness, reduce_brightness
from .imaging import DecodeError, ImageBuffer, decode_image, encode_image, horizontal_flip
from .jsonio import write_json
from .policy import (
    OP_FLIP,
    OP_JITTER_BRIGHTNESS,
    OP_POLE_SHADOW,
    OP_REDUCE_BRIGHTNESS,
    OP_SHADOW,
    AugmentationPolicy,
    FlipStep,
    JitterBrightnessStep,
    PoleShadowStep,
    ReduceBrightnessStep,
    ShadowStep,
    policy_to_dict,
)
from .shadow import apply_pole_shadow, apply_shadow

__all__ = [
    "IMAGE_EXTENSIONS",
    "ManifestEntry",
    "DatasetManifest",
    "scan_dataset",
    "derive_image_seed",
    "augment_image",
    "augment_dataset",
    "manifest_to_dict",
]

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg"}

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


@dataclass
class ManifestEntry:
    relative_path: str
    class_label: str
    image_seed: int = 0
    applied_ops: list[dict[str, Any]] = field(default_factory=list)


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry]
    skipped: list[str] = field(default_factory=list)


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _mix64(z: int) -> int:
    # splitmix64 finalizer: full-avalanche 64-bit mix
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_image_seed(master_seed: int, relative_path: str) -> int:
    """Stable per-image seed: FNV-1a over the path bytes, one mix step,
    xor the master seed, then a second mix. Pure integer arithmetic, so
    identical inputs give identical output on every platform."""
    h = _fnv1a64(relative_path.encode("utf-8"))
    return _mix64(_mix64(h) ^ (master_seed & _MASK64))


def scan_dataset(root: Path | str) -> DatasetManifest:
    """Index a root/<class_label>/<image file> tree.

    One entry per decodable .png/.jpg/.jpeg file, sorted lexicographically
    by relative path; files that fail to decode land in ``skipped``. Seeds
    are left at the 0 placeholder and applied_ops empty.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset root {root} is not a directory")
    entries: list[ManifestEntry] = []
    skipped: list[str] = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(p for p in class_dir.iterdir() if p.is_file()):
            if path.suffix.lower() not in IMAGE_EXTENSIONS:
                continue
            rel = f"{class_dir.name}/{path.name}"
            try:
                decode_image(path.read_bytes())
            except DecodeError:
                skipped.append(rel)
                continue
            entries.append(ManifestEntry(rel, class_dir.name))
    entries.sort(key=lambda e: e.relative_path)
    skipped.sort()
    return DatasetManifest(entries, skipped)


def augment_image(
    img: ImageBuffer, policy: AugmentationPolicy, image_seed: int
) -> tuple[ImageBuffer, list[dict[str, Any]]]:
    """Run the policy over one image with a seeded generator.

    Returns the augmented buffer and a descriptor list recording every
    fired op with its resolved parameters, in execution order.
    """
    rng = random.Random(image_seed)
    applied: list[dict[str, Any]] = []
    for step in policy.steps:
        gate = rng.random()
        if gate >= step.prob:
            continue
        if isinstance(step, FlipStep):
            img = horizontal_flip(img)
            applied.append({"op": OP_FLIP, "params": {}})
        elif isinstance(step, ShadowStep):
            pick = rng.random()
            index = min(int(pick * len(step.specs)), len(step.specs) - 1)
            spec = step.specs[index]
            img = apply_shadow(img, spec)
            applied.append({"op": OP_SHADOW, "params": {"index": index, **spec.to_dict()}})
        elif isinstance(step, PoleShadowStep):
            pick = rng.random()
            index = min(int(pick * len(step.models)), len(step.models) - 1)
            model = step.models[index]
            img = apply_pole_shadow(img, model)
            applied.append({"op": OP_POLE_SHADOW, "params": {"index": index, **model.to_dict()}})
        elif isinstance(step, ReduceBrightnessStep):
            img = reduce_brightness(img, step.factor)
            applied.append({"op": OP_REDUCE_BRIGHTNESS, "params": {"factor": step.factor}})
        elif isinstance(step, JitterBrightnessStep):
            draw = rng.random()
            factor = step.jitter.low + draw * (step.jitter.high - step.jitter.low)
            img = jitter_brightness(img, step.jitter, draw)
            applied.append(
                {"op": OP_JITTER_BRIGHTNESS, "params": {"draw": draw, "factor": factor}}
            )
        else:  # pragma: no cover - unreachable with a valid policy
            raise TypeError(f"unknown policy step type {type(step).__name__}")
    return img, applied


def _augment_entry(
    in_root: str, out_root: str, rel_path: str, image_seed: int, policy: AugmentationPolicy
) -> tuple[str, list[dict[str, Any]]]:
    """Worker body: decode, augment, write out/<rel_path> as PNG."""
    try:
        data = Path(in_root, rel_path).read_bytes()
        img = decode_image(data)
        out_img, ops = augment_image(img, policy, image_seed)
        out_path = Path(out_root, rel_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_bytes(encode_image(out_img, "png"))
    except OSError as exc:
        raise OSError(f"failed while processing {rel_path}: {exc}") from exc
    return rel_path, ops


def manifest_to_dict(manifest: DatasetManifest, policy: AugmentationPolicy) -> dict[str, Any]:
    return {
        "master_seed": policy.master_seed,
        "policy": policy_to_dict(policy),
        "entries": [
            {
                "relative_path": e.relative_path,
                "class_label": e.class_label,
                "image_seed": e.image_seed,
                "applied_ops": e.applied_ops,
            }
            for e in manifest.entries
        ],
        "skipped": list(manifest.skipped),
    }


def augment_dataset(
    root: Path | str,
    out: Path | str,
    policy: AugmentationPolicy,
    *,
    workers: int = 1,
) -> DatasetManifest:
    """Augment every image under ``root`` into ``out`` and write out/manifest.json.

    Entries are processed independently (optionally in a process pool);
    the manifest join is sorted by relative path, so results are identical
    for any worker count. A failed write aborts with the failing path and
    leaves the partial output tree in place for inspection.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    root = Path(root)
    out = Path(out)
    manifest = scan_dataset(root)
    out.mkdir(parents=True, exist_ok=True)
    for entry in manifest.entries:
        entry.image_seed = derive_image_seed(policy.master_seed, entry.relative_path)
    tasks = [
        (str(root), str(out), e.relative_path, e.image_seed, policy) for e in manifest.entries
    ]
    if workers == 1 or len(tasks) <= 1:
        results = [_augment_entry(*task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_augment_entry, *task) for task in tasks]
            results = [f.result() for f in futures]
    ops_by_path = dict(results)
    for entry in manifest.entries:
        entry.applied_ops = ops_by_path[entry.relative_path]
    write_json(out / "manifest.json", manifest_to_dict(manifest, policy))
    return manifest
