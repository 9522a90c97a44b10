"""shadowforge command line.

Subcommands: augment (batch-augment a dataset), preview (render one shadow
spec onto one image), evaluate (accuracy report from a predictions CSV),
breakdown (breakdown-point analysis of an accuracy-vs-angle curve).

Exit codes: 0 success, 2 user/input error, 3 environment/I-O error. The
env var SHADOWFORGE_SEED provides a default master seed; --seed wins.
Every run writes a resolved-config.json next to its outputs, sufficient
to reproduce the run.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .breakdown import BreakdownConfig, curve_from_predictions, detect_breakdown, load_curve_csv, save_curve_csv
from .charts import render_breakdown_figure, render_group_accuracy_figure, save_breakdown_chart_svg
from .imaging import ImageBuffer, decode_image, encode_image
from .jsonio import write_json
from .metrics import (
    format_percent_change,
    grouped_accuracy,
    percent_change,
    read_predictions_csv,
    top1_accuracy,
)
from .pipeline import augment_dataset
from .policy import policy_from_dict, policy_to_dict, preset_names, preset_policy
from .shadow import PoleShadowModel, ShadowSpec, apply_shadow, pole_to_polygon, preset_polygons

__all__ = ["main", "build_parser", "cmd_augment", "cmd_preview", "cmd_evaluate", "cmd_breakdown"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


def _env_seed() -> int | None:
    raw = os.environ.get("SHADOWFORGE_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SHADOWFORGE_SEED must be an integer, got {raw!r}") from None


def _resolve_seed(flag: int | None, file_seed: int | None = None) -> int:
    """Seed precedence: --seed flag, then policy-file seed, then env, then 0."""
    if flag is not None:
        return flag
    if file_seed is not None:
        return file_seed
    env = _env_seed()
    return env if env is not None else 0


def _load_json_file(path: Path) -> Any:
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def cmd_augment(args: argparse.Namespace) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        raise FileNotFoundError(f"input directory {in_dir} does not exist")
    out_dir = Path(args.out_dir)

    if args.policy is not None:
        payload = _load_json_file(Path(args.policy))
        if not isinstance(payload, dict):
            raise ValueError(f"{args.policy}: policy JSON must be an object")
        raw = payload.get("master_seed")
        file_seed = int(raw) if raw is not None else None
        policy = policy_from_dict(payload, master_seed=_resolve_seed(args.seed, file_seed))
    else:
        policy = preset_policy(args.preset, _resolve_seed(args.seed))

    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(
        out_dir / "resolved-config.json",
        {
            "command": "augment",
            "in_dir": str(in_dir),
            "out_dir": str(out_dir),
            "preset": args.preset,
            "policy_file": args.policy,
            "policy": policy_to_dict(policy),
            "master_seed": policy.master_seed,
            "workers": args.workers,
        },
    )
    manifest = augment_dataset(in_dir, out_dir, policy, workers=args.workers)
    print(f"augmented {len(manifest.entries)} images -> {out_dir}")
    if manifest.skipped:
        print(f"skipped {len(manifest.skipped)} undecodable files (see manifest.json)")
    return EXIT_OK


def _preview_spec(args: argparse.Namespace) -> tuple[ShadowSpec, dict[str, Any]]:
    if args.preset is not None:
        factor = 0.5 if args.shadow_factor is None else args.shadow_factor
        spec = ShadowSpec(preset_polygons()[args.preset - 1], factor)
        return spec, {"preset": args.preset, "shadow_factor": factor}
    if args.shadow_factor is not None:
        raise ValueError("--shadow-factor applies only to --preset mode")
    if args.spec is not None:
        payload = _load_json_file(Path(args.spec))
        return ShadowSpec.from_dict(payload), {"spec_file": args.spec}
    payload = _load_json_file(Path(args.pole))
    model = PoleShadowModel.from_dict(payload)
    return pole_to_polygon(model), {"pole_file": args.pole, "model": model.to_dict()}


def cmd_preview(args: argparse.Namespace) -> int:
    image_path = Path(args.image)
    out_path = Path(args.out)
    spec, source_info = _preview_spec(args)
    img = decode_image(image_path.read_bytes())
    augmented = apply_shadow(img, spec)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(encode_image(augmented, "png"))
    compare = ImageBuffer(np.concatenate([img.pixels, augmented.pixels], axis=1))
    compare_path = out_path.with_name(out_path.stem + "_compare.png")
    compare_path.write_bytes(encode_image(compare, "png"))
    write_json(
        out_path.parent / "resolved-config.json",
        {
            "command": "preview",
            "image": str(image_path),
            "out": str(out_path),
            "compare": str(compare_path),
            "shadow_spec": spec.to_dict(),
            **source_info,
        },
    )
    print(f"wrote {out_path} and {compare_path}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    records = read_predictions_csv(args.predictions)
    report = grouped_accuracy(records, args.group_by)
    payload = report.to_dict()
    print(f"overall top-1 accuracy: {report.overall:.6f} ({report.correct}/{report.total})")
    if args.baseline is not None:
        baseline_overall = top1_accuracy(read_predictions_csv(args.baseline))
        change = percent_change(baseline_overall, report.overall)
        display = format_percent_change(change)
        payload["baseline"] = {
            "path": str(args.baseline),
            "overall": baseline_overall,
            "percent_change": change,
            "percent_change_display": display,
        }
        print(f"change vs baseline: {display}")
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_json(out_path, payload)
    if args.plot is not None:
        render_group_accuracy_figure(Path(args.plot), report)
    write_json(
        out_path.parent / "resolved-config.json",
        {
            "command": "evaluate",
            "predictions": str(args.predictions),
            "group_by": args.group_by,
            "baseline": args.baseline,
            "out": str(out_path),
            "plot": args.plot,
        },
    )
    return EXIT_OK


def _is_curve_csv(path: Path) -> bool:
    with path.open(newline="", encoding="utf-8") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            return False
    return set(header) == {"angle_deg", "accuracy"}


def cmd_breakdown(args: argparse.Namespace) -> int:
    source = Path(args.predictions)
    if _is_curve_csv(source):
        curve = load_curve_csv(source)
    else:
        curve = curve_from_predictions(read_predictions_csv(source))
    cfg = BreakdownConfig(accuracy_floor=args.floor, drop_threshold=args.drop)
    result = detect_breakdown(curve, cfg)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_json(out_path, result.to_dict())
    if args.svg is not None:
        save_breakdown_chart_svg(Path(args.svg), curve, result, cfg)
    if args.plot is not None:
        render_breakdown_figure(Path(args.plot), curve, result, cfg)
    if args.curve_csv is not None:
        save_curve_csv(curve, Path(args.curve_csv))
    write_json(
        out_path.parent / "resolved-config.json",
        {
            "command": "breakdown",
            "predictions": str(source),
            "accuracy_floor": cfg.accuracy_floor,
            "drop_threshold": cfg.drop_threshold,
            "out": str(out_path),
            "svg": args.svg,
            "plot": args.plot,
            "curve_csv": args.curve_csv,
        },
    )
    for side, angle, triggered in (
        ("positive", result.positive, result.positive_triggered),
        ("negative", result.negative, result.negative_triggered),
    ):
        state = "triggered" if triggered else "no breakdown"
        print(f"{side} breakdown: {angle} deg ({state})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowforge",
        description="Deterministic polygonal shadow augmentation and robustness evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_aug = sub.add_parser("augment", help="augment a class-folder dataset into an output tree")
    p_aug.add_argument("in_dir", help="dataset root: <root>/<class>/<image>")
    p_aug.add_argument("out_dir", help="output root (created if missing)")
    source = p_aug.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=preset_names(), help="named policy preset")
    source.add_argument("--policy", help="policy JSON file")
    p_aug.add_argument("--seed", type=int, default=None, help="master seed (wins over policy file and SHADOWFORGE_SEED)")
    p_aug.add_argument("--workers", type=int, default=1, help="parallel worker processes (default 1)")
    p_aug.set_defaults(func=cmd_augment)

    p_prev = sub.add_parser("preview", help="apply one shadow spec to one image")
    p_prev.add_argument("image", help="input image (PNG or JPEG)")
    p_prev.add_argument("out", help="output PNG path; a *_compare.png is written beside it")
    spec_source = p_prev.add_mutually_exclusive_group(required=True)
    spec_source.add_argument("--preset", type=int, choices=(1, 2, 3, 4), help="preset polygon index")
    spec_source.add_argument("--spec", help="shadow spec JSON file")
    spec_source.add_argument("--pole", help="pole shadow model JSON file")
    p_prev.add_argument("--shadow-factor", type=float, default=None,
                        help="shadow factor for --preset mode (default 0.5)")
    p_prev.set_defaults(func=cmd_preview)

    p_eval = sub.add_parser("evaluate", help="accuracy report from a predictions CSV")
    p_eval.add_argument("predictions", help="CSV: item_id,true_label,predicted_label[,tags...]")
    p_eval.add_argument("--out", required=True, help="output report JSON path")
    p_eval.add_argument("--group-by", default="class", help="condition tag to group by (default: class)")
    p_eval.add_argument("--baseline", default=None, help="baseline predictions CSV for percent change")
    p_eval.add_argument("--plot", default=None, help="also render a per-group accuracy PNG figure")
    p_eval.set_defaults(func=cmd_evaluate)

    p_brk = sub.add_parser("breakdown", help="breakdown-point analysis of an accuracy curve")
    p_brk.add_argument("predictions",
                       help="predictions CSV with angle_deg, or a curve CSV (angle_deg,accuracy)")
    p_brk.add_argument("--out", required=True, help="output result JSON path")
    p_brk.add_argument("--floor", type=float, default=0.60, help="accuracy floor (default 0.60)")
    p_brk.add_argument("--drop", type=float, default=0.15,
                       help="per-step drop threshold in accuracy fraction (default 0.15)")
    p_brk.add_argument("--svg", default=None, help="write a self-contained SVG chart here")
    p_brk.add_argument("--plot", default=None, help="write a PNG report figure here")
    p_brk.add_argument("--curve-csv", default=None, help="also write the assembled curve CSV here")
    p_brk.set_defaults(func=cmd_breakdown)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
