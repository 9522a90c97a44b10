"""Deterministic polygonal shadow augmentation and robustness evaluation tools."""

from .imaging import (
    DecodeError,
    ImageBuffer,
    UnsupportedFormatError,
    decode_image,
    encode_image,
    horizontal_flip,
)
from .shadow import (
    PoleShadowModel,
    RegionMask,
    ShadowPolygon,
    ShadowSpec,
    apply_pole_shadow,
    apply_shadow,
    pole_to_polygon,
    preset_polygons,
    rasterize_polygon,
)
from .brightness import BrightnessJitterRange, jitter_brightness, reduce_brightness
from .policy import (
    OP_FLIP,
    OP_JITTER_BRIGHTNESS,
    OP_POLE_SHADOW,
    OP_REDUCE_BRIGHTNESS,
    OP_SHADOW,
    AugmentationPolicy,
    FlipStep,
    JitterBrightnessStep,
    PolicyStep,
    PoleShadowStep,
    ReduceBrightnessStep,
    ShadowStep,
    policy_from_dict,
    policy_to_dict,
    preset_names,
    preset_policy,
)
from .pipeline import (
    DatasetManifest,
    ManifestEntry,
    augment_dataset,
    augment_image,
    derive_image_seed,
    scan_dataset,
)
from .metrics import (
    AccuracyReport,
    GroupStats,
    PredictionRecord,
    format_percent_change,
    grouped_accuracy,
    percent_change,
    read_predictions_csv,
    top1_accuracy,
)
from .breakdown import (
    ANGLE_GRID,
    AccuracyCurve,
    BreakdownConfig,
    BreakdownResult,
    average_breakdowns,
    curve_from_predictions,
    detect_breakdown,
    format_degrees,
    load_curve_csv,
    save_curve_csv,
)
from .charts import (
    breakdown_chart_svg,
    render_breakdown_figure,
    render_group_accuracy_figure,
    save_breakdown_chart_svg,
)

__version__ = "0.1.0"

__all__ = [
    "DecodeError",
    "ImageBuffer",
    "UnsupportedFormatError",
    "decode_image",
    "encode_image",
    "horizontal_flip",
    "PoleShadowModel",
    "RegionMask",
    "ShadowPolygon",
    "ShadowSpec",
    "apply_pole_shadow",
    "apply_shadow",
    "pole_to_polygon",
    "preset_polygons",
    "rasterize_polygon",
    "BrightnessJitterRange",
    "jitter_brightness",
    "reduce_brightness",
    "OP_FLIP",
    "OP_JITTER_BRIGHTNESS",
    "OP_POLE_SHADOW",
    "OP_REDUCE_BRIGHTNESS",
    "OP_SHADOW",
    "AugmentationPolicy",
    "FlipStep",
    "JitterBrightnessStep",
    "PolicyStep",
    "PoleShadowStep",
    "ReduceBrightnessStep",
    "ShadowStep",
    "policy_from_dict",
    "policy_to_dict",
    "preset_names",
    "preset_policy",
    "DatasetManifest",
    "ManifestEntry",
    "augment_dataset",
    "augment_image",
    "derive_image_seed",
    "scan_dataset",
    "AccuracyReport",
    "GroupStats",
    "PredictionRecord",
    "format_percent_change",
    "grouped_accuracy",
    "percent_change",
    "read_predictions_csv",
    "top1_accuracy",
    "ANGLE_GRID",
    "AccuracyCurve",
    "BreakdownConfig",
    "BreakdownResult",
    "average_breakdowns",
    "curve_from_predictions",
    "detect_breakdown",
    "format_degrees",
    "load_curve_csv",
    "save_curve_csv",
    "breakdown_chart_svg",
    "render_breakdown_figure",
    "render_group_accuracy_figure",
    "save_breakdown_chart_svg",
    "__version__",
]
