"""
Trial data model, segmentation, splits, synthetic generation and CSV I/O
"""
from turnkan.data.csvio import export_csv, ingest_csv, load_profiles, save_profiles
from turnkan.data.labels import (
    CHANNELS,
    LABEL_ORDER,
    NUM_CHANNELS,
    NUM_CLASSES,
    WINDOW_SIZES,
    Activity,
    GaitLabel,
    Stiffness,
)
from turnkan.data.preprocessing import Standardizer, moving_average, smooth_trials
from turnkan.data.splits import DataSplit, Divisions, split_trials, stratified_holdout, ten_divisions
from turnkan.data.synth import default_profiles, plan_layout, synth_subject
from turnkan.data.trial import Trial, Window, WindowSet, group_by_subject, validate_label_grammar
from turnkan.data.windowing import make_windows, window_trials

__all__ = [
    "Activity",
    "CHANNELS",
    "DataSplit",
    "Divisions",
    "GaitLabel",
    "LABEL_ORDER",
    "NUM_CHANNELS",
    "NUM_CLASSES",
    "Standardizer",
    "Stiffness",
    "Trial",
    "WINDOW_SIZES",
    "Window",
    "WindowSet",
    "default_profiles",
    "export_csv",
    "group_by_subject",
    "ingest_csv",
    "load_profiles",
    "make_windows",
    "moving_average",
    "plan_layout",
    "save_profiles",
    "smooth_trials",
    "split_trials",
    "stratified_holdout",
    "synth_subject",
    "ten_divisions",
    "validate_label_grammar",
    "window_trials",
]
