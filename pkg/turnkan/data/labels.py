"""
Label, activity and channel vocabulary
"""
from enum import Enum
from typing import Dict, Tuple


class GaitLabel(str, Enum):
    """Class of the most recent sample in a window"""
    SW = "SW"  # straight walking
    ST = "ST"  # stance phase at the turn apex
    SP = "SP"  # swing phase immediately preceding the turn


class Activity(str, Enum):
    """Walking task of one recorded trial"""
    STRAIGHT = "straight"
    SPIN90 = "spin90"
    STEP90 = "step90"
    PIVOT180 = "pivot180"
    LTEST = "L-test"


class Stiffness(str, Enum):
    """Torsional stiffness setting worn during the trial"""
    COMPLIANT = "compliant"
    INTERMEDIATE = "intermediate"
    STIFF = "stiff"


LABEL_ORDER: Tuple[GaitLabel, ...] = (GaitLabel.SW, GaitLabel.ST, GaitLabel.SP)
LABEL_INDEX: Dict[str, int] = {label.value: i for i, label in enumerate(LABEL_ORDER)}
NUM_CLASSES = len(LABEL_ORDER)

TURN_TYPES: Tuple[Activity, ...] = (Activity.SPIN90, Activity.STEP90, Activity.PIVOT180)

CHANNELS: Tuple[str, ...] = ("acc_x", "acc_y", "acc_z", "gyro_x", "gyro_y", "gyro_z")
NUM_CHANNELS = len(CHANNELS)

SAMPLE_RATE_HZ = 120
WINDOW_SIZES: Tuple[int, ...] = (10, 20, 30)
# controller must decide within 300 ms of swing
MAX_PREDICTION_SAMPLES = 36


def label_name(index: int) -> str:
    return LABEL_ORDER[index].value
