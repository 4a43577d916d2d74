"""
Synthetic labeled shank-IMU trials

SW samples follow a two-harmonic oscillation locked to the stride cadence.
SP adds a swing burst on transverse gyro, ST a vertical-acceleration plateau
with damped oscillation; both shift gyro-z by the turn direction. Trial and
segment lengths are solved so window proportions land on the profile targets.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from turnkan.data.labels import LABEL_INDEX, SAMPLE_RATE_HZ, TURN_TYPES, Activity, Stiffness
from turnkan.data.trial import Trial, validate_label_grammar
from turnkan.schemas.profile import ClassProportions, SubjectProfile
from turnkan.utils.exceptions import InfeasibleProfileError

logger = logging.getLogger(__name__)

# lead-in and lead-out must each hold a full window of the largest size
MIN_LEAD_SAMPLES = 30
# lengths are calibrated for the middle window size
REFERENCE_WINDOW = 20
SWING_FRACTION = 0.4
GRAVITY = 9.81

_TURN_DIRECTION = {
    Activity.SPIN90: 1.0,
    Activity.STEP90: -1.0,
    Activity.PIVOT180: 1.5,
    Activity.LTEST: -1.5,
}


@dataclass(frozen=True)
class TrialLayout:
    """Segment lengths in samples shared by all trials of a subject"""
    swing: int
    stance: int
    trial_length: int

    @property
    def lead_total(self) -> int:
        return self.trial_length - self.swing - self.stance


def default_profiles() -> List[SubjectProfile]:
    """Five amputee-like subjects with SW shares from 0.70 to 0.74"""
    rows = [
        ("A01", 0.90, (0.740, 0.165, 0.095)),
        ("A02", 0.91, (0.740, 0.172, 0.088)),
        ("A03", 1.00, (0.725, 0.181, 0.094)),
        ("A04", 0.91, (0.710, 0.188, 0.102)),
        ("A05", 0.88, (0.700, 0.202, 0.098)),
    ]
    return [
        SubjectProfile(
            subject_id=subject,
            cadence_hz=cadence,
            target_proportions=ClassProportions(SW=sw, ST=st, SP=sp),
        )
        for subject, cadence, (sw, st, sp) in rows
    ]


def plan_layout(profile: SubjectProfile) -> TrialLayout:
    """
    Solve segment lengths for the profile's targets

    With T turning and S straight trials of common length L, a swing of s_p
    samples and a stance of s_t samples, the shares are
    SP = T*s_p / ((T+S)*L) and ST = SP * s_t / s_p.

    Raises:
        InfeasibleProfileError: Lead-in or lead-out would be shorter than a window
    """
    targets = profile.target_proportions
    turning = len(TURN_TYPES) * len(Stiffness) * profile.trials_per_cell + profile.ltest_trials
    total = turning + profile.straight_trials
    stride = SAMPLE_RATE_HZ / profile.cadence_hz
    swing = max(int(round(SWING_FRACTION * stride)), 1)
    stance = max(int(round(swing * targets.ST / targets.SP)), 1)
    effective = turning * swing / (targets.SP * total)
    length = int(round(effective)) + REFERENCE_WINDOW - 1
    layout = TrialLayout(swing=swing, stance=stance, trial_length=length)
    shortest_lead = int(layout.lead_total * (1.0 - profile.length_jitter)) // 2
    if shortest_lead < MIN_LEAD_SAMPLES:
        raise InfeasibleProfileError(
            f"profile {profile.subject_id}: targets {targets.model_dump()} leave {shortest_lead} "
            f"straight samples around the turn, need {MIN_LEAD_SAMPLES}"
        )
    return layout


def _envelope(length: int, ramp: int = 3) -> np.ndarray:
    """Unit plateau with short linear onset and offset"""
    env = np.ones(length)
    steps = min(ramp, length)
    rise = np.arange(1, steps + 1) / steps
    env[:steps] = np.minimum(env[:steps], rise)
    env[length - steps:] = np.minimum(env[length - steps:], rise[::-1])
    return env


def _gait(n: int, profile: SubjectProfile, phase0: float) -> np.ndarray:
    t = np.arange(n) / SAMPLE_RATE_HZ
    phi = 2.0 * np.pi * profile.cadence_hz * t + phase0
    c = np.arange(6)
    wave = np.sin(phi[:, None] + c * np.pi / 3.0) + 0.3 * np.sin(2.0 * phi[:, None] + c * np.pi / 5.0)
    signals = wave * np.asarray(profile.amp)
    signals[:, 1] += GRAVITY
    return signals


def _trial_signals(
    profile: SubjectProfile,
    layout: TrialLayout,
    activity: Activity,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    amp = np.asarray(profile.amp)
    jitter = 1.0 + rng.uniform(-profile.length_jitter, profile.length_jitter)
    phase0 = rng.uniform(0.0, 2.0 * np.pi)

    if activity == Activity.STRAIGHT:
        n = int(round(layout.trial_length * jitter))
        signals = _gait(n, profile, phase0)
        labels = np.full(n, LABEL_INDEX["SW"], dtype=np.int64)
    else:
        lead_total = int(round(layout.lead_total * jitter))
        lead_in = lead_total // 2
        lead_out = lead_total - lead_in
        n = lead_in + layout.swing + layout.stance + lead_out
        signals = _gait(n, profile, phase0)
        labels = np.full(n, LABEL_INDEX["SW"], dtype=np.int64)

        sep = profile.separation
        direction = _TURN_DIRECTION[activity]
        sp = slice(lead_in, lead_in + layout.swing)
        st = slice(sp.stop, sp.stop + layout.stance)
        labels[sp] = LABEL_INDEX["SP"]
        labels[st] = LABEL_INDEX["ST"]

        env = _envelope(layout.swing)
        signals[sp, 3] += sep * amp[3] * env
        signals[sp, 0] += 0.5 * sep * amp[0] * env
        signals[sp, 5] += 0.6 * direction * sep * amp[5] * env

        env = _envelope(layout.stance)
        # stance damps the stride oscillation around gravity
        signals[st, 1] -= GRAVITY
        signals[st] *= 1.0 - 0.5 * env[:, None]
        signals[st, 1] += GRAVITY + sep * amp[1] * env
        signals[st, 3] -= 0.5 * sep * amp[3] * env
        signals[st, 5] += direction * sep * amp[5] * env

    if profile.noise_sigma > 0:
        signals = signals + rng.normal(0.0, 1.0, signals.shape) * (profile.noise_sigma * amp)
    return signals, labels


def synth_subject(profile: SubjectProfile, seed: int) -> List[Trial]:
    """
    Generate every trial of one subject

    Trials come in a fixed order (turn cells, L-tests, straight) and draw from
    one seeded generator, so equal (profile, seed) pairs give equal trials.

    Raises:
        InfeasibleProfileError: The targets cannot be met with the trial counts
    """
    layout = plan_layout(profile)
    rng = np.random.default_rng(seed)
    plan: List[Tuple[Activity, Stiffness, int]] = []
    for turn in TURN_TYPES:
        for stiffness in Stiffness:
            plan.extend((turn, stiffness, i + 1) for i in range(profile.trials_per_cell))
    stiffness_cycle = list(Stiffness)
    plan.extend(
        (Activity.LTEST, stiffness_cycle[i % len(stiffness_cycle)], i + 1)
        for i in range(profile.ltest_trials)
    )
    plan.extend(
        (Activity.STRAIGHT, stiffness_cycle[i % len(stiffness_cycle)], i + 1)
        for i in range(profile.straight_trials)
    )

    trials = []
    for activity, stiffness, number in plan:
        signals, labels = _trial_signals(profile, layout, activity, rng)
        trial = Trial(
            subject=profile.subject_id,
            activity=activity,
            stiffness=stiffness,
            trial=number,
            signals=signals,
            labels=labels,
        )
        validate_label_grammar(trial)
        trials.append(trial)
    logger.info(
        f"Generated {len(trials)} trials for {profile.subject_id} "
        f"(swing {layout.swing}, stance {layout.stance}, length {layout.trial_length})"
    )
    return trials
