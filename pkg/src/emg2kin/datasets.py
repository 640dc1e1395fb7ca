"""Trial loading, task-wise splits and synthetic dataset generation.

On-disk layout (one CSV per participant/task/phase):

    data/P<participant>/T<task>/<phase>_emg.csv   columns t, ch1..ch7  @ 1 kHz
    data/P<participant>/T<task>/<phase>_kin.csv   columns t, j1..j18   @ 100 Hz

Phases are named reaching, manipulation, release and appear in that order.
Trials containing NaN values anywhere are rejected whole.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import signal

from .errors import (
    EmptyTrial,
    InvalidConfig,
    MissingColumn,
    NaNData,
    RateMismatch,
    UnknownTaskId,
)

N_EMG_CHANNELS = 7
N_JOINTS = 18
EMG_FS = 1000.0
KIN_FS = 100.0

PHASE_ORDER = ("reaching", "manipulation", "release")

TRAIN_TASK_IDS = frozenset(range(1, 21))
VALIDATION_TASK_IDS = frozenset({21, 22, 23})
TEST_TASK_IDS = frozenset({24, 25, 26})

EMG_COLUMNS = ["t"] + [f"ch{i}" for i in range(1, N_EMG_CHANNELS + 1)]
KIN_COLUMNS = ["t"] + [f"j{i}" for i in range(1, N_JOINTS + 1)]


@dataclass(frozen=True)
class PhaseSegment:
    """Sample ranges of one movement phase, at both sampling rates."""

    label: str
    emg_start: int
    emg_end: int
    kin_start: int
    kin_end: int


@dataclass
class Trial:
    """One participant performing one task: raw EMG, joint angles, phases."""

    participant_id: int
    task_id: int
    emg: np.ndarray  # [7 x N_e] millivolts @ 1 kHz
    angles: np.ndarray  # [18 x N_k] degrees @ 100 Hz
    phases: list = field(default_factory=list)


@dataclass
class ContinuousRecording:
    """Phase-concatenated signals for one trial."""

    participant_id: int
    task_id: int
    emg: np.ndarray
    angles: np.ndarray


def _read_phase_csv(path, expected_columns):
    df = pd.read_csv(path)
    if list(df.columns) != expected_columns:
        raise MissingColumn(
            f"{path}: expected columns {expected_columns}, got {list(df.columns)}"
        )
    values = df[expected_columns[1:]].to_numpy(dtype=np.float64).T
    if np.isnan(values).any():
        raise NaNData(f"{path}: NaN values present, trial rejected")
    return values


def load_trial(path):
    """Load one trial from a task directory containing per-phase CSV pairs.

    Returns a Trial whose emg/angles matrices are the phase files stacked in
    canonical phase order, with phase boundaries recorded in trial.phases.
    """
    task_dir = Path(path)
    if not task_dir.is_dir():
        raise EmptyTrial(f"{task_dir} is not a directory")
    participant_id = int(task_dir.parent.name.lstrip("P"))
    task_id = int(task_dir.name.lstrip("T"))

    emg_parts, kin_parts, phases = [], [], []
    emg_pos, kin_pos = 0, 0
    for label in PHASE_ORDER:
        emg_file = task_dir / f"{label}_emg.csv"
        kin_file = task_dir / f"{label}_kin.csv"
        if not emg_file.exists() and not kin_file.exists():
            continue
        if not (emg_file.exists() and kin_file.exists()):
            raise MissingColumn(f"{task_dir}: phase {label} has only one of emg/kin")
        emg = _read_phase_csv(emg_file, EMG_COLUMNS)
        kin = _read_phase_csv(kin_file, KIN_COLUMNS)
        emg_parts.append(emg)
        kin_parts.append(kin)
        phases.append(
            PhaseSegment(
                label=label,
                emg_start=emg_pos,
                emg_end=emg_pos + emg.shape[1],
                kin_start=kin_pos,
                kin_end=kin_pos + kin.shape[1],
            )
        )
        emg_pos += emg.shape[1]
        kin_pos += kin.shape[1]

    if not phases:
        raise EmptyTrial(f"{task_dir}: no phase files found")

    emg_all = np.hstack(emg_parts)
    kin_all = np.hstack(kin_parts)
    expected_emg = (EMG_FS / KIN_FS) * kin_all.shape[1]
    if abs(emg_all.shape[1] - expected_emg) > 10:
        raise RateMismatch(
            f"{task_dir}: {emg_all.shape[1]} EMG samples inconsistent with "
            f"{kin_all.shape[1]} kinematic samples at 1000/100 Hz"
        )
    return Trial(
        participant_id=participant_id,
        task_id=task_id,
        emg=emg_all,
        angles=kin_all,
        phases=phases,
    )


def load_participant(data_root, participant_id):
    """Load every task directory under data_root/P<participant_id>, sorted."""
    pdir = Path(data_root) / f"P{participant_id}"
    if not pdir.is_dir():
        raise EmptyTrial(f"{pdir} does not exist")
    trials = []
    for task_dir in sorted(pdir.iterdir(), key=lambda p: int(p.name.lstrip("T"))):
        if task_dir.is_dir():
            trials.append(load_trial(task_dir))
    return trials


def concatenate_phases(trial):
    """Splice the phase segments of a trial into continuous matrices."""
    if not trial.phases:
        raise EmptyTrial(f"trial ({trial.participant_id}, {trial.task_id}) has no phases")
    emg = np.hstack([trial.emg[:, p.emg_start : p.emg_end] for p in trial.phases])
    angles = np.hstack([trial.angles[:, p.kin_start : p.kin_end] for p in trial.phases])
    return ContinuousRecording(
        participant_id=trial.participant_id,
        task_id=trial.task_id,
        emg=emg,
        angles=angles,
    )


def split_dataset(trials):
    """Route trials into (train, validation, test) lists by task id."""
    train, validation, test = [], [], []
    for trial in trials:
        if trial.task_id in TRAIN_TASK_IDS:
            train.append(trial)
        elif trial.task_id in VALIDATION_TASK_IDS:
            validation.append(trial)
        elif trial.task_id in TEST_TASK_IDS:
            test.append(trial)
        else:
            raise UnknownTaskId(f"task id {trial.task_id} outside 1..26")
    return train, validation, test


# ---------------------------------------------------------------------------
# Synthetic data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticCoupling:
    """Fixed ground-truth map from EMG envelopes to joint accelerations.

    Envelopes are mixed by a random [18 x 7] matrix (unit-norm rows), centered,
    passed through a tanh saturation and a causal 5 Hz one-pole lowpass, then
    scaled per joint into degrees/s^2.
    """

    mixing_gain: float = 1.6
    envelope_center: float = 0.9
    lowpass_hz: float = 5.0
    scale_low: float = 40.0
    scale_high: float = 90.0


@dataclass(frozen=True)
class SyntheticConfig:
    n_tasks: int = 26
    duration_s: float = 4.0
    seed: int = 0
    participant_id: int = 1
    coupling: SyntheticCoupling = field(default_factory=SyntheticCoupling)


def _coupling_parameters(config):
    """Draw the fixed map parameters (shared by every task) from the seed."""
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0x715]))
    mixing = rng.standard_normal((N_JOINTS, N_EMG_CHANNELS))
    mixing /= np.linalg.norm(mixing, axis=1, keepdims=True)
    cpl = config.coupling
    scales = rng.uniform(cpl.scale_low, cpl.scale_high, size=N_JOINTS)
    return mixing, scales


def _smooth_positive_envelope(rng, n_samples, fs):
    """Slow positive burst profile: lowpassed noise through a softplus."""
    z = rng.standard_normal(n_samples)
    b, a = signal.butter(2, 1.2, btype="low", fs=fs)
    z = signal.filtfilt(b, a, z, padtype="odd", padlen=6)
    z = (z - z.mean()) / max(z.std(), 1e-12)
    return np.log1p(np.exp(1.5 * z))


def _bandlimited_carrier(rng, n_samples, fs):
    """Unit-variance wideband carrier confined to 25-450 Hz."""
    x = rng.standard_normal(n_samples)
    b, a = signal.butter(4, [25.0, 450.0], btype="band", fs=fs)
    x = signal.filtfilt(b, a, x, padtype="odd", padlen=24)
    return x / max(x.std(), 1e-12)


def synthetic_accelerations(envelopes_100, config):
    """Apply the fixed coupling map to envelope trajectories sampled at 100 Hz.

    envelopes_100: [7 x T] array. Returns [18 x T] accelerations in deg/s^2.
    The lowpass is causal (single forward pass), so the map never looks ahead.
    """
    mixing, scales = _coupling_parameters(config)
    cpl = config.coupling
    mixed = mixing @ (envelopes_100 - cpl.envelope_center)
    saturated = np.tanh(cpl.mixing_gain * mixed)
    b, a = signal.butter(2, cpl.lowpass_hz, btype="low", fs=KIN_FS)
    smoothed = signal.lfilter(b, a, saturated, axis=1)
    return smoothed * scales[:, None]


def _generate_task(config, task_id):
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0xDA7A, task_id]))
    n_emg = int(round(config.duration_s * EMG_FS))
    n_kin = n_emg // 10

    envelopes = np.stack(
        [_smooth_positive_envelope(rng, n_emg, EMG_FS) for _ in range(N_EMG_CHANNELS)]
    )
    carriers = np.stack(
        [_bandlimited_carrier(rng, n_emg, EMG_FS) for _ in range(N_EMG_CHANNELS)]
    )
    emg = envelopes * carriers

    env_100 = envelopes[:, ::10][:, :n_kin]
    accel = synthetic_accelerations(env_100, config)
    velocity = np.cumsum(accel, axis=1) / KIN_FS
    angles = np.cumsum(velocity, axis=1) / KIN_FS

    # three phases: 25% reaching, 50% manipulation, 25% release
    k1, k2 = n_kin // 4, n_kin - n_kin // 4
    phases = []
    for label, ks, ke in (
        ("reaching", 0, k1),
        ("manipulation", k1, k2),
        ("release", k2, n_kin),
    ):
        phases.append(
            PhaseSegment(
                label=label,
                emg_start=ks * 10,
                emg_end=ke * 10,
                kin_start=ks,
                kin_end=ke,
            )
        )
    return Trial(
        participant_id=config.participant_id,
        task_id=task_id,
        emg=emg,
        angles=angles,
        phases=phases,
    )


def generate_synthetic_dataset(config):
    """Generate one trial per task id 1..n_tasks, deterministically from the seed."""
    if config.n_tasks < 1:
        raise InvalidConfig(f"n_tasks must be >= 1, got {config.n_tasks}")
    if not (config.duration_s > 0):
        raise InvalidConfig(f"duration_s must be > 0, got {config.duration_s}")
    if config.duration_s * KIN_FS < 20:
        raise InvalidConfig("duration too short to form phases")
    return [_generate_task(config, task_id) for task_id in range(1, config.n_tasks + 1)]


def synthetic_ground_truth(config, task_id):
    """Internal envelopes and accelerations for one task (for verification)."""
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0xDA7A, task_id]))
    n_emg = int(round(config.duration_s * EMG_FS))
    n_kin = n_emg // 10
    envelopes = np.stack(
        [_smooth_positive_envelope(rng, n_emg, EMG_FS) for _ in range(N_EMG_CHANNELS)]
    )
    env_100 = envelopes[:, ::10][:, :n_kin]
    accel = synthetic_accelerations(env_100, config)
    return env_100, accel


def write_trial_csv(trial, data_root):
    """Write a trial to the standard per-phase CSV layout."""
    task_dir = Path(data_root) / f"P{trial.participant_id}" / f"T{trial.task_id}"
    task_dir.mkdir(parents=True, exist_ok=True)
    for phase in trial.phases:
        emg = trial.emg[:, phase.emg_start : phase.emg_end]
        kin = trial.angles[:, phase.kin_start : phase.kin_end]
        emg_t = (phase.emg_start + np.arange(emg.shape[1])) / EMG_FS
        kin_t = (phase.kin_start + np.arange(kin.shape[1])) / KIN_FS
        emg_df = pd.DataFrame(
            np.column_stack([emg_t, emg.T]), columns=EMG_COLUMNS
        )
        kin_df = pd.DataFrame(
            np.column_stack([kin_t, kin.T]), columns=KIN_COLUMNS
        )
        emg_df.to_csv(task_dir / f"{phase.label}_emg.csv", index=False)
        kin_df.to_csv(task_dir / f"{phase.label}_kin.csv", index=False)
    return task_dir
