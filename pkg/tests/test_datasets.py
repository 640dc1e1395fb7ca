import numpy as np
import pandas as pd
import pytest
from scipy import signal

from emg2kin import datasets
from emg2kin.datasets import (
    SyntheticConfig,
    Trial,
    concatenate_phases,
    generate_synthetic_dataset,
    load_trial,
    split_dataset,
    synthetic_ground_truth,
    write_trial_csv,
)
from emg2kin.errors import (
    EmptyTrial,
    InvalidConfig,
    MissingColumn,
    NaNData,
    RateMismatch,
    UnknownTaskId,
)


@pytest.fixture(scope="module")
def small_config():
    return SyntheticConfig(n_tasks=5, duration_s=4.0, seed=7)


@pytest.fixture(scope="module")
def small_trials(small_config):
    return generate_synthetic_dataset(small_config)


def write_synthetic_corpus(tmp_path, config):
    root = tmp_path / "data"
    for trial in generate_synthetic_dataset(config):
        write_trial_csv(trial, root)
    return root


class TestLoadTrial:
    def test_well_formed_trial(self, tmp_path, small_config, small_trials):
        root = write_synthetic_corpus(tmp_path, small_config)
        trial = load_trial(root / "P1" / "T1")
        assert trial.emg.shape[0] == 7
        assert trial.angles.shape[0] == 18
        assert trial.participant_id == 1
        assert trial.task_id == 1
        assert [p.label for p in trial.phases] == [
            "reaching",
            "manipulation",
            "release",
        ]

    def test_roundtrip_preserves_values(self, tmp_path, small_config, small_trials):
        root = write_synthetic_corpus(tmp_path, small_config)
        trial = load_trial(root / "P1" / "T2")
        source = small_trials[1]
        np.testing.assert_allclose(trial.emg, source.emg, rtol=0, atol=1e-12)
        np.testing.assert_allclose(trial.angles, source.angles, rtol=0, atol=1e-10)

    def test_nan_rejected(self, tmp_path, small_config, small_trials):
        root = write_synthetic_corpus(tmp_path, small_config)
        emg_file = root / "P1" / "T1" / "reaching_emg.csv"
        df = pd.read_csv(emg_file)
        df.loc[3, "ch2"] = np.nan
        df.to_csv(emg_file, index=False)
        with pytest.raises(NaNData):
            load_trial(root / "P1" / "T1")

    def test_missing_channel_rejected(self, tmp_path, small_config, small_trials):
        root = write_synthetic_corpus(tmp_path, small_config)
        emg_file = root / "P1" / "T1" / "reaching_emg.csv"
        df = pd.read_csv(emg_file).drop(columns=["ch6", "ch7"])
        df.to_csv(emg_file, index=False)
        with pytest.raises(MissingColumn):
            load_trial(root / "P1" / "T1")

    def test_rate_mismatch_rejected(self, tmp_path, small_config, small_trials):
        root = write_synthetic_corpus(tmp_path, small_config)
        emg_file = root / "P1" / "T1" / "manipulation_emg.csv"
        df = pd.read_csv(emg_file)
        df.iloc[: len(df) // 2].to_csv(emg_file, index=False)
        with pytest.raises(RateMismatch):
            load_trial(root / "P1" / "T1")

    def test_missing_directory(self, tmp_path):
        with pytest.raises(EmptyTrial):
            load_trial(tmp_path / "P1" / "T99")


class TestConcatenatePhases:
    def test_lengths_add_up(self, small_trials):
        rec = concatenate_phases(small_trials[0])
        trial = small_trials[0]
        assert rec.angles.shape[1] == sum(
            p.kin_end - p.kin_start for p in trial.phases
        )
        assert rec.emg.shape[1] == sum(p.emg_end - p.emg_start for p in trial.phases)

    def test_single_phase_identity(self):
        emg = np.arange(7 * 100, dtype=float).reshape(7, 100)
        angles = np.arange(18 * 10, dtype=float).reshape(18, 10)
        trial = Trial(
            participant_id=1,
            task_id=3,
            emg=emg,
            angles=angles,
            phases=[datasets.PhaseSegment("manipulation", 0, 100, 0, 10)],
        )
        rec = concatenate_phases(trial)
        np.testing.assert_array_equal(rec.emg, emg)
        np.testing.assert_array_equal(rec.angles, angles)

    def test_matches_independent_splice(self, tmp_path, small_config, small_trials):
        # splice oracle: read the phase CSVs directly with pandas and stack
        root = write_synthetic_corpus(tmp_path, small_config)
        task_dir = root / "P1" / "T3"
        parts_emg, parts_kin = [], []
        for label in ("reaching", "manipulation", "release"):
            parts_emg.append(
                pd.read_csv(task_dir / f"{label}_emg.csv").iloc[:, 1:].to_numpy().T
            )
            parts_kin.append(
                pd.read_csv(task_dir / f"{label}_kin.csv").iloc[:, 1:].to_numpy().T
            )
        rec = concatenate_phases(load_trial(task_dir))
        np.testing.assert_array_equal(rec.emg, np.hstack(parts_emg))
        np.testing.assert_array_equal(rec.angles, np.hstack(parts_kin))

    def test_empty_trial(self):
        trial = Trial(1, 1, np.zeros((7, 0)), np.zeros((18, 0)), phases=[])
        with pytest.raises(EmptyTrial):
            concatenate_phases(trial)


class TestSplitDataset:
    def _trial(self, task_id):
        return Trial(1, task_id, np.zeros((7, 100)), np.zeros((18, 10)), [])

    def test_full_26(self):
        trials = [self._trial(t) for t in range(1, 27)]
        train, val, test = split_dataset(trials)
        assert (len(train), len(val), len(test)) == (20, 3, 3)
        assert sorted(t.task_id for t in val) == [21, 22, 23]
        assert sorted(t.task_id for t in test) == [24, 25, 26]

    def test_empty(self):
        assert split_dataset([]) == ([], [], [])

    def test_test_only(self):
        trials = [self._trial(t) for t in (24, 25, 26)]
        train, val, test = split_dataset(trials)
        assert train == [] and val == [] and len(test) == 3

    def test_unknown_task(self):
        with pytest.raises(UnknownTaskId):
            split_dataset([self._trial(27)])

    def test_permutation_invariance(self):
        rng = np.random.default_rng(0)
        trials = [self._trial(t) for t in range(1, 27)]
        perm = [trials[i] for i in rng.permutation(26)]
        t1 = split_dataset(trials)
        t2 = split_dataset(perm)
        for a, b in zip(t1, t2):
            assert sorted(x.task_id for x in a) == sorted(x.task_id for x in b)


class TestSyntheticGeneration:
    def test_deterministic(self, small_config):
        a = generate_synthetic_dataset(small_config)
        b = generate_synthetic_dataset(small_config)
        for ta, tb in zip(a, b):
            assert ta.emg.tobytes() == tb.emg.tobytes()
            assert ta.angles.tobytes() == tb.angles.tobytes()

    def test_different_seeds_differ(self):
        a = generate_synthetic_dataset(SyntheticConfig(n_tasks=1, duration_s=4, seed=1))
        b = generate_synthetic_dataset(SyntheticConfig(n_tasks=1, duration_s=4, seed=2))
        assert a[0].emg.tobytes() != b[0].emg.tobytes()

    def test_shapes_and_rates(self, small_trials):
        for trial in small_trials:
            assert trial.emg.shape == (7, 4000)
            assert trial.angles.shape == (18, 400)
            assert not np.isnan(trial.emg).any()
            assert not np.isnan(trial.angles).any()

    def test_emg_power_in_band(self, small_trials):
        # periodogram check: at least 95% of power inside 20-460 Hz
        for trial in small_trials[:2]:
            for ch in range(7):
                x = trial.emg[ch] - trial.emg[ch].mean()
                freqs, pxx = signal.periodogram(x, fs=1000.0)
                total = pxx.sum()
                band = (freqs >= 20.0) & (freqs <= 460.0)
                assert pxx[band].sum() / total >= 0.95

    def test_accelerations_match_reference_map(self, small_config, small_trials):
        # regeneration oracle: recompute the coupling map from the internal
        # envelopes and compare with the accelerations implied by the angles
        env, accel = synthetic_ground_truth(small_config, task_id=2)
        mixing, scales = datasets._coupling_parameters(small_config)
        cpl = small_config.coupling
        mixed = mixing @ (env - cpl.envelope_center)
        b, a = signal.butter(2, cpl.lowpass_hz, btype="low", fs=100.0)
        expected = signal.lfilter(b, a, np.tanh(cpl.mixing_gain * mixed), axis=1)
        expected *= scales[:, None]
        np.testing.assert_allclose(accel, expected, atol=1e-10)

        # angles are the double cumulative integral of those accelerations
        trial = small_trials[1]
        velocity = np.cumsum(accel, axis=1) / 100.0
        angles = np.cumsum(velocity, axis=1) / 100.0
        np.testing.assert_allclose(trial.angles, angles, atol=1e-10)

    def test_invalid_config(self):
        with pytest.raises(InvalidConfig):
            generate_synthetic_dataset(SyntheticConfig(n_tasks=0))
        with pytest.raises(InvalidConfig):
            generate_synthetic_dataset(SyntheticConfig(n_tasks=1, duration_s=0.0))
