"""
Experiment driver behind the command-line modes
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from turnkan.data.csvio import ingest_csv, load_profiles
from turnkan.data.preprocessing import smooth_trials
from turnkan.data.splits import DataSplit, split_trials, ten_divisions
from turnkan.data.synth import default_profiles, synth_subject
from turnkan.data.trial import Trial, WindowSet, group_by_subject
from turnkan.hyperopt.objective import ValidationObjective
from turnkan.hyperopt.search import optimize
from turnkan.hyperopt.space import space_for
from turnkan.models.factory import build_model
from turnkan.models.presets import preset_config
from turnkan.models.serialization import load_model
from turnkan.models.trained import TrainedModel
from turnkan.schemas.experiment import POOLED, ExperimentConfig, ExperimentMode, RunArtifact
from turnkan.schemas.model import ModelConfig, ModelFamily, parse_model_config
from turnkan.schemas.report import ProportionRecord, TimingRecord
from turnkan.services.base import BaseService
from turnkan.services.benchmark import benchmark_service
from turnkan.services.evaluation import evaluation_service
from turnkan.services.training import training_service
from turnkan.stats.harness import DivisionScores, hypothesis_one, hypothesis_two
from turnkan.utils.exceptions import ConfigurationError, DatasetNotFoundError

logger = logging.getLogger(__name__)


@dataclass
class TrainingJob:
    """One model to fit; ``subject`` is 'pooled' for models trained on every subject"""
    subject: str
    label: str
    config: ModelConfig
    windows: WindowSet

    @property
    def key(self) -> str:
        return f"{self.subject}/{self.label}"


def pooled_label(family: ModelFamily) -> str:
    return f"{family.value}-{POOLED}"


class ExperimentService(BaseService):
    """Service running one experiment mode end to end"""

    def run(self, config: ExperimentConfig) -> RunArtifact:
        """
        Execute the configured mode

        Args:
            config: Validated experiment configuration

        Returns:
            Run artifact; nothing is rendered to the run directory except the
            hyperparameter history, which is appended as the search proceeds

        Raises:
            ConfigurationError: Unknown subject or invalid model overrides
            DatasetNotFoundError: Missing or empty dataset
            NumericalError: Training diverged
        """
        handlers: Dict[ExperimentMode, Callable[[ExperimentConfig], RunArtifact]] = {
            ExperimentMode.GENERATE: self.generate,
            ExperimentMode.TRAIN: self.train,
            ExperimentMode.HYPEROPT: self.hyperopt,
            ExperimentMode.EVALUATE: self.evaluate,
            ExperimentMode.COMPARE_HP1: self.compare_hp1,
            ExperimentMode.COMPARE_HP2: self.compare_hp2,
            ExperimentMode.BENCH: self.bench,
        }
        logger.info(f"Running {config.mode.value} with seed {config.seed}")
        return handlers[config.mode](config)

    # Data

    def load_trials(self, config: ExperimentConfig) -> List[Trial]:
        trials = ingest_csv(config.dataset)
        if not trials:
            raise DatasetNotFoundError(f"Dataset {config.dataset} contains no trials")
        return smooth_trials(trials) if config.smoothing else trials

    def load_splits(self, config: ExperimentConfig) -> Dict[str, DataSplit]:
        """Trial-level split of every subject, in dataset order"""
        return {
            subject: split_trials(trials, config.seed)
            for subject, trials in group_by_subject(self.load_trials(config)).items()
        }

    @staticmethod
    def select_subjects(config: ExperimentConfig, splits: Dict[str, DataSplit]) -> List[str]:
        if config.subject is None or config.subject == POOLED:
            return list(splits)
        if config.subject not in splits:
            raise ConfigurationError(f"no subject {config.subject!r} in {config.dataset}", "subject")
        return [config.subject]

    def window_size(self, config: ExperimentConfig) -> int:
        return config.window_size or self.config.window_size

    @staticmethod
    def model_config(family: ModelFamily, config: ExperimentConfig, window_size: int) -> ModelConfig:
        """Family preset with the run's overrides"""
        preset = preset_config(family, window_size).model_dump()
        overrides = config.models.get(family.value, {})
        return parse_model_config({**preset, **overrides, "family": family, "window_size": window_size})

    @staticmethod
    def pooled_windows(splits: Dict[str, DataSplit], window_size: int) -> WindowSet:
        return WindowSet.concat([split.train_windows(window_size) for split in splits.values()], window_size)

    # Training

    def _fit(self, job: TrainingJob, seed: int, epochs: Optional[int]) -> TrainedModel:
        model = build_model(job.config, seed=seed)
        logger.info(f"Training {job.key} on {len(job.windows)} windows")
        return training_service.train(model, job.windows, epochs=epochs)

    def train_all(self, jobs: List[TrainingJob], config: ExperimentConfig) -> List[TrainedModel]:
        """Fit independent jobs, concurrently when max_workers > 1; results keep job order"""
        workers = min(self.config.max_workers, len(jobs)) or 1
        if workers == 1:
            return [self._fit(job, config.seed, config.epochs) for job in jobs]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda job: self._fit(job, config.seed, config.epochs), jobs))

    def _record(
        self,
        artifact: RunArtifact,
        job: TrainingJob,
        model: TrainedModel,
        split: DataSplit,
        subject: str,
        bench: bool = False,
    ) -> DivisionScores:
        """Evaluate on one subject's test windows and book the results"""
        window_size = model.config.window_size
        test = split.test_windows(window_size)
        divisions = ten_divisions(test, artifact.config.seed)
        report = evaluation_service.evaluate(
            model,
            test,
            subject=subject,
            label=job.label,
            divisions=divisions,
            train_labels=job.windows.labels,
        )
        artifact.evaluations.append(report)
        artifact.models[job.key] = model
        artifact.model_configs[job.key] = model.config
        latency = None
        if bench:
            latency = benchmark_service.benchmark_inference(
                model, test, repetitions=artifact.config.repetitions
            ).median_seconds
        if not any(t.subject == job.subject and t.model == job.label for t in artifact.timings):
            artifact.timings.append(
                TimingRecord(
                    subject=job.subject,
                    model=job.label,
                    family=model.config.family,
                    num_parameters=model.num_parameters(),
                    train_seconds=model.train_seconds,
                    inference_seconds=latency,
                )
            )
        return DivisionScores(
            subject=subject, label=job.label, scores=tuple(report.division_scores), checksum=divisions.checksum
        )

    def _specific_jobs(
        self, config: ExperimentConfig, splits: Dict[str, DataSplit], subjects: List[str], window_size: int
    ) -> List[TrainingJob]:
        return [
            TrainingJob(
                subject=subject,
                label=family.value,
                config=self.model_config(family, config, window_size),
                windows=splits[subject].train_windows(window_size),
            )
            for subject in subjects
            for family in config.families
        ]

    def _pooled_jobs(
        self, config: ExperimentConfig, splits: Dict[str, DataSplit], window_size: int
    ) -> List[TrainingJob]:
        windows = self.pooled_windows(splits, window_size)
        return [
            TrainingJob(
                subject=POOLED,
                label=pooled_label(family),
                config=self.model_config(family, config, window_size),
                windows=windows,
            )
            for family in config.families
        ]

    # Modes

    def generate(self, config: ExperimentConfig) -> RunArtifact:
        """Synthesize every profile's subject and tabulate split class shares"""
        profiles = load_profiles(config.profiles) if config.profiles else default_profiles()
        trials: List[Trial] = []
        for offset, profile in enumerate(profiles):
            trials.extend(synth_subject(profile, config.seed + offset))
        window_size = self.window_size(config)
        artifact = RunArtifact(config=config, trials=trials, profiles=profiles)
        for subject, subject_trials in group_by_subject(trials).items():
            split = split_trials(subject_trials, config.seed)
            sides = (("train", split.train_windows(window_size)), ("test", split.test_windows(window_size)))
            for side, windows in sides:
                sw, st, sp = windows.proportions().tolist()
                artifact.proportions.append(
                    ProportionRecord(
                        subject=subject,
                        side=side,
                        window_size=window_size,
                        n_windows=len(windows),
                        SW=sw,
                        ST=st,
                        SP=sp,
                    )
                )
        return artifact

    def train(self, config: ExperimentConfig, bench: bool = False) -> RunArtifact:
        """Subject-specific models, or pooled models scored on every subject's test windows"""
        splits = self.load_splits(config)
        subjects = self.select_subjects(config, splits)
        window_size = self.window_size(config)
        artifact = RunArtifact(config=config)
        if config.subject == POOLED:
            jobs = self._pooled_jobs(config, splits, window_size)
            for job, model in zip(jobs, self.train_all(jobs, config)):
                for subject in subjects:
                    self._record(artifact, job, model, splits[subject], subject, bench=bench)
        else:
            jobs = self._specific_jobs(config, splits, subjects, window_size)
            for job, model in zip(jobs, self.train_all(jobs, config)):
                self._record(artifact, job, model, splits[job.subject], job.subject, bench=bench)
        return artifact

    def bench(self, config: ExperimentConfig) -> RunArtifact:
        """Train as in ``train`` (or load ``model_path``) and time single-window inference"""
        if config.model_path is None:
            return self.train(config, bench=True)
        return self.evaluate(config, bench=True)

    def evaluate(self, config: ExperimentConfig, bench: bool = False) -> RunArtifact:
        """Score a saved model on the selected subjects' test windows"""
        model = load_model(config.model_path)
        splits = self.load_splits(config)
        window_size = model.config.window_size
        artifact = RunArtifact(config=config)
        for subject in self.select_subjects(config, splits):
            job = TrainingJob(
                subject=subject,
                label=model.family,
                config=model.config,
                windows=splits[subject].train_windows(window_size),
            )
            self._record(artifact, job, model, splits[subject], subject, bench=bench)
        return artifact

    def hyperopt(self, config: ExperimentConfig) -> RunArtifact:
        """
        Search the first family's space on the training trials, then refit the
        best configuration and score it on the test windows
        """
        family = config.families[0]
        splits = self.load_splits(config)
        subjects = self.select_subjects(config, splits)
        window_size = self.window_size(config)
        train_trials = [trial for subject in subjects for trial in splits[subject].train]
        label = family.value if len(subjects) == 1 else pooled_label(family)

        objective = ValidationObjective(train_trials, seed=config.seed, epochs=config.epochs)
        result = optimize(
            objective,
            space_for(family, window_size),
            budget=config.budget,
            seed=config.seed,
            history_path=config.output_dir / "history.jsonl",
        )
        best = parse_model_config(result.best.config)
        logger.info(f"Best {family.value} configuration scored {result.best.objective:.4f}: {best.summary()}")

        windows = WindowSet.concat(
            [splits[subject].train_windows(best.window_size) for subject in subjects], best.window_size
        )
        owner = subjects[0] if len(subjects) == 1 else POOLED
        job = TrainingJob(subject=owner, label=label, config=best, windows=windows)
        model = self.train_all([job], config)[0]
        artifact = RunArtifact(config=config, history=result.history)
        for subject in subjects:
            self._record(artifact, job, model, splits[subject], subject)
        return artifact

    def compare_hp1(self, config: ExperimentConfig) -> RunArtifact:
        """Subject-specific KAN vs MLP and FKAN vs CNN on shared divisions"""
        if config.subject == POOLED:
            raise ConfigurationError("compare-hp1 compares subject-specific models", "subject")
        splits = self.load_splits(config)
        subjects = self.select_subjects(config, splits)
        window_size = self.window_size(config)
        artifact = RunArtifact(config=config)

        jobs = self._specific_jobs(config, splits, subjects, window_size)
        scores: Dict[Tuple[str, str], DivisionScores] = {}
        for job, model in zip(jobs, self.train_all(jobs, config)):
            scores[(job.subject, job.label)] = self._record(artifact, job, model, splits[job.subject], job.subject)
        artifact.stats.append(hypothesis_one(scores, self.config.significance_level))
        return artifact

    def compare_hp2(self, config: ExperimentConfig) -> RunArtifact:
        """Subject-specific vs pooled training of each family on shared divisions"""
        splits = self.load_splits(config)
        subjects = self.select_subjects(config, splits)
        window_size = self.window_size(config)
        artifact = RunArtifact(config=config)

        specific_jobs = self._specific_jobs(config, splits, subjects, window_size)
        pooled_jobs = self._pooled_jobs(config, splits, window_size)
        models = self.train_all(specific_jobs + pooled_jobs, config)

        specific: Dict[Tuple[str, str], DivisionScores] = {}
        pooled: Dict[Tuple[str, str], DivisionScores] = {}
        for job, model in zip(specific_jobs, models):
            specific[(job.subject, job.config.family.value)] = self._record(
                artifact, job, model, splits[job.subject], job.subject
            )
        for job, model in zip(pooled_jobs, models[len(specific_jobs):]):
            for subject in subjects:
                pooled[(subject, job.config.family.value)] = self._record(
                    artifact, job, model, splits[subject], subject
                )
        artifact.stats.append(hypothesis_two(specific, pooled, self.config.significance_level))
        return artifact


# Global service instance
experiment_service = ExperimentService()


def run(config: ExperimentConfig) -> RunArtifact:
    return experiment_service.run(config)
