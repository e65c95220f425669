"""Stage sequencing: run a training plan, thread the checkpoint through it."""

from __future__ import annotations

from ..encoder import Checkpoint, EncoderConfig, init_encoder_weights
from ..errors import UsageError
from ..textprep import Vocabulary
from .config import StageConfig
from .data import PipelineData
from .report import write_stage_report
from .stages import mlm_stage, simcse_stage, supervised_stage, tsdae_stage

STAGE_RUNNERS = {
    "mlm": mlm_stage,
    "simcse": simcse_stage,
    "tsdae": tsdae_stage,
    "supervised": supervised_stage,
}


def make_initial_checkpoint(
    config: EncoderConfig, vocab: Vocabulary, rng_seed: int = 0
) -> Checkpoint:
    if len(vocab) != config.vocab_size:
        raise UsageError(
            f"vocabulary size {len(vocab)} disagrees with config vocab_size {config.vocab_size}"
        )
    return Checkpoint(
        config=config,
        weights=init_encoder_weights(config, rng_seed),
        vocab=vocab,
        provenance=[],
    )


def run_pipeline(
    plan,
    data: PipelineData,
    checkpoint: Checkpoint,
    report_path=None,
) -> Checkpoint:
    """Execute the stages of plan in order, each consuming the last checkpoint.

    Stage reports go to report_path as JSON lines when given. A stage
    failure aborts the run with the failing stage's index in the message.
    """
    stages = list(plan)
    if not stages:
        raise UsageError("training plan is empty")
    for stage in stages:
        if not isinstance(stage, StageConfig):
            raise UsageError(f"plan entries must be stage configs, got {type(stage).__name__}")

    current = checkpoint
    for i, stage in enumerate(stages):
        runner = STAGE_RUNNERS[stage.stage_kind]
        try:
            current, report = runner(data, current, stage)
        except Exception as e:
            e.args = (f"stage {i} ({stage.stage_kind}): {e}",) + e.args[1:]
            raise
        if report_path is not None:
            write_stage_report(report, report_path)
    return current
