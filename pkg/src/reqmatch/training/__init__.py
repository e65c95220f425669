"""Four-stage training: masked-LM, SimCSE, denoising autoencoder, supervised."""

from .config import CONTRASTIVE_KINDS, STAGE_KINDS, StageConfig, load_plan, save_plan
from .data import PipelineData, build_pipeline_data
from .losses import cross_pair_infonce, infonce_symmetric, similarity_matrix
from .decoder import DecoderWeights, decoder_forward, init_decoder_weights, reconstruction_loss
from .report import StageReport, read_stage_reports, write_stage_report
from .stages import mlm_stage, simcse_stage, supervised_stage, tsdae_stage
from .pipeline import STAGE_RUNNERS, make_initial_checkpoint, run_pipeline

__all__ = [
    "CONTRASTIVE_KINDS",
    "DecoderWeights",
    "PipelineData",
    "STAGE_KINDS",
    "STAGE_RUNNERS",
    "StageConfig",
    "StageReport",
    "build_pipeline_data",
    "cross_pair_infonce",
    "decoder_forward",
    "infonce_symmetric",
    "init_decoder_weights",
    "load_plan",
    "make_initial_checkpoint",
    "mlm_stage",
    "read_stage_reports",
    "reconstruction_loss",
    "run_pipeline",
    "save_plan",
    "similarity_matrix",
    "simcse_stage",
    "supervised_stage",
    "tsdae_stage",
    "write_stage_report",
]
