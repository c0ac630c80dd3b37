"""Neural surrogates for floor-plan connectivity fields.

Consumes datasets in the planconnect on-disk format (PGM pairs plus a
``dataset.jsonl`` manifest) and trains image-to-image models that predict
connectivity fields directly from plans: a U-Net per-pixel regressor and a
Pix2Pix conditional-GAN variant.
"""

from .bench import bench_inference
from .data import PairDataset, PairRecord, load_manifest, read_pgm, split_records
from .errors import (
    ConfigInvalid,
    DataMissing,
    DivergedLoss,
    EmptySplit,
    ShapeMismatch,
    TrainerError,
)
from .eval import EvalReport, evaluate_model
from .losses import combined_loss, gdl_loss, mse_loss
from .pix2pix import PatchDiscriminator, build_generator, train_pix2pix
from .train import TrainConfig, load_checkpoint, save_checkpoint, train_unet
from .unet import UNet, UNetConfig, build_unet, count_parameters

__version__ = "0.1.0"

__all__ = [
    "ConfigInvalid",
    "DataMissing",
    "DivergedLoss",
    "EmptySplit",
    "EvalReport",
    "PairDataset",
    "PairRecord",
    "PatchDiscriminator",
    "ShapeMismatch",
    "TrainConfig",
    "TrainerError",
    "UNet",
    "UNetConfig",
    "bench_inference",
    "build_generator",
    "build_unet",
    "combined_loss",
    "count_parameters",
    "evaluate_model",
    "gdl_loss",
    "load_checkpoint",
    "load_manifest",
    "mse_loss",
    "read_pgm",
    "save_checkpoint",
    "split_records",
    "train_pix2pix",
    "train_unet",
]
