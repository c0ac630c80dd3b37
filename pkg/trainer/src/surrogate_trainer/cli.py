"""Command line: trainer fit / eval / bench."""

from __future__ import annotations

import argparse
import json
import sys

import torch

from .bench import bench_inference
from .data import _to_tensor, read_pgm
from .errors import TrainerError
from .eval import evaluate_model
from .pix2pix import train_pix2pix
from .train import TrainConfig, load_checkpoint, train_unet
from .unet import UNetConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="train a surrogate on a dataset directory")
    p.add_argument("--arch", choices=["unet", "pix2pix"], default="unet")
    p.add_argument("--data", required=True, help="directory holding dataset.jsonl")
    p.add_argument("--loss", choices=["mse", "mse+gdl"], default="mse")
    p.add_argument("--lambda-mse", type=float, default=1.0)
    p.add_argument("--lambda-gdl", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--optimizer", choices=["adadelta", "sgd", "rmsprop", "adam"], default="adadelta")
    p.add_argument("--lr", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--input-size", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-augment", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="score a checkpoint on a dataset split")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=["TRAIN", "VAL", "TEST"], default="TEST")
    p.add_argument("--out", required=True)

    p = sub.add_parser("bench", help="time single-image inference, JSON on stdout")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--input", help="plan PGM to time on (default: zeros)")
    p.add_argument("--repeats", type=int, default=20)

    return parser


def _cmd_fit(args) -> int:
    train_config = TrainConfig(
        optimizer=args.optimizer,
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        loss=args.loss,
        lambda_mse=args.lambda_mse,
        lambda_gdl=args.lambda_gdl,
        alpha=args.alpha,
        augment=not args.no_augment,
        seed=args.seed,
    )
    unet_config = UNetConfig(
        input_size=args.input_size, dropout=0.5 if args.arch == "pix2pix" else 0.0
    )
    fit = train_unet if args.arch == "unet" else train_pix2pix
    _, history = fit(args.data, train_config, unet_config, args.out)
    print(json.dumps({"epochs": len(history), "final": history[-1]}))
    return 0


def _cmd_eval(args) -> int:
    model = load_checkpoint(args.checkpoint)
    report = evaluate_model(model, args.data, split=args.split, out_dir=args.out)
    print(json.dumps({"mean_mse": report.mean_mse, "out": str(args.out)}))
    return 0


def _cmd_bench(args) -> int:
    model = load_checkpoint(args.checkpoint)
    size = model.config.input_size
    if args.input:
        image = _to_tensor(read_pgm(args.input), size)
    else:
        image = torch.zeros(model.config.input_channels, size, size)
    result = bench_inference(model, image, repeats=args.repeats)
    print(json.dumps(result))
    return 0


def run_cli(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_bench(args)
    except TrainerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
