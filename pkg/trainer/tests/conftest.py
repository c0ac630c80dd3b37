import subprocess

import pytest
import torch

from surrogate_trainer import TrainConfig, UNetConfig

SMALL_UNET = UNetConfig(input_size=32, filter_ladder=(8, 16, 32))


def small_train_config(**overrides) -> TrainConfig:
    base = dict(epochs=2, batch_size=4, augment=False, seed=0)
    base.update(overrides)
    return TrainConfig(**base)


def run_planconnect(*args) -> None:
    """Drive the analysis engine through its public CLI only."""
    subprocess.run(["planconnect", *map(str, args)], check=True, capture_output=True)


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    """A small real dataset: 10 plans, spatial targets, 7/2/1 split."""
    root = tmp_path_factory.mktemp("data")
    run_planconnect(
        "generate", "--count", 10, "--size", "32x32", "--seed", 42,
        "--analyses", "spatial", "--out", root / "plans",
    )
    run_planconnect(
        "dataset", "build", "--plans", root / "plans", "--analyses", "spatial",
        "--out", root / "ds",
    )
    return root / "ds"


@pytest.fixture
def sample_pair(dataset_dir):
    import json

    record = json.loads((dataset_dir / "dataset.jsonl").read_text().splitlines()[0])
    return record["input_path"], record["target_path"]


@pytest.fixture(scope="session")
def torch_single_thread():
    torch.set_num_threads(1)
