"""Training losses: MSE, gradient difference loss, and their weighted sum.

The gradient difference loss compares the magnitudes of forward-neighbour
intensity differences between prediction and target, summed over both axes:
penalizing wrong edges directly instead of only wrong pixel values.
"""

from __future__ import annotations

import torch

from .errors import ConfigInvalid, ShapeMismatch


def _check_shapes(prediction: torch.Tensor, target: torch.Tensor) -> None:
    if prediction.shape != target.shape:
        raise ShapeMismatch(f"prediction {tuple(prediction.shape)} vs target {tuple(target.shape)}")


def gdl_loss(prediction: torch.Tensor, target: torch.Tensor, alpha: float = 1.0) -> torch.Tensor:
    """Sum over pixels of ||grad Y| - |grad Y_hat||^alpha along rows and columns."""
    _check_shapes(prediction, target)
    if alpha < 1:
        raise ConfigInvalid("alpha must be >= 1")
    row_pred = (prediction[..., 1:, :] - prediction[..., :-1, :]).abs()
    row_true = (target[..., 1:, :] - target[..., :-1, :]).abs()
    col_pred = (prediction[..., :, 1:] - prediction[..., :, :-1]).abs()
    col_true = (target[..., :, 1:] - target[..., :, :-1]).abs()
    return (row_true - row_pred).abs().pow(alpha).sum() + (col_true - col_pred).abs().pow(alpha).sum()


def mse_loss(prediction: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    _check_shapes(prediction, target)
    return torch.mean((prediction - target) ** 2)


def combined_loss(
    prediction: torch.Tensor,
    target: torch.Tensor,
    lambda_mse: float = 1.0,
    lambda_gdl: float = 1.0,
    alpha: float = 1.0,
) -> torch.Tensor:
    """lambda_mse * MSE + lambda_gdl * GDL; reduces exactly to MSE when lambda_gdl = 0."""
    if lambda_mse < 0 or lambda_gdl < 0:
        raise ConfigInvalid("loss weights must be non-negative")
    if lambda_mse == 0 and lambda_gdl == 0:
        raise ConfigInvalid("at least one loss weight must be positive")
    total = lambda_mse * mse_loss(prediction, target)
    if lambda_gdl:
        total = total + lambda_gdl * gdl_loss(prediction, target, alpha)
    return total
