"""
Readout heads over embeddings: closed-form ridge regression and a one-hidden-layer
tanh network trained with full-batch Adam and held-out model selection.

Classification uses one-vs-rest targets in {-1, +1} for ridge and softmax
cross-entropy for the network; predictions are argmax class labels. Regression
targets are standardized for the network and mapped back on predict.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg

from app.models.errors import EmptyInputError, InvalidParameterError, TrainingDivergedError
from app.services.probe import LabeledEmbeddingSet

logger = logging.getLogger(__name__)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8


@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray
    intercept: np.ndarray
    classes: Optional[np.ndarray] = None

    @property
    def parameter_count(self) -> int:
        return int(self.weights.size + self.intercept.size)


@dataclass(frozen=True)
class MlpModel:
    """
    Attributes:
    - params: dict with W1 (d, h), b1 (h,), W2 (h, k), b2 (k,).
    - x_mean, x_scale: feature standardization learned on the training split.
    - classes: class labels for classification, else None.
    - y_mean, y_scale: target standardization for regression.
    - loss_history: training loss per epoch.
    """

    params: dict
    x_mean: np.ndarray
    x_scale: np.ndarray
    classes: Optional[np.ndarray] = None
    y_mean: float = 0.0
    y_scale: float = 1.0
    loss_history: tuple[float, ...] = ()

    @property
    def parameter_count(self) -> int:
        return int(sum(value.size for value in self.params.values()))


Model = Union[RidgeModel, MlpModel]


def _check_training_data(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] == 0:
        raise EmptyInputError("No training rows.")
    if X.shape[0] != y.shape[0]:
        raise InvalidParameterError(f"{X.shape[0]} rows but {y.shape[0]} targets.")


def _one_vs_rest(y: np.ndarray, classes: np.ndarray) -> np.ndarray:
    return np.where(y[:, None] == classes[None, :], 1.0, -1.0)


def ridge_solve(X: np.ndarray, targets: np.ndarray, lam: float) -> np.ndarray:
    """
    Solve (X^T X + lam I) W = X^T T, through the dual system
    (X X^T + lam I) A = T, W = X^T A, when there are fewer rows than columns.
    """
    rows, columns = X.shape
    if rows >= columns:
        gram = X.T @ X + lam * np.eye(columns)
        return scipy.linalg.solve(gram, X.T @ targets, assume_a="pos")
    gram = X @ X.T + lam * np.eye(rows)
    return X.T @ scipy.linalg.solve(gram, targets, assume_a="pos")


def ridge_fit(ds: LabeledEmbeddingSet, lam: float) -> RidgeModel:
    """Closed-form ridge on the training split, with an unpenalized intercept."""
    if not lam > 0:
        raise InvalidParameterError(f"Ridge lambda must be positive, got {lam}.")
    X, y = ds.X_train, ds.y_train
    _check_training_data(X, y)

    classes = np.unique(y) if ds.classification else None
    targets = _one_vs_rest(y, classes) if classes is not None else y[:, None]
    x_mean = X.mean(axis=0)
    t_mean = targets.mean(axis=0)
    weights = ridge_solve(X - x_mean, targets - t_mean, lam)
    intercept = t_mean - x_mean @ weights
    return RidgeModel(weights, intercept, classes)


def ridge_predict(model: RidgeModel, X: np.ndarray) -> np.ndarray:
    scores = np.asarray(X, dtype=np.float64) @ model.weights + model.intercept
    if model.classes is not None:
        return model.classes[np.argmax(scores, axis=1)]
    return scores[:, 0]


def _standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


def init_mlp_params(d: int, hidden_width: int, outputs: int, rng: np.random.Generator) -> dict:
    """Xavier-uniform weights, zero biases."""
    limit_1 = np.sqrt(6.0 / (d + hidden_width))
    limit_2 = np.sqrt(6.0 / (hidden_width + outputs))
    return {
        "W1": rng.uniform(-limit_1, limit_1, size=(d, hidden_width)),
        "b1": np.zeros(hidden_width),
        "W2": rng.uniform(-limit_2, limit_2, size=(hidden_width, outputs)),
        "b2": np.zeros(outputs),
    }


def _forward(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.tanh(X @ params["W1"] + params["b1"])
    return hidden, hidden @ params["W2"] + params["b2"]


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def mlp_loss_and_gradients(
    params: dict, X: np.ndarray, targets: np.ndarray, classification: bool
) -> tuple[float, dict]:
    """
    Mean loss and its gradient for one full batch.

    Classification: targets are one-hot rows, loss is softmax cross-entropy.
    Regression: targets are (rows, 1), loss is half the mean squared error.
    """
    rows = X.shape[0]
    hidden, output = _forward(params, X)
    if classification:
        probabilities = _softmax(output)
        loss = -float(np.sum(targets * np.log(np.clip(probabilities, 1e-300, None)))) / rows
        d_output = (probabilities - targets) / rows
    else:
        residual = output - targets
        loss = 0.5 * float(np.sum(residual ** 2)) / rows
        d_output = residual / rows
    d_hidden = (d_output @ params["W2"].T) * (1.0 - hidden ** 2)
    gradients = {
        "W1": X.T @ d_hidden,
        "b1": d_hidden.sum(axis=0),
        "W2": hidden.T @ d_output,
        "b2": d_output.sum(axis=0),
    }
    return loss, gradients


def _adam_step(params: dict, gradients: dict, state: dict, step: int, lr: float) -> None:
    for name, gradient in gradients.items():
        first, second = state.setdefault(name, (np.zeros_like(gradient), np.zeros_like(gradient)))
        first = ADAM_BETA1 * first + (1.0 - ADAM_BETA1) * gradient
        second = ADAM_BETA2 * second + (1.0 - ADAM_BETA2) * gradient ** 2
        state[name] = (first, second)
        corrected_first = first / (1.0 - ADAM_BETA1 ** step)
        corrected_second = second / (1.0 - ADAM_BETA2 ** step)
        params[name] = params[name] - lr * corrected_first / (np.sqrt(corrected_second) + ADAM_EPSILON)


def _validation_split(rows: int, fraction: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    held_out = int(round(fraction * rows))
    if held_out < 1 or rows - held_out < 1:
        return np.arange(rows), np.arange(0)
    order = rng.permutation(rows)
    return np.sort(order[held_out:]), np.sort(order[:held_out])


def mlp_fit(
    ds: LabeledEmbeddingSet,
    hidden_width: int = 16,
    epochs: int = 1000,
    lr: float = 1e-3,
    seed: int = 1,
    validation_fraction: float = 0.1,
) -> MlpModel:
    """
    Train a one-hidden-layer tanh network on the training split.

    Full-batch Adam updates. A seeded `validation_fraction` of the training rows
    is held out and the parameters of the epoch with the lowest held-out loss
    are returned; with no held-out rows the last epoch wins.

    Raises:
    - TrainingDivergedError: when the loss stops being finite.
    """
    if hidden_width < 1:
        raise InvalidParameterError(f"hidden_width must be >= 1, got {hidden_width}.")
    if epochs < 1 or not lr > 0:
        raise InvalidParameterError(f"Need epochs >= 1 and lr > 0, got {epochs} and {lr}.")
    if not 0.0 <= validation_fraction < 1.0:
        raise InvalidParameterError(f"validation_fraction must be in [0, 1), got {validation_fraction}.")
    X, y = ds.X_train, ds.y_train
    _check_training_data(X, y)

    x_mean, x_scale = _standardize(X)
    features = (X - x_mean) / x_scale
    classes, y_mean, y_scale = None, 0.0, 1.0
    if ds.classification:
        classes = np.unique(y)
        targets = (y[:, None] == classes[None, :]).astype(np.float64)
    else:
        y_mean = float(y.mean())
        y_scale = float(y.std()) or 1.0
        targets = ((y - y_mean) / y_scale)[:, None]

    rng = np.random.default_rng(seed)
    params = init_mlp_params(features.shape[1], hidden_width, targets.shape[1], rng)
    fit_rows, held_rows = _validation_split(features.shape[0], validation_fraction, rng)
    fit_features, fit_targets = features[fit_rows], targets[fit_rows]

    state: dict = {}
    history = []
    last_finite = None
    best_params, best_loss, best_epoch = dict(params), np.inf, 0
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(epochs):
            loss, gradients = mlp_loss_and_gradients(params, fit_features, fit_targets, ds.classification)
            if not np.isfinite(loss):
                raise TrainingDivergedError("MLP loss became non-finite", epoch, last_finite)
            last_finite = loss
            history.append(loss)
            if held_rows.size:
                held_loss, _ = mlp_loss_and_gradients(
                    params, features[held_rows], targets[held_rows], ds.classification
                )
                if held_loss < best_loss:
                    best_params, best_loss, best_epoch = dict(params), held_loss, epoch
            _adam_step(params, gradients, state, epoch + 1, lr)
    if not held_rows.size:
        best_params, best_epoch = params, epochs
    logger.debug(
        "MLP trained for %d epochs, final loss %.6f, kept epoch %d", epochs, history[-1], best_epoch
    )
    return MlpModel(best_params, x_mean, x_scale, classes, y_mean, y_scale, tuple(history))


def mlp_predict(model: MlpModel, X: np.ndarray) -> np.ndarray:
    features = (np.asarray(X, dtype=np.float64) - model.x_mean) / model.x_scale
    _, output = _forward(model.params, features)
    if model.classes is not None:
        return model.classes[np.argmax(output, axis=1)]
    return output[:, 0] * model.y_scale + model.y_mean


def predict(model: Model, X: np.ndarray) -> np.ndarray:
    if isinstance(model, RidgeModel):
        return ridge_predict(model, X)
    return mlp_predict(model, X)


def accuracy(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    y_true = np.asarray(y_true)
    if y_true.size == 0:
        raise EmptyInputError("Accuracy of an empty prediction set is undefined.")
    return float(np.mean(y_true == np.asarray(y_pred)))


def mse(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    y_true = np.asarray(y_true, dtype=np.float64)
    if y_true.size == 0:
        raise EmptyInputError("MSE of an empty prediction set is undefined.")
    return float(np.mean((y_true - np.asarray(y_pred, dtype=np.float64)) ** 2))


def evaluate(model: Model, ds: LabeledEmbeddingSet) -> tuple[str, float]:
    """Test-split metric: ("accuracy", value) for classification, ("mse", value) otherwise."""
    predictions = predict(model, ds.X_test)
    if ds.classification:
        return "accuracy", accuracy(ds.y_test, predictions)
    return "mse", mse(ds.y_test, predictions)


def fit_model(ds: LabeledEmbeddingSet, model: str, *, ridge_lambda: float = 1e-3,
              hidden: int = 16, epochs: int = 1000, lr: float = 1e-3, seed: int = 1) -> Model:
    if model == "ridge":
        return ridge_fit(ds, ridge_lambda)
    if model == "mlp":
        return mlp_fit(ds, hidden, epochs, lr, seed)
    raise InvalidParameterError(f"Unknown readout model {model!r}; expected 'ridge' or 'mlp'.")


def relative_metrics(metric_name: str, values: list[float]) -> list[float]:
    """Each value against the best one: value / best for accuracy, best / value for MSE."""
    if not values:
        return []
    if metric_name == "accuracy":
        best = max(values)
        return [value / best if best > 0 else 0.0 for value in values]
    best = min(values)
    return [best / value if value > 0 else 1.0 for value in values]
