"""Learning-rate-dropout optimizers and a reproducible experiment harness."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import (
    DataFormatError,
    DomainError,
    LrdoptError,
    NonFiniteGradientError,
    ShapeMismatchError,
    SpecError,
)
from .network import MNIST_MLP_FULL, MNIST_MLP_REDUCED, Mlp, accuracy, forward, loss_and_grad
from .optim import (
    DEFAULT_KEEP_PROB,
    DEFAULT_LEARNING_RATES,
    GradientNoise,
    LrdConfig,
    Optimizer,
    OptimizerRule,
    expected_update_check,
    lr_schedule,
)
from .rng import Rng, bernoulli_mask, gaussian_sample
from .toyfn import (
    DEFAULT_SUCCESS_RADIUS,
    DOMAIN,
    REFERENCE_OPTIMUM,
    Trajectory,
    toy_gradient,
    toy_value,
    verify_reference_optimum,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "LrdoptError",
    "DomainError",
    "ShapeMismatchError",
    "NonFiniteGradientError",
    "DataFormatError",
    "SpecError",
    "Rng",
    "gaussian_sample",
    "bernoulli_mask",
    "Mlp",
    "MNIST_MLP_FULL",
    "MNIST_MLP_REDUCED",
    "forward",
    "loss_and_grad",
    "accuracy",
    "Optimizer",
    "OptimizerRule",
    "LrdConfig",
    "GradientNoise",
    "expected_update_check",
    "lr_schedule",
    "DEFAULT_LEARNING_RATES",
    "DEFAULT_KEEP_PROB",
    "toy_value",
    "toy_gradient",
    "verify_reference_optimum",
    "Trajectory",
    "DOMAIN",
    "REFERENCE_OPTIMUM",
    "DEFAULT_SUCCESS_RADIUS",
    "__version__",
]
