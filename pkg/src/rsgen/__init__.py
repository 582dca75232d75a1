from .precision import PrecisionConfig

__version__ = "0.1.0"

