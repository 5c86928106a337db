from .config import Config, build_model, build_plan, load_config
from .main import main

__all__ = [
    "Config",
    "build_model",
    "build_plan",
    "load_config",
    "main",
]
