"""Built-in benchmark models and their bundled datasets."""

from .base import DatasetError, ModelSpec, load_dataset
from .galaxy import NormalMixtureModel, galaxy_model, galaxy_velocities
from .pima import LogisticRegressionModel, pima_model, standardise
from .radiata import LinearRegressionModel, radiata_log_z, radiata_model

MODEL_IDS = ("radiata1", "radiata2", "pima1", "pima2", "galaxy3", "galaxy4")


def get_model(model_id: str) -> ModelSpec:
    """Look up a built-in model by its CLI identifier, e.g. ``"pima1"``."""
    for prefix, factory in (("radiata", radiata_model), ("pima", pima_model), ("galaxy", galaxy_model)):
        if model_id.startswith(prefix):
            suffix = model_id[len(prefix):]
            if suffix.isdigit():
                return factory(int(suffix))
    raise ValueError(f"unknown model {model_id!r}; choose from {', '.join(MODEL_IDS)}")


__all__ = [
    "DatasetError", "ModelSpec", "load_dataset", "MODEL_IDS", "get_model",
    "NormalMixtureModel", "galaxy_model", "galaxy_velocities",
    "LogisticRegressionModel", "pima_model", "standardise",
    "LinearRegressionModel", "radiata_log_z", "radiata_model",
]
