"""
Built-in sweeps: convergence setups and the NMSE-vs-SNR / NMSE-vs-M comparisons
"""
from typing import Any, Dict, List

from ..core.models.experiment import ExperimentSpec

SNR_GRID: List[float] = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
PRESET_TRIALS = 500

_SMALL = {"N": 50, "M": 25, "K": 10, "L": 1, "matrix_kind": "scg", "snr_db": SNR_GRID}
_GAUSSIAN = {"N": 200, "K": 30, "L": 1, "matrix_kind": "scg"}
_CROPPED = {"N": 100, "K": 20, "L": 2, "matrix_kind": "cropped_hermitian"}
_CONCAT = {"N": 300, "K": 50, "L": 3, "matrix_kind": "concat_exp_gauss"}

VARTHETA_GRID: List[float] = [1.0, 1.2, 1.4, 1.6, 1.8, 2.0]

PRESETS: Dict[str, Dict[str, Any]] = {
    "gd-convergence": {**_SMALL, "solver": {"solver": "gd", "t_in": 7000, "t_out": 2, "vartheta": VARTHETA_GRID}},
    "elbo-convergence": {**_SMALL, "solver": {"solver": "elbo", "t_in": 30, "t_out": 2, "vartheta": VARTHETA_GRID}},
    "gd-inner-rounds": {**_SMALL, "solver": {"solver": "gd", "t_in": [1000, 3000, 5000, 7000], "t_out": 2}},
    "elbo-inner-rounds": {**_SMALL, "solver": {"solver": "elbo", "t_in": [1, 5, 10, 30], "t_out": 2}},
    "gaussian-snr": {**_GAUSSIAN, "M": 75, "snr_db": SNR_GRID},
    "gaussian-m": {**_GAUSSIAN, "M": [40, 60, 80, 100, 120], "snr_db": 20.0},
    "cropped-hermitian-snr": {**_CROPPED, "M": 60, "snr_db": SNR_GRID},
    "cropped-hermitian-m": {**_CROPPED, "M": [30, 40, 50, 60, 70], "snr_db": 20.0},
    "concat-exp-gauss-snr": {**_CONCAT, "M": 120, "snr_db": SNR_GRID},
    "concat-exp-gauss-m": {**_CONCAT, "M": [80, 100, 120, 140, 160], "snr_db": 20.0},
}

# short preset names
PRESET_ALIASES: Dict[str, str] = {
    "fig3a": "gd-convergence",
    "fig3b": "elbo-convergence",
    "fig4a": "gd-inner-rounds",
    "fig4b": "elbo-inner-rounds",
    "fig5a": "gaussian-snr",
    "fig5b": "gaussian-m",
    "fig6a": "cropped-hermitian-snr",
    "fig6b": "cropped-hermitian-m",
    "fig7a": "concat-exp-gauss-snr",
    "fig7b": "concat-exp-gauss-m",
}


def preset_names() -> List[str]:
    """Descriptive names followed by the short aliases"""
    return sorted(PRESETS) + sorted(PRESET_ALIASES)


def get_preset(name: str, **overrides: Any) -> ExperimentSpec:
    """
    Build the ExperimentSpec of a named preset

    Args:
        name: preset name or alias (see preset_names()); the
            experiment_id is always the descriptive name
        **overrides: top-level spec fields replacing the preset values

    Raises:
        KeyError: unknown preset
    """
    name = PRESET_ALIASES.get(name, name)
    if name not in PRESETS:
        raise KeyError(f"Unknown preset '{name}'. Available: {', '.join(preset_names())}")
    data: Dict[str, Any] = {"experiment_id": name, "trials": PRESET_TRIALS, **PRESETS[name]}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentSpec.model_validate(data)
