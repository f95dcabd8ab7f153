"""
CSV result files and the companion gnuplot script of a sweep
"""
import csv
import io
import logging
from pathlib import Path
from typing import Any, Dict, List

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from ..core.models.experiment import ExperimentReport, ExperimentSpec
from ..storage.atomic import atomic_write_text

logger = logging.getLogger(__name__)

TRIAL_COLUMNS: List[str] = [
    "experiment_id", "matrix_kind", "N", "M", "K", "L", "snr_db", "trial", "seed",
    "algorithm", "nmse", "nmse_db", "runtime_ms", "status",
]
AGGREGATE_COLUMNS: List[str] = [
    "experiment_id", "matrix_kind", "N", "M", "K", "L", "snr_db", "algorithm",
    "mean_nmse_db", "genie_mean_nmse_db", "trial_count", "failure_count",
]

TEMPLATE_DIR = Path(__file__).parent / "templates"
PLOT_TEMPLATE = "nmse_plot.gp.j2"


def _to_csv(columns: List[str], rows: List[Dict[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def _with_swept(columns: List[str], spec: ExperimentSpec) -> List[str]:
    at = columns.index("snr_db") + 1
    return columns[:at] + spec.swept_keys + columns[at:]


def trial_columns(spec: ExperimentSpec) -> List[str]:
    """TRIAL_COLUMNS plus one column per swept solver key, after snr_db"""
    return _with_swept(TRIAL_COLUMNS, spec)


def aggregate_columns(spec: ExperimentSpec) -> List[str]:
    return _with_swept(AGGREGATE_COLUMNS, spec)


def trials_csv(report: ExperimentReport) -> str:
    rows = [row for result in report.sorted_results() for row in result.csv_rows()]
    return _to_csv(trial_columns(report.spec), rows)


def aggregate_csv(report: ExperimentReport) -> str:
    return _to_csv(aggregate_columns(report.spec), [row.to_csv_row() for row in report.aggregate()])


def _curves(spec: ExperimentSpec) -> List[Dict[str, Any]]:
    """
    One plotted line per solver variant

    Aggregate rows come in contiguous runs per variant; ``first`` and
    ``last`` are gnuplot point numbers, where point 0 is the header.
    """
    run = len(spec.m_grid) * len(spec.snr_grid)
    points = spec.grid_points()
    curves = []
    for i, variant in enumerate(spec.solver_variants()):
        label = " ".join(f"{key}={value}" for key, value in variant.items())
        algorithm = spec.algorithm_for(points[i * run])
        curves.append({
            "first": 1 + i * run,
            "last": (i + 1) * run,
            "title": f"{algorithm} {label}".rstrip(),
        })
    return curves


def plot_script(report: ExperimentReport, data_file: str, png_name: str) -> str:
    """
    Render the gnuplot script drawing mean NMSE over the swept axis

    SNR is the x axis unless the sweep has a single SNR and several M.
    """
    spec = report.spec
    by_m = len(spec.snr_grid) == 1 and len(spec.m_grid) > 1
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    template = env.get_template(PLOT_TEMPLATE)
    fixed = f"SNR = {spec.snr_grid[0]:g} dB" if by_m else f"M = {spec.m_grid[0]}"
    columns = aggregate_columns(spec)
    return template.render(
        experiment_id=spec.experiment_id,
        matrix_kind=spec.matrix_kind.value,
        n=spec.n,
        k=spec.k,
        l=spec.l,
        trials=spec.trials,
        snr_convention=spec.snr_convention.value,
        png_name=png_name,
        title=f"N = {spec.n}, K = {spec.k}, L = {spec.l}, {fixed}",
        x_label="M" if by_m else "SNR (dB)",
        data_file=data_file,
        x_col=columns.index("M" if by_m else "snr_db") + 1,
        algo_col=columns.index("mean_nmse_db") + 1,
        genie_col=columns.index("genie_mean_nmse_db") + 1,
        curves=_curves(spec),
    )


def write_report(report: ExperimentReport, output_dir: Path) -> Dict[str, Path]:
    """
    Write <id>_trials.csv, <id>_aggregate.csv and <id>.gp into output_dir

    Returns:
        Mapping of file role to path
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = report.spec.experiment_id
    paths = {
        "trials": output_dir / f"{stem}_trials.csv",
        "aggregate": output_dir / f"{stem}_aggregate.csv",
        "plot": output_dir / f"{stem}.gp",
    }
    atomic_write_text(paths["trials"], trials_csv(report))
    atomic_write_text(paths["aggregate"], aggregate_csv(report))
    atomic_write_text(paths["plot"], plot_script(report, paths["aggregate"].name, f"{stem}.png"))
    for role, path in paths.items():
        logger.info(f"✓ Wrote {role}: {path}")
    return paths
