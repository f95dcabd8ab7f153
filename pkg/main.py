#!/usr/bin/env python3
"""
VSP Block-Sparse Recovery - Main Entry Point
"""
import sys
import logging
import platform
from pathlib import Path
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Optional, Tuple, get_args

import click
import numpy as np
import orjson
import psutil
import scipy
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src import __version__
from src.bench import PRESET_ALIASES, PRESETS, get_preset, make_instance, measure, nmse, preset_names, to_db, write_report
from src.bench.generators import gen_matrix
from src.bench.runner import ExperimentRunner
from src.core.errors import VspError
from src.core.models import ExperimentSpec, MatrixKind, SnrConvention, VspConfig
from src.core.models.vsp_config import FLAT_KEYS
from src.orchestrator import run_vsp
from src.storage import (
    atomic_write_bytes,
    atomic_write_text,
    load_experiment_spec,
    read_matrix,
    read_pgm,
    read_vector,
    resolve_config,
    worker_cap,
    write_matrix,
)
from src.storage.settings import THREADS_ENV

load_dotenv()

# Setup logging
logging.basicConfig(
    level=logging.WARNING,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(rich_tracebacks=True)]
)

logger = logging.getLogger(__name__)
console = Console()

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def _set_log_level(verbose: bool, debug: bool) -> None:
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)
    elif verbose:
        logging.getLogger().setLevel(logging.INFO)


def _runtime_failure(error: Exception, debug: bool) -> None:
    console.print(f"\n[bold red]Error:[/bold red] {error}")
    if debug:
        console.print_exception()
    sys.exit(1)


# flags whose name is not the dashed flat key
FLAG_NAMES: Dict[str, Tuple[str, ...]] = {
    "a": ("--gamma-a",),
    "b": ("--gamma-b",),
    "k_sparsity": ("--k-sparsity", "--k"),
}

FLAG_HELP: Dict[str, str] = {
    "a": 'Gamma shape a of the variance prior',
    "b": 'Gamma rate b of the variance prior',
    "alpha": 'MRF sparsity bias α',
    "beta": 'MRF coupling β (>= 0)',
    "rho": 'Expected active fraction, used when K is not given',
    "eps0": 'First GD step size tried by the line search',
    "shrink": 'Line-search step shrink factor',
    "max_halvings": 'Line-search attempts per GD round',
    "topology": 'MRF topology',
    "rows": 'Grid rows',
    "cols": 'Grid columns',
    "t_out": 'Outer rounds T_out',
    "t_in": 'Inner solver rounds T_in',
    "vartheta": "K' = round(vartheta * K), vartheta in [1, 2]",
    "sigma2": 'Per-component noise variance',
    "k_sparsity": 'Number of nonzeros K',
    "solver": 'Inner solver',
    "mrf_sweeps": 'Maximum MRF sweeps per outer round',
    "mrf_tolerance": 'MRF early-exit tolerance',
    "mrf_damping": 'MRF message damping in (0, 1]',
    "pi_floor": 'Lower bound on π when rebuilding variances',
    "init_strategy": 'Initial variance means',
    "init_value": 'Constant for the constant init strategy',
    "gd_tolerance": 'Relative χ change that ends GD early',
}

# set per trial by the benchmark instance
PER_TRIAL_KEYS = ("sigma2", "k_sparsity")


def _flat_field(path: Tuple[str, ...]):
    model = VspConfig
    for part in path[:-1]:
        model = model.model_fields[part].annotation
    return model.model_fields[path[-1]]


def _click_type(annotation: Any) -> Any:
    """click type of a config field: Enum -> Choice, Optional[T] -> T"""
    args = [arg for arg in get_args(annotation) if arg is not type(None)]
    base = args[0] if args else annotation
    if isinstance(base, type) and issubclass(base, Enum):
        return click.Choice([member.value for member in base])
    return base


def solver_options(exclude: Iterable[str] = ()) -> Callable[[Callable], Callable]:
    """Attach one flag per flat VspConfig key"""
    skipped = set(exclude)

    def decorate(func: Callable) -> Callable:
        for key in reversed(list(FLAT_KEYS)):
            if key in skipped:
                continue
            names = FLAG_NAMES.get(key, (f"--{key.replace('_', '-')}",))
            annotation = _flat_field(FLAT_KEYS[key]).annotation
            func = click.option(*names, key, type=_click_type(annotation), help=FLAG_HELP.get(key))(func)
        return func

    return decorate


def _solver_flags(**flags: Any) -> Dict[str, Any]:
    return {key: value for key, value in flags.items() if value is not None}


@click.group()
@click.version_option(version=__version__)
def cli():
    """
    VSP - variance state propagation for block-sparse signal recovery

    Recovers x from y = A x + w when x is block sparse, using a Gaussian
    posterior on x coupled to an Ising prior on the support.
    """
    pass


@cli.command()
@click.option('--matrix', '-a', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Measurement matrix A (.vspm, .csv)')
@click.option('--measurements', '-y', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Measurement vector y (.vspm, .csv)')
@click.option('--output', '-o', type=click.Path(file_okay=False), default='output/recovery',
              help='Output directory for x_hat.vspm and diagnostics.json')
@click.option('--truth', type=click.Path(exists=True, dir_okay=False), help='Ground-truth x for an NMSE report')
@click.option('--manifest', type=click.Path(exists=True, dir_okay=False),
              help='Fixture manifest written by `gen`; supplies sigma2, K and topology')
@click.option('--config', '-c', type=click.Path(exists=True, dir_okay=False), help='Config file (.toml/.yaml)')
@solver_options()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--debug', is_flag=True, help='Enable debug mode with detailed logging')
def recover(
    matrix: str,
    measurements: str,
    output: str,
    truth: Optional[str],
    manifest: Optional[str],
    config: Optional[str],
    verbose: bool,
    debug: bool,
    **flags: Any,
):
    """
    Recover x from a single (A, y) pair.

    Example:
        python main.py recover -a fixture/A.vspm -y fixture/y.vspm --sigma2 0.01 --k 10
    """
    _set_log_level(verbose, debug)

    try:
        A = read_matrix(matrix)
    except (OSError, ValueError) as e:
        raise click.BadParameter(str(e), param_hint="--matrix")
    try:
        y = read_vector(measurements)
    except (OSError, ValueError) as e:
        raise click.BadParameter(str(e), param_hint="--measurements")
    if y.shape[0] != A.shape[0]:
        raise click.BadParameter(
            f"y has length {y.shape[0]} but A has {A.shape[0]} rows", param_hint="--measurements"
        )
    x_true = None
    if truth:
        try:
            x_true = read_vector(truth)
        except (OSError, ValueError) as e:
            raise click.BadParameter(str(e), param_hint="--truth")
        if x_true.shape[0] != A.shape[1]:
            raise click.BadParameter(
                f"truth has length {x_true.shape[0]} but A has {A.shape[1]} columns", param_hint="--truth"
            )

    fixture: Dict[str, Any] = {}
    if manifest:
        try:
            payload = orjson.loads(Path(manifest).read_bytes())
        except (OSError, orjson.JSONDecodeError) as e:
            raise click.BadParameter(str(e), param_hint="--manifest")
        if not isinstance(payload, dict) or not isinstance(payload.get("config", {}), dict):
            raise click.BadParameter("manifest must be a JSON object with an object \"config\"", param_hint="--manifest")
        fixture = payload.get("config", {})

    try:
        vsp_config = resolve_config(config, fixture, _solver_flags(**flags))
    except (OSError, ValueError) as e:
        raise click.BadParameter(str(e), param_hint="--config / solver flags")
    if not vsp_config.sigma2 > 0:
        raise click.BadParameter("noise variance must be positive", param_hint="--sigma2")

    console.print("\n[bold cyan]VSP Recovery[/bold cyan]")
    console.print(f"[dim]A: {matrix} ({A.shape[0]}x{A.shape[1]})[/dim]")
    console.print(f"[dim]Solver: {vsp_config.solver.value}, T_out={vsp_config.t_out}, T_in={vsp_config.t_in}[/dim]\n")

    try:
        result = run_vsp(y, A, vsp_config)
        out_dir = Path(output)
        write_matrix(out_dir / "x_hat.vspm", result.x_hat)

        diagnostics = result.to_dict()
        diagnostics["config"] = vsp_config.model_dump(mode="json")
        if x_true is not None:
            error = nmse(result.x_hat, x_true)
            diagnostics["nmse"] = error
            diagnostics["nmse_db"] = to_db(error)
        atomic_write_bytes(out_dir / "diagnostics.json", orjson.dumps(diagnostics, option=JSON_OPTIONS))

        console.print("[bold green]Recovery Complete![/bold green]")
        console.print(result.get_summary())
        if x_true is not None:
            console.print(f"NMSE: {diagnostics['nmse']!r} ({diagnostics['nmse_db']:.2f} dB)")
        console.print(f"[dim]Wrote {out_dir / 'x_hat.vspm'}[/dim]")
        sys.exit(0)

    except (VspError, ValueError, ArithmeticError, OSError) as e:
        _runtime_failure(e, debug)


def _format_validation(error: ValidationError) -> str:
    lines = ["Invalid experiment spec:"]
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "spec"
        lines.append(f"  - {where}: {item['msg']}")
        if "matrix_kind" in item["loc"]:
            lines.append(f"    Valid matrix kinds: {', '.join(MatrixKind.names())}")
    return "\n".join(lines)


def _print_aggregate(report) -> None:
    swept = report.spec.swept_keys
    table = Table(title=f"Experiment {report.spec.experiment_id}")
    for column in ("M", "SNR (dB)", *swept, "algorithm", "NMSE (dB)", "genie", "trials", "failed"):
        table.add_column(column, justify="right")
    for row in report.aggregate():
        table.add_row(
            str(row.m),
            f"{row.snr_db:g}",
            *(str(row.overrides[key]) for key in swept),
            row.algorithm,
            f"{row.mean_nmse_db:.2f}",
            f"{row.genie_mean_nmse_db:.2f}",
            str(row.trial_count),
            str(row.failure_count),
        )
    console.print(table)


@cli.command()
@click.option('--spec', 'spec_path', type=click.Path(exists=True, dir_okay=False),
              help='Experiment spec file (.yaml/.toml)')
@click.option('--preset', type=click.Choice(preset_names()), help='Built-in experiment')
@click.option('--output', '-o', type=click.Path(file_okay=False), default='output/bench',
              help='Output directory for CSV files and the plot script')
@click.option('--jobs', '-j', type=click.IntRange(min=1), default=1, help=f'Worker threads (capped by {THREADS_ENV})')
@click.option('--trials', type=click.IntRange(min=1), help='Override the number of trials per grid point')
@click.option('--seed', 'base_seed', type=click.IntRange(min=0), help='Override the base seed')
@click.option('--snr-convention', type=click.Choice([c.value for c in SnrConvention]),
              help='Whether σ in the SNR is the total or per-component noise std')
@click.option('--timing/--no-timing', default=None, help='Record runtimes (off writes 0 for byte-stable CSV)')
@click.option('--progress/--no-progress', default=True, help='Show a progress bar')
@solver_options(exclude=PER_TRIAL_KEYS)
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--debug', is_flag=True, help='Enable debug mode with detailed logging')
def bench(
    spec_path: Optional[str],
    preset: Optional[str],
    output: str,
    jobs: int,
    trials: Optional[int],
    base_seed: Optional[int],
    snr_convention: Optional[str],
    timing: Optional[bool],
    progress: bool,
    verbose: bool,
    debug: bool,
    **flags: Any,
):
    """
    Run a Monte Carlo sweep and write per-trial and aggregate CSV files.

    Example:
        python main.py bench --preset cropped-hermitian-snr --trials 50 -j 4
    """
    _set_log_level(verbose, debug)

    if bool(spec_path) == bool(preset):
        raise click.UsageError("Give exactly one of --spec or --preset")

    try:
        spec = load_experiment_spec(spec_path) if spec_path else get_preset(preset)
        data = spec.model_dump()
        overrides = {
            "trials": trials,
            "base_seed": base_seed,
            "snr_convention": snr_convention,
            "record_runtime": timing,
        }
        data.update({key: value for key, value in overrides.items() if value is not None})
        data["solver"] = {**spec.solver, **_solver_flags(**flags)}
        spec = ExperimentSpec.model_validate(data)
    except ValidationError as e:
        raise click.UsageError(_format_validation(e))
    except ValueError as e:
        raise click.UsageError(f"Invalid experiment spec: {e}")

    width = worker_cap(jobs)
    points = spec.grid_points()
    console.print(f"\n[bold cyan]Benchmark {spec.experiment_id}[/bold cyan]")
    console.print(
        f"[dim]{spec.matrix_kind.value}, N={spec.n} K={spec.k} L={spec.l}, "
        f"{len(points)} grid point(s) x {spec.trials} trials, {width} worker(s)[/dim]\n"
    )

    try:
        report = ExperimentRunner(spec, jobs=width, show_progress=progress).run()
        paths = write_report(report, Path(output))

        _print_aggregate(report)
        for role, path in paths.items():
            console.print(f"[dim]{role}: {path}[/dim]")
        if report.failed_trials:
            console.print(f"\n[yellow]Warning: {report.failed_trials} trials failed[/yellow]")
        sys.exit(0)

    except (VspError, ValueError, OSError) as e:
        _runtime_failure(e, debug)


def _runs(support: np.ndarray) -> int:
    """Number of maximal runs of consecutive indices"""
    if support.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(np.sort(support)) > 1))


@cli.command()
@click.option('--n', 'n', type=click.IntRange(min=1), help='Signal length N')
@click.option('--m', 'm', required=True, type=click.IntRange(min=1), help='Number of measurements M')
@click.option('--k', 'k', type=click.IntRange(min=1), help='Number of nonzeros K')
@click.option('--l', 'l', type=click.IntRange(min=1), default=1, help='Number of blocks L')
@click.option('--kind', type=click.Choice(MatrixKind.names()), default=MatrixKind.SCG.value, help='Matrix family')
@click.option('--seed', required=True, type=click.IntRange(min=0), help='Random seed')
@click.option('--snr-db', type=float, default=20.0, help='Target SNR in dB')
@click.option('--snr-convention', type=click.Choice([c.value for c in SnrConvention]),
              default=SnrConvention.TOTAL.value, help='Whether σ is the total or per-component noise std')
@click.option('--image', type=click.Path(exists=True, dir_okay=False),
              help='PGM image used as x instead of a random block-sparse signal')
@click.option('--output', '-o', required=True, type=click.Path(file_okay=False), help='Fixture directory')
@click.option('--reference/--no-reference', default=True, help='Run VSP once and record its NMSE in the manifest')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--debug', is_flag=True, help='Enable debug mode with detailed logging')
def gen(
    n: Optional[int],
    m: int,
    k: Optional[int],
    l: int,
    kind: str,
    seed: int,
    snr_db: float,
    snr_convention: str,
    image: Optional[str],
    output: str,
    reference: bool,
    verbose: bool,
    debug: bool,
):
    """
    Generate a seeded fixture: A, x, y, w, support and manifest.json.

    Example:
        python main.py gen --n 50 --m 25 --k 10 --l 1 --seed 7 -o fixtures/seed7
    """
    _set_log_level(verbose, debug)
    if image is None:
        if n is None:
            raise click.BadParameter("required unless --image is given", param_hint="--n")
        if k is None:
            raise click.BadParameter("required unless --image is given", param_hint="--k")

    try:
        if image is not None:
            pixels = read_pgm(image)
            rows, cols = pixels.shape
            x = pixels.reshape(-1).astype(complex)
            support = np.flatnonzero(x)
            n, k, l = x.shape[0], int(support.size), _runs(support)
            if m > n:
                raise click.BadParameter(f"M={m} exceeds N={n}", param_hint="--m")
            rng = np.random.default_rng(seed)
            A = gen_matrix(kind, m, n, rng)
            inst = measure(x, support, A, snr_db, snr_convention, rng)
            fixture_config: Dict[str, Any] = {"topology": "grid", "rows": rows, "cols": cols}
        else:
            inst = make_instance(n, m, k, l, snr_db, kind, snr_convention, seed)
            fixture_config = {"topology": "chain"}
        fixture_config.update({"sigma2": inst.sigma2, "k_sparsity": max(k, 1)})

        out_dir = Path(output)
        files = {"A": "A.vspm", "x": "x.vspm", "y": "y.vspm", "w": "w.vspm", "support": "support.csv"}
        write_matrix(out_dir / files["A"], inst.A)
        write_matrix(out_dir / files["x"], inst.x)
        write_matrix(out_dir / files["y"], inst.y)
        write_matrix(out_dir / files["w"], inst.w)
        atomic_write_text(out_dir / files["support"], "".join(f"{i}\n" for i in inst.support.tolist()))

        manifest: Dict[str, Any] = {
            "N": n, "M": m, "K": k, "L": l,
            "matrix_kind": kind,
            "seed": seed,
            "snr_db": snr_db,
            "snr_convention": snr_convention,
            "sigma": inst.sigma,
            "sigma2": inst.sigma2,
            "support": inst.support.tolist(),
            "image": Path(image).name if image else None,
            "files": files,
            "config": fixture_config,
            "version": __version__,
        }
        if reference:
            recovered = run_vsp(inst.y, inst.A, VspConfig.from_flat(fixture_config))
            manifest["reference_nmse"] = nmse(recovered.x_hat, inst.x)
        atomic_write_bytes(out_dir / "manifest.json", orjson.dumps(manifest, option=JSON_OPTIONS))

        console.print(f"\n[bold green]✓ Fixture written to {out_dir}[/bold green]")
        console.print(f"[dim]N={n} M={m} K={k} L={l} kind={kind} seed={seed} σ={inst.sigma:.6g}[/dim]")
        if reference:
            console.print(f"Reference NMSE: {manifest['reference_nmse']!r}")
        sys.exit(0)

    except (VspError, ValueError, OSError) as e:
        _runtime_failure(e, debug)


@cli.command()
def info():
    """Display system information and configuration."""
    console.print("\n[bold cyan]System Information[/bold cyan]\n")

    console.print(f"[green]VSP Version:[/green] {__version__}")
    console.print(f"[green]Python Version:[/green] {sys.version}")
    console.print(f"[green]Platform:[/green] {platform.platform()}")
    console.print(f"[green]NumPy / SciPy:[/green] {np.__version__} / {scipy.__version__}")

    console.print("\n[bold]Resources:[/bold]")
    memory = psutil.virtual_memory()
    console.print(f"  CPU cores: {psutil.cpu_count(logical=False)} physical, {psutil.cpu_count()} logical")
    console.print(f"  Memory: {memory.available / 2**30:.1f} GiB free of {memory.total / 2**30:.1f} GiB")
    console.print(f"  {THREADS_ENV}: {worker_cap(psutil.cpu_count() or 1)} worker(s) available to bench")

    console.print("\n[bold]Presets:[/bold]")
    aliases = {target: alias for alias, target in PRESET_ALIASES.items()}
    for name in sorted(PRESETS):
        setup = PRESETS[name]
        swept = " ".join(f"{key}={value}" for key, value in setup.get("solver", {}).items() if isinstance(value, list))
        line = f"  {name} ({aliases[name]}): N={setup['N']} K={setup['K']} L={setup['L']} M={setup['M']}"
        console.print(f"{line} {setup['matrix_kind']} {swept}".rstrip())

    console.print("\n")


if __name__ == '__main__':
    cli()
