"""Run script."""
import logging
import sys

import click

from scfdma import run_psd, run_sinr, run_validate, run_window
from scfdma.config import CHANNELS, EQUALIZERS, build_config, parse_esn0
from scfdma.psd import to_db
from scfdma.txchain import SYMBOL_SOURCES
from scfdma.utils.errors import ScfdmaError
from scfdma.utils.rng_utils import WORKERS_ENV
from scfdma.validate import VALIDATION_CHECKS
from scfdma.validate_utils.check import DEFAULT_GEOMETRIES, default_prefix

PRESETS = ["lte5", "toy"]


@click.group()
@click.option("verbose", "-v", is_flag=True, default=False, help="log progress [false]")
def cli(verbose: bool):
    if verbose:
        logging.basicConfig(level=logging.INFO)


def experiment_options(func):
    """Options shared by the psd, sinr and window commands."""
    options = [
        click.option("yaml_file", "-y", default=None, type=click.Path(exists=True)),
        click.option("preset", "--preset", default=None, type=click.Choice(PRESETS)),
        click.option("M", "--m", default=None, type=int),
        click.option("N", "--n", default=None, type=int),
        click.option("N_g", "--cp", default=None, type=int),
        click.option(
            "shaping", "--shaping", default=None, type=click.Choice(["rect", "rrc"])
        ),
        click.option("rolloff", "--rolloff", default=None, type=float),
        click.option("block", "--block", default=None, type=int),
        click.option("seed", "--seed", default=None, type=int),
        click.option("output", "-o", default=None, type=click.Path()),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load(yaml_file, preset, **overrides):
    """Build the configuration or exit with the violated constraint."""
    try:
        return build_config(preset, yaml_file, overrides)
    except ScfdmaError as e:
        sys.exit(f"Invalid configuration: {e}")


@cli.command()
@experiment_options
@click.option("psd_frames", "--frames", default=None, type=int)
@click.option("segment_len", "--segment-len", default=None, type=int)
@click.option("overlap", "--overlap", default=None, type=float)
@click.option("welch_window", "--welch-window", default=None, type=str)
@click.option(
    "constellation", "--constellation", default=None,
    type=click.Choice(list(SYMBOL_SOURCES.keys())),
)
def psd(yaml_file, preset, output, **kwargs) -> None:
    """Estimate the PSD of a simulated frame stream and evaluate the analytical PSD.

    Args:
        yaml_file: Experiment YAML.
        preset: Named preset (lte5, toy).
        output: CSV file for the freq_normalized, psd_db_analytical and
            psd_db_estimated columns.

    Returns:
        None.
    """
    config = load(yaml_file, preset, **kwargs)
    try:
        result = run_psd(config, output)
    except ScfdmaError as e:
        sys.exit(f"Failed PSD run: {e}")
    if not output:
        for f, a, e in zip(
            result.analytical.freqs, to_db(result.analytical.values),
            to_db(result.estimated.values),
        ):
            click.echo(f"{f:.6f},{a:.4f},{e:.4f}")
    print(f"Side-lobe level {result.sidelobe_db:.2f} dB. Complete.")


@cli.command()
@experiment_options
@click.option("channel", "--channel", default=None, type=click.Choice(list(CHANNELS)))
@click.option("profile", "--profile", default=None, type=click.Path(exists=True))
@click.option("normalize", "--normalize/--no-normalize", default=None)
@click.option(
    "equalizer", "--equalizer", default=None, type=click.Choice(list(EQUALIZERS))
)
@click.option("esn0", "--esn0", default=None, help="start:step:stop in dB")
@click.option("realizations", "--realizations", default=None, type=int)
@click.option("frames", "--frames", default=None, type=int)
@click.option(
    "constellation", "--constellation", default=None,
    type=click.Choice(list(SYMBOL_SOURCES.keys())),
)
@click.option(
    "workers", "--workers", default=None, type=int,
    help=f"threads [{WORKERS_ENV} or 1]",
)
def sinr(yaml_file, preset, output, esn0, **kwargs) -> None:
    """Monte Carlo and analytical SINR over an Es/N0 grid.

    Args:
        yaml_file: Experiment YAML.
        preset: Named preset (lte5, toy).
        output: CSV file in the sinr/1 schema.
        esn0: Es/N0 grid as start:step:stop in dB.

    Returns:
        None.
    """
    try:
        grid = parse_esn0(esn0) if esn0 else None
    except ScfdmaError as e:
        sys.exit(f"Invalid configuration: {e}")
    config = load(yaml_file, preset, esn0=grid, **kwargs)
    try:
        reports = run_sinr(config, output)
    except ScfdmaError as e:
        sys.exit(f"Failed SINR run: {e}")
    if not output:
        for report in reports:
            for point in report.points:
                click.echo(
                    f"{report.equalizer.value},{point.es_n0_db:g},"
                    f"{float(to_db(point.analytical)):.4f},"
                    f"{float(to_db(point.empirical)):.4f}"
                )
    print("SINR campaign complete.")


@cli.command()
@experiment_options
def window(yaml_file, preset, output, **kwargs) -> None:
    """Tabulate the transmit window |H_k| and its time filter |h_k|.

    Args:
        yaml_file: Experiment YAML.
        preset: Named preset (lte5, toy).
        output: CSV file in the window/1 schema.

    Returns:
        None.
    """
    config = load(yaml_file, preset, **kwargs)
    table = run_window(config, output)
    if not output:
        for k, m, t in table:
            click.echo(f"{int(k)},{m:.6g},{t:.6g}")


@cli.command()
@click.option("M", "--m", default=None, type=int)
@click.option("N", "--n", default=None, type=int)
@click.option("N_g", "--cp", default=None, type=int)
@click.option("seed", "--seed", default=0, type=int)
@click.option(
    "checks", "-c", default=None, multiple=True,
    type=click.Choice(list(VALIDATION_CHECKS.keys())),
)
@click.option("dft_norm", "--inject-dft-norm", default=None, hidden=True)
def validate(M, N, N_g, seed, checks, dft_norm) -> None:
    """Run the cross-module invariant suite; exit 1 when any check fails.

    Args:
        M: Restrict the sweep to this number of subcarriers.
        N: Restrict the sweep to this IFFT size.
        N_g: Cyclic prefix for the restricted geometry; the LTE ratio
            scaled to N when omitted.
        seed: Master seed.
        checks: Names of the checks to run; all when empty.
        dft_norm: Transform scaling to inject, for testing the suite itself.

    Returns:
        None.
    """
    if M is None and N is None:
        geometries = list(DEFAULT_GEOMETRIES)
    elif M is None or N is None:
        sys.exit("Invalid configuration: --m and --n go together")
    else:
        geometries = [(M, N, N_g if N_g is not None else default_prefix(N))]
    try:
        _, passed = run_validate(geometries, seed, list(checks), dft_norm)
    except ScfdmaError as e:
        sys.exit(f"Invalid configuration: {e}")
    if not passed:
        sys.exit(1)
    print("All checks passed.")


if __name__ == "__main__":
    cli()
