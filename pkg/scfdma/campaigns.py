"""PSD, SINR and window campaigns behind the command line."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from scfdma.config import ExperimentConfig
from scfdma.psd import (
    PsdCurve,
    PulseShape,
    analytical_psd,
    max_deviation_db,
    sidelobe_level_db,
    simulate_stream,
    to_db,
    welch_estimate,
)
from scfdma.sinr import SinrReport, SinrSetup, empirical_sinr
from scfdma.utils.csv_utils import write_table
from scfdma.utils.rng_utils import substream
from scfdma.validate import validate
from scfdma.validate_utils.check import CheckResult

PSD_COLUMNS = ["freq_normalized", "psd_db_analytical", "psd_db_estimated"]
SINR_COLUMNS = [
    "equalizer",
    "esn0_db",
    "sinr_analytical_db",
    "sinr_empirical_db",
    "ci_halfwidth_db",
    "useful",
    "interference",
    "noise",
    "dropped_realizations",
    "sinr_analytical_dbmean",
    "sinr_empirical_dbmean",
]
WINDOW_COLUMNS = ["bin", "magnitude", "time_magnitude"]


@dataclass(frozen=True)
class PsdResult:
    """Both curves on one grid, plus summary levels."""

    analytical: PsdCurve
    estimated: PsdCurve
    sidelobe_db: float
    max_deviation_db: float


def _db(value: float) -> float:
    if value == float("inf"):
        return value
    return float(to_db(value))


def run_psd(
    config: ExperimentConfig, output: Optional[str] = None, progress: bool = True
) -> PsdResult:
    """Simulate a frame stream, estimate its PSD and evaluate the analytical one.

    Args:
        config: Validated experiment configuration.
        output: CSV path; nothing is written when None.
        progress: Show progress bars.

    Returns:
        PsdResult: The curves.
    """
    g, w = config.geometry(), config.window()
    logging.info(f"PSD of {w.kind.value} window, M={g.M}, N={g.N}, N_g={g.N_g}")
    stream = simulate_stream(
        w,
        g,
        config.psd_frames,
        substream(config.seed, 0),
        sigma_x2=config.sigma_x2,
        constellation=config.constellation,
        progress=progress,
    )
    estimated = welch_estimate(
        stream, config.segment_length(), config.overlap, config.welch_window
    )
    analytical = analytical_psd(
        w, g, PulseShape.rectangular(g), estimated.freqs, config.sigma_x2
    )
    result = PsdResult(
        analytical=analytical,
        estimated=estimated,
        sidelobe_db=sidelobe_level_db(analytical, w, g),
        max_deviation_db=max_deviation_db(analytical, estimated),
    )
    if output:
        rows = zip(
            analytical.freqs.tolist(),
            to_db(analytical.values).tolist(),
            to_db(estimated.values).tolist(),
        )
        write_table(
            output,
            "psd/1",
            config.metadata(),
            PSD_COLUMNS,
            rows,
            trailer=[
                ("sidelobe_db", result.sidelobe_db),
                ("max_deviation_db", result.max_deviation_db),
            ],
        )
    return result


def sinr_rows(reports: Sequence[SinrReport]) -> List[Tuple]:
    """Flatten reports into sinr/1 rows."""
    rows = []
    for report in reports:
        for point in report.points:
            rows.append(
                (
                    report.equalizer.value,
                    point.es_n0_db,
                    _db(point.analytical),
                    _db(point.empirical),
                    point.ci_halfwidth,
                    point.useful,
                    point.interference,
                    point.noise,
                    report.dropped_realizations,
                    point.analytical_dbmean,
                    point.empirical_dbmean,
                )
            )
    return rows


def run_sinr(
    config: ExperimentConfig, output: Optional[str] = None, progress: bool = True
) -> List[SinrReport]:
    """Monte Carlo SINR campaign over the configured Es/N0 grid.

    Args:
        config: Validated experiment configuration.
        output: CSV path; nothing is written when None.
        progress: Show progress bars.

    Returns:
        List of SinrReport, one per equalizer.
    """
    setup = SinrSetup(
        window=config.window(),
        profile=config.tap_profile(),
        geometry=config.geometry(),
        es_n0_db=config.es_n0_grid(),
        equalizers=config.equalizer_kinds(),
        sigma_x2=config.sigma_x2,
        normalize=config.normalize,
        constellation=config.constellation,
    )
    logging.info(
        f"SINR over {config.realizations} realizations x {config.frames} frames, "
        f"{config.workers} worker(s)"
    )
    reports = empirical_sinr(
        setup,
        config.realizations,
        config.frames,
        config.seed,
        workers=config.workers,
        progress=progress,
    )
    if output:
        rows = sinr_rows(reports)
        write_table(output, "sinr/1", config.metadata(), SINR_COLUMNS, rows)
    return reports


def run_window(config: ExperimentConfig, output: Optional[str] = None) -> np.ndarray:
    """Tabulate |H_k| and |h_k| over the L bins.

    Returns:
        Array of shape (L, 3): bin, magnitude, time magnitude.
    """
    w = config.window()
    table = np.column_stack([np.arange(w.length), np.abs(w.H), np.abs(w.h)])
    if output:
        rows = [(int(k), float(m), float(t)) for k, m, t in table]
        write_table(output, "window/1", config.metadata(), WINDOW_COLUMNS, rows)
    return table


def run_validate(
    geometries: Sequence[Tuple[int, int, int]],
    seed: int = 0,
    checks: Optional[List[str]] = None,
    dft_norm: Optional[str] = None,
) -> Tuple[List[CheckResult], bool]:
    """Run the validation suite and print one line per check.

    Returns:
        The results and whether all of them passed.
    """
    results = validate(geometries, checks, seed, dft_norm)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(
            f"{status} {result.name}: {result.detail} "
            f"(tolerance {result.tolerance:g})"
        )
    return results, all(result.passed for result in results)
