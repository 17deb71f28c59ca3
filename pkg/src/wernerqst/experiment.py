"""End-to-end runs: Werner-family sweeps, correlation scans, single reconstructions.

Column-to-figure mapping for the sweep CSV:
    fidelity vs eta, per mean_pairs          -> fidelity curves
    purity_est and purity_true vs eta        -> purity curves
    concurrence_est and concurrence_true     -> concurrence curves
The correlation CSV (angle_deg, expected, noisy) gives the coincidence
curves with the polarizer in arm 1 fixed at H.
"""
import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import formats, metrics
from .povm import two_qubit_povm
from .reconstruct import EstimatorConfig, estimate
from .simulate import correlation_scan, default_angles, random_source, simulate_counts
from .states import check_eta, werner_two_qubit

SWEEP_HEADER = [
    "eta", "mean_pairs", "trial", "fidelity", "purity_est", "purity_true",
    "concurrence_est", "concurrence_true", "chi2", "evaluations", "converged",
]
SUMMARY_HEADER = [
    "eta", "mean_pairs", "trials",
    "fidelity_mean", "fidelity_min", "fidelity_max",
    "purity_est_mean", "purity_est_min", "purity_est_max", "purity_true",
    "concurrence_est_mean", "concurrence_est_min", "concurrence_est_max", "concurrence_true",
]
CORRELATION_HEADER = ["angle_deg", "expected", "noisy"]


def eta_grid(start=0.0, end=1.0, step=0.02):
    if step <= 0:
        raise ValueError("eta step must be positive")
    check_eta(start)
    check_eta(end)
    n = int(np.floor((end - start) / step + 1e-9))
    return tuple(float(round(start + k * step, 12)) for k in range(n + 1))


@dataclass(frozen=True)
class SweepConfig:
    eta_grid: tuple = field(default_factory=eta_grid)
    mean_pairs_list: tuple = (10, 100, 1000)
    trials: int = 10
    seed: int = 0
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    jobs: int = 1

    def __post_init__(self):
        for eta in self.eta_grid:
            check_eta(eta)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(not n > 0 for n in self.mean_pairs_list):
            raise ValueError("mean_pairs values must be positive")


@dataclass(frozen=True)
class SweepRecord:
    eta: float
    mean_pairs: float
    trial: int
    fidelity: float
    purity_estimated: float
    purity_true: float
    concurrence_estimated: float
    concurrence_true: float
    chi2: float
    evaluations: int
    converged: bool

    def row(self):
        f = formats.fmt_float
        return [
            f(self.eta), f(self.mean_pairs), self.trial, f(self.fidelity),
            f(self.purity_estimated), f(self.purity_true),
            f(self.concurrence_estimated), f(self.concurrence_true),
            f(self.chi2), self.evaluations, int(self.converged),
        ]


def run_cell(eta, mean_pairs, trial, stream, seed, estimator, povm=None):
    """Simulate, reconstruct and score one (eta, N, trial) cell.

    ``stream`` indexes the random substream; the same stream always yields
    the same record no matter which process runs it or in what order.
    """
    povm = povm or two_qubit_povm()
    rng = random_source(seed, *stream)
    rho = werner_two_qubit(eta)
    observed = simulate_counts(rho, povm, mean_pairs, rng)
    est_config = dataclasses.replace(estimator, seed=int(rng.integers(2**63)))
    result = estimate(observed, povm, est_config)
    return SweepRecord(
        eta=float(eta),
        mean_pairs=float(mean_pairs),
        trial=int(trial),
        fidelity=metrics.fidelity(result.sigma, rho),
        purity_estimated=metrics.purity(result.sigma),
        purity_true=metrics.purity_werner_theory(eta),
        concurrence_estimated=metrics.concurrence(result.sigma),
        concurrence_true=metrics.concurrence_werner_theory(eta),
        chi2=result.chi2,
        evaluations=result.evaluations,
        converged=result.converged,
    )


def _cell_job(args):
    return run_cell(*args)


def sweep_cells(config):
    for ei, eta in enumerate(config.eta_grid):
        for ni, n in enumerate(config.mean_pairs_list):
            for trial in range(config.trials):
                yield (eta, n, trial, (ei, ni, trial), config.seed, config.estimator)


def run_sweep(config, progress=None):
    """One record per (eta, N, trial), ordered by eta, then N, then trial."""
    cells = list(sweep_cells(config))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            it = pool.map(_cell_job, cells, chunksize=4)
            records = list(progress(it, total=len(cells)) if progress else it)
    else:
        povm = two_qubit_povm()
        it = (run_cell(*c, povm=povm) for c in cells)
        records = list(progress(it, total=len(cells)) if progress else it)
    return records


def summarize(records):
    groups = {}
    for r in records:
        groups.setdefault((r.eta, r.mean_pairs), []).append(r)
    rows = []
    for (eta, n), rs in groups.items():
        fid = np.array([r.fidelity for r in rs])
        pur = np.array([r.purity_estimated for r in rs])
        con = np.array([r.concurrence_estimated for r in rs])
        rows.append({
            "eta": eta, "mean_pairs": n, "trials": len(rs),
            "fidelity_mean": fid.mean(), "fidelity_min": fid.min(), "fidelity_max": fid.max(),
            "purity_est_mean": pur.mean(), "purity_est_min": pur.min(), "purity_est_max": pur.max(),
            "purity_true": rs[0].purity_true,
            "concurrence_est_mean": con.mean(), "concurrence_est_min": con.min(),
            "concurrence_est_max": con.max(), "concurrence_true": rs[0].concurrence_true,
        })
    return rows


def _open_csv(path):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_sweep_csv(records, path):
    fh, writer = _open_csv(path)
    with fh:
        writer.writerow(SWEEP_HEADER)
        for r in records:
            writer.writerow(r.row())


def write_summary_csv(rows, path):
    fh, writer = _open_csv(path)
    with fh:
        writer.writerow(SUMMARY_HEADER)
        for row in rows:
            writer.writerow([
                row[k] if k == "trials" else formats.fmt_float(row[k]) for k in SUMMARY_HEADER
            ])


def run_correlation(eta, mean_pairs, angle_step, seed, output=None, stream=0):
    """Correlation scan over a full period; written as CSV when ``output`` is given."""
    angles = default_angles(angle_step)
    scan = correlation_scan(eta, mean_pairs, angles, random_source(seed, stream))
    scan.seed = seed
    if output is not None:
        fh, writer = _open_csv(output)
        with fh:
            writer.writerow(CORRELATION_HEADER)
            for k, (e, n) in enumerate(zip(scan.expected, scan.counts)):
                writer.writerow([formats.fmt_float(k * angle_step), formats.fmt_float(e), formats.fmt_float(n)])
    return scan


def run_simulate(eta, mean_pairs, seed, output=None, round_counts=False):
    rng = random_source(seed)
    cv = simulate_counts(werner_two_qubit(eta), two_qubit_povm(), mean_pairs, rng,
                         round_counts=round_counts, seed=seed, eta=eta)
    if output is not None:
        formats.write_counts(cv, output)
    return cv


def run_single(counts_path, estimator=None, reference_eta=None, output=None):
    """Reconstruct a state from a counts file; returns (result, JSON document)."""
    observed = formats.read_counts(counts_path)
    povm = two_qubit_povm()
    result = estimate(observed, povm, estimator or EstimatorConfig())
    scores = None
    if reference_eta is not None:
        rho = werner_two_qubit(reference_eta)
        scores = {
            "reference_eta": float(reference_eta),
            "fidelity": metrics.fidelity(result.sigma, rho),
            "purity": metrics.purity(result.sigma),
            "purity_true": metrics.purity_werner_theory(reference_eta),
            "concurrence": metrics.concurrence(result.sigma),
            "concurrence_true": metrics.concurrence_werner_theory(reference_eta),
        }
    doc = formats.state_document(result, scores)
    if output is not None:
        formats.write_json(doc, output)
    return result, doc
