"""Figure-data regeneration commands.

Each ``cmd_*`` takes a validated RunConfig, writes CSV files under
``config.out`` and returns the list of paths written.  Every file starts with
``#`` comment lines (artifact version plus the full config); the data section
below them depends only on the config's computational fields, not on ``jobs``.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .eigen import eig_full, eigvals_full
from .entangle import entropy_half, ppt_avg
from .errors import AdspecError, BoundaryMinimumError, GenerationError
from .gaps import ensemble_stats, find_min_gap, flow_isolines, probability_flow, scaling_table
from .hamiltonian import build_ht
from .sat import (
    SatInstance,
    count_solutions,
    dimacs_string,
    generate_single_solution_instance,
    read_dimacs,
)
from .spectral import (
    ReferenceLaw,
    SpacingSample,
    core_window,
    cumulative,
    empirical_cdf,
    histogram,
    ks_distance,
    low_window,
    unfold,
)

log = logging.getLogger(__name__)


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def header_lines(config: RunConfig, extra=()) -> list[str]:
    lines = [f"adspec {__version__}", f"command {config.command}"]
    lines += [f"config {line}" for line in config.to_text().splitlines()]
    lines += list(extra)
    return lines


def atomic_write(path: Path, text: str) -> Path:
    """Write via a temporary sibling and rename, so readers never see half a file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, config: RunConfig, columns, rows, extra_header=()) -> Path:
    buf = io.StringIO()
    for line in header_lines(config, extra_header):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return atomic_write(Path(path), buf.getvalue())


def data_section(path) -> str:
    """File contents without the leading ``#`` header block."""
    return "".join(l for l in Path(path).read_text().splitlines(True) if not l.startswith("#"))


def read_csv(path) -> list[dict]:
    return list(csv.DictReader(io.StringIO(data_section(path))))


def _map(fn, items, config: RunConfig):
    """Ordered map, parallel across processes when more than one worker is requested."""
    items = list(items)
    workers = min(config.workers, len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def load_instance(config: RunConfig) -> SatInstance:
    if config.instance:
        return read_dimacs(config.instance)
    return generate_single_solution_instance(
        config.n[0], config.alpha, config.seed, config.max_tries
    )


def _instance_header(inst: SatInstance):
    return [
        f"instance n={inst.n} m={inst.m} alpha={inst.alpha!r} seed={inst.seed} "
        f"tries={inst.tries} solution={inst.solution}"
    ]


# generate


def _generate_one(args):
    n, alpha, seed, max_tries = args
    try:
        inst = generate_single_solution_instance(n, alpha, seed, max_tries)
    except GenerationError as exc:
        return seed, None, str(exc)
    return seed, dimacs_string(inst), inst.tries


def cmd_generate(config: RunConfig) -> list[Path]:
    out = Path(config.out)
    jobs = [
        (n, config.alpha, config.seed + k, config.max_tries)
        for n in config.n
        for k in range(config.count)
    ]
    results = _map(_generate_one, jobs, config)
    written, rows = [], []
    multi = len(config.n) > 1
    for (n, _, seed, _), (_, text, info) in zip(jobs, results):
        if text is None:
            rows.append((seed, n, "", "failed"))
            log.warning("seed %d: %s", seed, info)
            continue
        name = f"inst_n{n}_{seed}.cnf" if multi else f"inst_{seed}.cnf"
        written.append(atomic_write(out / name, text))
        rows.append((seed, n, info, "ok"))
    written.append(write_csv(out / "manifest.csv", config, ["seed", "n", "tries", "status"], rows))
    return written


def verify_manifest(directory) -> list[tuple[int, int]]:
    """Re-read every generated instance; returns (seed, solution count) pairs."""
    directory = Path(directory)
    result = []
    for row in read_csv(directory / "manifest.csv"):
        if row["status"] != "ok":
            continue
        seed = int(row["seed"])
        candidates = [directory / f"inst_{seed}.cnf", directory / f"inst_n{row['n']}_{seed}.cnf"]
        path = next(p for p in candidates if p.exists())
        result.append((seed, count_solutions(read_dimacs(path))))
    return result


# spectrum


def _full_spectrum(instance, t):
    return eigvals_full(build_ht(instance, t))


def cmd_spectrum(config: RunConfig) -> list[Path]:
    inst = load_instance(config)
    ts = config.t_values()
    spectra = _map(partial(_full_spectrum, inst), ts, config)
    rows = ((t, i, e) for t, values in zip(ts, spectra) for i, e in enumerate(values))
    path = write_csv(
        Path(config.out) / "spectrum.csv", config, ["t", "index", "E"], rows,
        _instance_header(inst),
    )
    return [path]


# stats


def _window_sample(config: RunConfig, values, which: str):
    if which == "core":
        win = core_window(values, config.core_fraction, window="core")
    else:
        win = low_window(values, config.low_start, config.low_fraction, window="low")
    return unfold(win), win


def cmd_stats(config: RunConfig) -> list[Path]:
    inst = load_instance(config)
    values = eigvals_full(build_ht(inst, config.t))
    out = Path(config.out)
    written = []
    ks_rows = []
    for which in config.windows:
        sample, win = _window_sample(config, values, which)
        fit = sample.fit
        meta = _instance_header(inst) + [
            f"window {which} index [{win.lo}, {win.hi}) energy [{win.energies[0]!r}, {win.energies[-1]!r}]",
            f"fit domain {list(map(float, fit.domain))} coef {list(map(float, fit.coef))}",
            f"clamped {sample.clamped} mean_spacing {sample.mean!r}",
        ]
        hist = histogram(sample, config.bin_width, config.s_max)
        meta_h = meta + [f"overflow {hist.overflow!r}"]
        written.append(write_csv(
            out / f"spacing_hist_{which}.csv", config, ["s_bin_center", "density"],
            zip(hist.centers, hist.density), meta_h,
        ))
        written.append(write_csv(
            out / f"spacing_cdf_{which}.csv", config, ["s", "cdf"], cumulative(sample), meta,
        ))
        for law in ReferenceLaw:
            ks_rows.append((
                which, law.value, ks_distance(sample, law), len(sample), sample.mean,
                sample.clamped, float(empirical_cdf(sample, 0.3)),
            ))
    written.append(write_csv(
        out / "ks.csv", config,
        ["window", "law", "ks_distance", "spacings", "mean", "clamped", "cdf_at_0.3"],
        ks_rows, _instance_header(inst),
    ))
    return written


# entangle


def _entangle_at(instance, t):
    vecs = eig_full(build_ht(instance, t), check=False).vectors
    return ppt_avg(vecs), entropy_half(vecs)


def cmd_entangle(config: RunConfig) -> list[Path]:
    inst = load_instance(config)
    ts = config.t_values()
    maps = _map(partial(_entangle_at, inst), ts, config)
    out = Path(config.out)
    meta = _instance_header(inst)
    ppt_rows = ((t, i, v) for t, (ppt, _) in zip(ts, maps) for i, v in enumerate(ppt))
    ent_rows = ((t, i, v) for t, (_, ent) in zip(ts, maps) for i, v in enumerate(ent))
    return [
        write_csv(out / "ppt_map.csv", config, ["t", "i", "lambda_min"], ppt_rows, meta),
        write_csv(out / "entropy_map.csv", config, ["t", "i", "S"], ent_rows, meta),
    ]


# gaps


def _gap_one(args):
    n, alpha, seed, max_tries, grid_step, tol = args
    try:
        inst = generate_single_solution_instance(n, alpha, seed, max_tries)
        return find_min_gap(inst, grid_step, tol), None
    except BoundaryMinimumError as exc:
        return None, f"boundary minimum at t={exc.t!r} delta={exc.delta!r}"
    except AdspecError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_gap_ensembles(config: RunConfig):
    """GapRecords per n plus the failures, in deterministic (n, seed) order."""
    jobs = [
        (n, config.alpha, config.seed + k, config.max_tries, config.grid_step, config.tol)
        for n in config.n
        for k in range(config.count)
    ]
    results = _map(_gap_one, jobs, config)
    records = {n: [] for n in config.n}
    failures = []
    for job, (rec, err) in zip(jobs, results):
        if rec is None:
            failures.append((job[2], job[0], err))
        else:
            records[job[0]].append(rec)
    return records, failures


def cmd_gaps(config: RunConfig) -> list[Path]:
    records, failures = run_gap_ensembles(config)
    out = Path(config.out)
    written = []
    rows = [
        (r.seed, r.n, r.alpha, r.t_min, r.delta, r.tries, r.evaluations, len(r.local_minima))
        for n in config.n
        for r in records[n]
    ]
    written.append(write_csv(
        out / "gaps.csv", config,
        ["seed", "n", "alpha", "t_min", "delta", "tries", "evaluations", "local_minima"], rows,
    ))
    written.append(write_csv(out / "gap_failures.csv", config, ["seed", "n", "reason"], failures))
    stats = {n: ensemble_stats(records[n]) for n in config.n if len(records[n]) >= 2}
    written.append(write_csv(
        out / "gap_stats.csv", config,
        ["n", "alpha", "count", "median", "mean", "min", "max", "frac_s_below_0.25"],
        [(s.n, s.alpha, s.count, s.median, s.mean, s.min, s.max, s.fraction_below(0.25))
         for s in stats.values()],
    ))
    for n, s in stats.items():
        hist = histogram(SpacingSample.of(s.normalized), config.bin_width, config.s_max)
        written.append(write_csv(
            out / f"gap_hist_n{n}.csv", config, ["s_bin_center", "density"],
            zip(hist.centers, hist.density), [f"n {n} overflow {hist.overflow!r}"],
        ))
    if len(stats) >= 3:
        table = scaling_table(stats.values())
        written.append(write_csv(
            out / "scaling.csv", config,
            ["n", "median_over_n", "mean_over_n", "min_over_n", "max_over_n", "reference"],
            [(r.n, r.median, r.mean, r.min, r.max, r.reference) for r in table.rows],
            [f"fitted_rate {table.rate!r} reference_rate {table.reference_rate!r}"],
        ))
    return written


# flow


def cmd_flow(config: RunConfig) -> list[Path]:
    inst = load_instance(config)
    ts = config.t_values()
    chunks = _map(partial(_flow_rows, inst), [[t] for t in ts], config)
    p = np.vstack(chunks)
    out = Path(config.out)
    meta = _instance_header(inst)
    N = p.shape[1]
    written = [write_csv(
        out / "flow.csv", config, ["t", "i", "p"],
        ((t, i, p[r, i]) for r, t in enumerate(ts) for i in range(N)), meta,
    )]
    for level, idx in flow_isolines(p, config.levels).items():
        written.append(write_csv(
            out / f"isoline_{level:g}.csv", config, ["t", "i"], zip(ts, idx),
            meta + [f"level {level!r}"],
        ))
    return written


def _flow_rows(instance, ts):
    return probability_flow(instance, ts).p


COMMAND_TABLE = {
    "generate": cmd_generate,
    "spectrum": cmd_spectrum,
    "stats": cmd_stats,
    "entangle": cmd_entangle,
    "gaps": cmd_gaps,
    "flow": cmd_flow,
}


def run(config: RunConfig) -> list[Path]:
    return COMMAND_TABLE[config.command](config)
