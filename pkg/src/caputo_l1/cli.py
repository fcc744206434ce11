"""Command-line front end: ``order-table``, ``bound-check`` and ``apply``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from caputo_l1.analysis import ErrorConstantParams, estimate_order, truncation_bound
from caputo_l1.errors import DegenerateDifferenceError, NoConvergenceError
from caputo_l1.l1 import SampledFunction, UniformGrid, l1_apply_all
from caputo_l1.oracle import QuadratureConfig, caputo_reference_many
from caputo_l1.testbed import (
    HolderFunction,
    TestFunctionSpec,
    constant_function,
    make_test_function,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BOUND_VIOLATION = 2
EXIT_NO_CONVERGENCE = 3

DEFAULT_ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_KBETA = (0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9)
DEFAULT_TAU = 2.0**-10
BOUND_SLACK = 1e-6
SPACING_RTOL = 1e-9


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    alphas: list[float] = field(default_factory=lambda: list(DEFAULT_ALPHAS))
    kbeta_values: list[float] = field(default_factory=lambda: list(DEFAULT_KBETA))
    tau_base: float = DEFAULT_TAU
    T: float = 1.0
    output_format: str = "markdown"
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.alphas or not self.kbeta_values:
            raise ConfigError("alphas and k+beta values must be nonempty")
        for a in self.alphas:
            if not 0.0 < a < 1.0:
                raise ConfigError(f"alpha must lie in (0, 1): {a!r}")
        for v in self.kbeta_values:
            if not 0.0 < v <= 2.0:
                raise ConfigError(f"k+beta must lie in (0, 2]: {v!r}")
        if not self.T > 0.0:
            raise ConfigError(f"horizon must be positive: {self.T!r}")
        if not 0.0 < self.tau_base <= self.T:
            raise ConfigError(f"tau must lie in (0, T]: {self.tau_base!r}")
        n = round(self.T / self.tau_base)
        if abs(n * self.tau_base - self.T) > 1e-9 * self.T:
            raise ConfigError(f"tau = {self.tau_base!r} does not divide T = {self.T!r}")
        if self.output_format not in ("csv", "markdown"):
            raise ConfigError(f"unknown format: {self.output_format!r}")


def _fmt(x: float) -> str:
    # shortest repr that round-trips
    return repr(float(x))


def _round2(x: float) -> str:
    # format() rounds half to even on the exact binary value
    s = format(x, ".2f")
    return "0.00" if s == "-0.00" else s


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _order_cell(args: tuple[float, float, float, float]):
    alpha, kbeta, tau, T = args
    spec = TestFunctionSpec.from_kbeta(kbeta)
    f = make_test_function(spec)
    try:
        est = estimate_order(replace(f, T=T), alpha, tau, T)
    except DegenerateDifferenceError:
        # the scheme is exact to rounding here, so no order can be read off
        est = None
    return spec, est


def _map(fn, items, jobs: int):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def cmd_order_table(cfg: ExperimentConfig, jobs: int = 1) -> int:
    """Write the table of estimated convergence orders."""
    cells = [(a, v, cfg.tau_base, cfg.T) for a in cfg.alphas for v in cfg.kbeta_values]
    results = _map(_order_cell, cells, jobs)

    if cfg.output_format == "csv":
        rows = []
        for (a, v, _, _), (spec, est) in zip(cells, results):
            nums = ["nan"] * 3 if est is None else [
                _fmt(est.estimated_order), _fmt(est.max_diffs[0]), _fmt(est.max_diffs[1])]
            rows.append([_fmt(a), _fmt(v), str(spec.k), _fmt(spec.beta)] + nums)
        header = ["alpha", "kbeta", "k", "beta", "order", "max_diff_coarse",
                  "max_diff_fine"]
        _write(_csv_text(header, rows), cfg.output_path)
        return EXIT_OK

    ncol = len(cfg.kbeta_values)
    lines = ["| alpha \\ k+beta | " + " | ".join(f"{v:g}" for v in cfg.kbeta_values) + " |",
             "|---|" + "---|" * ncol]
    for i, a in enumerate(cfg.alphas):
        row = results[i * ncol:(i + 1) * ncol]
        lines.append(f"| {a:g} | " + " | ".join("n/a" if e is None else _round2(e.estimated_order) for _, e in row) + " |")
    lines.append("")
    lines.append(
        f"tau = {cfg.tau_base!r}, T = {cfg.T!r}; test function (t - 1/2)^k |t - 1/2|^beta "
        "with k+beta <= 1 read as k = 0 and k+beta > 1 as k = 1."
    )
    if any(e is None for _, e in results):
        lines.append("n/a: nested-grid differences are at rounding level, so no order is defined.")
    _write("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


@dataclass(frozen=True)
class BoundRow:
    alpha: float
    kbeta: float
    k: int
    beta: float
    tau: float
    max_error: float
    bound: float
    ratio: float


def bound_rows(
    f: HolderFunction,
    alpha: float,
    taus: Sequence[float],
    T: float,
    qcfg: QuadratureConfig,
) -> list[BoundRow]:
    """Observed L1 error against the truncation bound on each grid in ``taus``.

    ``ratio`` is the largest ``error_n / bound_n`` over the nodes (0 when every
    error and bound vanish); ``bound`` is the bound at the last node.
    """
    seminorm = f.known_seminorm
    if seminorm is None:
        raise ValueError("bound check needs a known seminorm")
    rows = []
    n_fine = int(round(T / min(taus)))
    ts = np.arange(1, n_fine + 1) * (T / n_fine)
    ref, _ = caputo_reference_many(f, alpha, ts, qcfg)
    for tau in taus:
        n = int(round(T / tau))
        stride = n_fine // n
        approx = l1_apply_all(SampledFunction.from_function(f, UniformGrid(tau, n)), alpha)
        err = np.abs(approx - ref[stride - 1::stride])
        bounds = np.array([
            truncation_bound(ErrorConstantParams(alpha, f.beta, f.k, m), tau, seminorm)
            for m in range(1, n + 1)
        ])
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(bounds > 0, err / bounds, np.where(err > 0, np.inf, 0.0))
        rows.append(BoundRow(alpha, f.k + f.beta, f.k, f.beta, tau,
                             float(err.max()), float(bounds[-1]), float(r.max())))
    return rows


def _bound_cell(args):
    alpha, kbeta, taus, T, qcfg, function = args
    if function == "constant":
        f = constant_function(1.0, T)
    else:
        f = replace(make_test_function(TestFunctionSpec.from_kbeta(kbeta)), T=T)
    return bound_rows(f, alpha, taus, T, qcfg)


def cmd_bound_check(
    cfg: ExperimentConfig,
    qcfg: QuadratureConfig = QuadratureConfig(),
    function: str = "test",
    jobs: int = 1,
) -> int:
    """Compare the observed L1 error with the truncation bound cell by cell."""
    taus = [cfg.tau_base * 2.0**j for j in range(5)]
    taus = [t for t in taus if t <= cfg.T]
    cells = []
    for a in cfg.alphas:
        for v in cfg.kbeta_values:
            spec = TestFunctionSpec.from_kbeta(v)
            if function == "test" and not (spec.k + spec.beta > a and (spec.k or spec.beta > a)):
                print(f"skipping alpha = {a:g}, k+beta = {v:g}: k+beta <= alpha, "
                      "bound does not apply", file=sys.stderr)
                continue
            cells.append((a, v, taus, cfg.T, qcfg, function))
    try:
        results = _map(_bound_cell, cells, jobs)
    except NoConvergenceError as exc:
        print(f"error: oracle did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    rows = [r for cell in results for r in cell]
    header = ["alpha", "kbeta", "k", "beta", "tau", "max_error", "bound", "ratio", "status"]

    def status(r: BoundRow) -> str:
        return "ok" if r.ratio <= 1.0 + BOUND_SLACK else "VIOLATION"

    if cfg.output_format == "csv":
        text = _csv_text(header, [
            [_fmt(r.alpha), _fmt(r.kbeta), str(r.k), _fmt(r.beta), _fmt(r.tau),
             _fmt(r.max_error), _fmt(r.bound), _fmt(r.ratio), status(r)] for r in rows
        ])
    else:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for r in rows:
            lines.append(
                f"| {r.alpha:g} | {r.kbeta:g} | {r.k} | {r.beta:g} | {r.tau:.6g} | "
                f"{r.max_error:.3e} | {r.bound:.3e} | {r.ratio:.4f} | {status(r)} |"
            )
        text = "\n".join(lines) + "\n"
    _write(text, cfg.output_path)
    if any(status(r) != "ok" for r in rows):
        return EXIT_BOUND_VIOLATION
    return EXIT_OK


def read_samples(path: str) -> SampledFunction:
    """Parse a ``t,y`` CSV with uniformly spaced ``t`` starting at 0."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError("input file is empty") from None
        if [h.strip() for h in header] != ["t", "y"]:
            raise ConfigError(f"expected header 't,y', got {','.join(header)!r}")
        t, y = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ConfigError(f"line {lineno}: expected two fields")
            try:
                t.append(float(row[0]))
                y.append(float(row[1]))
            except ValueError:
                raise ConfigError(f"line {lineno}: cannot parse {row!r}") from None
    if len(t) < 2:
        raise ConfigError("need at least two samples")
    ta = np.array(t)
    if ta[0] != 0.0:
        raise ConfigError(f"first t must be 0, got {ta[0]!r}")
    steps = np.diff(ta)
    if np.any(steps <= 0):
        raise ConfigError("t values must be strictly increasing")
    n = len(ta) - 1
    tau = ta[-1] / n
    dev = np.max(np.abs(ta - np.arange(n + 1) * tau)) / tau
    if dev > SPACING_RTOL:
        raise ConfigError(f"t values are not uniformly spaced (relative deviation {dev:.2e})")
    if not np.all(np.isfinite(y)):
        raise ConfigError("y values must be finite")
    return SampledFunction(UniformGrid(tau, n), np.array(y))


def cmd_apply(input_path: str, alpha: float, output_path: Optional[str]) -> int:
    """Apply the L1 scheme to sampled data and write ``t,l1_caputo``."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1): {alpha!r}")
    samples = read_samples(input_path)
    values = l1_apply_all(samples, alpha, max_nodes=max(samples.grid.n_max, 1))
    t = samples.grid.nodes()[1:]
    _write(_csv_text(["t", "l1_caputo"], [[_fmt(a), _fmt(b)] for a, b in zip(t, values)]),
           output_path)
    return EXIT_OK


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alphas", type=_floats, default=list(DEFAULT_ALPHAS),
                   help="comma-separated derivative orders")
    p.add_argument("--kbeta", type=_floats, default=list(DEFAULT_KBETA),
                   help="comma-separated smoothness indices k+beta in (0, 2]")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="base step")
    p.add_argument("--horizon", type=float, default=1.0, help="final time T")
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caputo-l1", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order-table", help="estimated convergence orders of the L1 scheme")
    _common(p)

    p = sub.add_parser("bound-check", help="observed L1 error against the truncation bound")
    _common(p)
    p.add_argument("--oracle-tol", type=float, default=1e-10,
                   help="absolute and relative tolerance of the reference quadrature")
    p.add_argument("--function", choices=("test", "constant"), default="test")

    p = sub.add_parser("apply", help="apply the L1 scheme to a t,y CSV file")
    p.add_argument("input", help="CSV file with header t,y")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    try:
        if args.command == "apply":
            return cmd_apply(args.input, args.alpha, args.out)
        cfg = ExperimentConfig(args.alphas, args.kbeta, args.tau, args.horizon,
                               args.format, args.out)
        if args.command == "order-table":
            return cmd_order_table(cfg, jobs=args.jobs)
        if not args.oracle_tol > 0:
            raise ConfigError("--oracle-tol must be positive")
        qcfg = QuadratureConfig(abs_tol=args.oracle_tol, rel_tol=args.oracle_tol)
        return cmd_bound_check(cfg, qcfg, args.function, jobs=args.jobs)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
