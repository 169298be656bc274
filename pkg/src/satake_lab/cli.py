"""``satake-lab`` command-line driver.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or config error,
3 missing input file, 4 unsaturated enumeration (results are still written).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import charcalc, densitylab, kloosterman, satotate
from .io import DecompositionCache, ExperimentConfig, ResultRecord, append_record, config_keys, ingest_satake, ingest_zeros, \
    parse_key_values, write_csv
from .lfun import afe, core, explicit, lowzeros, oracles
from .lfun.primes import SieveExhausted
from .lfun.testfn import TestFunctionPair

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MISSING, EXIT_UNSATURATED = 0, 1, 2, 3, 4

SUBCOMMANDS = ("orthogonality", "satotate", "kloosterman", "afe", "explicit", "lowzeros", "density", "sieve")

log = logging.getLogger("satake_lab")


def _scale(cfg: ExperimentConfig) -> float:
    """Tolerance multiplier: the strict profile halves absolute tolerances."""
    return 0.5 if cfg.tolerance_profile == "strict" else 1.0


def _kernel(cfg: ExperimentConfig) -> TestFunctionPair:
    return TestFunctionPair(cfg.delta, cfg.kernel)


def _lfunction(label: str) -> core.LFunctionData:
    table = {"zeta": core.zeta, "chi_minus4": core.chi_minus4, "chi_-4": core.chi_minus4}
    if label not in table:
        raise ValueError(f"unknown L-function {label!r}; choose zeta or chi_minus4")
    return table[label]()


def _out(cfg: ExperimentConfig, name: str) -> Path:
    return Path(cfg.out) / f"{cfg.subcommand}-{cfg.digest()[:8]}-{name}"


def _plot(path: Path, draw: Callable) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    draw(ax)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# ---------------------------------------------------------------------------
# pipelines; each fills ``rec`` and returns written artifact paths


def run_orthogonality(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    """Quadrature Gram matrix of characters and exact Adams zero coefficients."""
    weights = charcalc.dominant_weights(cfg.rank, cfg.max_weight)
    rows, worst = [], 0.0
    for a in weights:
        for b in weights:
            val = satotate.st_quadrature(satotate.character_product(a, b), cfg.rank)
            err = abs(val - (1.0 if a == b else 0.0))
            worst = max(worst, err)
            rows.append((str(a), str(b), float(np.real(val)), float(np.imag(val))))
    cache = DecompositionCache()
    c0 = [(str(w), cache.adams(w, 1).zero_coefficient(), cache.adams(w, 2).zero_coefficient())
          for w in weights if not w.is_trivial()]
    rec.results.update(max_quadrature_error=worst)
    rec.verdicts["gram_identity"] = worst <= 1e-9 * _scale(cfg)
    rec.verdicts["c0_k1_zero"] = all(c1 == 0 for _, c1, _ in c0)
    rec.verdicts["c0_k2_indicator"] = all(c2 in (-1, 0, 1) for _, _, c2 in c0)
    p1 = write_csv(_out(cfg, "gram.csv"), ["alpha", "beta", "re", "im"], rows, {"rank": cfg.rank})
    p2 = write_csv(_out(cfg, "adams.csv"), ["theta", "c0_k1", "c0_k2"], c0, {"rank": cfg.rank})
    return [p1, p2]


def run_satotate(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    """Monte-Carlo character Gram matrix against the identity."""
    weights = charcalc.dominant_weights(cfg.rank, cfg.max_weight)
    method = cfg.method if cfg.method in ("haar", "rejection") else "haar"
    gram = satotate.orthogonality_matrix(weights, cfg.rank, cfg.samples, cfg.seed, method, cfg.workers)
    rows = []
    for i, a in enumerate(weights):
        for j, b in enumerate(weights):
            est, se = gram.estimate[i, j], gram.std_error[i, j]
            target = 1.0 if i == j else 0.0
            z = abs(est - target) / se if se > 0 else (0.0 if abs(est - target) < 1e-12 else math.inf)
            rows.append((str(a), str(b), est.real, est.imag, se, z))
    zmax = gram.max_zscore()
    rec.results.update(max_zscore=zmax, samples=cfg.samples, weights=len(weights))
    rec.verdicts["within_3_sigma"] = zmax <= 3.0
    paths = [write_csv(_out(cfg, "gram.csv"), ["alpha", "beta", "re", "im", "std_error", "zscore"], rows,
                       {"rank": cfg.rank, "samples": cfg.samples, "seed": cfg.seed, "method": method})]
    if cfg.emit_plot:
        zs = [r[-1] for r in rows]
        path = _out(cfg, "zscores.svg")
        _plot(path, lambda ax: (ax.hist(zs, bins=30), ax.set_xlabel("|z|"), ax.set_ylabel("entries")))
        paths.append(path)
    return paths


def run_kloosterman(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    if cfg.rank == 2:
        mmax, nmax, cmax = cfg.int_list("grid")
        w = kloosterman.BlockWeylElement((1, 1))
        rows, mismatches, unsat = [], 0, 0
        for c in range(1, cmax + 1):
            for m in range(1, mmax + 1):
                for n in range(1, nmax + 1):
                    brute = kloosterman.kloosterman_brute(w, (m,), (n,), kloosterman.ModuliTuple((c,)),
                                                          cfg.bound or None)
                    classical = kloosterman.kloosterman_r2(m, n, c)
                    equal = brute.value == classical
                    mismatches += not equal
                    unsat += not brute.saturated
                    val = complex(brute.value)
                    rows.append((w.label(), m, n, c, val.real, val.imag, brute.value.to_text(), brute.saturated,
                                 complex(classical).real, equal))
        rec.results.update(rows=len(rows), mismatches=mismatches, unsaturated=unsat)
        rec.verdicts["brute_equals_classical"] = mismatches == 0
        rec.flags["unsaturated"] = unsat > 0
        header = ["w-blocks", "m", "n", "c", "value-real", "value-imag", "exact-form", "saturated",
                  "classical-real", "equal"]
        path = write_csv(_out(cfg, "r2.csv"), header, rows,
                         {"rank": 2, "grid": cfg.grid})
        return [path]
    if cfg.rank == 3:
        mmax, nmax, cmax = cfg.int_list("grid")
        rows, feasible_bad = [], 0
        for w in kloosterman.WeylElement.all(3):
            feasible = 0
            for m in _pairs(mmax):
                for n in _pairs(nmax):
                    for c1 in _nonzero(cmax):
                        for c2 in _nonzero(cmax):
                            feasible += kloosterman.compatibility_check(w, m, n, kloosterman.ModuliTuple((c1, c2))).feasible
            admissible = w.is_block_antidiagonal()
            if not admissible:
                feasible_bad += feasible
            rows.append((" ".join(map(str, w.perm)), admissible, feasible))
        rec.results.update(non_admissible_feasible=feasible_bad)
        rec.verdicts["support_lemma"] = feasible_bad == 0
        path = write_csv(_out(cfg, "r3-support.csv"), ["perm", "block_antidiagonal", "feasible_cells"], rows,
                         {"rank": 3, "grid": cfg.grid})
        return [path]
    raise ValueError("kloosterman supports rank 2 or 3")


def _pairs(top: int):
    return [(a, b) for a in range(1, top + 1) for b in range(1, top + 1)]


def _nonzero(top: int):
    return [x for x in range(-top, top + 1) if x]


def run_afe(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    L = _lfunction(cfg.label)
    C = L.conductor()
    oracle = oracles.zeta_euler_maclaurin(0.5) if L.label == "zeta" else oracles.dirichlet_beta_cvz(0.5)
    xs = [cfg.X] if cfg.X > 0 else [C / 2, C, 2 * C]
    rows, vals = [], []
    for X in xs:
        res = afe.afe_central_value(L, X)
        vals.append(res.value)
        rows.append((X, res.value.real, res.value.imag, oracle, abs(res.value - oracle), res.n_terms, res.tail_bound))
    tol = 1e-3 * _scale(cfg)
    spread = max(abs(a - b) for a in vals for b in vals)
    rec.results.update(value=vals[len(vals) // 2].real, oracle=oracle, max_error=max(r[4] for r in rows),
                       x_spread=spread)
    rec.verdicts["matches_oracle"] = all(r[4] <= tol for r in rows)
    rec.verdicts["x_stable"] = spread <= tol
    return [write_csv(_out(cfg, "afe.csv"), ["X", "re", "im", "oracle", "abs_error", "terms", "tail_bound"], rows,
                      {"label": L.label, "conductor": C})]


def run_explicit(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    L = _lfunction(cfg.label)
    name = "zeta" if L.label == "zeta" else "chi_minus4"
    zeros = ingest_zeros(cfg.zeros) if cfg.zeros else core.bundled_zeros(name)
    psi = _kernel(cfg)
    scale = cfg.logC
    rows = []
    for factor in (1, 2):
        n = cfg.n_zeros * factor
        if n > len(zeros):
            break
        r = explicit.explicit_formula_check(L, zeros, psi, scale, n_zeros=n,
                                            prime_cutoff=factor * math.exp(psi.delta * scale))
        rows.append((n, r.prime_cutoff, r.zero_side, r.pole_side, r.arch_side, r.prime_side, r.residual, r.zero_tail,
                     r.truncation_dominated))
    tol = 1e-2 * _scale(cfg)
    rec.results.update(residual=rows[0][6], zero_tail=rows[0][7])
    rec.verdicts["residual"] = abs(rows[0][6]) <= tol
    if len(rows) > 1:
        rec.verdicts["residual_not_increasing"] = abs(rows[1][6]) <= abs(rows[0][6])
    rec.flags["truncation_dominated"] = bool(rows[0][8])
    return [write_csv(_out(cfg, "explicit.csv"),
                      ["zeros", "prime_cutoff", "zero_side", "pole_side", "arch_side", "prime_side", "residual",
                       "zero_tail", "truncation_dominated"], rows,
                      {"label": L.label, "scale": scale, "kernel": psi.kind, "delta": psi.delta})]


def run_lowzeros(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    weight = charcalc.DominantWeight.parse(cfg.weight)
    psi = _kernel(cfg)
    table = ingest_satake(cfg.satake) if cfg.satake else None
    kmax: int | str = cfg.kmax if cfg.kmax == "all" else int(cfg.kmax)
    res = lowzeros.one_level_density_sim(cfg.rank, weight, cfg.members, cfg.logC, psi, cfg.seed, kmax=kmax,
                                         method=cfg.method, workers=cfg.workers, satake_table=table,
                                         prime_limit=cfg.prime_limit or lowzeros.PRIME_LIMIT)
    dev = abs(res.estimate - res.predicted)
    rec.results.update(estimate=res.estimate, predicted=res.predicted, std_error=res.std_error,
                       finite_prediction=res.finite_prediction, zscore=res.zscore)
    rec.verdicts["within_3_se"] = dev <= 3 * res.std_error
    rec.verdicts["within_abs"] = dev <= 0.05 * _scale(cfg)
    paths = [write_csv(_out(cfg, "lowzeros.csv"),
                       ["rank", "weight", "members", "logC", "estimate", "predicted", "std_error",
                        "finite_prediction"],
                       [(cfg.rank, cfg.weight, res.members, cfg.logC, res.estimate, res.predicted, res.std_error,
                         res.finite_prediction)],
                       {"seed": cfg.seed, "kernel": psi.kind, "delta": psi.delta, "kmax": res.kmax})]
    if cfg.emit_plot:
        path = _out(cfg, "lowzeros.svg")

        def draw(ax):
            ax.errorbar([0], [res.estimate], yerr=[3 * res.std_error], fmt="o", label="simulated D (3 SE)")
            ax.axhline(res.predicted, color="k", ls="--", label="limit prediction")
            ax.axhline(res.finite_prediction, color="g", ls=":", label="finite-logC expectation")
            ax.set_xticks([])
            ax.legend()

        _plot(path, draw)
        paths.append(path)
    return paths


def run_density(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    rows, failures = [], 0
    for r, theta, p, n, angles in densitylab.random_amplifier_configs(cfg.count, cfg.seed):
        base = charcalc.SatakePoint.from_angles(angles)
        for pl in densitylab.placements(r):
            res = densitylab.amplifier_check(densitylab.NonTemperedPoint(theta, base, pl), p, n)
            failures += not res.holds
            rows.append((r, theta, p, n, f"{pl[0]}-{pl[1]}", res.lhs, res.rhs, res.holds))
    rec.results.update(checks=len(rows), counterexamples=failures)
    rec.verdicts["no_counterexamples"] = failures == 0
    return [write_csv(_out(cfg, "amplifier.csv"), ["rank", "theta", "p", "n", "placement", "lhs", "rhs", "holds"],
                      rows, {"seed": cfg.seed, "count": cfg.count})]


def run_sieve(cfg: ExperimentConfig, rec: ResultRecord) -> list[Path]:
    ratio = densitylab.large_sieve_ratio(cfg.rank, cfg.members, cfg.cutoff, cfg.seed)
    doubled = densitylab.large_sieve_ratio(cfg.rank, 2 * cfg.members, cfg.cutoff, cfg.seed)
    rec.results.update(ratio=ratio, ratio_doubled=doubled)
    rec.verdicts["bounded"] = ratio <= 3.0
    rec.verdicts["stable_under_doubling"] = 0.5 <= doubled / ratio <= 2.0
    return [write_csv(_out(cfg, "sieve.csv"), ["rank", "members", "cutoff", "ratio", "ratio_doubled"],
                      [(cfg.rank, cfg.members, cfg.cutoff, ratio, doubled)], {"seed": cfg.seed})]


PIPELINES: dict[str, Callable[[ExperimentConfig, ResultRecord], list[Path]]] = {
    "orthogonality": run_orthogonality,
    "satotate": run_satotate,
    "kloosterman": run_kloosterman,
    "afe": run_afe,
    "explicit": run_explicit,
    "lowzeros": run_lowzeros,
    "density": run_density,
    "sieve": run_sieve,
}


def run(subcommand: str, config: ExperimentConfig) -> tuple[ResultRecord, list[Path]]:
    """Execute one experiment, append its record to the results ledger and return it."""
    if subcommand not in PIPELINES:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    rec = ResultRecord.new(config)
    paths = PIPELINES[subcommand](config, rec)
    append_record(Path(config.out) / "results.jsonl", rec)
    return rec, paths


# ---------------------------------------------------------------------------
# argument parsing

_FLAGS: dict[str, tuple[str, type, str]] = {
    "rank": ("--rank", int, "group rank r"),
    "weight": ("--weight", str, "dominant weight, comma separated"),
    "kernel": ("--kernel", str, "test function: fejer, gauss or zero"),
    "delta": ("--delta", float, "support of psi_hat"),
    "logC": ("--logC", float, "log conductor scale"),
    "X": ("--X", float, "AFE balancing parameter (0: use C/2, C, 2C)"),
    "members": ("--members", int, "family size M"),
    "cutoff": ("--cutoff", int, "coefficient cutoff N"),
    "bound": ("--bound", int, "enumeration bound B (0: automatic)"),
    "prime_limit": ("--prime-limit", int, "largest prime the simulation may sieve to (0: default)"),
    "samples": ("--samples", int, "Monte-Carlo sample count"),
    "max_weight": ("--max-weight", int, "largest theta_1"),
    "grid": ("--grid", str, "M,N,C grid for Kloosterman checks"),
    "method": ("--method", str, "sampler: haar or rejection"),
    "kmax": ("--kmax", str, "prime-power truncation: integer or 'all'"),
    "label": ("--label", str, "L-function: zeta or chi_minus4"),
    "n_zeros": ("--n-zeros", int, "number of zeros used"),
    "count": ("--count", int, "sampled configurations"),
    "seed": ("--seed", int, "random seed"),
    "workers": ("--workers", int, "worker threads"),
    "zeros": ("--zeros", str, "zero-ordinate file"),
    "satake": ("--satake", str, "Satake dataset file"),
    "out": ("--out", str, "output directory"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satake-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=PIPELINES[name].__doc__.splitlines()[0] if PIPELINES[name].__doc__ else None)
        sp.add_argument("--config", help="flat key=value config file; flags override it")
        for key, (flag, typ, help_) in _FLAGS.items():
            sp.add_argument(flag, dest=key, type=typ, default=None, help=help_)
        sp.add_argument("--emit-plot", dest="emit_plot", action="store_const", const=True, default=None)
        sp.add_argument("--tolerance-profile", dest="tolerance_profile", choices=("strict", "default"), default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(parse_key_values(Path(args.config).read_text()))
    values["subcommand"] = args.subcommand
    for key in config_keys():
        v = getattr(args, key, None)
        if v is not None and key != "subcommand":
            values[key] = v
    return ExperimentConfig(**values)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
    except FileNotFoundError as exc:
        print(f"satake-lab: missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, TypeError) as exc:
        print(f"satake-lab: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rec, paths = run(cfg.subcommand, cfg)
    except (FileNotFoundError, SieveExhausted) as exc:
        print(f"satake-lab: missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except ValueError as exc:
        print(f"satake-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for k, v in rec.results.items():
        print(f"{k} = {v}")
    for k, v in rec.verdicts.items():
        print(f"verdict {k}: {'pass' if v else 'FAIL'}")
    for p in paths:
        print(f"wrote {p}")
    if rec.flags.get("unsaturated"):
        return EXIT_UNSATURATED
    return EXIT_OK if rec.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
