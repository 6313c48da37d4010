"""Command-line front end: simulate, ingest, fit, predict, eval.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import sys
import time
from pathlib import Path

import click
import numpy as np

from . import diagnostics, net_data, outputs, synth
from .errors import DataError, NumericalError
from .gibbs import GibbsConfig, predict_next, run_chain

_REQUIRED_KEYS = (
    "h_star",
    "kappa_mu",
    "kappa_x",
    "a1",
    "a2",
    "n_iter",
    "burn_in",
    "seed",
)
_OPTIONAL_KEYS = {
    "thin": 1,
    "jitter": 1e-8,
    "tie_rule": "missing",
    "literal_step4_rate": False,
}
_INT_KEYS = {"h_star", "n_iter", "burn_in", "thin", "seed"}
_FLOAT_KEYS = {"kappa_mu", "kappa_x", "a1", "a2", "jitter"}
_BOOL_KEYS = {"literal_step4_rate"}


def parse_config(path):
    """Key-value config file: ``key = value`` lines, '#' comments."""
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, val = line.split(sep, 1)
                break
        else:
            raise DataError(f"{path}:{lineno}: expected 'key = value'")
        raw[key.strip()] = val.strip()

    config = dict(_OPTIONAL_KEYS)
    for key, val in raw.items():
        if key in _INT_KEYS:
            config[key] = int(val)
        elif key in _FLOAT_KEYS:
            config[key] = float(val)
        elif key in _BOOL_KEYS:
            if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise DataError(f"{path}: {key} must be boolean, got {val!r}")
            config[key] = val.lower() in ("true", "1", "yes")
        elif key == "tie_rule":
            config[key] = val
        else:
            raise DataError(f"{path}: unknown config key {key!r}")
    return config


def _finalize_config(config, overrides, source):
    for key, val in overrides.items():
        if val is not None:
            config[key] = val
    for key in _REQUIRED_KEYS:
        if key not in config:
            raise DataError(f"missing config key {key!r} (set it in {source} or pass a flag)")
    return config


def _gibbs_config(config):
    return GibbsConfig(
        h_star=config["h_star"],
        kappa_mu=config["kappa_mu"],
        kappa_x=config["kappa_x"],
        a1=config["a1"],
        a2=config["a2"],
        n_iter=config["n_iter"],
        burn_in=config["burn_in"],
        thin=config["thin"],
        seed=config["seed"],
        jitter=config["jitter"],
        literal_step4_rate=config["literal_step4_rate"],
    )


def _write_fit_outputs(chain, outdir, save_draws):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs.write_pi_mean(chain, outdir / "pi_mean.csv")
    outputs.write_pi_hpd(chain, outdir / "pi_hpd.csv")
    outputs.write_mu_trace(chain, outdir / "mu_trace.csv")
    outputs.write_tau_mean(chain, outdir / "tau_mean.csv")
    outputs.write_imputations(chain, outdir / "imputations.csv")
    if save_draws:
        np.save(outdir / "pi_draws.npy", chain.pi.astype(np.float32))
        np.save(outdir / "mu_draws.npy", chain.mu.astype(np.float32))


_config_options = [
    click.option("--config", "config_path", type=click.Path(exists=True)),
    click.option("--h-star", type=int),
    click.option("--kappa-mu", type=float),
    click.option("--kappa-x", type=float),
    click.option("--a1", type=float),
    click.option("--a2", type=float),
    click.option("--n-iter", type=int),
    click.option("--burn-in", type=int),
    click.option("--thin", type=int),
    click.option("--seed", type=int),
    click.option("--jitter", type=float),
    click.option(
        "--literal-step4-rate/--conjugate-step4-rate",
        "literal_step4_rate",
        default=None,
    ),
    click.option(
        "--threads",
        type=int,
        default=1,
        help="Reserved; the sampler currently runs single-threaded.",
    ),
]


def _with_config_options(fn):
    for opt in reversed(_config_options):
        fn = opt(fn)
    return fn


def _collect_config(config_path, kwargs):
    config = parse_config(config_path) if config_path else dict(_OPTIONAL_KEYS)
    overrides = {
        key: kwargs.get(key)
        for key in (
            "h_star",
            "kappa_mu",
            "kappa_x",
            "a1",
            "a2",
            "n_iter",
            "burn_in",
            "thin",
            "seed",
            "jitter",
            "literal_step4_rate",
        )
    }
    return _finalize_config(config, overrides, config_path or "the config file")


@click.group()
@click.version_option()
def cli():
    """Dynamic latent space modeling of binary relational matrices."""


@cli.command()
@click.option("--v", "V", type=int, required=True)
@click.option("--t", "T", type=int, required=True)
@click.option("--h-true", type=int, default=2, show_default=True)
@click.option("--kappa", type=float, default=0.01, show_default=True,
              help="Length-scale for both the baseline and the coordinates.")
@click.option("--kappa-mu", type=float, default=None)
@click.option("--kappa-x", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def simulate(V, T, h_true, kappa, kappa_mu, kappa_x, seed, out):
    """Generate a synthetic network with known ground truth."""
    started = time.monotonic()
    if V < 2:
        raise click.UsageError("--v must be at least 2")
    spec = synth.GeneratorSpec(
        V=V,
        T=T,
        H_true=h_true,
        kappa_mu=kappa_mu if kappa_mu is not None else kappa,
        kappa_x=kappa_x if kappa_x is not None else kappa,
        seed=seed,
    )
    net, pi, mu = synth.generate(spec)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    net_data.save_network(net, outdir / "network.csv")
    outputs.write_truth_pi(net.grid.times, V, pi, outdir / "truth_pi.csv")
    outputs.write_truth_mu(net.grid.times, mu, outdir / "truth_mu.csv")
    config = {
        "v": V, "t": T, "h_true": h_true,
        "kappa_mu": spec.kappa_mu, "kappa_x": spec.kappa_x, "seed": seed,
    }
    outputs.write_manifest(outdir, "simulate", config, seed, [], started)
    click.echo(f"wrote {outdir / 'network.csv'}")


@cli.command()
@click.argument("returns_path", type=click.Path(exists=True))
@click.option("--tie-rule", type=click.Choice(["missing", "zero_as_positive"]),
              default="missing", show_default=True)
@click.option("--out", type=click.Path(), required=True,
              help="Output network CSV path.")
def ingest(returns_path, tie_rule, out):
    """Build a co-movement network from a log-returns table."""
    started = time.monotonic()
    table = net_data.load_returns(returns_path)
    net = net_data.from_log_returns(table, tie_rule=tie_rule)
    outpath = Path(out)
    outpath.parent.mkdir(parents=True, exist_ok=True)
    net_data.save_network(net, outpath)
    outputs.write_manifest(
        outpath.parent, "ingest", {"tie_rule": tie_rule}, 0, [returns_path], started
    )
    click.echo(f"wrote {outpath} ({net.V} nodes, {net.T} times)")


@cli.command()
@click.argument("data_path", type=click.Path(exists=True))
@_with_config_options
@click.option("--out", type=click.Path(), required=True)
@click.option("--save-draws/--no-save-draws", default=True, show_default=True)
def fit(data_path, config_path, out, save_draws, threads, **kwargs):
    """Run the Gibbs sampler on a network CSV and write summaries."""
    started = time.monotonic()
    config = _collect_config(config_path, kwargs)
    net = net_data.load_network(data_path)
    chain = run_chain(net, _gibbs_config(config))
    _write_fit_outputs(chain, out, save_draws)
    outputs.write_manifest(
        out, "fit", config, config["seed"], [data_path], started
    )
    click.echo(f"fit complete: {chain.n_draws} retained draws -> {out}")


@cli.command()
@click.argument("data_path", type=click.Path(exists=True))
@_with_config_options
@click.option("--t-new", type=float, required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--save-draws/--no-save-draws", default=True, show_default=True)
def predict(data_path, config_path, t_new, out, save_draws, threads, **kwargs):
    """Fit with an appended fully-missing matrix at --t-new."""
    started = time.monotonic()
    config = _collect_config(config_path, kwargs)
    net = net_data.load_network(data_path)
    chain = predict_next(net, _gibbs_config(config), t_new)
    _write_fit_outputs(chain, out, save_draws)
    outputs.write_manifest(
        out, "predict", {**config, "t_new": t_new}, config["seed"],
        [data_path], started,
    )
    click.echo(f"prediction complete: draws at t={t_new} -> {out}")


@cli.command("eval")
@click.option("--fit-dir", type=click.Path(exists=True), required=True,
              help="Directory produced by fit/predict with pi_draws.npy.")
@click.option("--data", "data_path", type=click.Path(exists=True), required=True)
@click.option("--window-start", type=float, default=None)
@click.option("--window-end", type=float, default=None)
@click.option("--out", type=click.Path(), default=None,
              help="Output directory (defaults to --fit-dir).")
def evaluate(fit_dir, data_path, window_start, window_end, out):
    """ROC/AUC, ESS and aggregated network weights for a finished fit."""
    started = time.monotonic()
    fit_dir = Path(fit_dir)
    outdir = Path(out) if out else fit_dir
    outdir.mkdir(parents=True, exist_ok=True)
    draws_path = fit_dir / "pi_draws.npy"
    if not draws_path.exists():
        raise DataError(f"{draws_path} not found; rerun fit with --save-draws")
    pi = np.load(draws_path).astype(float)
    net = net_data.load_network(data_path)
    if pi.shape[1] != net.P or pi.shape[2] not in (net.T, net.T + 1):
        raise DataError("pi_draws.npy does not match the network dimensions")

    mean = pi.mean(axis=0)  # (P, T')
    obs = net.observed
    scores = mean[:, : net.T][obs]
    labels = net.y[obs]
    points, auc = diagnostics.roc_auc(scores, labels)
    outputs.write_roc(points, auc, outdir / "roc_points.csv", outdir / "auc.txt")

    times = net.grid.times
    lo = window_start if window_start is not None else float(times[0])
    hi = window_end if window_end is not None else float(times[-1])
    W = diagnostics.aggregate_network_weights(pi[:, :, : net.T], times, (lo, hi))
    outputs.write_network_weights(W, outdir / "network_weights.csv")

    i_idx, j_idx = net_data.pair_arrays(net.V)
    rows = []
    for p in range(net.P):
        for k in range(net.T):
            name = f"pi_{i_idx[p] + 1}_{j_idx[p] + 1}_t{k + 1}"
            rows.append((name, diagnostics.effective_sample_size(pi[:, p, k])))
    outputs.write_ess(rows, outdir / "ess.csv")
    outputs.write_manifest(
        outdir, "eval", {"window": [lo, hi]}, 0, [str(fit_dir), data_path], started
    )
    click.echo(f"auc={auc:.4f} -> {outdir}")


def main():
    try:
        cli.main(standalone_mode=True)
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(3)
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()
