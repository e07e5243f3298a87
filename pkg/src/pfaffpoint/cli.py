"""Command-line front end.

Batch evaluation of kernels, correlations, Monte Carlo sampling and the
sampler-vs-theory comparison, plus a self-test of the core invariants.
Outputs are CSV (grids) or JSON (structured reports); every output embeds
the run configuration and a schema version, and identical invocations
produce byte-identical files.  Exit codes: 0 success, 1 numerical failure,
2 usage error.
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from . import __version__, correlations, ginibre, hermitian, limits, sampler, skewalg
from .spectral import SpectralPoint

SCHEMA = "pfaffpoint/1"


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit_csv(out, config: dict, header: list, rows: list) -> None:
    lines = [f"# schema={SCHEMA}"]
    for k in sorted(config):
        lines.append(f"# {k}={config[k]}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_json(out, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _parse_grid(text: str) -> list:
    tokens = [t for t in text.replace(";", ",").split(",") if t.strip()]
    if not tokens:
        raise click.UsageError("empty grid")
    try:
        return [SpectralPoint.parse(t) for t in tokens]
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise click.UsageError(f"bad complex number {text!r}: {exc}")


def _numerical(exc: Exception):
    click.echo(f"numerical failure: {exc}", err=True)
    sys.exit(1)


@click.group()
@click.version_option(__version__)
def main():
    """Pfaffian point-process kernels and correlations for real asymmetric
    random-matrix ensembles."""


# -- kernel -------------------------------------------------------------------


@main.command("kernel")
@click.option("--mode", type=click.Choice(["finite", "limit", "bulk"]), required=True)
@click.option("--m-index", type=int, default=None, help="Truncation index M (matrix size 2M).")
@click.option("--u", "u_str", default=None, help="Bulk center, |u| < 1 (bulk mode).")
@click.option("--grid", "grid_str", required=True,
              help="Comma-separated points (offsets in bulk mode), e.g. '0,0.5,0.2+0.4i'.")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--plot", is_flag=True, help="Render a figure next to the output file.")
def cmd_kernel(mode, m_index, u_str, grid_str, out, fmt, plot):
    """Evaluate the 2x2 matrix kernel over all ordered pairs of a point grid."""
    grid = _parse_grid(grid_str)
    if mode in ("finite", "bulk") and (m_index is None or m_index < 1):
        raise click.UsageError(f"mode={mode} requires --m-index >= 1")
    if mode == "bulk":
        if u_str is None:
            raise click.UsageError("mode=bulk requires --u")
        try:
            scaling = limits.BulkScaling(_parse_complex(u_str), m_index)
        except ValueError as exc:
            raise click.UsageError(str(exc))
    config = {"command": "kernel", "mode": mode, "m_index": m_index,
              "u": u_str, "grid": grid_str, "version": __version__}
    rows = []
    try:
        for p in grid:
            for q in grid:
                if mode == "finite":
                    blk = ginibre.kernel_tilde(m_index, p, q)
                elif mode == "limit":
                    blk = limits.kernel_limit(p, q)
                else:
                    _, blk = limits.bulk_scaled_block(scaling, p.value, q.value)
                rows.append([
                    p.value.real, p.value.imag, "real" if p.is_real else "complex",
                    q.value.real, q.value.imag, "real" if q.is_real else "complex",
                    blk.ds.real, blk.ds.imag, blk.s.real, blk.s.imag,
                    blk.s_rev.real, blk.s_rev.imag,
                    blk.is_plus_e.real, blk.is_plus_e.imag,
                ])
    except Exception as exc:  # numerical path
        _numerical(exc)
    header = ["g1_re", "g1_im", "g1_tag", "g2_re", "g2_im", "g2_tag",
              "DS_re", "DS_im", "S_re", "S_im", "Srev_re", "Srev_im",
              "ISE_re", "ISE_im"]
    if fmt == "csv":
        _emit_csv(out, config, header, rows)
    else:
        _emit_json(out, {"schema": SCHEMA, "config": config, "header": header, "rows": rows})
    if plot:
        from . import plotting

        fig_path = (out or "kernel") + ".png"
        plotting.plot_kernel_rows(
            [dict(zip(header, r)) for r in rows], fig_path
        )
        click.echo(f"figure written to {fig_path}", err=True)


# -- corr ---------------------------------------------------------------------


def _hermitian_corr_detail(model, gram, ys):
    k = len(ys)
    big = np.zeros((2 * k, 2 * k), dtype=complex)
    for i, y in enumerate(ys):
        for j, yp in enumerate(ys):
            big[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = hermitian.herm_kernel(
                model, gram, y, yp
            ).as_array()
    big = 0.5 * (big - big.T)
    val = skewalg.pfaffian(big)
    cond = float(np.linalg.cond(big))
    return max(val.real, 0.0), abs(val.imag), cond


@main.command("corr")
@click.option("--mode", type=click.Choice(["finite", "limit", "bulk", "hermitian"]),
              required=True)
@click.option("--m-index", type=int, default=None,
              help="M for finite/bulk; matrix dimension N for hermitian.")
@click.option("--beta", type=click.Choice(["1", "4"]), default="1",
              help="Hermitian ensemble beta.")
@click.option("--u", "u_str", default=None, help="Bulk center (bulk mode).")
@click.option("--points", "points_str", default=None,
              help="One configuration: comma-separated points.")
@click.option("--grid", "grid_str", default=None,
              help="Evaluate the one-point function at each grid point.")
@click.option("--integrate", is_flag=True,
              help="With --grid: also report the trapezoid integral over the grid.")
@click.option("--oracle", type=click.Choice(["none", "brute"]), default="none",
              help="Add a brute-force quadrature column (small N only).")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--plot", is_flag=True)
def cmd_corr(mode, m_index, beta, u_str, points_str, grid_str, integrate,
             oracle, out, fmt, plot):
    """Correlation values R as Pfaffians of assembled kernel block matrices."""
    beta = int(beta)
    if (points_str is None) == (grid_str is None):
        raise click.UsageError("exactly one of --points / --grid is required")
    if integrate and grid_str is None:
        raise click.UsageError("--integrate requires --grid")
    if mode in ("finite", "bulk", "hermitian") and (m_index is None or m_index < 1):
        raise click.UsageError(f"mode={mode} requires --m-index >= 1")
    config = {"command": "corr", "mode": mode, "m_index": m_index, "beta": beta,
              "u": u_str, "points": points_str, "grid": grid_str,
              "integrate": integrate, "oracle": oracle, "version": __version__}

    if mode == "hermitian":
        if m_index % 2 != 0:
            raise click.UsageError("hermitian mode needs an even --m-index")
        model = hermitian.HermitianModel.gaussian(beta, m_index)
    elif mode == "bulk":
        if u_str is None:
            raise click.UsageError("mode=bulk requires --u")
        try:
            scaling = limits.BulkScaling(_parse_complex(u_str), m_index)
        except ValueError as exc:
            raise click.UsageError(str(exc))

    def detail_for(points):
        if mode == "hermitian":
            if not all(p.is_real for p in points):
                raise click.UsageError("hermitian configurations are real points")
            return _hermitian_corr_detail(model, gram_h, [p.value.real for p in points])
        cfg = correlations.Configuration(
            xs=[p.value.real for p in points if p.is_real],
            zs=[p.value for p in points if not p.is_real],
        )
        if mode == "finite":
            return correlations.corr_detail(
                lambda a, b: ginibre.kernel_tilde(m_index, a, b), cfg
            )
        if mode == "limit":
            return correlations.corr_detail(limits.kernel_limit, cfg)
        return correlations.corr_detail(
            lambda a, b: limits.bulk_scaled_block(scaling, a.value, b.value)[1], cfg
        )

    def brute_for(points):
        xs = [p.value.real for p in points if p.is_real]
        zs = [p.value for p in points if not p.is_real]
        if mode == "hermitian":
            return hermitian.herm_corr_direct(model, xs)
        n = 2 * m_index if mode == "finite" else None
        if n is None or n > 4:
            raise click.UsageError("--oracle brute needs mode=finite with 2M <= 4")
        return correlations.brute_corr(
            correlations.WeightSpec.ginibre(), n,
            correlations.Configuration(xs=xs, zs=zs),
        )

    try:
        if mode == "hermitian":
            gram_h = hermitian.herm_gram(model)
        configs = ([_parse_grid(points_str)] if points_str
                   else [[p] for p in _parse_grid(grid_str)])
        rows = []
        for i, pts in enumerate(configs):
            r, resid, cond = detail_for(pts)
            row = [i, ";".join(str(p) for p in pts), r, resid, cond]
            if oracle == "brute":
                row.append(brute_for(pts))
            rows.append(row)
    except click.UsageError:
        raise
    except Exception as exc:
        _numerical(exc)

    header = ["index", "points", "R", "im_residue", "condition"]
    if oracle == "brute":
        header.append("R_brute")
    extra = {}
    if integrate:
        xs = [p[0].value.real for p in configs]
        from scipy.integrate import trapezoid

        extra["integral"] = float(trapezoid([r[2] for r in rows], xs))
        config["integral"] = _fmt(extra["integral"])
    if fmt == "csv":
        _emit_csv(out, config, header, rows)
    else:
        _emit_json(out, {"schema": SCHEMA, "config": config, "header": header,
                         "rows": rows, **extra})
    if plot:
        from . import plotting

        fig_path = (out or "corr") + ".png"
        plotting.plot_corr_rows([{"R": r[2]} for r in rows], fig_path)
        click.echo(f"figure written to {fig_path}", err=True)


# -- sample / compare ---------------------------------------------------------


@main.command("sample")
@click.option("--n", "n", type=int, required=True, help="Matrix size (even).")
@click.option("--samples", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--bins", type=int, default=40)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def cmd_sample(n, samples, seed, bins, out):
    """Sample spectra and emit density-estimate histograms as JSON."""
    if n % 2 != 0 or n < 2 or n > 64:
        raise click.UsageError("--n must be even with 2 <= n <= 64")
    if samples < 1:
        raise click.UsageError("--samples must be positive")
    try:
        est = sampler.estimate_density(n, samples, seed, bins=bins)
    except Exception as exc:
        _numerical(exc)
    payload = {
        "schema": SCHEMA,
        "config": {"command": "sample", "n": n, "samples": samples,
                   "seed": seed, "bins": bins, "version": __version__},
        "n": n,
        "seed": seed,
        "n_samples": samples,
        "real_count_mean": est.real_count_mean,
        "real_count_se": est.real_count_se,
        "real_hist": {"edges": est.real_edges, "counts": est.real_counts},
        "complex_hist": {"x_edges": est.cplx_x_edges, "y_edges": est.cplx_y_edges,
                         "counts": est.cplx_counts},
        "real_count_distribution": est.real_count_per_sample,
    }
    _emit_json(out, payload)


@main.command("compare")
@click.option("--n", "n", type=int, required=True, help="Matrix size (even).")
@click.option("--samples", type=int, default=10000)
@click.option("--seed", type=int, default=0)
@click.option("--bins", type=int, default=40)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--plot", is_flag=True)
def cmd_compare(n, samples, seed, bins, out, plot):
    """Compare sampled real-axis density against the finite-size kernel."""
    if n % 2 != 0 or n < 2 or n > 64:
        raise click.UsageError("--n must be even with 2 <= n <= 64")
    m = n // 2

    def intensity(x):
        return ginibre.kernel_tilde(m, SpectralPoint.real(x), SpectralPoint.real(x)).s.real

    try:
        est = sampler.estimate_density(n, samples, seed, bins=bins)
        from scipy import integrate as _int

        pred_count, _ = _int.quad(intensity, -est.real_edges[-1], est.real_edges[-1],
                                  limit=200)
        rep = sampler.compare(est, intensity, pred_count)
    except Exception as exc:
        _numerical(exc)
    payload = {
        "schema": SCHEMA,
        "config": {"command": "compare", "n": n, "samples": samples,
                   "seed": seed, "bins": bins, "version": __version__},
        "n": n,
        "seed": seed,
        "n_samples": samples,
        "kernel_model": f"finite-ginibre-M{m}",
        "real_count_mean": rep.real_count_mean,
        "real_count_se": rep.real_count_se,
        "predicted_real_count": rep.predicted_real_count,
        "chi2": rep.chi2,
        "dof": rep.dof,
        "p_value": rep.p_value,
        "max_std_dev": rep.max_std_dev,
        "real_hist": {"centers": rep.bin_centers, "observed": rep.observed,
                      "predicted": rep.predicted},
        "complex_hist": {"x_edges": est.cplx_x_edges, "y_edges": est.cplx_y_edges,
                         "counts": est.cplx_counts},
    }
    _emit_json(out, payload)
    if plot:
        from . import plotting

        fig_path = (out or "compare") + ".png"
        plotting.plot_density_report(rep.bin_centers, rep.observed, rep.predicted,
                                     samples, fig_path)
        click.echo(f"figure written to {fig_path}", err=True)


# -- selftest -----------------------------------------------------------------


def _check_pf_squared(rng):
    worst = 0.0
    for dim in range(2, 13, 2):
        for _ in range(30):
            a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            a = a - a.T
            pf = skewalg.pfaffian(a)
            det = np.linalg.det(a)
            worst = max(worst, abs(pf * pf - det) / max(1.0, abs(det)))
    return worst, 1e-9


def _check_pf_expansion(rng):
    worst = 0.0
    for t in range(1, 5):
        for _ in range(5):
            full = rng.standard_normal((2 * t, 2 * t))
            full = full - full.T
            blocks = full.reshape(t, 2, t, 2).transpose(0, 2, 1, 3)
            direct, expansion = skewalg.pf_block_sum(blocks)
            worst = max(worst, abs(direct - expansion) / max(1.0, abs(direct)))
    return worst, 1e-10


def _check_cauchy_binet(rng):
    worst = 0.0
    for _ in range(50):
        j, k = rng.integers(1, 5), rng.integers(1, 5)
        a = rng.standard_normal((2 * j, 2 * k))
        b = rng.standard_normal((2 * j, 2 * j))
        c = rng.standard_normal((2 * k, 2 * k))
        b, c = b - b.T, c - c.T
        worst = max(worst, skewalg.cauchy_binet_residual(a, b, c))
    return worst, 1e-9


def _check_skew_orthogonality(rng):
    w = correlations.WeightSpec.ginibre()
    basis = correlations.ginibre_skew_basis(4)
    norm = 2.0 * math.sqrt(2.0 * math.pi)
    worst = 0.0
    for m in range(2):
        val = correlations.skew_product(w, basis[2 * m], basis[2 * m + 1])
        worst = max(worst, abs(val - norm * math.factorial(2 * m)) / (norm * math.factorial(2 * m)))
    for a, b in [(0, 2), (0, 3), (1, 2)]:
        worst = max(worst, abs(correlations.skew_product(w, basis[a], basis[b])) / norm)
    return worst, 1e-8


def _check_closed_vs_sum(rng):
    pts = [SpectralPoint.real(0.5), SpectralPoint.real(-0.2),
           SpectralPoint.upper(0.7 + 0.2j), SpectralPoint.upper(-0.3 + 0.9j)]
    worst = 0.0
    for m in (1, 3, 6):
        for p in pts:
            for q in pts:
                a = ginibre.kernel_tilde(m, p, q)
                b = ginibre.kernel_tilde_by_sums(m, p, q)
                for name in ("ds", "s", "s_rev", "is_plus_e"):
                    worst = max(worst, abs(getattr(a, name) - getattr(b, name)))
    return worst, 1e-9


def _check_sum_rule(rng):
    from scipy import integrate as _int

    worst = 0.0
    for m in (1, 2):
        f = lambda x: ginibre.kernel_tilde(m, SpectralPoint.real(x), SpectralPoint.real(x)).s.real
        n_real, _ = _int.quad(f, -20, 20, limit=200)
        g = lambda y, x: ginibre.kernel_tilde(
            m, SpectralPoint.upper(complex(x, y)), SpectralPoint.upper(complex(x, y))
        ).s.real
        n_cplx, _ = _int.dblquad(g, -7, 7, 1e-12, 7, epsabs=1e-9)
        worst = max(worst, abs(n_real + 2 * n_cplx - 2 * m) / (2 * m))
    return worst, 1e-3


def _check_basis_invariance(rng):
    w = correlations.WeightSpec.ginibre()
    z1 = correlations.partition_fn(w, 2, correlations.monomial_basis(2))
    z2 = correlations.partition_fn(w, 2, correlations.ginibre_skew_basis(2))
    return abs(z1 - z2) / abs(z2), 1e-7


def _check_limit_convergence(rng):
    pts = [SpectralPoint.real(0.4), SpectralPoint.upper(0.1 + 0.6j)]
    worst = 0.0
    for p in pts:
        for q in pts:
            a = ginibre.kernel_tilde(100, p, q)
            b = limits.kernel_limit(p, q)
            for name in ("ds", "s", "s_rev", "is_plus_e"):
                worst = max(worst, abs(getattr(a, name) - getattr(b, name)))
    return worst, 1e-5


def _check_bulk_offaxis(rng):
    devs = []
    for m in (50, 100):
        sc = limits.BulkScaling(0.3 + 0.4j, m)
        _, conj = limits.bulk_scaled_block(sc, 0.0, 0.0)
        devs.append(abs(conj.s - 1.0 / math.pi))
    if devs[1] >= devs[0]:
        return math.inf, 5e-3  # convergence must improve with M
    return devs[1], 5e-3


def _check_hermitian(rng):
    worst = 0.0
    for beta in (1, 4):
        m = hermitian.HermitianModel.gaussian(beta, 2)
        zp, zd = hermitian.herm_partition(m), hermitian.herm_partition_direct(m)
        worst = max(worst, abs(zp - zd) / zd)
        a = hermitian.herm_corr(m, [0.3, -0.4])
        b = hermitian.herm_corr_direct(m, [0.3, -0.4])
        worst = max(worst, abs(a - b) / b)
    return worst, 1e-6


def _check_sampler(rng):
    a = sampler.sample_ginoe(4, 7)
    b = sampler.sample_ginoe(4, 7)
    if not (np.array_equal(a.reals, b.reals) and np.array_equal(a.pairs, b.pairs)):
        return math.inf, 0.5
    est = sampler.estimate_density(2, 2000, seed=11, bins=20)
    if est.real_count_per_sample[1] != 0:  # parity: never exactly one real at n=2
        return math.inf, 0.5
    dev = abs(est.real_count_mean - math.sqrt(2.0)) / est.real_count_se
    return dev / 10.0, 0.5  # within 5 standard errors


_SELFTEST_CHECKS = [
    ("pfaffian-squared-equals-det", _check_pf_squared),
    ("pfaffian-sum-expansion", _check_pf_expansion),
    ("cauchy-binet-identity", _check_cauchy_binet),
    ("skew-orthogonality", _check_skew_orthogonality),
    ("closed-form-vs-sum", _check_closed_vs_sum),
    ("sum-rule", _check_sum_rule),
    ("basis-invariance", _check_basis_invariance),
    ("limit-convergence", _check_limit_convergence),
    ("bulk-offaxis-convergence", _check_bulk_offaxis),
    ("hermitian-oracle", _check_hermitian),
    ("sampler-consistency", _check_sampler),
]


def run_selftest(echo=click.echo) -> int:
    """Run all invariant checks; returns the number of failures."""
    rng = np.random.default_rng(0)
    failures = 0
    echo(f"{'check':34s} {'status':6s} {'metric':>12s} {'bound':>10s}")
    for name, fn in _SELFTEST_CHECKS:
        try:
            metric, bound = fn(rng)
            ok = metric <= bound
        except Exception as exc:
            metric, bound, ok = math.inf, math.nan, False
            echo(f"  error in {name}: {exc}", err=True)
        if not ok:
            failures += 1
        echo(f"{name:34s} {'pass' if ok else 'FAIL':6s} {metric:12.3e} {bound:10.1e}")
    echo(f"{len(_SELFTEST_CHECKS) - failures}/{len(_SELFTEST_CHECKS)} checks passed")
    return failures


@main.command("selftest")
def cmd_selftest():
    """Run the full invariant suite; nonzero exit on any failure."""
    failures = run_selftest()
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
