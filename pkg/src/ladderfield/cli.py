"""Command-line front end.

One executable, one subcommand per module.  All output is written as a
single buffered string so identical invocations produce identical
bytes; every CSV (and the graph listing) starts with ``# version=`` and
``# seed=`` metadata lines.  Exit codes: 0 success, 1 domain error
(message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .chain_complex import build_chain_complex, build_ladder_graph, serialize_graph
from .gauge_continuum import (
    fierz_pauli_apply,
    fierz_pauli_kernel,
    gauge_tensor,
    maxwell_kernel,
    minkowski_square,
    null_residual,
    sym_to_vec,
)
from .partition import brute_force_Z, euclidean_Z
from .scc import build_system, gradient_link_values, verify_scc
from .spectral import continue_to_lorentzian, ladder_spectrum_closed_form
from .twinslit import (
    SlitGeometry,
    TwinSlitConfig,
    geometry_to_links,
    interference_phase_difference,
    nrqm_intensity,
    path_difference,
)

OUTPUT_DIR_ENV = "LADDERFIELD_OUTPUT_DIR"

#: Vertex values behind the six-vertex preset; its gradient supplies link values.
PRESET_VERTICES = {"twin6": np.array([0, 2, 1, 4, 3, 7])}
PRESET_N = {"twin6": 6}


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _meta(seed: int) -> list[str]:
    return [f"# version={__version__}", f"# seed={seed}"]


def _number(text: str):
    """int when the text is an integer literal, float otherwise."""
    try:
        return int(text)
    except ValueError:
        return float(text)


def _read_values(path: str) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(_number(line))
    if not rows:
        raise ValueError(f"no values found in {path}")
    if all(isinstance(r, int) for r in rows):
        return np.array(rows, dtype=np.int64)
    return np.array(rows, dtype=float)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_graph(args) -> str:
    graph = build_ladder_graph(args.n)
    lines = _meta(args.seed)
    lines.append(serialize_graph(graph).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args) -> str:
    spectrum = ladder_spectrum_closed_form(args.n, beta=args.beta)
    if args.lorentzian:
        spectrum = continue_to_lorentzian(spectrum, args.n)
    lines = _meta(args.seed)
    lines.append("index,eigenvalue,parity,is_zero_mode")
    zero = set(spectrum.zero_modes)
    for i in range(spectrum.n_modes):
        parity = spectrum.parity[i] or ""
        lines.append(
            f"{i},{_fmt(spectrum.eigenvalues[i])},{parity},{_fmt(i in zero)}"
        )
    return "\n".join(lines) + "\n"


def _resolve_vertices(args) -> np.ndarray:
    spec = args.from_vertices
    if spec == "random":
        rng = np.random.default_rng(args.seed)
        return rng.integers(-9, 10, size=args.n)
    if spec.startswith("preset:"):
        name = spec.split(":", 1)[1]
        if name not in PRESET_VERTICES:
            raise ValueError(f"unknown preset {name!r}")
        if args.n is not None and args.n != PRESET_N[name]:
            raise ValueError(f"preset {name!r} fixes N={PRESET_N[name]}, got --n {args.n}")
        return PRESET_VERTICES[name]
    return _read_values(spec)


def _matrix_block(label: str, M: np.ndarray, indent: str = "    ") -> list[str]:
    width = max(len(_fmt(v)) for v in M.ravel())
    lines = [label]
    for row in M:
        lines.append(indent + " ".join(_fmt(v).rjust(width) for v in row))
    return lines


def _cmd_scc(args) -> str:
    v = _resolve_vertices(args)
    n = int(v.size)
    if args.n is not None and args.n != n:
        raise ValueError(f"--n {args.n} does not match {n} vertex values")
    c = build_chain_complex(n)
    e = gradient_link_values(c, v)
    system = build_system(c, 1, e, alpha=args.alpha, beta=args.beta)
    report = verify_scc(system, v)

    vec = lambda x: " ".join(_fmt(t) for t in x)
    lines = _meta(args.seed)
    lines += [
        "self-consistency report",
        f"  n_vertices              {n}",
        f"  degree                  1",
        f"  alpha                   {_fmt(args.alpha)}",
        f"  beta                    {_fmt(args.beta)}",
        f"  arithmetic              {'exact' if report.exact else 'float'}",
        f"  vertex values           {vec(v)}",
        f"  link values             {vec(e)}",
        f"  source J                {vec(system.J)}",
    ]
    lines += _matrix_block("  operator K", system.K, indent="      ")
    lines += [
        f"  identity max residual   {_fmt(report.max_identity_residual)}",
        f"  source sum              {_fmt(report.source_sum)}",
        f"  constant-mode residual  {_fmt(report.max_constant_mode_residual)}",
        "  verdict                 PASS",
    ]
    return "\n".join(lines) + "\n"


def _resolve_source(args):
    """(n_vertices, link values) from --source / --n."""
    spec = args.source
    if spec.startswith("preset:"):
        name = spec.split(":", 1)[1]
        if name not in PRESET_VERTICES:
            raise ValueError(f"unknown preset {name!r}")
        n = PRESET_N[name]
        if args.n is not None and args.n != n:
            raise ValueError(f"preset {name!r} fixes N={n}, got --n {args.n}")
        c = build_chain_complex(n)
        return n, gradient_link_values(c, PRESET_VERTICES[name])
    e = _read_values(spec)
    n_float = (e.size + 2) * 2 / 3  # links = 3N/2 - 2
    n = int(round(n_float))
    if 3 * n // 2 - 2 != e.size or n % 2:
        raise ValueError(f"{e.size} link values do not fit any ladder graph")
    if args.n is not None and args.n != n:
        raise ValueError(f"--n {args.n} does not match {e.size} link values (N={n})")
    return n, e


def _cmd_partition(args) -> str:
    n, e = _resolve_source(args)
    c = build_chain_complex(n)
    system = build_system(c, 1, e, alpha=args.alpha, beta=args.beta)
    spectrum = ladder_spectrum_closed_form(n, beta=args.beta)
    result = euclidean_Z(system, spectrum)

    header = "log_Z,exponent_term,restricted_dim"
    row = f"{_fmt(result.log_magnitude)},{_fmt(result.exponent_term)},{result.restricted_dimension}"
    if args.oracle:
        oracle = brute_force_Z(
            system, spectrum, method=args.oracle, budget=args.budget, seed=args.seed
        )
        header += ",oracle_log_Z,abs_err"
        row += f",{_fmt(oracle.log_magnitude)},{_fmt(abs(oracle.log_magnitude - result.log_magnitude))}"
    lines = _meta(args.seed) + [header, row]
    return "\n".join(lines) + "\n"


def _parse_range(text: str) -> np.ndarray:
    m = re.fullmatch(r"([^:]+):([^:]+):(\d+)", text)
    if not m:
        raise ValueError(f"bad range {text!r}; expected start:stop:steps")
    start, stop, steps = float(m.group(1)), float(m.group(2)), int(m.group(3))
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return np.linspace(start, stop, steps)


#: Absolute phase slack (radians) for flagging a sweep row as an exact maximum.
MAXIMUM_PHASE_TOL = 1e-9


def _cmd_twinslit(args) -> str:
    lines = _meta(args.seed)
    lines.append("y,delta_phi,n_nearest,is_maximum,nrqm_intensity")
    for y in _parse_range(args.y_range):
        geometry = SlitGeometry(
            slit_separation=args.d,
            screen_distance=args.L,
            detector_position=float(y),
            wavelength=args.lam,
        )
        e_x, e_x_alt = geometry_to_links(geometry, args.n)
        config = TwinSlitConfig.calibrated(
            args.n, e_x, e_x_alt, e_T=1.0, lambda_hat=args.lam
        )
        dphi = interference_phase_difference(config)
        nearest = int(round(dphi / (2.0 * math.pi)))
        is_max = abs(dphi - 2.0 * math.pi * nearest) <= MAXIMUM_PHASE_TOL
        intensity = nrqm_intensity(path_difference(geometry), args.lam)
        lines.append(
            f"{_fmt(float(y))},{_fmt(dphi)},{nearest},{_fmt(is_max)},{_fmt(intensity)}"
        )
    return "\n".join(lines) + "\n"


def _cmd_gauge_check(args) -> str:
    rng = np.random.default_rng(args.seed)

    def draw_momentum():
        while True:
            k = rng.uniform(-10.0, 10.0, size=4)
            if abs(minkowski_square(k)) >= 0.1:
                return k

    worst = {
        ("maxwell", "gauge-annihilation"): 0.0,
        ("maxwell", "transversality"): 0.0,
        ("fierz_pauli", "gauge-annihilation"): 0.0,
        ("fierz_pauli", "transversality"): 0.0,
    }
    for _ in range(args.trials):
        k = draw_momentum()
        knorm = float(np.linalg.norm(k))

        M = maxwell_kernel(k)
        worst["maxwell", "gauge-annihilation"] = max(
            worst["maxwell", "gauge-annihilation"], null_residual(M, k)
        )
        x = rng.normal(size=4)
        div = float(k @ (M @ x))
        scale = float(np.linalg.norm(M, 2)) * float(np.linalg.norm(x)) * knorm
        worst["maxwell", "transversality"] = max(
            worst["maxwell", "transversality"], abs(div) / scale
        )

        F = fierz_pauli_kernel(k)
        eps = rng.normal(size=4)
        worst["fierz_pauli", "gauge-annihilation"] = max(
            worst["fierz_pauli", "gauge-annihilation"],
            null_residual(F, sym_to_vec(gauge_tensor(k, eps))),
        )
        H = rng.normal(size=(4, 4))
        H = H + H.T
        out = fierz_pauli_apply(k, H)
        div_t = k @ out
        scale = float(np.linalg.norm(F, 2)) * float(np.linalg.norm(H)) * knorm
        worst["fierz_pauli", "transversality"] = max(
            worst["fierz_pauli", "transversality"], float(np.linalg.norm(div_t)) / scale
        )

    lines = _meta(args.seed)
    lines.append("kernel,property,max_residual")
    for (kernel, prop), value in worst.items():
        lines.append(f"{kernel},{prop},{_fmt(value)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plot scripts

_SPECTRUM_HEADER = "index,eigenvalue,parity,is_zero_mode"
_TWINSLIT_HEADER = "y,delta_phi,n_nearest,is_maximum,nrqm_intensity"


def emit_plot_script(csv_path) -> Path:
    """Write a gnuplot script next to the CSV, dispatching on its header row."""
    csv_path = Path(csv_path)
    header = None
    for line in csv_path.read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            header = line
            break
    if header is None:
        raise ValueError(f"{csv_path} contains no header row")

    name = csv_path.name
    if header == _SPECTRUM_HEADER:
        body = "\n".join(
            [
                "set datafile separator ','",
                "set key autotitle columnhead",
                "set xlabel 'mode index'",
                "set ylabel 'eigenvalue'",
                "set style data impulses",
                f"plot '{name}' using 1:2 lw 2 title 'eigenvalue'",
            ]
        )
    elif header == _TWINSLIT_HEADER:
        body = "\n".join(
            [
                "set datafile separator ','",
                "set key autotitle columnhead",
                "set xlabel 'detector position'",
                "set ylabel 'intensity'",
                f"plot '{name}' using 1:5 with lines title 'reference intensity'",
            ]
        )
    else:
        raise ValueError(f"no plot defined for schema: {header}")

    script_path = csv_path.with_suffix(".gp")
    script_path.write_text(body + "\n")
    return script_path


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ladderfield",
        description="Gaussian field numerics on ladder graphs",
        epilog=f"Relative --output paths resolve against ${OUTPUT_DIR_ENV} when it is set.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, seed_default=0):
        p.add_argument("--output", help="write to this path instead of stdout")
        p.add_argument("--seed", type=int, default=seed_default, help="seed recorded in the header")

    p = sub.add_parser("graph", help="emit the ladder graph serialization")
    p.add_argument("--n", type=int, required=True, help="vertex count (even, >= 4)")
    common(p)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("spectrum", help="closed-form ladder spectrum as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=_number, default=1.0)
    p.add_argument("--lorentzian", action="store_true", help="continue the spectrum")
    p.add_argument("--gnuplot", action="store_true", help="emit a plot script next to --output")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("scc", help="verify the operator/source identity")
    p.add_argument("--n", type=int, default=None)
    p.add_argument(
        "--from-vertices",
        default="random",
        help="'random', 'preset:twin6', or a file of vertex values",
    )
    p.add_argument("--alpha", type=_number, default=1)
    p.add_argument("--beta", type=_number, default=1)
    common(p)
    p.set_defaults(func=_cmd_scc)

    p = sub.add_parser("partition", help="restricted partition function as CSV")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--source", required=True, help="file of link values, or preset:twin6")
    p.add_argument("--alpha", type=_number, default=1)
    p.add_argument("--beta", type=_number, default=1)
    p.add_argument("--oracle", choices=["quadrature", "mc"], default=None)
    p.add_argument("--budget", type=int, default=200_000)
    common(p)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("twinslit", help="fringe sweep over detector positions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True, help="slit separation")
    p.add_argument("--L", type=float, required=True, help="screen distance")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="wavelength")
    p.add_argument("--y-range", required=True, help="start:stop:steps detector sweep")
    p.add_argument("--gnuplot", action="store_true", help="emit a plot script next to --output")
    common(p)
    p.set_defaults(func=_cmd_twinslit)

    p = sub.add_parser("gauge-check", help="continuum kernel residuals as CSV")
    p.add_argument("--trials", type=int, default=1000)
    common(p)
    p.set_defaults(func=_cmd_gauge_check)

    return parser


def _resolve_output(raw: str | None) -> Path | None:
    if raw is None:
        return None
    path = Path(raw)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "gnuplot", False) and args.output is None:
        parser.error("--gnuplot requires --output")

    try:
        text = args.func(args)
        out = _resolve_output(args.output)
        if out is None:
            sys.stdout.write(text)
        else:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text)
            if getattr(args, "gnuplot", False):
                emit_plot_script(out)
    except (ValueError, OSError) as exc:  # SccViolation and friends included
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:
    raise SystemExit(main())
