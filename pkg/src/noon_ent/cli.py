"""``noon-ent`` command line.

Exit codes: 0 entangled (or, for ``sep-solve``/``sweep``/``tripartite``,
success), 1 inconclusive, 2 error (message on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .channels import DiscreteMoments, apply_atmospheric_loss, gaussian_lambda
from .errors import NoonEntError
from .fock import from_spec, make_noisy_noon, interference_operator, load_spec, noon_state
from .multipartite import dephase_one_mode, tripartite_witness, w_state
from .nonclassicality import ppt_min_eigenvalue
from .quasiprob import solve_quasiprob
from .sep import solve_sep_analytic, solve_sep_numeric
from .witness import ENTANGLED, interference_criterion, witness_value

EXIT_ENTANGLED, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2
FLOAT_FMT = ".12g"


class CliError(Exception):
    pass


def _threads() -> int | None:
    raw = os.environ.get("NOON_ENT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise CliError(f"NOON_ENT_THREADS must be an integer, got {raw!r}") from None
    return None if n <= 0 else n


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), FLOAT_FMT)
    return str(x)


def _emit(args, payload, rows=None, header=None):
    """Write JSON (``payload``) or CSV (``header`` + ``rows``) to ``--out`` or stdout."""
    if args.format == "csv":
        if rows is None:
            rows = [[k, v] for k, v in _flatten(payload)]
            header = ["key", "value"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _load_state(path, require_state=True):
    """Read a spec; states (as opposed to test operators) are validated as density operators."""
    try:
        state = load_spec(path)
        if require_state and not state.is_state:
            state = make_noisy_noon(state.L0, state.diag_a, state.diag_b, state.coh, as_state=True)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read state spec {path}: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid state spec {path}: {exc}") from None
    return state


def _load_operator(arg, state):
    """``--L``: a JSON operator spec path, or ``interference[:L0]`` at the state's top coherence index."""
    if arg is None or arg.startswith("interference"):
        L0 = float(arg.split(":", 1)[1]) if arg and ":" in arg else 0.0
        idx = state.coherent_indices() or [state.n_max]
        return interference_operator(max(idx), L0=L0, n_max=state.n_max)
    try:
        with open(arg) as fh:
            return from_spec(json.load(fh))
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise CliError(f"invalid operator spec {arg}: {exc}") from None


def _verdict_code(entangled: bool) -> int:
    return EXIT_ENTANGLED if entangled else EXIT_INCONCLUSIVE


# subcommands -------------------------------------------------------------------


def cmd_analyze(args):
    state = _load_state(args.state)
    L = _load_operator(args.L, state)
    q = solve_quasiprob(state)
    crit = {str(i): interference_criterion(state, i) for i in range(1, state.n_max + 1)}
    rep = witness_value(L, state)
    report = {
        "interference_criterion": crit,
        "witness": rep.as_dict(),
        "quasiprob": q.as_dict(),
        "min_weight": q.min_weight,
        "ppt_min": ppt_min_eigenvalue(state),
        "sep_g_max": solve_sep_analytic(state).g_max,
    }
    entangled = q.min_weight < -args.tol
    report["verdict"] = ENTANGLED if entangled else "inconclusive"
    _emit(args, report)
    return _verdict_code(entangled)


def cmd_sep_solve(args):
    state = _load_state(args.state, require_state=False)
    if args.numeric:
        sols = solve_sep_numeric(state, restarts=args.restarts, seed=args.seed)
    else:
        sols = solve_sep_analytic(state)
    rows = []
    for s in sols:
        rows.append([s.g, s.branch, s.residual, json.dumps(_cvec(s.vec.amp_a)), json.dumps(_cvec(s.vec.amp_b))])
    payload = {
        "g_max": sols.g_max,
        "g_values": [float(g) for g in sols.g_values()],
        "solutions": [
            {"g": r[0], "branch": r[1], "residual": r[2], "a": json.loads(r[3]), "b": json.loads(r[4])} for r in rows
        ],
        "flags": list(sols.flags),
    }
    _emit(args, payload, rows, ["g", "branch", "residual", "a", "b"])
    return 0


def _cvec(v):
    return [[float(z.real), float(z.imag)] for z in v]


def cmd_witness(args):
    state = _load_state(args.state)
    L = _load_operator(args.L, state)
    rep = witness_value(L, state, g_sup=args.g_sup)
    _emit(args, rep.as_dict())
    return _verdict_code(rep.value < -args.tol)


def cmd_quasiprob(args):
    state = _load_state(args.state)
    q = solve_quasiprob(state)
    _emit(args, q.as_dict(), [[lab, w] for lab, w in zip(q.labels, q.weights)], ["label", "weight"])
    return _verdict_code(q.min_weight < -args.tol)


def _sweep_state(param, x, N, channel):
    """Noisy N00N state at one sweep point."""
    if param == "delta":
        state = noon_state(N, coherence=gaussian_lambda(x, N))
    elif param == "lambda":
        state = noon_state(N, coherence=x)
    elif param == "t4_moment":
        if channel == "deterministic":
            moments = DiscreteMoments([x**0.25], [1.0])
        else:  # two-point {0, 1}: <T^k> = x for every k >= 1
            moments = DiscreteMoments([0.0, 1.0], [1.0 - x, x])
        state = apply_atmospheric_loss(N, moments)
    else:
        raise CliError(f"unknown sweep parameter {param!r}")
    return state


def _sweep_row(param, x, N, channel):
    state = _sweep_state(param, x, N, channel)
    q = solve_quasiprob(state, coherent_indices=[N])
    return [x, interference_criterion(state, N), q.min_weight, ppt_min_eigenvalue(state)]


def _grid(args):
    if not args.start < args.stop:
        raise CliError("sweep needs start < stop")
    if args.steps < 2:
        raise CliError("sweep needs steps >= 2")
    return [float(x) for x in np.linspace(args.start, args.stop, args.steps)]


def cmd_sweep(args):
    grid = _grid(args)
    if args.param == "t4_moment" and (grid[0] < 0 or grid[-1] > 1):
        raise CliError("t4_moment range must lie in [0, 1]")
    if args.param == "lambda" and (grid[0] < 0 or grid[-1] > 1):
        raise CliError("lambda range must lie in [0, 1]")
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda x: _sweep_row(args.param, x, args.N, args.channel), grid))
    header = [args.param, "witness_value", "min_weight", "ppt_min"]
    _emit(args, [dict(zip(header, r)) for r in rows], rows, header)
    return 0


def cmd_tripartite(args):
    grid = _grid(args)
    rows = []
    for x in grid:
        lam = gaussian_lambda(x, args.N) if args.param == "delta" else x
        st = dephase_one_mode(w_state(args.N, 3), lam=lam)
        rows.append([x, tripartite_witness(st, "partial").value, tripartite_witness(st, "full").value])
    header = [args.param, "partial_value", "full_value"]
    _emit(args, [dict(zip(header, r)) for r in rows], rows, header)
    return 0


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="noon-ent", description="Entanglement verification of noisy N00N states.")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    p.add_argument("--tol", type=float, default=1e-9, help="negativity tolerance for the verdict")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full report for a state spec")
    a.add_argument("state")
    a.add_argument("--L", help="operator spec path or interference[:L0]")
    a.set_defaults(func=cmd_analyze, default_format="json")

    s = sub.add_parser("sep-solve", help="separability eigenvalues of an operator spec")
    s.add_argument("state")
    s.add_argument("--numeric", action="store_true", help="use the numeric multistart solver")
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sep_solve, default_format="json")

    w = sub.add_parser("witness", help="witness value g_sup - tr(L rho)")
    w.add_argument("state")
    w.add_argument("--L", help="operator spec path or interference[:L0]")
    w.add_argument("--g-sup", type=float, default=None, help="override the separable bound")
    w.set_defaults(func=cmd_witness, default_format="json")

    q = sub.add_parser("quasiprob", help="entanglement quasiprobability weights")
    q.add_argument("state")
    q.set_defaults(func=cmd_quasiprob, default_format="json")

    for name, func, params, help_ in (
        ("sweep", cmd_sweep, ("delta", "t4_moment", "lambda"), "bipartite parameter sweep (CSV)"),
        ("tripartite", cmd_tripartite, ("delta", "lambda"), "dephased W-state witness sweep (CSV)"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--param", choices=params, default="delta")
        sp.add_argument("--start", type=float, required=True)
        sp.add_argument("--stop", type=float, required=True)
        sp.add_argument("--steps", type=int, required=True)
        sp.add_argument("--N", type=int, default=2)
        if name == "sweep":
            sp.add_argument("--channel", choices=("two_point", "deterministic"), default="two_point")
        sp.set_defaults(func=func, default_format="csv")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except (CliError, NoonEntError, ValueError) as exc:
        print(f"noon-ent: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
