"""Command-line interface: ``netctrl analyze | generate | selftest``.

Exit codes: 0 when every requested check holds or is inapplicable, 1 when an
applicable check fails (or errors), 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InputError
from .linalg import TolerancePolicy
from .network import NetworkSpec, NodeDynamics, cycle_topology, path_topology, star_topology, wheel_topology
from .report import emit_report, run_analysis
from .specfile import dump_spec, load_fixture, parse_spec
from .theorems import NO_INPUT, TOPOLOGY_KINDS, UNCONTROLLABLE_PAIR

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# (fixture, checks, [(check_id, holds, witness node, reason)]); None means "don't care"
SELFTEST_CASES = (
    ("example1", "kalman,pbh,thm1", [("kalman.controllable", True, None, None),
                                     ("pbh.controllable", True, None, None),
                                     ("thm1.controllable", True, None, None)]),
    ("example2", "thm2,thm3,kalman", [("thm2.spectrum", True, None, None),
                                      ("thm3.controllable", True, None, None),
                                      ("kalman.controllable", True, None, None)]),
    ("example4", "thm3,kalman", [("thm3.controllable", True, None, None),
                                 ("kalman.controllable", True, None, None)]),
    ("example5", "thm3,kalman", [("thm3.controllable", False, 3, NO_INPUT),
                                 ("kalman.controllable", False, None, None)]),
    ("example6", "thm3,kalman", [("thm3.controllable", False, 2, UNCONTROLLABLE_PAIR),
                                 ("kalman.controllable", False, None, None)]),
    ("example7a", "thm4,kalman", [("thm4.observable", False, 2, None),
                                  ("kalman.observable", False, None, None)]),
    ("example7b", "thm4,kalman", [("thm4.observable", False, 2, None),
                                  ("kalman.observable", False, None, None)]),
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netctrl", description="Controllability and observability of networked LTI systems.")
    p.add_argument("--version", action="version", version=f"netctrl {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run checks on a network description file")
    a.add_argument("file", help="network description (YAML); '-' reads stdin")
    a.add_argument("--checks", default="all",
                   help="comma-separated subset of kalman,pbh,thm1,thm2,thm3,thm4,nc,all,special:<kind> "
                        "(default: all); an empty string reports dims only")
    a.add_argument("--tol-rank", type=float, help="relative singular-value cutoff (default machine eps)")
    a.add_argument("--tol-eig", type=float, help="eigenvalue clustering tolerance (default 1e-8)")
    a.add_argument("--tol-res", type=float, help="residual tolerance (default 1e-8)")
    a.add_argument("--format", choices=("text", "machine"), default="text")
    a.add_argument("-o", "--output", help="write the report here instead of stdout")

    g = sub.add_parser("generate", help="write a skeleton description for a named topology")
    g.add_argument("--topology", choices=TOPOLOGY_KINDS, required=True)
    g.add_argument("--nodes", type=int, required=True, help="number of nodes N")
    g.add_argument("--hub", type=int, default=1, help="hub node for star and wheel (1-based)")
    g.add_argument("--dim", type=int, default=2, help="state dimension of every node (default 2)")
    g.add_argument("--out", required=True, help="output file; '-' writes stdout")

    s = sub.add_parser("selftest", help="analyze the bundled example networks against known verdicts")
    s.add_argument("-v", "--verbose", action="store_true")
    return p


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_analyze(args) -> int:
    text = sys.stdin.read() if args.file == "-" else None
    if text is None:
        path = Path(args.file)
        if not path.is_file():
            raise InputError(f"{args.file}: no such file")
        text = path.read_text()
    spec = parse_spec(text)
    tol = TolerancePolicy.from_env(rank_rtol=args.tol_rank, eig_cluster_atol=args.tol_eig,
                                   residual_atol=args.tol_res)
    report = run_analysis(spec, args.checks, tol)
    _write(emit_report(report, args.format), args.output)
    return report.exit_code


def skeleton_spec(kind: str, N: int, hub: int = 1, dim: int = 2) -> NetworkSpec:
    """Identity node dynamics on a unit-weight topology, every node driven, m = 1."""
    if dim < 1:
        raise InputError("--dim must be >= 1")
    if kind == "path":
        topo = path_topology(N)
    elif kind == "cycle":
        topo = cycle_topology(N)
    elif kind == "star":
        topo = star_topology(N, hub)
    else:
        topo = wheel_topology(N, hub)
    eye = np.eye(dim)
    node = NodeDynamics(A=eye, B=eye[:, :1], C=eye[:1, :], H=eye[:, :1])
    return NetworkSpec((node,) * N, topo, 1)


def cmd_generate(args) -> int:
    spec = skeleton_spec(args.topology, args.nodes, args.hub, args.dim)
    label = args.topology + (f" (hub {args.hub})" if args.topology in ("star", "wheel") else "")
    header = (f"{label} network with N={args.nodes}; identity node dynamics.\n"
              "Edit A, B, C, H per node; L[i][j] != 0 is an edge from node j+1 into node i+1.")
    _write(dump_spec(spec, header), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    failures = 0
    for name, checks, expected in SELFTEST_CASES:
        report = run_analysis(load_fixture(name), checks)
        for cid, holds, node, reason in expected:
            v = report.verdict(cid)
            ok = v.error is None and v.applicable and v.holds == holds
            if ok and node is not None:
                ok = v.witness is not None and v.witness.node == node
            if ok and reason is not None:
                ok = v.witness is not None and v.witness.reason == reason
            failures += not ok
            if args.verbose or not ok:
                print(f"{'ok  ' if ok else 'FAIL'} {name:<10} {cid:<20} {v.detail}")
    total = sum(len(e) for _, _, e in SELFTEST_CASES)
    print(f"selftest: {total - failures}/{total} expectations met")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"analyze": cmd_analyze, "generate": cmd_generate, "selftest": cmd_selftest}[args.command]
    try:
        return handler(args)
    except InputError as exc:
        print(f"netctrl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"netctrl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
