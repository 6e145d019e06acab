"""Running a set of checks on one network and rendering the result.

The machine-readable form is JSON with ``report_version: 1``::

    {
      "report_version": 1,
      "tool_version": "0.1.0",
      "spec_digest": "<sha256 hex>",
      "dims": {"N": 3, "state_dim": 7, "input_dim": 3, "m": 2},
      "tolerances": {"rank_rtol": ..., "eig_cluster_atol": ..., "residual_atol": ...},
      "hypotheses": null | {"lower_blocks_vanish": bool, "upper_orthogonality": bool,
                            "violations": [{"i", "j", "kind", "value", "eigenvalue", "k"}]},
      "spectrum": null | [{"value": [re, im], "multiplicity": int}],
      "checks": [{"id": str, "holds": bool, "applicable": bool, "detail": str,
                  "error": null | str,
                  "witness": null | {"eigenvalue": [re, im] | null, "vector": [[re, im], ...] | null,
                                     "residual": float | null, "input_residual": float | null,
                                     "node": int | null, "reason": str | null}}]
    }

Complex numbers are ``[re, im]`` pairs, node indices are 1-based, and keys
are sorted so equal reports serialise to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import __version__
from .assembly import assemble
from .classical import (Verdict, Witness, kalman_controllable, kalman_observable, pbh_controllable,
                        pbh_observable)
from .errors import InputError, NetctrlError
from .linalg import DEFAULT_TOL, TolerancePolicy, eig_left, format_complex
from .network import NetworkSpec, validate
from .specfile import spec_digest
from .theorems import (TOPOLOGY_KINDS, HypothesisReport, HypothesisViolation, check_hypotheses,
                       nc_no_external, nc_no_incoming, nc_rank_bound, special_topology_controllable,
                       thm1_controllable, thm2_spectrum, thm3_controllable, thm4_observable)

REPORT_VERSION = 1

CHECK_GROUPS = {
    "kalman": ("kalman.controllable", "kalman.observable"),
    "pbh": ("pbh.controllable", "pbh.observable"),
    "thm1": ("thm1.controllable",),
    "thm2": ("thm2.spectrum",),
    "thm3": ("thm3.controllable",),
    "thm4": ("thm4.observable",),
    "nc": ("nc.no_incoming", "nc.no_external", "nc.rank_bound"),
}
ALL_GROUPS = tuple(CHECK_GROUPS)
CHECK_ORDER = tuple(c for g in ALL_GROUPS for c in CHECK_GROUPS[g]) + tuple(f"special.{k}" for k in TOPOLOGY_KINDS)


def expand_checks(checks) -> tuple[str, ...]:
    """Turn group names into check ids in the fixed execution order.

    Accepts ``kalman``, ``pbh``, ``thm1`` .. ``thm4``, ``nc``, ``all``,
    ``special:<kind>`` and the expanded ids themselves (``kalman.observable``).
    """
    if isinstance(checks, str):
        checks = [c for c in checks.split(",")]
    wanted = set()
    for raw in checks:
        c = raw.strip()
        if not c:
            continue
        if c == "all":
            wanted.update(CHECK_ORDER[:-len(TOPOLOGY_KINDS)])
        elif c in CHECK_GROUPS:
            wanted.update(CHECK_GROUPS[c])
        elif c.startswith("special:") or c.startswith("special."):
            kind = c[len("special:"):]
            if kind not in TOPOLOGY_KINDS:
                raise InputError(f"unknown topology kind {kind!r} in {c!r}; expected one of {TOPOLOGY_KINDS}")
            wanted.add(f"special.{kind}")
        elif c in CHECK_ORDER:
            wanted.add(c)
        else:
            raise InputError(f"unknown check {c!r}; expected a subset of "
                             f"{', '.join(ALL_GROUPS)}, all, special:<{'|'.join(TOPOLOGY_KINDS)}>")
    return tuple(c for c in CHECK_ORDER if c in wanted)


@dataclass(frozen=True)
class AnalysisReport:
    spec_digest: str
    dims: tuple[int, int, int, int]
    checks: tuple[tuple[str, Verdict], ...]
    hypothesis_report: HypothesisReport | None
    spectrum_summary: tuple[tuple[complex, int], ...] | None
    tool_version: str
    tolerances: TolerancePolicy

    def verdict(self, check_id: str) -> Verdict:
        for cid, v in self.checks:
            if cid == check_id:
                return v
        raise KeyError(check_id)

    @property
    def exit_code(self) -> int:
        """0 when every check holds or is inapplicable, 1 otherwise."""
        return 1 if any(v.failed for _, v in self.checks) else 0


def run_analysis(spec: NetworkSpec, checks=(), tol: TolerancePolicy = DEFAULT_TOL) -> AnalysisReport:
    """Run `checks` on `spec`; a check that raises is recorded with ``error`` set."""
    total_n, total_p = validate(spec)
    ids = expand_checks(checks)
    sys = assemble(spec)
    hyp = spectrum = None
    if ids:
        hyp = check_hypotheses(spec, tol)
        spectrum = tuple(eig_left(sys.calA, tol).summary())

    runners = {
        "kalman.controllable": lambda: kalman_controllable(sys.calA, sys.calB, tol),
        "kalman.observable": lambda: kalman_observable(sys.calC, sys.calA, tol),
        "pbh.controllable": lambda: pbh_controllable(sys.calA, sys.calB, tol),
        "pbh.observable": lambda: pbh_observable(sys.calC, sys.calA, tol),
        "thm1.controllable": lambda: thm1_controllable(sys, spec, tol),
        "thm2.spectrum": lambda: thm2_spectrum(sys, spec, tol).verdict(tol),
        "thm3.controllable": lambda: thm3_controllable(sys, spec, tol),
        "thm4.observable": lambda: thm4_observable(spec, tol, sys),
        "nc.no_incoming": lambda: nc_no_incoming(spec, tol, sys),
        "nc.no_external": lambda: nc_no_external(spec, tol, sys),
        "nc.rank_bound": lambda: nc_rank_bound(spec, tol),
    }
    for kind in TOPOLOGY_KINDS:
        runners[f"special.{kind}"] = (lambda k: lambda: special_topology_controllable(spec, k, tol, sys=sys))(kind)

    results = []
    for cid in ids:
        try:
            results.append((cid, runners[cid]()))
        except (NetctrlError, ArithmeticError, ValueError, RuntimeError) as exc:
            results.append((cid, Verdict(False, applicable=True, detail="check raised an error",
                                         error=f"{type(exc).__name__}: {exc}")))
    return AnalysisReport(
        spec_digest=spec_digest(spec),
        dims=(spec.N, total_n, total_p, int(spec.m)),
        checks=tuple(results),
        hypothesis_report=hyp,
        spectrum_summary=spectrum,
        tool_version=__version__,
        tolerances=tol,
    )


# -- machine-readable form ---------------------------------------------------------

def _c(z):
    return None if z is None else [float(complex(z).real), float(complex(z).imag)]


def _z(pair):
    return None if pair is None else complex(pair[0], pair[1])


def _opt_float(x):
    return None if x is None else float(x)


def _witness_to_tree(w: Witness | None):
    if w is None:
        return None
    return {
        "eigenvalue": _c(w.eigenvalue),
        "vector": None if w.vector is None else [_c(x) for x in w.vector],
        "residual": _opt_float(w.residual),
        "input_residual": _opt_float(w.input_residual),
        "node": w.node,
        "reason": w.reason,
    }


def _witness_from_tree(t) -> Witness | None:
    if t is None:
        return None
    return Witness(
        eigenvalue=_z(t["eigenvalue"]),
        vector=None if t["vector"] is None else tuple(_z(x) for x in t["vector"]),
        residual=t["residual"],
        input_residual=t["input_residual"],
        node=t["node"],
        reason=t["reason"],
    )


def _hyp_to_tree(h: HypothesisReport | None):
    if h is None:
        return None
    return {
        "lower_blocks_vanish": h.lower_blocks_vanish,
        "upper_orthogonality": h.upper_orthogonality,
        "violations": [
            {"i": v.i, "j": v.j, "kind": v.kind, "value": float(v.value),
             "eigenvalue": _c(v.eigenvalue), "k": v.k}
            for v in h.violations
        ],
    }


def _hyp_from_tree(t) -> HypothesisReport | None:
    if t is None:
        return None
    return HypothesisReport(
        t["lower_blocks_vanish"], t["upper_orthogonality"],
        tuple(HypothesisViolation(v["i"], v["j"], v["kind"], v["value"], _z(v["eigenvalue"]), v["k"])
              for v in t["violations"]),
    )


def report_to_tree(report: AnalysisReport) -> dict:
    N, n, p, m = report.dims
    return {
        "report_version": REPORT_VERSION,
        "tool_version": report.tool_version,
        "spec_digest": report.spec_digest,
        "dims": {"N": N, "state_dim": n, "input_dim": p, "m": m},
        "tolerances": report.tolerances.to_dict(),
        "hypotheses": _hyp_to_tree(report.hypothesis_report),
        "spectrum": None if report.spectrum_summary is None else [
            {"value": _c(z), "multiplicity": k} for z, k in report.spectrum_summary],
        "checks": [
            {"id": cid, "holds": bool(v.holds), "applicable": bool(v.applicable), "detail": v.detail,
             "error": v.error, "witness": _witness_to_tree(v.witness)}
            for cid, v in report.checks
        ],
    }


def report_from_tree(tree: dict) -> AnalysisReport:
    version = tree.get("report_version")
    if version != REPORT_VERSION:
        raise InputError(f"unsupported report_version {version!r}; expected {REPORT_VERSION}")
    d = tree["dims"]
    return AnalysisReport(
        spec_digest=tree["spec_digest"],
        dims=(d["N"], d["state_dim"], d["input_dim"], d["m"]),
        checks=tuple(
            (c["id"], Verdict(c["holds"], c["applicable"], _witness_from_tree(c["witness"]), c["detail"], c["error"]))
            for c in tree["checks"]),
        hypothesis_report=_hyp_from_tree(tree["hypotheses"]),
        spectrum_summary=None if tree["spectrum"] is None else tuple(
            (_z(e["value"]), e["multiplicity"]) for e in tree["spectrum"]),
        tool_version=tree["tool_version"],
        tolerances=TolerancePolicy(**tree["tolerances"]),
    )


def report_from_machine(text: str) -> AnalysisReport:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not a machine-readable report: {exc}") from None
    return report_from_tree(tree)


# -- text form ---------------------------------------------------------------------

def _status(v: Verdict) -> str:
    if v.error is not None:
        return "ERROR"
    if not v.applicable:
        return "n/a"
    return "holds" if v.holds else "FAILS"


def _fmt_float(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def _text(report: AnalysisReport) -> str:
    N, n, p, m = report.dims
    lines = [
        f"netctrl {report.tool_version} report (format {REPORT_VERSION})",
        f"spec sha256: {report.spec_digest}",
        f"dims: N={N} state_dim={n} input_dim={p} m={m}",
    ]
    if not report.checks:
        return "\n".join(lines) + "\n"
    t = report.tolerances
    lines.append(f"tolerances: rank_rtol={t.rank_rtol:.6g} eig_cluster_atol={t.eig_cluster_atol:.6g} "
                 f"residual_atol={t.residual_atol:.6g}")
    h = report.hypothesis_report
    if h is not None:
        yn = {True: "yes", False: "no"}
        lines.append(f"hypotheses: lower blocks vanish: {yn[h.lower_blocks_vanish]}; "
                     f"upper orthogonality: {yn[h.upper_orthogonality]}")
        for v in h.violations:
            at = "" if v.eigenvalue is None else f" at lambda={format_complex(v.eigenvalue)} (vector {v.k})"
            lines.append(f"  violation ({v.i},{v.j}) {v.kind}{at}: {v.value:.6g}")
    if report.spectrum_summary is not None:
        parts = [format_complex(z) + (f" (x{k})" if k > 1 else "") for z, k in report.spectrum_summary]
        lines.append("spectrum: " + ", ".join(parts))
    lines.append("checks:")
    width = max(len(cid) for cid, _ in report.checks)
    for cid, v in report.checks:
        lines.append(f"  {cid:<{width}}  {_status(v):<5}  {v.detail}")
        if v.error is not None:
            lines.append(f"      error: {v.error}")
        w = v.witness
        if w is not None:
            head = []
            if w.node is not None:
                head.append(f"node {w.node}")
            if w.reason:
                head.append(f'reason "{w.reason}"')
            if w.eigenvalue is not None:
                head.append(f"lambda={format_complex(w.eigenvalue)}")
            head.append(f"residual={_fmt_float(w.residual)}")
            head.append(f"input_residual={_fmt_float(w.input_residual)}")
            lines.append("      witness: " + ", ".join(head))
            if w.vector is not None:
                lines.append("      vector: [" + ", ".join(format_complex(x) for x in w.vector) + "]")
    return "\n".join(lines) + "\n"


def emit_report(report: AnalysisReport, format: str = "text") -> str:
    """Render `report` as ``"text"`` or ``"machine"`` (sorted-key JSON)."""
    if format == "machine":
        return json.dumps(report_to_tree(report), sort_keys=True, indent=2) + "\n"
    if format == "text":
        return _text(report)
    raise InputError(f"unknown report format {format!r}; expected 'text' or 'machine'")
