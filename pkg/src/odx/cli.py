"""Command-line interface: reproducible reports over the library.

Every command builds a ReportDocument (command, echoed inputs, results,
checks, version) and serializes it as JSON, CSV, or a text summary.  The
exit code contract is 0 when all checks pass, 1 when a check fails, and 2
for usage, parse, or input-guard errors; the first failing check is named
on stderr.

JSON schema (version 1):

    {
      "schema_version": 1,
      "version": "<package version>",
      "command": "<subcommand>",
      "inputs": {<flag echo>},
      "results": {<command-specific payload>},
      "checks": [
        {"name": str, "passed": bool, "measured": number|str,
         "tolerance": number|str},
        ...
      ]
    }

Complex matrices serialize as {"re": [[...]], "im": [[...]]}.  The probe
file format is one amplitude per line as "re im"; the count must be a
power of two, and the vector is normalized on load (with a warning when
its norm is off by more than 1e-6).  Family files hold one or more
truth-table records of the form "n=<int> m=<int> table=<ints>".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _kernels
from .circuit import circuit_unitary, equal_up_to_global_phase, phase_aligned_difference
from .discrim import (
    Povm,
    check_gu,
    classical_one_query_best,
    gram,
    measurement_from_unitary,
    optimality_conditions,
    srm,
    srm_success_gu,
    success_probability,
)
from .errors import OdxError, ParseError
from .linalg import StateVector, hermitian_eig, is_unitary, psd_sqrt
from .optimize import optimize_probe
from .oracle import (
    OracleFamily,
    canonical_one_bit_family,
    oracle_unitary,
    parse_family,
    post_oracle_states,
)
from .protocol import (
    constants,
    gate_counts,
    probe_schmidt_residual,
    probe_state,
    protocol_distribution,
    readout_circuit,
    readout_matrix,
)
from .sample import joint_histogram, run_shots

SCHEMA_VERSION = 1


@dataclass
class ReportDocument:
    command: str
    inputs: dict
    results: dict
    checks: list = field(default_factory=list)
    version: str = __version__

    def add_check(self, name: str, passed: bool, measured, tolerance) -> None:
        self.checks.append(
            {
                "name": name,
                "passed": bool(passed),
                "measured": measured,
                "tolerance": tolerance,
            }
        )

    def first_failure(self):
        for c in self.checks:
            if not c["passed"]:
                return c["name"]
        return None


def _complex_matrix(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def to_json(doc: ReportDocument) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": doc.version,
        "command": doc.command,
        "inputs": doc.inputs,
        "results": doc.results,
        "checks": doc.checks,
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def to_csv(doc: ReportDocument) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    if doc.command == "sample" and "joint_histogram" in doc.results:
        writer.writerow(["hidden", "outcome", "count"])
        joint = doc.results["joint_histogram"]
        for i, row in enumerate(joint):
            for j, count in enumerate(row):
                writer.writerow([i, j, count])
    else:
        writer.writerow(["name", "passed", "measured", "tolerance"])
        for c in doc.checks:
            writer.writerow([c["name"], c["passed"], c["measured"], c["tolerance"]])
    return out.getvalue()


def to_text(doc: ReportDocument) -> str:
    lines = [f"odx {doc.command} (version {doc.version})"]
    if doc.inputs:
        flags = " ".join(f"{k}={v}" for k, v in doc.inputs.items())
        lines.append(f"inputs: {flags}")
    lines.append("results:")
    for key, value in doc.results.items():
        if isinstance(value, dict) and set(value) == {"re", "im"} and isinstance(value["re"], list):
            rows = len(value["re"])
            cols = len(value["re"][0]) if rows else 0
            lines.append(f"  {key}: <complex matrix {rows}x{cols}>")
        else:
            lines.append(f"  {key}: {value}")
    if doc.checks:
        lines.append("checks:")
        width = max(len(c["name"]) for c in doc.checks)
        for c in doc.checks:
            tag = "PASS" if c["passed"] else "FAIL"
            lines.append(
                f"  [{tag}] {c['name']:<{width}}  "
                f"measured={c['measured']}  tolerance={c['tolerance']}"
            )
        passed = sum(1 for c in doc.checks if c["passed"])
        lines.append(f"summary: {passed}/{len(doc.checks)} checks passed")
    return "\n".join(lines) + "\n"


def _parse_probe_text(text: str) -> StateVector:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise ParseError(
                f"expected 're im' pair, found {len(fields)} fields",
                line=lineno,
                column=1,
            )
        pair = []
        for tok in fields:
            try:
                pair.append(float(tok))
            except ValueError:
                raise ParseError(
                    f"not a real number: {tok!r}",
                    line=lineno,
                    column=line.find(tok) + 1,
                ) from None
        rows.append(complex(pair[0], pair[1]))
    count = len(rows)
    if count < 1 or count & (count - 1) != 0:
        raise ParseError(f"amplitude count {count} is not a power of two")
    arr = np.asarray(rows, dtype=np.complex128)
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > 1e-6:
        print(
            f"warning: probe norm {norm:.9f} deviates from 1 by more than 1e-6; "
            "normalizing",
            file=sys.stderr,
        )
    return StateVector.normalized(arr)


def _load_family(path) -> OracleFamily:
    if path is None:
        return canonical_one_bit_family()
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())


def _load_probe(path) -> StateVector:
    if path is None:
        return probe_state()
    with open(path, encoding="utf-8") as fh:
        return _parse_probe_text(fh.read())


def _ideal_gram() -> np.ndarray:
    g = np.full((4, 4), 1.0 / 3.0, dtype=np.complex128)
    np.fill_diagonal(g, 1.0)
    for i, j in ((0, 1), (1, 0), (2, 3), (3, 2)):
        g[i, j] = -1.0 / 3.0
    return g


def cmd_verify(args) -> ReportDocument:
    offsets = [args.perturb_theta1, args.perturb_theta2, args.perturb_theta3, args.perturb_theta4]
    doc = ReportDocument(
        command="verify",
        inputs={f"perturb_theta{i + 1}": offsets[i] for i in range(4)},
        results={},
    )
    fam = canonical_one_bit_family()
    probe = probe_state()
    ens = post_oracle_states(probe, fam)

    g = gram(ens)
    gram_dev = float(np.max(np.abs(g - _ideal_gram())))
    doc.add_check("gram_matches_closed_form", gram_dev <= 1e-12, gram_dev, 1e-12)

    eigs, _ = hermitian_eig(g)
    eig_target = np.array([0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0])
    eig_dev = float(np.max(np.abs(eigs - eig_target)))
    doc.add_check("gram_eigenvalues", eig_dev <= 1e-10, eig_dev, 1e-10)

    trace_root = float(np.trace(psd_sqrt(g)).real)
    trace_dev = abs(trace_root - 2.0 * math.sqrt(3.0))
    doc.add_check("gram_sqrt_trace", trace_dev <= 1e-10, trace_dev, 1e-10)

    spectral = srm_success_gu(eigs, ens.size)
    doc.add_check("spectral_success", abs(spectral - 0.75) <= 1e-12, abs(spectral - 0.75), 1e-12)

    povm = srm(ens)
    report = success_probability(ens, povm)
    avg_dev = abs(report.average_success - 0.75)
    doc.add_check("srm_average", avg_dev <= 1e-12, avg_dev, 1e-12)
    per_dev = max(abs(p - 0.75) for p in report.per_hypothesis_success)
    doc.add_check("srm_per_hypothesis", per_dev <= 1e-12, per_dev, 1e-12)
    doc.add_check(
        "spectral_vs_direct",
        abs(spectral - report.average_success) <= 1e-9,
        abs(spectral - report.average_success),
        1e-9,
    )

    dists = [protocol_distribution(f) for f in fam.members]
    diag = [dists[i][i] for i in range(4)]
    protocol_avg = float(np.dot(fam.priors, diag))
    doc.add_check(
        "protocol_average", abs(protocol_avg - 0.75) <= 1e-12, abs(protocol_avg - 0.75), 1e-12
    )
    protocol_per_dev = max(abs(p - 0.75) for p in diag)
    doc.add_check("protocol_per_hypothesis", protocol_per_dev <= 1e-12, protocol_per_dev, 1e-12)

    realized = circuit_unitary(readout_circuit(offsets))
    target = readout_matrix()
    decomposed_ok = equal_up_to_global_phase(realized, target, 1e-10)
    phase, residual = phase_aligned_difference(realized, target)
    residual_max = float(np.max(np.abs(residual)))
    doc.add_check("readout_decomposition", decomposed_ok, residual_max, 1e-10)
    if not decomposed_ok:
        doc.results["decomposition_discrepancy"] = _complex_matrix(residual)
        doc.results["decomposition_phase"] = {"re": phase.real, "im": phase.imag}

    counts = gate_counts()
    counts_ok = (
        counts["readout"] == {"h": 2, "ry": 4, "cnot": 2}
        and counts["prep"] == {"h": 1, "ry": 1, "cnot": 0}
        and counts["two_qubit_total"] == 2
    )
    doc.add_check("gate_counts", counts_ok, json.dumps(counts), "exact")

    sep = probe_schmidt_residual()
    doc.add_check("probe_separability", sep < 1e-12, sep, 1e-12)

    residual_h, gap = optimality_conditions(ens, povm)
    doc.add_check("optimality_residual", residual_h < 1e-10, residual_h, 1e-10)
    doc.add_check("optimality_gap", gap >= -1e-10, gap, -1e-10)

    swapped = Povm([povm.elements[1], povm.elements[0], povm.elements[2], povm.elements[3]])
    _, swapped_gap = optimality_conditions(ens, swapped)
    doc.add_check("swapped_measurement_gap", swapped_gap < -0.01, swapped_gap, -0.01)

    group = [oracle_unitary(f) for f in fam.members]
    gu_ok = check_gu(ens, group)
    doc.add_check("geometric_uniformity", gu_ok, gu_ok, True)

    entries_exact = all(bool(np.all((u == 0.0) | (u == 1.0))) for u in group)
    closure_exact = all(
        any(np.array_equal(a @ b, c) for c in group) for a in group for b in group
    )
    doc.add_check("oracle_group_closure", entries_exact and closure_exact, "exact", "exact")

    classical = classical_one_query_best(fam)
    doc.add_check("classical_baseline", classical == 0.5, classical, "0.5 exactly")
    doc.add_check(
        "quantum_advantage",
        report.average_success > classical,
        report.average_success - classical,
        "> 0",
    )

    doc.add_check(
        "readout_matrix_unitary",
        is_unitary(target, 1e-12),
        float(np.max(np.abs(target @ target.conj().T - np.eye(4)))),
        1e-12,
    )

    completeness = float(np.max(np.abs(sum(povm.elements) - np.eye(4))))
    doc.add_check("povm_completeness", completeness <= 1e-10, completeness, 1e-10)

    unitary_report = success_probability(ens, measurement_from_unitary(target))
    match_dev = max(
        abs(a - b)
        for a, b in zip(
            unitary_report.per_hypothesis_success, report.per_hypothesis_success
        )
    )
    doc.add_check("readout_realizes_srm", match_dev <= 1e-9, match_dev, 1e-9)

    c = constants()
    doc.results.update(
        {
            "average_success": report.average_success,
            "per_hypothesis_success": list(report.per_hypothesis_success),
            "gram_eigenvalues": list(eigs),
            "gram_sqrt_trace": trace_root,
            "spectral_success": spectral,
            "protocol_average": protocol_avg,
            "gate_counts": counts,
            "classical_baseline": classical,
            "optimality_residual": residual_h,
            "optimality_gap": gap,
            "probe_amplitudes": {"a": c.a, "b": c.b},
            "kernel_backend": _kernels.BACKEND,
        }
    )
    return doc


def cmd_gram(args) -> ReportDocument:
    fam = _load_family(args.family)
    probe = _load_probe(args.probe)
    doc = ReportDocument(
        command="gram",
        inputs={"family": args.family or "<canonical>", "probe": args.probe or "<builtin>"},
        results={},
    )
    ens = post_oracle_states(probe, fam)
    g = gram(ens)
    eigs, _ = hermitian_eig(g)
    doc.results["gram"] = _complex_matrix(g)
    doc.results["eigenvalues"] = list(eigs)
    doc.results["sqrt_trace"] = float(np.trace(psd_sqrt(g)).real)
    herm_dev = float(np.max(np.abs(g - g.conj().T)))
    doc.add_check("gram_hermitian", herm_dev <= 1e-12, herm_dev, 1e-12)
    diag_dev = float(np.max(np.abs(np.diag(g) - 1.0)))
    doc.add_check("unit_diagonal", diag_dev <= 1e-12, diag_dev, 1e-12)
    uniform = all(abs(p - fam.priors[0]) <= 1e-15 for p in fam.priors)
    if uniform:
        doc.results["spectral_srm_success"] = srm_success_gu(eigs, ens.size)
    return doc


def cmd_srm(args) -> ReportDocument:
    fam = _load_family(args.family)
    probe = _load_probe(args.probe)
    doc = ReportDocument(
        command="srm",
        inputs={"family": args.family or "<canonical>", "probe": args.probe or "<builtin>"},
        results={},
    )
    ens = post_oracle_states(probe, fam)
    povm = srm(ens)
    report = success_probability(ens, povm)
    residual, gap = optimality_conditions(ens, povm)
    doc.results.update(
        {
            "average_success": report.average_success,
            "per_hypothesis_success": list(report.per_hypothesis_success),
            "gram_eigenvalues": list(report.gram_eigenvalues),
            "optimality_residual": residual,
            "optimality_gap": gap,
            "notes": report.notes,
        }
    )
    completeness = float(np.max(np.abs(sum(povm.elements) - np.eye(povm.dim))))
    doc.add_check("povm_completeness", completeness <= 1e-10, completeness, 1e-10)
    min_eig = min(float(hermitian_eig(e)[0][0]) for e in povm.elements)
    doc.add_check("povm_psd", min_eig >= -1e-10, min_eig, -1e-10)
    consistency = abs(
        report.average_success - float(np.dot(ens.priors, report.per_hypothesis_success))
    )
    doc.add_check("report_consistency", consistency <= 1e-12, consistency, 1e-12)
    doc.add_check(
        "certified_optimal", residual < 1e-9 and gap > -1e-9, f"residual={residual}, gap={gap}",
        "residual < 1e-9 and gap > -1e-9",
    )
    return doc


def cmd_optimize(args) -> ReportDocument:
    fam = _load_family(args.family)
    doc = ReportDocument(
        command="optimize",
        inputs={
            "family": args.family or "<canonical>",
            "restarts": args.restarts,
            "seed": args.seed,
            "tol": args.tol,
        },
        results={},
    )
    result = optimize_probe(fam, restarts=args.restarts, seed=args.seed, tol=args.tol)
    doc.results.update(
        {
            "best_value": result.best_value,
            "per_restart_values": list(result.per_restart_values),
            "evaluations": result.evaluations,
            "best_probe": _complex_matrix(result.best_probe.amplitudes.reshape(1, -1)),
            "kernel_backend": _kernels.BACKEND,
        }
    )
    doc.add_check(
        "value_in_unit_interval",
        0.0 <= result.best_value <= 1.0,
        result.best_value,
        "[0, 1]",
    )
    doc.add_check(
        "best_is_max_of_restarts",
        result.best_value == max(result.per_restart_values),
        result.best_value,
        "exact",
    )
    if fam == canonical_one_bit_family():
        in_range = 0.75 - 1e-6 <= result.best_value <= 0.75 + 1e-9
        doc.add_check(
            "canonical_optimum", in_range, result.best_value, "[0.75 - 1e-6, 0.75 + 1e-9]"
        )
    return doc


def cmd_sample(args) -> ReportDocument:
    doc = ReportDocument(
        command="sample",
        inputs={"shots": args.shots, "seed": args.seed},
        results={},
    )
    summary = run_shots(args.shots, args.seed)
    joint = joint_histogram(args.shots, args.seed)
    doc.results.update(
        {
            "shots": summary.shots,
            "successes": summary.successes,
            "frequency": summary.frequency,
            "std_error": summary.std_error,
            "seed": summary.seed,
            "joint_histogram": joint.tolist(),
        }
    )
    doc.add_check(
        "histogram_consistent",
        int(np.trace(joint)) == summary.successes,
        int(np.trace(joint)),
        "equals successes",
    )
    # 4 sigma of a Bernoulli(3/4) mean estimate.
    bound = 4.0 * math.sqrt(0.75 * 0.25 / summary.shots)
    dev = abs(summary.frequency - 0.75)
    doc.add_check("frequency_near_optimum", dev <= bound, dev, bound)
    return doc


def cmd_classical(args) -> ReportDocument:
    fam = _load_family(args.family)
    doc = ReportDocument(
        command="classical",
        inputs={"family": args.family or "<canonical>"},
        results={},
    )
    value = classical_one_query_best(fam)
    doc.results["best_classical_success"] = value
    doc.add_check("value_in_unit_interval", 0.0 <= value <= 1.0, value, "[0, 1]")
    if fam == canonical_one_bit_family():
        doc.add_check("canonical_classical_baseline", value == 0.5, value, "0.5 exactly")
    return doc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odx",
        description="One-query oracle identification: verification and exploration reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument(
            "--format", choices=("json", "csv", "text"), default="text",
            help="output serialization (default: text)",
        )
        p.add_argument("--out", default=None, help="write the report to this path")

    p_verify = sub.add_parser("verify", help="run the full closed-form verification battery")
    for i in (1, 2, 3, 4):
        p_verify.add_argument(
            f"--perturb-theta{i}", type=float, default=0.0,
            help=f"fault injection: offset readout angle {i} (radians) "
            "in the decomposition check",
        )
    add_output_flags(p_verify)

    p_gram = sub.add_parser("gram", help="Gram matrix of a probe through a family")
    p_gram.add_argument("--family", default=None, help="truth-table family file")
    p_gram.add_argument("--probe", default=None, help="probe amplitudes file ('re im' lines)")
    add_output_flags(p_gram)

    p_srm = sub.add_parser("srm", help="square-root measurement report")
    p_srm.add_argument("--family", default=None, help="truth-table family file")
    p_srm.add_argument("--probe", default=None, help="probe amplitudes file ('re im' lines)")
    add_output_flags(p_srm)

    p_opt = sub.add_parser("optimize", help="multi-start probe optimization")
    p_opt.add_argument("--family", default=None, help="truth-table family file")
    p_opt.add_argument("--restarts", type=int, default=16, help="restart count (default 16)")
    p_opt.add_argument("--seed", type=int, default=7, help="master seed (default 7)")
    p_opt.add_argument("--tol", type=float, default=1e-10, help="value-spread tolerance")
    add_output_flags(p_opt)

    p_sample = sub.add_parser("sample", help="Monte Carlo protocol shots")
    p_sample.add_argument("--shots", type=int, default=100_000, help="shot count (default 1e5)")
    p_sample.add_argument("--seed", type=int, default=1, help="stream seed (default 1)")
    add_output_flags(p_sample)

    p_classical = sub.add_parser("classical", help="best classical one-query strategy")
    p_classical.add_argument("--family", default=None, help="truth-table family file")
    add_output_flags(p_classical)

    return parser


_DISPATCH = {
    "verify": cmd_verify,
    "gram": cmd_gram,
    "srm": cmd_srm,
    "optimize": cmd_optimize,
    "sample": cmd_sample,
    "classical": cmd_classical,
}


def entry(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code
    try:
        doc = _DISPATCH[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OdxError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.format == "json":
        rendered = to_json(doc)
    elif args.format == "csv":
        rendered = to_csv(doc)
    else:
        rendered = to_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)

    failure = doc.first_failure()
    if failure is not None:
        print(f"check failed: {failure}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(entry())
