"""Command-line front end.

Every command loads its inputs, runs one analysis and prints a report of
named boolean verdicts, artifacts and diagnostics.  The exit status is 0
exactly when every verdict is true.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import serialize as ser
from .disintegration import bayes_invert, inversion_section_check, verify_disintegration
from .dynamics import (
    DynSystem,
    enumerate_ergodic,
    ergodic_decomposition,
    ergodicity_witness,
    invariant_sigma,
    is_as_ergodic,
    is_ergodic,
    is_invariant_set,
    is_left_invariant,
    is_right_invariant,
    orbit_space_isomorphism,
    to_dot,
)
from .errors import FinStochError, ParseError
from .kernel import Kernel, compose, identity, is_deterministic, state
from .laws import check_axioms, law_mixture_of_ergodic

COMMANDS = (
    "inv-sigma",
    "quotient",
    "check-ergodic",
    "decompose",
    "enumerate-ergodic",
    "check-axioms",
    "invert",
)
NEEDS_MEASURE = {"check-ergodic", "decompose", "invert"}
FORMATS = ("json", "dot", "text")

EXIT_CODES = """\
exit codes:
  0  every verdict in the report is true
  1  at least one verdict is false
  2  usage error (bad flags, missing --measure)
  3  ParseError: malformed JSON, bad rational, non-stochastic row, missing file
  4  SpaceMismatch: measure or kernel lives on the wrong space
  5  NotInvariant: the measure is not invariant under the dynamics
  6  UnsupportedGenerators: enumeration needs one function or only bijections
  7  NotDeterministicSystem: the command needs zero-one generators
  8  any other library error
"""


@dataclass
class AnalysisRequest:
    command: str
    system_path: Path
    measure_path: Path | None = None
    output: Path | None = None
    format: str = "json"
    seed: int = 0
    instances: int = 20

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.command in NEEDS_MEASURE and self.measure_path is None:
            raise ValueError(f"{self.command} needs --measure")


@dataclass
class AnalysisReport:
    command: str
    verdicts: dict[str, bool] = field(default_factory=dict)
    artifacts: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    dot: str | None = None

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "verdicts": self.verdicts,
            "artifacts": self.artifacts,
            "diagnostics": self.diagnostics,
        }


def _load(path: Path) -> Any:
    try:
        return ser.load_json(path)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def _load_system(path: Path) -> DynSystem:
    return ser.system_from_json(_load(path), str(path))


def _load_measure(path: Path, space) -> Kernel:
    return ser.state_from_json(_load(path), space, str(path))


def _block_labels(space, blocks) -> list[list[str]]:
    return [[space.carrier[i] for i in b] for b in blocks]


def _sigma_verdicts(report: AnalysisReport, sys: DynSystem, sigma) -> None:
    bad = [b for b in sigma.quotient_space.atoms if not is_invariant_set(b, sys)]
    report.verdicts["atoms_invariant"] = not bad
    for b in bad:
        report.diagnostics.append(
            f"atoms_invariant: quotient atom {_block_labels(sys.space, [b])[0]} is not invariant"
        )
    report.verdicts["cocone_right_invariant"] = is_right_invariant(sigma.cocone, sys)
    if not report.verdicts["cocone_right_invariant"]:
        for name, m in sys.generators:
            moved = compose(sigma.cocone, m)
            if moved != sigma.cocone:
                row = next(r for r in range(len(moved.rows)) if moved.rows[r] != sigma.cocone.rows[r])
                report.diagnostics.append(
                    f"cocone_right_invariant: cocone . {name} differs at atom "
                    f"{sys.space.atom_label(row)}"
                )
    report.verdicts["cocone_deterministic"] = is_deterministic(sigma.cocone)


def _inv_sigma(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    sigma = invariant_sigma(sys_)
    report.artifacts["invariant_sigma"] = ser.sigma_to_json(sigma)
    report.artifacts["atoms"] = _block_labels(sys_.space, sigma.quotient_space.atoms)
    _sigma_verdicts(report, sys_, sigma)
    report.dot = to_dot(sys_, sigma)


def _quotient(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    sigma = invariant_sigma(sys_)
    report.artifacts["cocone"] = ser.kernel_to_json(sigma.cocone)
    report.artifacts["atoms"] = _block_labels(sys_.space, sigma.quotient_space.atoms)
    report.verdicts["cocone_right_invariant"] = is_right_invariant(sigma.cocone, sys_)
    report.verdicts["cocone_deterministic"] = is_deterministic(sigma.cocone)
    if sys_.deterministic:
        orbits, to_orbits, back = orbit_space_isomorphism(sys_, sigma)
        report.artifacts["orbit_space"] = ser.space_to_json(orbits)
        report.artifacts["to_orbits"] = ser.kernel_to_json(to_orbits)
        report.artifacts["from_orbits"] = ser.kernel_to_json(back)
        iso = (
            compose(back, to_orbits) == identity(sigma.quotient_space)
            and compose(to_orbits, back) == identity(orbits)
        )
        report.verdicts["orbit_space_isomorphism"] = iso
        if not iso:
            report.diagnostics.append(
                "orbit_space_isomorphism: kernels do not compose to identities"
            )
    else:
        report.diagnostics.append("note: stochastic generators, orbit-space comparison skipped")
    report.dot = to_dot(sys_, sigma)


def _check_ergodic(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    p = _load_measure(req.measure_path, sys_.space)
    sigma = invariant_sigma(sys_)
    report.verdicts["invariant"] = is_left_invariant(p, sys_)
    report.verdicts["ergodic"] = is_ergodic(p, sys_, sigma)
    report.artifacts["pushforward"] = ser.kernel_to_json(compose(sigma.cocone, p))
    witness = ergodicity_witness(p, sys_, sigma)
    if witness is not None:
        report.artifacts["witness"] = witness
        if witness["reason"] == "not invariant":
            report.diagnostics.append(
                f"invariant: generator {witness['generator']} moves mass at "
                f"{witness['atom']}: {witness['before']} -> {witness['after']}"
            )
            report.diagnostics.append("ergodic: the measure is not invariant")
        else:
            report.diagnostics.append(
                f"ergodic: invariant set {{{','.join(witness['set'])}}} has mass {witness['mass']}"
            )
    report.dot = to_dot(sys_, sigma, p)


def _decompose(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    p = _load_measure(req.measure_path, sys_.space)
    sigma = invariant_sigma(sys_)
    d = ergodic_decomposition(p, sys_, sigma)
    report.artifacts.update(ser.decomposition_to_json(d))
    report.artifacts["atoms"] = _block_labels(sys_.space, sigma.quotient_space.atoms)
    report.verdicts["reproduces_p"] = compose(d.k, d.q) == p
    report.verdicts["as_ergodic"] = is_as_ergodic(d.k, d.q, sys_, sigma)
    if not report.verdicts["as_ergodic"]:
        for y in d.q.support():
            if not is_ergodic(state(sys_.space, d.k.rows[y]), sys_, sigma):
                label = sigma.quotient_space.atom_label(y)
                report.diagnostics.append(f"as_ergodic: row {label} of k is not ergodic")
    report.dot = to_dot(sys_, sigma, p)


def _enumerate(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    sigma = invariant_sigma(sys_)
    states = enumerate_ergodic(sys_, sigma)
    report.artifacts["ergodic_states"] = [ser.kernel_to_json(e) for e in states]
    failing = [i for i, e in enumerate(states) if not is_ergodic(e, sys_, sigma)]
    report.verdicts["all_ergodic"] = not failing
    for i in failing:
        report.diagnostics.append(f"all_ergodic: enumerated state {i} is not ergodic")
    if req.measure_path is not None:
        p = _load_measure(req.measure_path, sys_.space)
        if is_left_invariant(p, sys_):
            report.verdicts["measure_is_mixture"] = law_mixture_of_ergodic(p, states, sys_)
            if not report.verdicts["measure_is_mixture"]:
                report.diagnostics.append(
                    "measure_is_mixture: measure differs from the block-weighted mixture"
                )
        else:
            report.diagnostics.append("note: supplied measure is not invariant, mixture check skipped")
    report.dot = to_dot(sys_, sigma)


def _check_axioms(req: AnalysisRequest, report: AnalysisReport) -> None:
    sys_ = _load_system(req.system_path)
    p = None
    if req.measure_path is not None:
        p = _load_measure(req.measure_path, sys_.space)
    verdicts, diagnostics = check_axioms(sys_, p, seed=req.seed, instances=req.instances)
    report.verdicts.update(verdicts)
    report.diagnostics.extend(diagnostics)
    report.artifacts["seed"] = req.seed
    report.dot = to_dot(sys_)


def _invert(req: AnalysisRequest, report: AnalysisReport) -> None:
    raw = _load(req.system_path)
    if isinstance(raw, dict) and "generators" in raw:
        system = ser.system_from_json(raw, str(req.system_path))
        if len(system.generators) != 1:
            raise ParseError(f"{req.system_path}: invert needs a kernel or a one-generator system")
        f = system.kernels[0]
    else:
        f = ser.kernel_from_json(raw, str(req.system_path))
    p = _load_measure(req.measure_path, f.dom)
    inverse = bayes_invert(f, p)
    report.artifacts["inverse"] = ser.kernel_to_json(inverse)
    report.artifacts["pushforward"] = ser.kernel_to_json(compose(f, p))
    report.verdicts["disintegration_valid"] = verify_disintegration(f, p, inverse)
    if is_deterministic(f):
        report.verdicts["section_as_identity"] = inversion_section_check(f, p)


_HANDLERS = {
    "inv-sigma": _inv_sigma,
    "quotient": _quotient,
    "check-ergodic": _check_ergodic,
    "decompose": _decompose,
    "enumerate-ergodic": _enumerate,
    "check-axioms": _check_axioms,
    "invert": _invert,
}


def run(req: AnalysisRequest) -> AnalysisReport:
    report = AnalysisReport(command=req.command)
    _HANDLERS[req.command](req, report)
    for name, ok in report.verdicts.items():
        if not ok and not any(d.startswith(name + ":") for d in report.diagnostics):
            report.diagnostics.append(f"{name}: false")
    return report


def _render_kernel_text(obj: dict, indent: str = "  ") -> list[str]:
    dom, cod = obj["dom"], obj["cod"]

    def label(space, j):
        pts = [space["carrier"][i] for i in space["atoms"][j]]
        return pts[0] if len(pts) == 1 else "{" + ",".join(pts) + "}"

    cols = [label(cod, j) for j in range(len(cod["atoms"]))]
    names = [label(dom, r) for r in range(len(obj["rows"]))]
    table = [["", *cols]] + [[n, *row] for n, row in zip(names, obj["rows"])]
    widths = [max(len(line[c]) for line in table) for c in range(len(table[0]))]
    return [
        indent + "  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip()
        for line in table
    ]


def render_text(report: AnalysisReport) -> str:
    lines = [f"command: {report.command}", "verdicts:"]
    for name, ok in report.verdicts.items():
        lines.append(f"  {name}: {'true' if ok else 'false'}")
    if report.artifacts:
        lines.append("artifacts:")
    for name, value in report.artifacts.items():
        if isinstance(value, dict) and "rows" in value:
            lines.append(f"  {name}:")
            lines.extend(_render_kernel_text(value, "    "))
        elif isinstance(value, list) and value and isinstance(value[0], dict) and "rows" in value[0]:
            lines.append(f"  {name}:")
            for v in value:
                lines.extend(_render_kernel_text(v, "    "))
        else:
            lines.append(f"  {name}: {ser.canonical_json(value)}")
    if report.diagnostics:
        lines.append("diagnostics:")
        lines.extend(f"  {d}" for d in report.diagnostics)
    return "\n".join(lines) + "\n"


def render(report: AnalysisReport, fmt: str) -> str:
    if fmt == "json":
        return ser.canonical_json(report.to_json()) + "\n"
    if fmt == "text":
        return render_text(report)
    if report.dot is None:
        raise ParseError(f"{report.command} has no graph to export as dot")
    return report.dot


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finstoch",
        description="Invariant sigma-algebras, ergodicity and ergodic decomposition "
        "of finite dynamical systems, in exact arithmetic.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--system", required=True, type=Path,
                        help="system JSON (for invert: a kernel JSON or a one-generator system)")
    parser.add_argument("--measure", type=Path, help="state JSON, or a list of atom weights")
    parser.add_argument("--output", type=Path, help="write here instead of standard output")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--seed", type=int, default=0, help="seed for check-axioms instances")
    parser.add_argument("--instances", type=int, default=20,
                        help="random instances per law for check-axioms")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in NEEDS_MEASURE and args.measure is None:
        parser.error(f"{args.command} needs --measure")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    req = AnalysisRequest(
        command=args.command,
        system_path=args.system,
        measure_path=args.measure,
        output=args.output,
        format=args.format,
        seed=args.seed,
        instances=args.instances,
    )
    try:
        report = run(req)
        text = render(report, req.format)
    except FinStochError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if req.output is not None:
        req.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
