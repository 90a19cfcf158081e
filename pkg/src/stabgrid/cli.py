"""Command-line interface.

Subcommands::

    stabgrid model build   "[0,1,2,3]@3x3x3:pbc"
    stabgrid model gsd     "[0,1,2,3]@3x3x3:pbc"
    stabgrid model dualize "[1,2,3,3]@2x2x2:pbc"
    stabgrid scan          "[0,1,2,3]" --sizes 2..4
    stabgrid erg verify    "[0,1,2,3]@2x2x2:pbc" --circuit paper --axis 3
    stabgrid erg circuit   "[0,1,2,3]@2x2x2:pbc" --circuit general
    stabgrid erg classify  "[0,1,2,3]@2x2x2:pbc"
    stabgrid coarse verify --L 4

Reports are emitted as canonical JSON (sorted keys, two-space indent) or as
flat key,value CSV via ``--format csv``; identical inputs produce
byte-identical bytes.  Exit status: 0 when every check in the report holds,
1 when a check evaluated false, 2 on usage/domain/construction errors, 3 on
resource-cap errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import coarsegrain, erg, models
from .errors import ConstructionError, DomainError, PhaseError, ResourceError, StabgridError
from .groundstate import DEFAULT_MAX_CONFIGS
from .lattice import LatticeSpec, format_lattice
from .models import ModelSpec, parse_model, parse_model_spec

DEFAULT_MAX_QUBITS = 8192


def _qubit_count(spec: ModelSpec, lat: LatticeSpec) -> int:
    per_cell = math.comb(spec.D, spec.ds)
    cells = math.prod(lat.dims)
    return per_cell * cells


def _check_qubit_cap(spec: ModelSpec, lat: LatticeSpec, cap: int) -> None:
    n = _qubit_count(spec, lat)
    if n > cap:
        raise ResourceError(f"{n} spins exceed --max-qubits {cap}")


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, bool) or v is None or isinstance(v, (int, float, str)):
        return v
    return str(v)


def _flatten(prefix: str, v, rows: list[tuple[str, str]]) -> None:
    if isinstance(v, dict):
        for k in sorted(v):
            _flatten(f"{prefix}.{k}" if prefix else str(k), v[k], rows)
    elif isinstance(v, list):
        rows.append((prefix, ";".join(str(x) for x in v)))
    elif isinstance(v, bool):
        rows.append((prefix, "true" if v else "false"))
    elif v is None:
        rows.append((prefix, ""))
    else:
        rows.append((prefix, str(v)))


def _emit(report: dict, fmt: str, out: Optional[str]) -> None:
    report = _jsonable(report)
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        rows: list[tuple[str, str]] = []
        _flatten("", report, rows)

        def q(v: str) -> str:
            if any(ch in v for ch in ',"\n'):
                return '"' + v.replace('"', '""') + '"'
            return v

        text = "".join(f"{q(k)},{q(v)}\n" for k, v in rows)
    data = text.encode("utf-8")
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _parse_sizes(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise DomainError(f"empty size range {text!r}")
        values = list(range(lo_i, hi_i + 1))
    else:
        values = sorted({int(t) for t in text.split(",") if t.strip()})
    if not values:
        raise DomainError(f"no sizes in {text!r}")
    if any(v < 2 for v in values):
        raise DomainError("sizes must be >= 2")
    return values


# ---------------------------------------------------------------------------
# subcommand handlers (return process exit status)
# ---------------------------------------------------------------------------


def _cmd_model_build(args) -> int:
    spec, lat = parse_model(args.model)
    _check_qubit_cap(spec, lat, args.max_qubits)
    model = models.build_model(spec, lat)
    bad = models.verify_commutation(model)
    counts: dict[str, int] = {}
    for tag, _ in model.generators:
        counts[tag.kind] = counts.get(tag.kind, 0) + 1
    report = {
        "spec": str(spec),
        "dims": format_lattice(lat),
        "n_qubits": model.n_qubits,
        "n_generators": len(model.generators),
        "generators_by_kind": counts,
        "commuting": not bad,
    }
    _emit(report, args.format, args.out)
    return 0 if not bad else 1


def _cmd_model_gsd(args) -> int:
    spec, lat = parse_model(args.model)
    _check_qubit_cap(spec, lat, args.max_qubits)
    _emit(models.gsd_report(spec, lat), args.format, args.out)
    return 0


def _cmd_model_dualize(args) -> int:
    spec, lat = parse_model(args.model)
    _check_qubit_cap(spec, lat, args.max_qubits)
    model = models.build_model(spec, lat)
    dual = models.dualize(model)
    double = models.dualize(dual)
    from .gf2 import row_space_equal

    gsd = models.log2_gsd(model)
    dual_gsd = models.log2_gsd(dual)
    report = {
        "spec": str(spec),
        "dims": format_lattice(lat),
        "n_qubits": model.n_qubits,
        "qubit_cube_dim": model.qubit_cube_dim,
        "dual_qubit_cube_dim": dual.qubit_cube_dim,
        "log2_gsd": gsd,
        "dual_log2_gsd": dual_gsd,
        "gsd_equal": gsd == dual_gsd,
        "double_dual_matches": row_space_equal(double.matrix(), model.matrix()),
    }
    _emit(report, args.format, args.out)
    return 0 if report["gsd_equal"] and report["double_dual_matches"] else 1


def _cmd_scan(args) -> int:
    spec = parse_model_spec(args.spec)
    values = _parse_sizes(args.sizes)
    import itertools

    sizes = [dims for dims in itertools.product(values, repeat=spec.D)]
    for dims in sizes:
        _check_qubit_cap(spec, LatticeSpec(dims), args.max_qubits)
    fit = models.gsd_scan_and_fit(spec, sizes)
    report = {
        "spec": str(spec),
        "sizes": [format_lattice(LatticeSpec(d)) for d in sorted(fit.gsd_by_dims)],
        "log2_gsd": {format_lattice(LatticeSpec(d)): g for d, g in sorted(fit.gsd_by_dims.items())},
        "fit": {
            "c2": fit.c2,
            "c1": fit.c1,
            "c0": fit.c0,
            "residual_max": fit.residual_max,
            "ok": fit.ok,
        },
    }
    _emit(report, args.format, args.out)
    return 0 if fit.ok else 1


def _erg_plan(args) -> erg.ErgPlan:
    spec, lat = parse_model(args.model)
    if not lat.periodic:
        raise DomainError("the renormalization step is defined on periodic lattices")
    axis = args.axis - 1 if args.axis is not None else -1
    source = erg.PAPER_CIRCUIT if args.circuit == "paper" else erg.GENERAL_CIRCUIT
    return erg.ErgPlan(spec, lat.dims, axis, source)


def _cmd_erg_verify(args) -> int:
    plan = _erg_plan(args)
    _check_qubit_cap(plan.spec, plan.lat_to, args.max_qubits)
    report = erg.verify_fixed_point(plan)
    audit = erg.check_mapping_claims(plan)
    report["mapping_ok"] = audit.ok
    _emit(report, args.format, args.out)
    passed = report["equal"] and report["recursion_ok"] and audit.ok
    return 0 if passed else 1


def _cmd_erg_circuit(args) -> int:
    plan = _erg_plan(args)
    _check_qubit_cap(plan.spec, plan.lat_to, args.max_qubits)
    circuit = erg.build_circuit(plan)
    rep = erg.validate_circuit_conditions(circuit, plan)
    from .lattice import QubitIndexMap, coord_text

    qmap = QubitIndexMap(plan.lat_to, plan.spec.ds)
    gates = sorted(f"{coord_text(qmap.cube(c))}->{coord_text(qmap.cube(t))}" for c, t in circuit.gates)
    report = {
        "spec": str(plan.spec),
        "dims_from": format_lattice(plan.lat_from),
        "dims_to": format_lattice(plan.lat_to),
        "axis": plan.axis + 1,
        "circuit_source": plan.circuit_source,
        "n_gates": len(circuit),
        "conditions": rep.conditions,
        "offenders": rep.offenders,
        "ok": rep.ok,
        "gates": gates,
    }
    _emit(report, args.format, args.out)
    return 0 if rep.ok else 1


def _cmd_erg_classify(args) -> int:
    plan = _erg_plan(args)
    _check_qubit_cap(plan.spec, plan.lat_to, args.max_qubits)
    h1 = erg.build_h1(plan)
    counts: dict[str, int] = {}
    for _, op in h1.generators:
        try:
            cls = erg.classify_term(op, plan)
        except DomainError:
            cls = "far"
        counts[cls] = counts.get(cls, 0) + 1
    report = {
        "spec": str(plan.spec),
        "dims_from": format_lattice(plan.lat_from),
        "dims_to": format_lattice(plan.lat_to),
        "axis": plan.axis + 1,
        "n_generators": len(h1.generators),
        "class_counts": dict(sorted(counts.items())),
    }
    _emit(report, args.format, args.out)
    return 0


def _cmd_coarse_verify(args) -> int:
    report = coarsegrain.verify_coarse_structure(args.L, args.max_configs)
    _emit(report, args.format, args.out)
    return 0 if report["ghz_ok"] and report["coarse_equal_ok"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    p.add_argument("--out", metavar="PATH", default=None, help="write the report to a file")
    p.add_argument(
        "--max-qubits",
        type=int,
        default=DEFAULT_MAX_QUBITS,
        help=f"refuse lattices with more spins than this (default {DEFAULT_MAX_QUBITS})",
    )
    p.add_argument(
        "--max-configs",
        type=int,
        default=DEFAULT_MAX_CONFIGS,
        help=f"cap on enumerated configurations (default {DEFAULT_MAX_CONFIGS})",
    )


def _add_erg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", help='model string, e.g. "[0,1,2,3]@2x2x2:pbc"')
    p.add_argument(
        "--circuit", choices=("paper", "general"), default="paper", help="disentangling layer source"
    )
    p.add_argument(
        "--axis", type=int, default=None, help="1-based axis to grow (default: the last axis)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabgrid", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="build and inspect single models")
    model_sub = p_model.add_subparsers(dest="model_command", required=True)
    for name, handler, blurb in (
        ("build", _cmd_model_build, "build a model and check generator commutation"),
        ("gsd", _cmd_model_gsd, "ground-state degeneracy of one model"),
        ("dualize", _cmd_model_dualize, "half-unit-shift dual and its invariants"),
    ):
        q = model_sub.add_parser(name, help=blurb)
        q.add_argument("model", help='model string, e.g. "[0,1,2,3]@3x3x3:pbc"')
        _add_common(q)
        q.set_defaults(handler=handler)

    p_scan = sub.add_parser("scan", help="degeneracy across sizes plus the exact fit")
    p_scan.add_argument("spec", help='model family, e.g. "[0,1,2,3]"')
    p_scan.add_argument("--sizes", required=True, help='size set: "2..4" or "2,3"')
    _add_common(p_scan)
    p_scan.set_defaults(handler=_cmd_scan)

    p_erg = sub.add_parser("erg", help="one entanglement-renormalization step")
    erg_sub = p_erg.add_subparsers(dest="erg_command", required=True)
    for name, handler, blurb in (
        ("verify", _cmd_erg_verify, "fixed-point, recursion, and mapping checks"),
        ("circuit", _cmd_erg_circuit, "build the CNOT layer and validate its conditions"),
        ("classify", _cmd_erg_classify, "classify the pre-circuit generators"),
    ):
        q = erg_sub.add_parser(name, help=blurb)
        _add_erg_flags(q)
        _add_common(q)
        q.set_defaults(handler=handler)

    p_coarse = sub.add_parser("coarse", help="coarse-graining checks for the 2D model")
    coarse_sub = p_coarse.add_subparsers(dest="coarse_command", required=True)
    q = coarse_sub.add_parser("verify", help="GHZ and coarse-set checks by enumeration")
    q.add_argument("--L", type=int, required=True, help="linear size of the torus")
    _add_common(q)
    q.set_defaults(handler=_cmd_coarse_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ConstructionError, PhaseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StabgridError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
