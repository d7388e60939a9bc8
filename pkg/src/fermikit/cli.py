"""Command-line front end: ``fermikit <command> ...``.

Exit codes: 0 on success, 1 for malformed input or arguments, 2 when a
numeric invariant fails (an input that is not a density matrix, a failed
check suite).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any, NoReturn, TextIO, cast

from fermikit.__about__ import __version__
from fermikit.algebra import Operator, embed, ordered_product, tensor_fermionic
from fermikit.checks import SUITE_NAMES, run_checks
from fermikit.core.config import get_settings, use_settings
from fermikit.core.errors import FermikitError, InputError
from fermikit.core.results import ErrorPayload, significant
from fermikit.io import (
    array_payload,
    dumps,
    load_operator,
    load_payload,
    load_state,
    load_superop,
    operator_payload,
    read_text,
    superop_payload,
)
from fermikit.maps import (
    MapKind,
    choi,
    is_cp,
    is_physical_map,
    is_tp,
    locality_certificate,
    map_embed,
    map_parity,
    map_tensor,
)
from fermikit.modes import ModeSet, OrderedPartition, Partition
from fermikit.parity import (
    ParitySector,
    StateVector,
    operator_parity,
    parity_sectors,
    project_local_parity,
    vector_parity,
)
from fermikit.phase import PhaseKind, emit_table
from fermikit.states import CorrelationMode, DensityMatrix, classify_correlation, coeffs, reduce_state, spectrum
from fermikit.superop import SuperOp

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, TextIO], int]


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with status 1, like every other validation error."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _number(value: float) -> float:
    return significant(value, get_settings().significant_digits) + 0.0


def _write(out: TextIO, payload: Any) -> None:
    out.write(dumps(payload))


def _partition(args: argparse.Namespace) -> Partition:
    if args.partition is None:
        raise InputError("--partition is required for this command.")
    return Partition.parse(args.partition)


# Handlers


def _cmd_phase(args: argparse.Namespace, out: TextIO) -> int:
    kind = PhaseKind(args.kind)
    if kind is PhaseKind.F:
        if args.modes is None:
            raise InputError("--modes is required for the f table.")
        arg: ModeSet | Partition | OrderedPartition = ModeSet.parse(args.modes)
    elif args.ordered is not None:
        arg = OrderedPartition.parse(args.ordered)
    elif args.partition is not None:
        arg = Partition.parse(args.partition)
    else:
        raise InputError(f"--partition or --ordered is required for the {kind.value} table.")
    table = emit_table(kind, arg)
    if args.format == "glyphs":
        out.write(table.glyphs() + "\n")
    elif args.format == "csv":
        out.write(table.csv() + "\n")
    else:
        out.write(table.as_json() + "\n")
    return 0


def _load_operands(paths: Sequence[str]) -> list[Operator]:
    return [load_operator(read_text(path)) for path in paths]


def _cmd_tensor(args: argparse.Namespace, out: TextIO) -> int:
    operands = _load_operands(args.inputs)
    if args.ordered is not None:
        result = ordered_product(OrderedPartition.parse(args.ordered), operands)
    else:
        xi = _partition(args)
        result = tensor_fermionic(xi, {op.modes: op for op in operands})
    _write(out, operator_payload(result))
    return 0


def _cmd_embed(args: argparse.Namespace, out: TextIO) -> int:
    op = load_operator(read_text(args.input))
    _write(out, operator_payload(embed(op.modes, ModeSet.parse(args.into), op)))
    return 0


def _cmd_reduce(args: argparse.Namespace, out: TextIO) -> int:
    rho = load_state(read_text(args.state))
    reduced = reduce_state(rho, ModeSet.parse(args.keep))
    _write(out, operator_payload(reduced.op, density=True))
    return 0


def _cmd_state(args: argparse.Namespace, out: TextIO) -> int:
    if args.action == "reduce":
        if args.keep is None:
            raise InputError("--keep is required for state reduce.")
        return _cmd_reduce(args, out)
    rho = load_state(read_text(args.state))
    if args.action == "coeffs":
        matrix = coeffs(rho, args.basis)
        payload = operator_payload(Operator(matrix.modes, matrix.entries))
        payload["basis"] = matrix.basis
        payload["spectrum"] = [_number(value) for value in spectrum(rho)]
        _write(out, payload)
        return 0
    mode = CorrelationMode.SSR if args.ssr else CorrelationMode.NO_SSR
    report = classify_correlation(rho, _partition(args), mode)
    payload = report.as_dict()
    payload["residual"] = _number(report.residual)
    payload["product_residual"] = _number(report.product_residual)
    _write(out, payload)
    return 0


def _cmd_parity(args: argparse.Namespace, out: TextIO) -> int:
    value = load_payload(read_text(args.input))
    if args.action == "classify":
        if isinstance(value, StateVector):
            parity = vector_parity(value)
        elif isinstance(value, SuperOp):
            parity = map_parity(value)
        else:
            parity = operator_parity(value.op if isinstance(value, DensityMatrix) else value)
        _write(out, {"parity": parity.value})
        return 0
    if isinstance(value, DensityMatrix):
        op = value.op
    elif isinstance(value, Operator):
        op = value
    else:
        raise InputError(f"parity {args.action} needs an operator payload, got a {type(value).__name__}.")
    xi = _partition(args)
    if args.action == "project":
        if args.sector is None:
            raise InputError("--sector is required for parity project.")
        eps = ParitySector.parse(xi, args.sector)
        _write(out, operator_payload(project_local_parity(xi, eps, op)))
        return 0
    blocks = parity_sectors(xi, op)
    _write(out, {"partition": str(xi), "sectors": {str(eps): operator_payload(block) for eps, block in blocks.items()}})
    return 0


def _cmd_map(args: argparse.Namespace, out: TextIO) -> int:
    kind = MapKind(args.kind)
    if args.action == "tensor":
        maps = [load_superop(read_text(path)) for path in args.maps]
        xi: Partition | OrderedPartition
        xi = OrderedPartition.parse(args.ordered) if args.ordered is not None else _partition(args)
        if isinstance(xi, Partition):
            result = map_tensor(kind, xi, {omega.source: omega for omega in maps})
        else:
            result = map_tensor(kind, xi, maps)
        _write(out, superop_payload(result))
        return 0
    if len(args.maps) != 1:
        raise InputError(f"map {args.action} takes exactly one map, got {len(args.maps)}.")
    omega = load_superop(read_text(args.maps[0]))
    if args.action == "embed":
        if args.into is None:
            raise InputError("--into is required for map embed.")
        _write(out, superop_payload(map_embed(kind, omega.source, ModeSet.parse(args.into), omega)))
        return 0
    if args.action == "choi":
        matrix = choi(omega)
        _write(
            out,
            {
                "source": list(omega.source.labels),
                "target": list(omega.target.labels),
                "min_eigenvalue": _number(matrix.min_eigenvalue()),
                "cp": is_cp(omega),
                "tp": is_tp(omega),
                **array_payload(matrix.matrix),
            },
        )
        return 0
    payload: dict[str, Any] = {
        "parity": map_parity(omega).value,
        "physical": is_physical_map(omega),
        "cp": is_cp(omega),
        "tp": is_tp(omega),
    }
    target: ModeSet | Partition | None = None
    if args.local is not None:
        target = ModeSet.parse(args.local)
    elif args.partition is not None:
        target = Partition.parse(args.partition)
    if target is not None:
        certificate = locality_certificate(omega, target)
        payload["local"] = certificate.local
        payload["locality_residual"] = _number(certificate.residual)
        payload["remainder_physical"] = certificate.remainder_physical
    _write(out, payload)
    return 0


def _cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    names = "all" if args.suite == "all" else [args.suite]
    report = run_checks(names, max_modes=args.max_modes, seed=args.seed, trials=args.trials)
    out.write(json.dumps(report.as_dict(get_settings().significant_digits), indent=2) + "\n")
    summary = report.summary()
    logger.info(
        "checks: %d invariants, %d passed, %d failed", summary["invariants"], summary["passed"], summary["failed"]
    )
    return 0 if report.passed else 2


# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fermikit", description="Jordan-Wigner toolbox for finitely many fermionic modes.")
    parser.add_argument("--version", action="version", version=f"fermikit {__version__}")
    parser.add_argument("--tol", type=float, default=None, help="absolute tolerance (default: FERMIKIT_TOL or 1e-10)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr; repeat for debug")
    commands = parser.add_subparsers(dest="command", required=True)

    phase = commands.add_parser("phase", help="emit an f, h, l or u sign table")
    phase.add_argument("--kind", choices=[kind.value for kind in PhaseKind], required=True)
    phase.add_argument("--modes", help='mode set, e.g. "{1,2}"')
    phase.add_argument("--partition", help='partition, e.g. "{1,3}|{2}"')
    phase.add_argument("--ordered", help="ordered partition; textual order is the tuple order")
    phase.add_argument("--format", choices=["glyphs", "csv", "json"], default="glyphs")
    phase.set_defaults(handler=_cmd_phase)

    tensor = commands.add_parser("tensor", help="fermionic tensor product or ordered product of operators")
    tensor.add_argument(
        "--partition", "--fermionic", dest="partition", help="partition for the fermionic tensor product"
    )
    tensor.add_argument("--ordered")
    tensor.add_argument("inputs", nargs="+", help="operator JSON files, one per part")
    tensor.set_defaults(handler=_cmd_tensor)

    embed_cmd = commands.add_parser("embed", help="fermionic canonical embedding of an operator")
    embed_cmd.add_argument("--input", default="-")
    embed_cmd.add_argument("--into", required=True)
    embed_cmd.set_defaults(handler=_cmd_embed)

    reduce = commands.add_parser("reduce", help="reduced density matrix")
    reduce.add_argument("--state", default="-")
    reduce.add_argument("--keep", required=True)
    reduce.set_defaults(handler=_cmd_reduce)

    state = commands.add_parser("state", help="state tools")
    state.add_argument("action", choices=["reduce", "coeffs", "classify"])
    state.add_argument("--state", default="-")
    state.add_argument("--keep")
    state.add_argument("--basis", choices=["standard", "fermionic"], default="standard")
    state.add_argument("--partition")
    state.add_argument("--ssr", action="store_true", help="classify under parity superselection")
    state.set_defaults(handler=_cmd_state)

    parity = commands.add_parser("parity", help="parity tools")
    parity.add_argument("action", choices=["classify", "project", "sectors"])
    parity.add_argument("--input", default="-")
    parity.add_argument("--partition")
    parity.add_argument("--sector", help='local parities in part order, e.g. "+-"')
    parity.set_defaults(handler=_cmd_parity)

    map_cmd = commands.add_parser("map", help="map tools")
    map_cmd.add_argument("action", choices=["embed", "tensor", "choi", "classify"])
    map_cmd.add_argument("maps", nargs="+", help="map JSON files")
    map_cmd.add_argument("--kind", choices=[kind.value for kind in MapKind], default=MapKind.ORDERED.value)
    map_cmd.add_argument("--into")
    map_cmd.add_argument("--partition")
    map_cmd.add_argument("--ordered")
    map_cmd.add_argument("--local", help="mode set X for the X-locality test")
    map_cmd.set_defaults(handler=_cmd_map)

    check = commands.add_parser("check", help="run invariant suites")
    check.add_argument("--suite", choices=[*SUITE_NAMES, "all"], default="all")
    check.add_argument("--max-modes", type=int, default=4)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--trials", type=int, default=None)
    check.set_defaults(handler=_cmd_check)
    return parser


def _configure_logging(verbosity: int) -> None:
    # Without -v, warnings still reach stderr through logging.lastResort.
    if verbosity <= 0:
        return
    level = logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    _configure_logging(args.verbose)
    out = sys.stdout if stdout is None else stdout
    handler = cast(Handler, args.handler)
    try:
        with use_settings(tolerance=args.tol):
            return handler(args, out)
    except FermikitError as exc:
        sys.stderr.write(json.dumps(ErrorPayload.from_error(exc, command=args.command).as_dict()) + "\n")
        return 2 if exc.numeric else 1


if __name__ == "__main__":
    sys.exit(main())
