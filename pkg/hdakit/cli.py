import argparse
import json
import logging
import sys
from typing import List, Optional
from hdakit.bisim import BisimKind, Outcome, SemanticsMode, check_bisim, cross_validate, enumerate_executions
from hdakit.config import Settings
from hdakit.dot import export_dot
from hdakit.errors import HdaError, InvalidComplex, InvalidPath, TheoremViolation
from hdakit.ipomset import Ipomset, count_isos, iso
from hdakit.paths import Path, all_liftings, congruence_class, validate_path
from hdakit.precubical import HDA, forget_symmetry, load_complex, symmetrize, symmetrize_hda
from hdakit.semantics import ev, format_split_trace, format_st_trace, split_trace, st_trace


def _emit(args: argparse.Namespace, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w") as file:
            file.write(text if text.endswith("\n") else text + "\n")
        logging.info("output written to " + args.output)
    else:
        print(text.rstrip("\n"))


def _emit_json(args: argparse.Namespace, data):
    _emit(args, json.dumps(data, indent=1, ensure_ascii=False))


def _complex(filename: str):
    loaded = load_complex(filename)
    violations = loaded.violations()
    if len(violations) > 0:
        raise InvalidComplex(violations)
    return loaded.pcs if isinstance(loaded, HDA) else loaded


def _path(args: argparse.Namespace):
    X = _complex(args.file)
    p = Path.parse(args.path, X)
    violations = validate_path(X, p)
    if len(violations) > 0:
        raise InvalidPath("; ".join(violations))
    return X, p


def _hda(filename: str) -> HDA:
    loaded = load_complex(filename)
    if not isinstance(loaded, HDA):
        raise InvalidComplex([filename + " has no initial cell"])
    violations = loaded.violations()
    if len(violations) > 0:
        raise InvalidComplex(violations)
    return loaded


def cmd_validate(args: argparse.Namespace) -> int:
    loaded = load_complex(args.file)
    violations = loaded.violations()
    if args.json:
        _emit_json(args, {"valid": len(violations) == 0, "violations": violations})
    elif len(violations) == 0:
        _emit(args, "valid; " + (loaded.pcs if isinstance(loaded, HDA) else loaded).summary())
    else:
        logging.warning(str(len(violations)) + " violations in " + args.file)
        _emit(args, "invalid\n" + "\n".join(violations))
    return 0 if len(violations) == 0 else 1


def cmd_symmetrize(args: argparse.Namespace) -> int:
    loaded = load_complex(args.file)
    if isinstance(loaded, HDA):
        result = symmetrize_hda(loaded, args.max_dim)
    else:
        result = forget_symmetry(symmetrize(loaded, args.max_dim))
    _emit_json(args, result.to_json())
    return 0


def cmd_paths(args: argparse.Namespace) -> int:
    if args.path is None:
        if args.liftings or args.congruence:
            raise InvalidPath("--class and --liftings need --path")
        paths = enumerate_executions(_hda(args.file), args.bound)
    elif args.liftings:
        X, p = _path(args)
        paths = all_liftings(X, p)
    elif args.congruence:
        X, p = _path(args)
        paths = congruence_class(X, p, args.settings.congruence_cap)
    else:
        paths = [_path(args)[1]]
    if args.json:
        _emit_json(args, [str(q) for q in paths])
    else:
        _emit(args, "\n".join(str(q) for q in paths))
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    X, p = _path(args)
    label = ev(X, p)
    if args.json:
        _emit_json(args, label.to_json())
    else:
        _emit(args, json.dumps(label.to_json(), ensure_ascii=False) + "\n" + label.render())
    return 0


def cmd_st_trace(args: argparse.Namespace) -> int:
    X, p = _path(args)
    if args.split:
        trace = split_trace(X, p)
        data, text = [list(entry) for entry in trace], format_split_trace(trace)
    else:
        trace = st_trace(X, p)
        data, text = [{"label": e.label, "start": e.start} for e in trace], format_st_trace(trace)
    if args.json:
        _emit_json(args, data)
    else:
        _emit(args, text)
    return 0


def cmd_iso(args: argparse.Namespace) -> int:
    P, Q = Ipomset.load(args.left), Ipomset.load(args.right)
    for name, ipomset in ((args.left, P), (args.right, Q)):
        violations = ipomset.violations()
        if len(violations) > 0:
            raise InvalidComplex([name + ": " + violation for violation in violations])
    if args.count:
        count = count_isos(P, Q)
        if args.json:
            _emit_json(args, {"count": count})
        else:
            _emit(args, str(count))
        return 0 if count > 0 else 1
    found = iso(P, Q)
    if args.json:
        _emit_json(args, {"isomorphic": found is not None, "iso": None if found is None else dict(sorted(found.events.items()))})
    else:
        _emit(args, "not isomorphic" if found is None else "isomorphic: " + str(found))
    return 0 if found is not None else 1


def _verdict_code(outcome: Outcome) -> int:
    # 3 marks a verdict cut short by the bound
    return {Outcome.BISIMILAR: 0, Outcome.NOT_BISIMILAR: 1, Outcome.BOUNDED_INCONCLUSIVE: 3}[outcome]


def cmd_bisim(args: argparse.Namespace) -> int:
    HX, HY = _hda(args.left), _hda(args.right)
    kind = BisimKind(args.kind)
    if args.cross_validate:
        try:
            report = cross_validate(HX, HY, kind, args.bound)
        except TheoremViolation as e:
            print("theorem violation: " + str(e), file=sys.stderr)
            return 1
        if args.json:
            _emit_json(args, report.to_json())
        else:
            _emit(args, "trace:   " + str(report.trace) + "\nipomset: " + str(report.ipomset))
        return _verdict_code(report.ipomset.outcome)
    verdict = check_bisim(HX, HY, kind, SemanticsMode(args.mode), args.bound)
    if args.json:
        _emit_json(args, verdict.to_json())
    else:
        _emit(args, str(verdict))
    return _verdict_code(verdict.outcome)


def cmd_export_dot(args: argparse.Namespace) -> int:
    _emit(args, export_dot(load_complex(args.file)))
    return 0


def parser(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", metavar="FILE", help="write the result to FILE")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--config", metavar="FILE", help="settings file (default " + Settings.default_file() + ")")

    root = argparse.ArgumentParser(prog="hdakit", description="order-free semantics of higher-dimensional automata")
    commands = root.add_subparsers(dest="command", required=True)

    command = commands.add_parser("validate", parents=[common], help="check faces, labels and cubical identities")
    command.add_argument("file")
    command.set_defaults(handler=cmd_validate)

    command = commands.add_parser("symmetrize", parents=[common], help="free symmetric completion as a plain complex")
    command.add_argument("file")
    command.add_argument("--max-dim", type=int, default=settings.max_dim)
    command.set_defaults(handler=cmd_symmetrize)

    command = commands.add_parser("paths", parents=[common], help="validate a path, its congruence class or its liftings")
    command.add_argument("file")
    command.add_argument("--path", help='e.g. "v00 +1 a0 +2 x"; without it the executions up to --bound are listed')
    command.add_argument("--bound", type=int, default=settings.bound)
    choice = command.add_mutually_exclusive_group()
    choice.add_argument("--class", dest="congruence", action="store_true", help="paths congruent by rules 1 and 2")
    choice.add_argument("--liftings", action="store_true", help="all liftings to the symmetrisation")
    command.set_defaults(handler=cmd_paths)

    command = commands.add_parser("label", parents=[common], help="ipomset label of a path")
    command.add_argument("file")
    command.add_argument("--path", required=True)
    command.set_defaults(handler=cmd_label)

    command = commands.add_parser("st-trace", parents=[common], help="ST-trace of an execution")
    command.add_argument("file")
    command.add_argument("--path", required=True)
    command.add_argument("--split", action="store_true", help="split trace without start positions")
    command.set_defaults(handler=cmd_st_trace)

    command = commands.add_parser("iso", parents=[common], help="isomorphism of two ipomsets")
    command.add_argument("left")
    command.add_argument("right")
    command.add_argument("--count", action="store_true", help="number of isomorphisms")
    command.set_defaults(handler=cmd_iso)

    command = commands.add_parser("bisim", parents=[common], help="bounded bisimulation check of two HDAs")
    command.add_argument("left")
    command.add_argument("right")
    command.add_argument("--kind", choices=[kind.value for kind in BisimKind], default=settings.kind)
    command.add_argument("--mode", choices=[mode.value for mode in SemanticsMode], default=settings.mode)
    command.add_argument("--bound", type=int, default=settings.bound)
    command.add_argument("--cross-validate", action="store_true", help="run trace and ipomset mode and compare")
    command.set_defaults(handler=cmd_bisim)

    command = commands.add_parser("export-dot", parents=[common], help="graphviz rendering of a complex")
    command.add_argument("file")
    command.set_defaults(handler=cmd_export_dot)
    return root


def _config_file(argv: List[str]) -> Optional[str]:
    for n, arg in enumerate(argv):
        if arg == "--config" and n + 1 < len(argv):
            return argv[n + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def run(argv: List[str]) -> int:
    settings = Settings.load(_config_file(argv))
    args = parser(settings).parse_args(argv)
    args.settings = settings
    logging.basicConfig(format="%(asctime)s %(levelname)s %(message)s", level=logging.DEBUG if args.verbose else logging.WARNING, force=True)
    try:
        return args.handler(args)
    except (HdaError, OSError, ValueError) as e:
        print(args.command + ": " + str(e), file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
