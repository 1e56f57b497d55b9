"""Command-line interface: visualize, generic, abduce, serve.

Exit codes: 0 success, 1 abduction unsatisfiable, 2 parse error, 3
evaluation error (solving, grounding, layout), 4 strict validation, 5 I/O.

Settings come from one precedence chain: command-line flags override the
config file (TOML key=value, default ./kara.toml); the KARA_SOLVER
environment variable is only a fallback for an unset solver path.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from .abduction import (
    DEFAULT_INTEGRITY,
    DomainTerms,
    PredicateSets,
    abducible_predicates,
    abduce,
)
from .backends import SolverConfig, solve_with_config
from .errors import (
    ConstraintCycleError,
    GroundingError,
    KaraError,
    ParseError,
    SolverBackendError,
    UnsafeRuleError,
    UnsatisfiableConstraintError,
    UnsupportedProgramError,
    ValidationError,
)
from .grounding import DEFAULT_MAX_DEPTH
from .layout import layout
from .parser import parse_interpretation, parse_program, parse_term_text
from .scene import build_scene, generic_scene, scene_to_json
from .svg import render_svg
from .syntax import Interpretation
from .vocabulary import ensure_valid, project_vis

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_PARSE = 2
EXIT_SOLVE = 3
EXIT_VALIDATE = 4
EXIT_IO = 5


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(EXIT_IO, f"cannot read {path}: {exc}")


def _write_text(path: str, content: str):
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(EXIT_IO, f"cannot write {path}: {exc}")


def _load_config_file(path: "str | None") -> dict:
    candidate = Path(path) if path else Path("kara.toml")
    if not candidate.exists():
        if path:
            raise _CliFailure(EXIT_IO, f"config file {path} not found")
        return {}
    try:
        with open(candidate, "rb") as handle:
            return tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise _CliFailure(EXIT_IO, f"cannot load config {candidate}: {exc}")


def _pred_key(text: str) -> tuple[str, int]:
    name, _, arity = text.partition("/")
    if not arity.isdigit() or not name:
        raise _CliFailure(EXIT_PARSE, f"predicate must be written name/arity, got {text!r}")
    return (name, int(arity))


def _solver_config(args, file_config: dict) -> SolverConfig:
    backend = args.backend or file_config.get("backend", "builtin")
    solver_path = getattr(args, "solver", None) or file_config.get("solver_path")
    timeout = getattr(args, "timeout", None) or file_config.get("timeout", 30.0)
    extra = tuple(getattr(args, "solver_arg", None) or file_config.get("solver_args", ()))
    try:
        return SolverConfig(backend=backend, executable_path=solver_path,
                            extra_args=extra, timeout=float(timeout))
    except ValueError as exc:
        raise _CliFailure(EXIT_PARSE, str(exc))


def _max_depth(args, file_config: dict) -> int:
    return args.depth or int(file_config.get("depth_bound", DEFAULT_MAX_DEPTH))


def _parse(label: str, text: str, kind: str = "program"):
    try:
        if kind == "program":
            return parse_program(text)
        return parse_interpretation(text)
    except (ParseError, UnsafeRuleError, KaraError) as exc:
        raise _CliFailure(EXIT_PARSE, f"{label}: {exc}")


def _solve_one(program, facts, config, max_depth) -> Interpretation:
    try:
        models = solve_with_config(program, facts, config, max_depth=max_depth, limit=1)
    except (UnsupportedProgramError, GroundingError, SolverBackendError) as exc:
        raise _CliFailure(EXIT_SOLVE, str(exc))
    if not models:
        raise _CliFailure(EXIT_SOLVE, "the program has no answer set")
    return models[0]


def _scene_pipeline(scene, args):
    try:
        placed = layout(scene, seed=args.seed)
    except (ConstraintCycleError, UnsatisfiableConstraintError) as exc:
        raise _CliFailure(EXIT_SOLVE, str(exc))
    for diagnostic in placed.diagnostics:
        print(f"kara: {diagnostic}", file=sys.stderr)
    return placed, render_svg(scene, placed)


def cmd_visualize(args, file_config: dict) -> int:
    program = _parse(args.program, _read_text(args.program))
    facts = _parse(args.interpretation, _read_text(args.interpretation), kind="interpretation")
    model = _solve_one(program, facts, _solver_config(args, file_config),
                       _max_depth(args, file_config))
    vis = project_vis(model)
    try:
        diagnostics = ensure_valid(vis, strict=args.strict)
    except ValidationError as exc:
        raise _CliFailure(EXIT_VALIDATE, str(exc))
    for diagnostic in diagnostics:
        print(f"kara: {diagnostic}", file=sys.stderr)
    scene = build_scene(vis)
    _, svg = _scene_pipeline(scene, args)
    _write_text(args.output, svg)
    if args.emit_scene:
        _write_text(args.emit_scene, json.dumps(scene_to_json(scene), indent=2) + "\n")
    return EXIT_OK


def cmd_generic(args, file_config: dict) -> int:
    facts = _parse(args.interpretation, _read_text(args.interpretation), kind="interpretation")
    scene = generic_scene(facts)
    _, svg = _scene_pipeline(scene, args)
    _write_text(args.output, svg)
    if args.emit_scene:
        _write_text(args.emit_scene, json.dumps(scene_to_json(scene), indent=2) + "\n")
    return EXIT_OK


def cmd_abduce(args, file_config: dict) -> int:
    vis_interp = _parse(args.interpretation, _read_text(args.interpretation), kind="interpretation")
    program = _parse(args.program, _read_text(args.program))
    vis = project_vis(vis_interp)
    dropped = len(vis_interp) - len(vis)
    if dropped:
        print(f"kara: ignored {dropped} non-visualisation atoms in {args.interpretation}",
              file=sys.stderr)

    abducible = frozenset(abducible_predicates(program))
    if args.abducible:
        abducible |= {_pred_key(p) for p in args.abducible}
    integrity = DEFAULT_INTEGRITY
    if args.pi:
        integrity = frozenset(_pred_key(p) for p in args.pi)
    file_integrity = file_config.get("integrity")
    if not args.pi and file_integrity:
        integrity = frozenset(_pred_key(p) for p in file_integrity)
    try:
        sets = PredicateSets(abducible, integrity)
        extra = DomainTerms(frozenset(parse_term_text(t) for t in args.domain_term or ()))
    except (ValueError, ParseError) as exc:
        raise _CliFailure(EXIT_PARSE, str(exc))

    try:
        result = abduce(vis, program, sets=sets,
                        config=_solver_config(args, file_config),
                        extra_domain=extra, all_models=args.all,
                        max_depth=_max_depth(args, file_config))
    except KaraError as exc:
        raise _CliFailure(EXIT_SOLVE, str(exc))

    if args.emit_abduction_program:
        _write_text(args.emit_abduction_program, result.program.text())
    if result.status == "unsat":
        print("kara: no interpretation produces the edited visualisation (unsatisfiable)",
              file=sys.stderr)
        return EXIT_UNSAT
    if args.all:
        blocks = []
        for index, interp in enumerate(result.interpretations, 1):
            blocks.append(f"% answer {index}\n{interp.to_text()}")
        _write_text(args.output, "\n".join(blocks) + "\n")
    else:
        _write_text(args.output, result.interpretation.to_text() + "\n")
    return EXIT_OK


def cmd_serve(args, file_config: dict) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(corpus_dir=Path(args.corpus) if args.corpus else None,
                     frontend_dir=Path(args.frontend) if args.frontend else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kara",
        description="Visualise answer-set interpretations and edit them via abduction.",
    )
    parser.add_argument("--config", help="config file (TOML key=value; default ./kara.toml)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(p):
        p.add_argument("--backend", choices=("builtin", "external"))
        p.add_argument("--solver", help="external solver executable")
        p.add_argument("--solver-arg", action="append", dest="solver_arg",
                       help="extra argument for the external solver (repeatable)")
        p.add_argument("--timeout", type=float, help="external solver timeout in seconds")
        p.add_argument("--depth", type=int, default=None,
                       help="function-nesting depth bound for grounding")

    vis = sub.add_parser("vis", help="solve a visualisation program and export SVG")
    vis.add_argument("program")
    vis.add_argument("interpretation")
    vis.add_argument("-o", "--output", required=True)
    vis.add_argument("--seed", type=int, default=0)
    vis.add_argument("--emit-scene", help="also write the scene as JSON")
    vis.add_argument("--strict", action="store_true",
                     help="treat validation diagnostics as errors")
    add_solver_flags(vis)
    vis.set_defaults(handler=cmd_visualize)

    generic = sub.add_parser("generic", help="render an interpretation as a hypergraph")
    generic.add_argument("interpretation")
    generic.add_argument("-o", "--output", required=True)
    generic.add_argument("--seed", type=int, default=0)
    generic.add_argument("--emit-scene")
    generic.set_defaults(handler=cmd_generic)

    abd = sub.add_parser("abduce", help="recover an interpretation from edited atoms")
    abd.add_argument("interpretation", help="edited visualisation atoms (facts file)")
    abd.add_argument("program", help="the visualisation program")
    abd.add_argument("-o", "--output", required=True)
    abd.add_argument("--all", action="store_true", help="enumerate all interpretations")
    abd.add_argument("--emit-abduction-program", help="dump the constructed program")
    abd.add_argument("--pi", action="append",
                     help="integrity predicate name/arity (repeatable; replaces the default)")
    abd.add_argument("--abducible", action="append",
                     help="extra abducible predicate name/arity (repeatable)")
    abd.add_argument("--domain-term", action="append",
                     help="extra ground domain term (repeatable)")
    add_solver_flags(abd)
    abd.set_defaults(handler=cmd_abduce)

    serve = sub.add_parser("serve", help="run the HTTP service and web editor")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8750)
    serve.add_argument("--corpus", help="directory of example programs")
    serve.add_argument("--frontend", help="directory with the built web editor")
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        file_config = _load_config_file(args.config)
        return args.handler(args, file_config)
    except _CliFailure as failure:
        print(f"kara: {failure.message}", file=sys.stderr)
        return failure.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
