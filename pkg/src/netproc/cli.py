"""Command-line front end: ``netproc validate | diff | generate``.

Exit codes: 0 success, 1 input or validation error, 2 usage error.
Diagnostics go to stderr; reports and procedures to stdout or files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .diff import diff_report
from .errors import NetprocError
from .generator import generate_all
from .metamodel import Metamodel, load_metamodel
from .model import Model, load_model, validate_conformance
from .template import load_template_dir


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_model(path: str, mm: Metamodel, strict: bool, label: str) -> Model:
    model = load_model(_read(path), mm)
    violations = validate_conformance(model, mm)
    for v in violations:
        print(f"{label}: {'error' if strict else 'warning'}: {v}", file=sys.stderr)
    if strict and violations:
        raise NetprocError(f"{label} model is not conformant ({len(violations)} violation(s))")
    return model


def _cmd_validate(args) -> int:
    mm = load_metamodel(_read(args.metamodel))
    status = 0
    for path in args.model:
        violations = validate_conformance(load_model(_read(path), mm), mm)
        for v in violations:
            print(f"{path}: {v}")
        if violations:
            status = 1
    return status


def _cmd_diff(args) -> int:
    mm = load_metamodel(_read(args.metamodel))
    asis = _load_model(args.asis, mm, args.strict, "asis")
    tobe = _load_model(args.tobe, mm, args.strict, "tobe")
    json.dump(diff_report(asis, tobe), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _cmd_generate(args) -> int:
    mm = load_metamodel(_read(args.metamodel))
    asis = _load_model(args.asis, mm, args.strict, "asis")
    tobe = _load_model(args.tobe, mm, args.strict, "tobe")
    library = load_template_dir(args.templates)
    # everything is generated before the first file is touched
    procedures = generate_all(asis, tobe, mm, library)
    names = [p.device_name for p in procedures]
    clashes = sorted({n for n in names if names.count(n) > 1})
    if clashes:
        raise NetprocError(f"several Configs share device name(s): {', '.join(clashes)}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max([len("device"), *map(len, names)])
    print(f"{'device':<{width}}  commands")
    for proc in procedures:
        _atomic_write(out / f"{proc.device_name}.cfg", proc.render())
        print(f"{proc.device_name:<{width}}  {len(proc.commands)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netproc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check models against the metamodel")
    p.add_argument("--metamodel", required=True)
    p.add_argument("--model", required=True, action="append",
                   help="model file; repeat to validate several")
    p.add_argument("--strict", action="store_true", help="accepted for symmetry; violations always fail")
    p.set_defaults(func=_cmd_validate)

    for name, func, help_ in (("diff", _cmd_diff, "print the labeled difference as JSON"),
                              ("generate", _cmd_generate, "write one .cfg procedure per device")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--metamodel", required=True)
        p.add_argument("--asis", required=True)
        p.add_argument("--tobe", required=True)
        p.add_argument("--strict", action="store_true",
                       help="treat conformance violations as errors")
        if name == "generate":
            p.add_argument("--templates", required=True, help="directory of <deviceModel>.csv files")
            p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(func=func)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)  # exits 2 on usage errors
    try:
        return args.func(args)
    except (NetprocError, OSError) as exc:
        print(f"netproc: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
