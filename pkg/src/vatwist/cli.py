"""Command-line front end.

Exit codes: 0 success, 1 unreadable input, 2 failed precondition (no module,
no root in the field, window too large), 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    BranchOutOfRange,
    ExistenceFailed,
    NoRootInField,
    TruncationTooSmall,
    VatwistError,
    WindowExceedsTruncation,
)
from .module_builder import ModuleSpec, VAModule, build_full
from .series import PuiseuxSeries
from .twist_lifter import TwistedStructure, enumerate_structures, lift
from .va_check import (
    BorcherdsWindow,
    all_passed,
    check_borcherds,
    family_checks,
    module_checks,
    structure_checks,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_VERIFY = 3


class ParseError(Exception):
    pass


@dataclass
class SessionConfig:
    conductor: int | None = None
    trunc: int = 12
    output_path: Path | None = None
    window: BorcherdsWindow = field(default_factory=BorcherdsWindow)

    def __post_init__(self):
        if self.conductor is not None and self.conductor < 1:
            raise ValueError("conductor must be at least 1")
        if self.trunc < 1:
            raise ValueError("trunc must be at least 1")


def dumps(obj) -> str:
    """Canonical serialisation: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _parse(reader, obj, what):
    try:
        return reader(obj)
    except VatwistError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed {what}: {exc!r}") from exc


def load_input(path):
    """A VAModule, a TwistedStructure, or a list of structures."""
    obj = _load_json(path)
    if isinstance(obj, list):
        return [_parse(TwistedStructure.from_json, o, "structure") for o in obj]
    if isinstance(obj, dict) and "T" in obj:
        return _parse(TwistedStructure.from_json, obj, "structure")
    if isinstance(obj, dict) and "S" in obj:
        return _parse(VAModule.from_json, obj, "module")
    raise ParseError(f"{path} is neither a module nor a twisted structure")


def _emit(text: str, config: SessionConfig, summary: str):
    if config.output_path is not None:
        Path(config.output_path).write_text(text, encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def cmd_build(spec_file, config: SessionConfig) -> int:
    spec = _parse(ModuleSpec.from_json, _load_json(spec_file), "module spec")
    M = build_full(spec, config.trunc)
    summary = f"built dim-{spec.dim} module, ld(S^(0)) = {spec.sign_L}, alpha = {spec.alpha}, trunc {config.trunc}"
    _emit(dumps(M.to_json()), config, summary)
    return EXIT_OK


def _twist_summary(n: int, e: int, count: int) -> str:
    return f"twist τ^{e} (order {n}), {count} structure{'s' if count != 1 else ''}"


def _load_module(path) -> VAModule:
    obj = _load_json(path)
    if isinstance(obj, dict) and "T" in obj and "base" in obj:
        obj = obj["base"]
    return _parse(VAModule.from_json, obj, "module")


def cmd_lift(module_file, ext: int, branch: int, config: SessionConfig) -> int:
    M = _load_module(module_file)
    st = lift(M, ext, branch, config.conductor)
    summary = _twist_summary(ext, st.twist_exponent, 1) + f", branch {branch}"
    _emit(dumps(st.to_json()), config, summary)
    return EXIT_OK


def cmd_enumerate(module_file, ext: int, config: SessionConfig) -> int:
    M = _load_module(module_file)
    sts = enumerate_structures(M, ext, config.conductor)
    _emit(dumps([st.to_json() for st in sts]), config, _twist_summary(ext, sts[0].twist_exponent, len(sts)))
    return EXIT_OK


def run_checks(obj, window: BorcherdsWindow):
    if isinstance(obj, VAModule):
        return module_checks(obj) + [check_borcherds(obj, window)]
    if isinstance(obj, TwistedStructure):
        return structure_checks(obj, window)
    reports = []
    for st in obj:
        reports += structure_checks(st, window)
    if obj:
        reports += family_checks(obj)
    return reports


def cmd_verify(input_file, config: SessionConfig, report_path=None) -> int:
    obj = load_input(input_file)
    reports = run_checks(obj, config.window)
    ok = all_passed(reports)
    payload = {"status": "pass" if ok else "fail", "reports": [r.to_json() for r in reports]}
    text = dumps(payload)
    if report_path is not None:
        Path(report_path).write_text(text, encoding="utf-8")
    elif config.output_path is not None:
        Path(config.output_path).write_text(text, encoding="utf-8")
    for r in reports:
        print(r.summary())
        for idx, lhs, rhs in r.witnesses[:5]:
            print(f"  at {tuple(str(i) for i in idx)}: {lhs} != {rhs}")
    return EXIT_OK if ok else EXIT_VERIFY


def matrix_series_json(f: PuiseuxSeries) -> dict:
    """Every coefficient expanded to its n x n matrix."""
    def enc(t):
        return None if t == float("inf") else t

    return {
        "ramification": f.ramification,
        "dim": f.order,
        "trunc": enc(f.trunc_min),
        "terms": [
            {"exp_num": m, "matrix": [[c.to_json() for c in row] for row in f.terms[m].to_matrix()]}
            for m in sorted(f.terms)
        ],
    }


def cmd_export_matrix(input_file, config: SessionConfig) -> int:
    obj = load_input(input_file)
    if isinstance(obj, VAModule):
        out = {"S": matrix_series_json(obj.S)}
    elif isinstance(obj, TwistedStructure):
        out = {"S": matrix_series_json(obj.base.S), "T": matrix_series_json(obj.T)}
        if obj.is_formal:
            out["radical"] = obj.radical.to_json()
    else:
        out = [{"branch": st.branch, "T": matrix_series_json(st.T)} for st in obj]
    _emit(dumps(out), config, "exported matrix form")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vatwist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--trunc", type=int, default=12, help="truncation order in x-units (default 12)")
        p.add_argument("--conductor", type=int, default=None, help="working cyclotomic conductor")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--window", default=None, help="Borcherds window JSON {l, m, n: [lo, hi]}")

    p = sub.add_parser("build", help="construct a module from a spec")
    p.add_argument("--spec", required=True)
    common(p)
    p = sub.add_parser("lift", help="lift a module to one twisted structure")
    p.add_argument("--module", required=True)
    p.add_argument("--ext", type=int, required=True)
    p.add_argument("--branch", type=int, default=0)
    common(p)
    p = sub.add_parser("enumerate", help="all twisted structures over an extension")
    p.add_argument("--module", required=True)
    p.add_argument("--ext", type=int, required=True)
    common(p)
    p = sub.add_parser("verify", help="run every applicable check")
    p.add_argument("--input", required=True)
    p.add_argument("--report", default=None)
    common(p)
    p = sub.add_parser("export-matrix", help="expand coefficients to matrices")
    p.add_argument("--input", required=True)
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        window = BorcherdsWindow()
        if args.window:
            window = _parse(BorcherdsWindow.from_json, _load_json(args.window), "window")
        config = SessionConfig(args.conductor, args.trunc, Path(args.out) if args.out else None, window)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "build":
            return cmd_build(args.spec, config)
        if args.command == "lift":
            return cmd_lift(args.module, args.ext, args.branch, config)
        if args.command == "enumerate":
            return cmd_enumerate(args.module, args.ext, config)
        if args.command == "verify":
            return cmd_verify(args.input, config, args.report)
        return cmd_export_matrix(args.input, config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ExistenceFailed as exc:
        print(f"error: no module exists: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NoRootInField as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (WindowExceedsTruncation, TruncationTooSmall, BranchOutOfRange) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
