"""Command-line entry point.

Exit codes: 0 success (or the checked property holds), 1 the check fails,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import documents as docs
from .errors import ExhaustedRetries, HodgeSigmaError, NotPseudoReal, NotSigmaOperator, SchemaError, TruncationInsufficient
from .generate import STANDARD_PROFILES, GenProfile, random_mhs, random_sigma_operator, random_split_bigrading
from .hodge import MixedHodgeStructure, deligne_splitting, validate_mhs, verify_splitting
from .operators import (
    certify_sigma_operator,
    check_pseudo_real,
    mhs_from_operator,
    operator_from_mhs,
    strongly_equivalent,
    weakly_equivalent,
)
from .weierstrass import TruncationParams, sigma_eval, sigma_lambda_eval

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2
SEED_ENV = "HODGESIGMA_SEED"


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, kinds: str | tuple[str, ...]):
    doc = docs.parse_document(_read(path), expect=kinds)
    return docs.decode(doc)


def _load_mhs(path: str) -> MixedHodgeStructure:
    return _load(path, "mhs")


def _load_profile(source: str, seed: int) -> GenProfile:
    if source in STANDARD_PROFILES and not Path(source).exists():
        return GenProfile(STANDARD_PROFILES[source], seed=seed)
    try:
        raw = json.loads(_read(source))
        dims = {(int(e["p"]), int(e["q"])): int(e["dim"]) for e in raw["dims"]}
        return GenProfile(dims, int(raw.get("coefficient_bound", 2)), seed, int(raw.get("retries", 20)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad profile {source}: {exc}") from None


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer") from None


def _report(command: str, ok: bool, extra: dict | None = None, **fields) -> dict:
    out = dict(extra or {})
    out.update(fields)
    out.update(command=command, ok=ok)
    return out


def _pretty(doc: docs.Document) -> str:
    p = doc.payload
    if doc.kind == "report":
        lines = [f"{p.get('command', 'report')}: {'OK' if p.get('ok') else 'FAILED'}"]
        for key, value in p.items():
            if key in ("command", "ok"):
                continue
            if isinstance(value, dict) and key == "checks":
                for name, passed in value.items():
                    lines.append(f"  [{'pass' if passed else 'FAIL'}] {name}")
            else:
                lines.append(f"  {key}: {json.dumps(value, ensure_ascii=False)}")
        return "\n".join(lines) + "\n"
    if doc.kind == "operator":
        m = docs.decode(doc)
        lines = ["operator:", *_matrix_lines(m)]
        for piece in p.get("spectrum", []):
            basis = docs.decode_matrix(piece["basis"], "")
            lines.append(f"  I^{{{piece['p']},{piece['q']}}} = {_span(basis.columns())}")
        return "\n".join(lines) + "\n"
    obj = docs.decode(doc)
    if doc.kind == "matrix":
        return "\n".join(["matrix:", *_matrix_lines(obj)]) + "\n"
    if doc.kind == "mhs":
        lines = [f"mixed Hodge structure, dim {obj.ambient_dim}:"]
        lines += [f"  W_{n} = {_span(sp.vectors)}" for n, sp in obj.weight.steps]
        lines += [f"  F^{k} = {_span(sp.vectors)}" for k, sp in obj.hodge.steps]
        return "\n".join(lines) + "\n"
    lines = [f"bigrading, dim {obj.ambient_dim}:"]
    lines += [f"  I^{{{i.p},{i.q}}} = {_span(sp.vectors)}" for i, sp in sorted(obj.pieces.items())]
    return "\n".join(lines) + "\n"


def _span(vectors) -> str:
    vs = list(vectors)
    if not vs:
        return "0"
    return "span{" + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in vs) + "}"


def _matrix_lines(m) -> list[str]:
    cells = [[str(x) for x in row] for row in m.entries]
    width = max((len(c) for row in cells for c in row), default=0)
    return ["  [ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells]


def _emit(obj, args, out: TextIO) -> None:
    doc = docs.to_document(obj)
    out.write(_pretty(doc) if getattr(args, "pretty", False) else docs.emit_document(doc))


# -- subcommands -----------------------------------------------------------------------


def cmd_validate_mhs(args, out):
    mhs = _load_mhs(args.input)
    report = validate_mhs(mhs.weight, mhs.hodge)
    _emit(_report("validate-mhs", report.ok, extra=report.to_dict()), args, out)
    return EXIT_OK if report.ok else EXIT_FALSE


def _validated(mhs: MixedHodgeStructure, command: str, args, out):
    report = validate_mhs(mhs.weight, mhs.hodge)
    if not report.ok:
        _emit(_report(command, False, reason="input is not a mixed Hodge structure", extra=report.to_dict()), args, out)
        return None
    return MixedHodgeStructure(mhs.weight, mhs.hodge, validated=True, report=report)


def cmd_split(args, out):
    mhs = _validated(_load_mhs(args.input), "split", args, out)
    if mhs is None:
        return EXIT_FALSE
    bg = deligne_splitting(mhs)
    if args.verify:
        report = verify_splitting(bg, mhs)
        _emit(_report("split", report.ok, splitting=docs.encode_bigrading(bg), extra=report.to_dict()), args, out)
        return EXIT_OK if report.ok else EXIT_FALSE
    _emit(bg, args, out)
    return EXIT_OK


def cmd_mhs2op(args, out):
    mhs = _validated(_load_mhs(args.input), "mhs2op", args, out)
    if mhs is None:
        return EXIT_FALSE
    _emit(operator_from_mhs(mhs), args, out)
    return EXIT_OK


def _certified(path: str, command: str, args, out):
    m = _load(path, ("matrix", "operator"))
    try:
        return certify_sigma_operator(m)
    except NotSigmaOperator as exc:
        spectrum = [{"p": i.p, "q": i.q, "dim": d} for i, d in sorted(exc.spectrum.items())]
        _emit(_report(command, False, message=str(exc), spectrum=spectrum, deficit=exc.deficit), args, out)
        return None


def cmd_op2mhs(args, out):
    op = _certified(args.input, "op2mhs", args, out)
    if op is None:
        return EXIT_FALSE
    try:
        mhs = mhs_from_operator(op)
    except NotPseudoReal as exc:
        _emit(_report("op2mhs", False, message=str(exc), verdict=exc.verdict.to_dict()), args, out)
        return EXIT_FALSE
    _emit(mhs, args, out)
    return EXIT_OK


def cmd_certify(args, out):
    op = _certified(args.input, "certify", args, out)
    if op is None:
        return EXIT_FALSE
    _emit(op, args, out)
    return EXIT_OK


def cmd_check_pseudoreal(args, out):
    op = _certified(args.input, "check-pseudoreal", args, out)
    if op is None:
        return EXIT_FALSE
    verdict = check_pseudo_real(op, args.mode)
    _emit(_report("check-pseudoreal", verdict.holds, extra=verdict.to_dict()), args, out)
    return EXIT_OK if verdict.holds else EXIT_FALSE


def cmd_equiv(args, out):
    a = _certified(args.a, "equiv", args, out)
    if a is None:
        return EXIT_FALSE
    b = _certified(args.b, "equiv", args, out)
    if b is None:
        return EXIT_FALSE
    test = weakly_equivalent if args.mode == "weak" else strongly_equivalent
    holds = test(a, b)
    _emit(_report("equiv", holds, mode=args.mode, equivalent=holds), args, out)
    return EXIT_OK if holds else EXIT_FALSE


def cmd_gen(args, out):
    profile = _load_profile(args.profile, _seed(args.seed))
    try:
        if args.flavor == "mhs":
            obj = random_mhs(profile)
        elif args.flavor == "bigrading":
            obj = random_split_bigrading(profile)
        else:
            obj = random_sigma_operator(profile, args.flavor)
    except ExhaustedRetries as exc:
        _emit(_report("gen", False, message=str(exc)), args, out)
        return EXIT_FALSE
    _emit(obj, args, out)
    return EXIT_OK


def roundtrip(profile: GenProfile, count: int) -> dict:
    """Run ``count`` MHS -> operator -> MHS -> operator round trips from consecutive seeds."""
    exact = 0
    failures = []
    for k in range(count):
        seed = profile.seed + k
        mhs = random_mhs(profile.with_seed(seed))
        op = operator_from_mhs(mhs)
        back = mhs_from_operator(op)
        ok = back.validated and back.same_as(mhs)
        if ok:
            ok = operator_from_mhs(back).matrix == op.matrix
        if ok:
            exact += 1
        else:
            failures.append(seed)
    return _report(
        "roundtrip",
        exact == count,
        message=f"{exact}/{count} round trips exact",
        exact=exact,
        count=count,
        failed_seeds=failures,
    )


def cmd_roundtrip(args, out):
    if args.count < 0:
        raise InputError("--count must be nonnegative")
    profile = _load_profile(args.profile, _seed(args.seed))
    report = roundtrip(profile, args.count)
    _emit(report, args, out)
    return EXIT_OK if report["ok"] else EXIT_FALSE


def _pair(text: str, cast, name: str):
    try:
        a, b = text.split(",")
        return cast(a), cast(b)
    except ValueError:
        raise InputError(f"{name} must look like A,B; got {text!r}") from None


def cmd_sigma_eval(args, out):
    re, im = _pair(args.z, float, "--z")
    params = TruncationParams(args.N, args.tol)
    z = complex(re, im)
    if args.lattice is not None:
        idx = _pair(args.lattice, int, "--lattice")
        ev = sigma_lambda_eval(z, idx, params)
        what = f"sigma_lambda[{idx[0]},{idx[1]}]"
    else:
        ev = sigma_eval(z, params)
        what = "sigma"
    _emit(
        _report(
            "sigma-eval",
            True,
            function=what,
            z=[re, im],
            N=args.N,
            value=[ev.value.real, ev.value.imag],
            abs=abs(ev.value),
            error_estimate=ev.error_estimate,
        ),
        args,
        out,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgesigma", description="Mixed Hodge structures and σ-operators in exact arithmetic.")
    parser.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    add("validate-mhs", cmd_validate_mhs, "check that filtrations form a mixed Hodge structure").add_argument("input")
    p = add("split", cmd_split, "Deligne splitting of a mixed Hodge structure")
    p.add_argument("input")
    p.add_argument("--verify", action="store_true", help="emit a report that also verifies the splitting identities")
    add("mhs2op", cmd_mhs2op, "strongly pseudo-real σ-operator of a mixed Hodge structure").add_argument("input")
    add("op2mhs", cmd_op2mhs, "mixed Hodge structure of a weakly pseudo-real σ-operator").add_argument("input")
    add("certify", cmd_certify, "certify a matrix as a σ-operator").add_argument("input")
    p = add("check-pseudoreal", cmd_check_pseudoreal, "decide weak or strong pseudo-reality")
    p.add_argument("input")
    p.add_argument("--mode", choices=("weak", "strong"), default="strong")
    p = add("equiv", cmd_equiv, "decide weak or strong equivalence of two σ-operators")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=("weak", "strong"), default="strong")
    p = add("gen", cmd_gen, "generate a random instance")
    p.add_argument("--profile", required=True, help="profile JSON file or a built-in profile name")
    p.add_argument("--seed", type=int)
    p.add_argument("--flavor", choices=("real", "strong", "weak_only", "mhs", "bigrading"), default="mhs")
    p = add("roundtrip", cmd_roundtrip, "check MHS <-> operator round trips on random instances")
    p.add_argument("--profile", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=100)
    p = add("sigma-eval", cmd_sigma_eval, "evaluate the Weierstrass σ-function numerically")
    p.add_argument("--z", required=True, help="RE,IM")
    p.add_argument("--N", type=int, default=40, help="truncation radius in index space")
    p.add_argument("--lattice", help="P,Q: evaluate σ(z)/(z - λ_{P,Q}) instead")
    p.add_argument("--tol", type=float, default=TruncationParams.target_tol, help="bound on the truncation error estimate")
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except SchemaError as exc:
        err.write(f"error: schema: {exc}\n")
    except (InputError, TruncationInsufficient, HodgeSigmaError, ValueError) as exc:
        err.write(f"error: {exc}\n")
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
