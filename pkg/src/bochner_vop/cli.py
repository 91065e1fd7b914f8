"""Command-line interface.

Exit codes: 0 success, 1 an identity failed, 2 usage or spec error,
3 arithmetic failure while computing.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import __version__, catalog
from .errors import IdentityViolation, SpecError, VOPError
from .exact import poly_latex
from .family import (
    Family,
    FamilySpec,
    Kind,
    VerificationReport,
    CheckResult,
    check_eigen,
    check_ladder,
    check_operator_identities,
    check_rodrigues,
    generate,
)
from .mellin import correspondence
from .recurrence import (
    DEFAULT_HOLDOUT,
    closed_form_mismatches,
    extract,
    fit,
    infer_d,
    reconstruction_failures,
    van_iseghem_violations,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ARITH = 0, 1, 2, 3

ALL_CHECKS = (
    "eigen",
    "ladder",
    "rodrigues",
    "operators",
    "recurrence",
    "bandwidth",
    "closed_form",
    "mellin",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    spec_file: Optional[str] = None
    preset: Optional[str] = None
    params: dict = field(default_factory=dict)
    max_n: Optional[int] = None
    fmt: str = "json"
    output: Optional[str] = None
    checks: tuple = ALL_CHECKS
    jobs: int = 1
    holdout: int = DEFAULT_HOLDOUT
    with_metadata: bool = False
    catalog_action: Optional[str] = None

    def __post_init__(self):
        if self.max_n is not None and self.max_n < 0:
            raise UsageError("--max-n must be >= 0")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")


def _parse_params(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _add_source(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog", metavar="NAME", help="preset name (see `catalog list`)")
    src.add_argument("--spec", metavar="FILE", help="family spec JSON file")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="preset parameter as a rational, repeatable")
    p.add_argument("--max-n", type=int, default=None, help="largest index N")
    p.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for per-n work")
    p.add_argument("--with-metadata", action="store_true",
                   help="wrap the payload with a metadata block (timestamp, version)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bochner-vop", description="Exact vector orthogonal polynomial families.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate P_0 .. P_N")
    _add_source(g)
    g.add_argument("--format", choices=("json", "latex"), default="json")

    v = sub.add_parser("verify", help="check the identities of a family")
    _add_source(v)
    v.add_argument("--checks", default=",".join(ALL_CHECKS),
                   help=f"comma-separated subset of {','.join(ALL_CHECKS)}")

    r = sub.add_parser("recurrence", help="extract and fit the recurrence")
    _add_source(r)
    r.add_argument("--format", choices=("json", "csv", "latex"), default="json")
    r.add_argument("--holdout", type=int, default=DEFAULT_HOLDOUT)

    t = sub.add_parser("transform", help="map a continuous family to its discrete counterpart")
    _add_source(t)

    c = sub.add_parser("catalog", help="list or show presets")
    csub = c.add_subparsers(dest="catalog_action", required=True, parser_class=_Parser)
    csub.add_parser("list")
    show = csub.add_parser("show")
    show.add_argument("name")
    show.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    show.add_argument("--max-n", type=int, default=None)
    c.add_argument("--output", "-o", default=None)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    checks = ALL_CHECKS
    if getattr(ns, "checks", None):
        checks = tuple(s.strip() for s in ns.checks.split(",") if s.strip())
        unknown = [c for c in checks if c not in ALL_CHECKS]
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(unknown)}")
    preset = getattr(ns, "catalog", None)
    if ns.subcommand == "catalog" and ns.catalog_action == "show":
        preset = ns.name
    return RunConfig(
        subcommand=ns.subcommand,
        spec_file=getattr(ns, "spec", None),
        preset=preset,
        params=_parse_params(getattr(ns, "param", [])),
        max_n=getattr(ns, "max_n", None),
        fmt=getattr(ns, "format", "json"),
        output=getattr(ns, "output", None),
        checks=checks,
        jobs=getattr(ns, "jobs", 1),
        holdout=getattr(ns, "holdout", DEFAULT_HOLDOUT),
        with_metadata=getattr(ns, "with_metadata", False),
        catalog_action=getattr(ns, "catalog_action", None),
    )


# ---------------------------------------------------------------------------
# helpers


def load_spec(cfg: RunConfig) -> FamilySpec:
    if cfg.spec_file is not None:
        try:
            with open(cfg.spec_file, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read spec file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise SpecError("spec file must hold a JSON object")
        spec = FamilySpec.from_json(data)
        return spec if cfg.max_n is None else spec.with_max_n(cfg.max_n)
    return catalog.instantiate(cfg.preset, cfg.params, cfg.max_n)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _wrap(cfg: RunConfig, payload):
    if not cfg.with_metadata:
        return payload
    return {
        "result": payload,
        "metadata": {
            "tool": "bochner-vop",
            "version": __version__,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        },
    }


def emit(cfg: RunConfig, text: str):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def family_latex(fam: Family) -> str:
    falling = fam.spec.kind is Kind.DISCRETE
    lines = []
    for n, p in enumerate(fam.polys):
        body = poly_latex(fam.falling_factorial(n) if falling else p, "x", falling=falling)
        lines.append(f"P_{{{n}}}(x) &= {body}")
    return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}\n"


# ---------------------------------------------------------------------------
# commands


def cmd_generate(cfg: RunConfig) -> int:
    spec = load_spec(cfg)
    try:
        fam = generate(spec, jobs=cfg.jobs)
    except (VOPError, ArithmeticError) as exc:
        if isinstance(exc, SpecError):
            raise
        return _error(exc, EXIT_ARITH)
    if cfg.fmt == "latex":
        emit(cfg, family_latex(fam))
    else:
        emit(cfg, dumps(_wrap(cfg, fam.to_json())))
    return EXIT_OK


def run_checks(fam: Family, checks: Sequence[str] = ALL_CHECKS) -> VerificationReport:
    spec = fam.spec
    report = VerificationReport()
    if "eigen" in checks:
        report.merge(check_eigen(fam))
    if "ladder" in checks:
        report.merge(check_ladder(fam))
    if "rodrigues" in checks:
        report.merge(check_rodrigues(fam))
    if "operators" in checks:
        report.merge(check_operator_identities(fam))
    table = extract(fam) if fam.N >= 2 and {"recurrence", "bandwidth", "closed_form"} & set(checks) else None
    if table is not None and "recurrence" in checks:
        res = CheckResult("recurrence_reconstruction", checked=table.N)
        bad = reconstruction_failures(table, fam)
        if bad:
            res.fail(bad[0])
        report.add(res)
    if table is not None and "bandwidth" in checks:
        res = CheckResult("bandwidth", checked=1)
        try:
            infer_d(table, spec)
        except IdentityViolation:
            res.fail(0)
        report.add(res)
        vi = CheckResult("van_iseghem", checked=table.N)
        bad = van_iseghem_violations(table)
        if bad:
            vi.fail(bad[0])
        report.add(vi)
    if table is not None and "closed_form" in checks and spec.q.degree == 1:
        res = CheckResult("closed_form_qG", checked=table.N)
        bad = closed_form_mismatches(spec, table)
        if bad:
            res.fail(bad[0])
        report.add(res)
    if "mellin" in checks and spec.kind is Kind.CONTINUOUS:
        _, corr = correspondence(fam)
        res = CheckResult("mellin_correspondence", checked=len(corr.verdicts))
        bad = [n for n, ok in enumerate(corr.verdicts) if not ok]
        if bad:
            res.fail(bad[0])
        elif not corr.passed:
            res.fail(corr.g_recurrence_failures[0] if corr.g_recurrence_failures else 0)
        report.add(res)
    return report


def cmd_verify(cfg: RunConfig) -> int:
    spec = load_spec(cfg)
    fam = generate(spec, jobs=cfg.jobs)
    report = run_checks(fam, cfg.checks)
    payload = {"spec": spec.to_json(), **report.to_json()}
    emit(cfg, dumps(_wrap(cfg, payload)))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_recurrence(cfg: RunConfig) -> int:
    spec = load_spec(cfg)
    fam = generate(spec, jobs=cfg.jobs)
    table = extract(fam, jobs=cfg.jobs)
    if cfg.fmt == "csv":
        emit(cfg, table.to_csv())
        return EXIT_OK
    form = fit(table, cfg.holdout)
    infer_d(form, spec)
    if cfg.fmt == "latex":
        emit(cfg, "\\[\n" + form.to_latex() + "\n\\]\n")
    else:
        emit(cfg, dumps(_wrap(cfg, form.to_json())))
    return EXIT_OK


def cmd_transform(cfg: RunConfig) -> int:
    spec = load_spec(cfg)
    if spec.kind is not Kind.CONTINUOUS:
        raise UsageError("transform needs a continuous spec")
    cont = generate(spec, jobs=cfg.jobs)
    disc, report = correspondence(cont, jobs=cfg.jobs)
    payload = {
        "continuous": cont.to_json(),
        "discrete": disc.to_json(),
        "correspondence": report.to_json(),
    }
    emit(cfg, dumps(_wrap(cfg, payload)))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_catalog(cfg: RunConfig) -> int:
    if cfg.catalog_action == "list":
        emit(cfg, dumps(catalog.listing()))
    else:
        emit(cfg, dumps(catalog.show(cfg.preset, cfg.params, cfg.max_n)))
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "recurrence": cmd_recurrence,
    "transform": cmd_transform,
    "catalog": cmd_catalog,
}


def _error(exc: BaseException, code: int) -> int:
    sys.stderr.write(
        json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n"
    )
    return code


def classify(exc: BaseException) -> int:
    if isinstance(exc, (UsageError, SpecError)):
        return EXIT_USAGE
    if isinstance(exc, IdentityViolation):
        return EXIT_FAIL
    if isinstance(exc, ArithmeticError):
        return EXIT_ARITH
    if isinstance(exc, (ValueError, TypeError, KeyError)):
        return EXIT_USAGE
    return EXIT_ARITH


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = config_from_args(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except (UsageError, VOPError, ArithmeticError, ValueError, TypeError, KeyError) as exc:
        return _error(exc, classify(exc))


if __name__ == "__main__":
    sys.exit(main())
