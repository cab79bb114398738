"""Command line front end: expand, verify, oracle.

Exit codes: 0 success/equal, 1 mismatch, 2 usage or configuration error,
3 budget or precision error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .coloring import FORMS, SETUPS, EnumerationLimitError, NonIntegralError, SymbolicOnlyError, get_setup
from .context import DEFAULT_QWINDOW, DEFAULT_TMAX, Context
from .oracle import BudgetExceeded, FieldError, FieldSpec, OracleError, run
from .oracle.counts import KINDS
from .series import ModeError, PrecisionError
from .variety import VarietySpec
from .verify import CATALOG, NumericOnlyError, VerifyOptions, verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str | None = None
    setup: str | None = None
    variety: str | None = None
    form: str = "first"
    q: str = "symbolic"
    tmax: int = DEFAULT_TMAX
    qwindow: int = DEFAULT_QWINDOW
    identity: str | None = None
    count: str | None = None
    n: int | None = None
    nmax: int = 3
    out: str | None = None
    budget: int | None = None
    workers: int = 1
    format: str = "json"
    matrix: str | None = None
    modulus: str | None = None
    timing: bool = True

    @property
    def q_value(self) -> int | None:
        if self.q is None or str(self.q).lower() == "symbolic":
            return None
        try:
            return int(self.q)
        except ValueError:
            raise ConfigError(f"--q must be 'symbolic' or an integer, got {self.q!r}") from None

    def validate(self):
        if self.command not in ("expand", "verify", "oracle"):
            raise ConfigError("command must be expand, verify or oracle")
        for name in ("tmax", "qwindow", "nmax"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.format not in ("json", "plain"):
            raise ConfigError("format must be json or plain")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        q = self.q_value
        if q is not None and q < 2:
            raise ConfigError("numeric q must be at least 2")
        if self.command == "expand":
            if self.form not in FORMS:
                raise ConfigError(f"form must be one of {', '.join(FORMS)}")
            if (self.setup or "standard") not in SETUPS:
                raise ConfigError(f"setup must be one of {', '.join(SETUPS)}")
        elif self.command == "verify":
            if not self.identity:
                raise ConfigError("verify needs --identity")
            if self.identity != "all" and self.identity not in CATALOG:
                raise ConfigError(f"unknown identity {self.identity!r}; choose from {', '.join(CATALOG)} or all")
        elif self.command == "oracle":
            if self.count not in KINDS:
                raise ConfigError(f"--count must be one of {', '.join(KINDS)}")
            if q is None:
                raise ConfigError("oracle needs a numeric --q")
            if self.count == "centralizer":
                if not self.matrix:
                    raise ConfigError("--count centralizer needs --matrix")
            elif self.n is None:
                raise ConfigError("oracle needs --n")


def parse_matrix(text: str) -> list[list[int]]:
    """'1,1;0,1' -> [[1,1],[0,1]]."""
    try:
        return [[int(x) for x in row.split(",")] for row in text.strip().split(";")]
    except ValueError:
        raise ConfigError(f"bad matrix {text!r}; use rows separated by ';', entries by ','") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coloring-zeta", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", default=S, help="JSON file with job fields; flags override it")
    common.add_argument("--q", default=S, help="'symbolic' or an integer")
    common.add_argument("--tmax", type=int, default=S, help="T-cap")
    common.add_argument("--qwindow", type=int, default=S, help="q-expansion width")
    common.add_argument("--out", default=S, help="write the output here instead of stdout")
    common.add_argument("--format", choices=("json", "plain"), default=S)
    common.add_argument("--budget", type=int, default=S, help="max matrices per enumeration")
    common.add_argument("--workers", type=int, default=S, help="worker processes for enumerations")

    e = sub.add_parser("expand", parents=[common], help="expand Z_C(X,t,T)")
    e.add_argument("--setup", default=S, help=" | ".join(SETUPS))
    e.add_argument("--variety", default=S, help="point | ga | gm | poly:c0,c1,...")
    e.add_argument("--form", default=S, help=" | ".join(FORMS))

    v = sub.add_parser("verify", parents=[common], help="check an identity")
    v.add_argument("--identity", default=S, help=" | ".join(CATALOG) + " | all")
    v.add_argument("--nmax", type=int, default=S, help="largest n for oracle comparisons")
    v.add_argument("--setup", default=S, help="restrict forms-agree to one setup")
    v.add_argument("--variety", default=S, help="restrict forms-agree to one variety")

    o = sub.add_parser("oracle", parents=[common], help="brute-force counts over F_q")
    o.add_argument("--count", default=S, help=" | ".join(KINDS))
    o.add_argument("--n", type=int, default=S)
    o.add_argument("--matrix", default=S, help="for --count centralizer: '1,1;0,1'")
    o.add_argument("--modulus", default=S, help="irreducible modulus c0,c1,...,1 for extension fields")
    o.add_argument("--no-timing", dest="timing", action="store_false", default=S,
                   help="omit elapsed_ms so output is byte-stable")
    return p


def load_config(argv) -> JobConfig:
    args = vars(build_parser().parse_args(argv))
    data: dict = {}
    if "config" in args:
        path = Path(args.pop("config"))
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(JobConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    data.update({k: v for k, v in args.items() if v is not None})
    if data.get("command") is None:
        raise ConfigError("choose a command: expand, verify or oracle")
    if "q" in data and data["q"] is not None:
        data["q"] = str(data["q"])
    cfg = JobConfig(**data)
    cfg.validate()
    return cfg


# -- commands ---------------------------------------------------------------------


def cmd_expand(cfg: JobConfig):
    ctx = Context(q=cfg.q_value, tmax=cfg.tmax, qwindow=cfg.qwindow)
    setup = get_setup(cfg.setup or "standard")
    variety = VarietySpec.parse(cfg.variety or "point")
    z = FORMS[cfg.form](setup, variety, ctx)
    if cfg.format == "plain":
        text = z.format()
    else:
        doc = {"setup": setup.name, "variety": variety.name, "form": cfg.form, "series": z.to_json()}
        text = _dumps(doc)
    return text, EXIT_OK


def cmd_verify(cfg: JobConfig):
    opts = VerifyOptions(
        q=cfg.q_value,
        tmax=cfg.tmax,
        qwindow=cfg.qwindow,
        nmax=cfg.nmax,
        setup=cfg.setup,
        variety=cfg.variety,
        budget=cfg.budget,
        workers=cfg.workers,
    )
    if cfg.identity != "all":
        rep = verify(cfg.identity, opts)
        code = EXIT_OK if rep.ok else EXIT_MISMATCH
        text = f"{rep.identity}: {rep.status}" if cfg.format == "plain" else _dumps(rep.to_json())
        return text, code
    docs = []
    code = EXIT_OK
    for name in CATALOG:
        try:
            rep = verify(name, opts)
        except (SymbolicOnlyError, NumericOnlyError) as exc:
            docs.append({"identity": name, "status": "skipped", "reason": str(exc)})
            continue
        docs.append(rep.to_json())
        if not rep.ok:
            code = EXIT_MISMATCH
    if cfg.format == "plain":
        return "\n".join(f"{d['identity']}: {d['status']}" for d in docs), code
    return _dumps({"reports": docs}), code


def cmd_oracle(cfg: JobConfig):
    q = cfg.q_value
    modulus = tuple(int(c) for c in cfg.modulus.split(",")) if cfg.modulus else None
    spec = FieldSpec.of_order(q, modulus)
    matrix = parse_matrix(cfg.matrix) if cfg.matrix else None
    n = len(matrix) if matrix is not None else cfg.n
    res = run(cfg.count, n, spec, matrix=matrix, budget=cfg.budget, workers=cfg.workers)
    if cfg.format == "plain":
        return f"{res.kind} n={res.n} q={res.q}: {res.count}", EXIT_OK
    return _dumps(res.to_json(timing=cfg.timing)), EXIT_OK


COMMANDS = {"expand": cmd_expand, "verify": cmd_verify, "oracle": cmd_oracle}


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def _error(kind: str, exc: Exception, code: int) -> int:
    print(_dumps({"error": kind, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        cfg = load_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0) and EXIT_USAGE
    except (ConfigError, TypeError) as exc:
        return _error("config", exc, EXIT_USAGE)
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except (BudgetExceeded, PrecisionError, EnumerationLimitError) as exc:
        return _error("budget" if isinstance(exc, BudgetExceeded) else "precision", exc, EXIT_BUDGET)
    except (
        ConfigError,
        SymbolicOnlyError,
        NumericOnlyError,
        NonIntegralError,
        FieldError,
        OracleError,
        ModeError,
        KeyError,
        ValueError,
        ZeroDivisionError,
    ) as exc:
        return _error("usage", exc, EXIT_USAGE)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
