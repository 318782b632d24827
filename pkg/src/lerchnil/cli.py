"""Command-line driver: eval, verify, zak, spectrum.

Exit codes: 0 success or all checks pass, 1 a verification failed,
2 usage error.  LERCH_THREADS caps the worker pool used for tau scans.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import constants as K
from .characters import DirichletCharacter, enumerate_characters, principal_character, restrict
from .functional_eq import lerch_nil
from .lerch import LerchPoint, lerch_l
from .linefunctions import from_name
from .nilmanifold import dump_csv
from .spectral import delta_L_eigen_residual, mellin_many, multiplier_table
from .verify import DELTA_GRID, SUITES, all_pass, default_character, run_suite
from .weil_brezin import additive_brezin, wb_map

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    format: str = "json"
    tolerance: Optional[float] = None
    seed: int = K.SEED

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {self.format!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerance must be positive")


# -- parsing helpers --------------------------------------------------------

def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_sign(text: str) -> int:
    if text in ("+", "+1", "1", "plus"):
        return 1
    if text in ("-", "-1", "minus"):
        return -1
    raise UsageError(f"sign must be + or -, got {text!r}")


def parse_character(text: Optional[str], d: int) -> DirichletCharacter:
    """'principal', an index into enumerate_characters(d), or 'modulus:index'."""
    if text is None or text == "principal":
        return principal_character(d)
    if ":" in text:
        mod, _, text = text.partition(":")
        try:
            d = int(mod)
        except ValueError:
            raise UsageError(f"bad character modulus in {mod!r}") from None
        if d <= 0:
            raise UsageError("character modulus must be positive")
    try:
        i = int(text)
    except ValueError:
        raise UsageError(f"character must be 'principal' or an integer index, got {text!r}") from None
    chars = enumerate_characters(d)
    if not 0 <= i < len(chars):
        raise UsageError(f"character index {i} out of range for modulus {d} ({len(chars)} characters)")
    return chars[i]


def parse_tau(text: str) -> np.ndarray:
    """'lo:hi:step' (inclusive), a comma list, or a single value."""
    if ":" in text:
        try:
            lo, hi, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise UsageError(f"tau range must be lo:hi:step, got {text!r}") from None
        if step <= 0:
            raise UsageError("tau step must be positive")
        if hi < lo:
            return np.array([])
        n = int(math.floor((hi - lo) / step + 1e-9))
        return lo + step * np.arange(n + 1)
    try:
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise UsageError(f"cannot parse tau values {text!r}") from None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LERCH_THREADS", "1")))
    except ValueError:
        return 1


def _profile(name: str):
    try:
        return from_name(name)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: float) -> Any:
    x = float(x)
    return x if math.isfinite(x) else str(x)


# -- commands ---------------------------------------------------------------

def cmd_eval(cfg: RunConfig) -> tuple:
    p = cfg.params
    N, d = p["N"], p["d"]
    if N == 0:
        raise UsageError("N must be nonzero")
    if d <= 0 or abs(N) % d:
        raise UsageError("d must divide |N|")
    chi = parse_character(p.get("chi"), d)
    s = parse_complex(p["s"])
    point = LerchPoint(parse_sign(p["sign"]), N, d, chi, s, p["a"], p["c"], p["z"])
    r = lerch_l(point)
    rec = {"s": [s.real, s.imag], "a": p["a"], "c": p["c"], "z": p["z"], "re": _num(r.value.real),
           "im": _num(r.value.imag), "est_error": _num(r.est_error), "pole_flag": r.pole_flag}
    if cfg.format == "csv":
        out = _csv(["s_re", "s_im", "a", "c", "z", "re", "im", "est_error", "pole_flag"],
                   [[s.real, s.imag, p["a"], p["c"], p["z"], rec["re"], rec["im"], rec["est_error"],
                     int(r.pole_flag)]])
    else:
        out = json.dumps(rec, sort_keys=True) + "\n"
    return out, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple:
    p = dict(cfg.params)
    suite = p.pop("suite")
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    kw: Dict[str, Any] = {k: v for k, v in p.items() if v is not None}
    if "chi" in kw:
        d = kw.get("d") or abs(kw.get("N", 1))
        kw["chi"] = parse_character(kw["chi"], d)
        if not kw["chi"].is_primitive and suite in ("fe", "intertwine"):
            raise UsageError("fe and intertwine take a primitive core character, e.g. --chi 3:1")
    if cfg.tolerance is not None:
        kw["tol"] = cfg.tolerance
    kw["seed"] = cfg.seed
    rows = run_suite(suite, **kw)
    ok = all_pass(rows)
    if cfg.format == "csv":
        out = _csv(["identity", "parameters", "residual", "tolerance", "pass"],
                   [[r["identity"], json.dumps(r["parameters"], sort_keys=True), repr(r["residual"]),
                     r["tolerance"], int(r["pass"])] for r in rows])
    else:
        out = json.dumps({"suite": suite, "seed": cfg.seed, "all_pass": ok, "reports": rows},
                         sort_keys=True, indent=1) + "\n"
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_zak(cfg: RunConfig) -> tuple:
    p = cfg.params
    n = p["grid"]
    if n is None or n <= 0:
        raise UsageError("grid must be a positive integer")
    f = _profile(p["profile"])
    N = p["N"]
    if p["additive"]:
        if N <= 0 or not 0 <= p["k"] < N:
            raise UsageError("additive maps need N >= 1 and 0 <= k < N")
        F = additive_brezin(f, N, p["k"])
    else:
        d = p["d"]
        if N == 0 or d <= 0 or abs(N) % d:
            raise UsageError("d must divide |N|")
        F = wb_map(f, N, d, parse_character(p.get("chi"), d))
    u = np.arange(n) / n
    return dump_csv(F, u, u), EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> tuple:
    p = cfg.params
    taus = parse_tau(p["tau"])
    op = p["op"]
    if op == "D":
        f = _profile(p["profile"])
        rows = [[k, repr(t), repr(r)] for k, t, r in multiplier_table(f, taus)] if taus.size else []
        return _csv(["k", "tau", "multiplier_residual"], rows), EXIT_OK
    if op == "mellin":
        f = _profile(p["profile"])
        rows = []
        for k in (0, 1):
            if taus.size:
                vals, _ = mellin_many(f, k, 0.5 + 1j * taus)
                rows.extend([k, repr(float(t)), repr(v.real), repr(v.imag)] for t, v in zip(taus, vals))
        return _csv(["k", "tau", "re", "im"], rows), EXIT_OK
    if op == "deltaL":
        N = p["N"]
        if N == 0:
            raise UsageError("N must be nonzero")
        d, core = default_character(N)
        chi = restrict(core, d)

        def one(args):
            sign, t = args
            s = 0.5 + 1j * t
            res = delta_L_eigen_residual(lerch_nil(sign, N, d, chi, s), -N * (s - 0.5), DELTA_GRID)
            return [sign, repr(float(t)), repr(res)]

        jobs = [(sign, t) for sign in (1, -1) for t in taus]
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            rows = list(pool.map(one, jobs))
        return _csv(["sign", "tau", "eigen_residual"], rows), EXIT_OK
    raise UsageError(f"unknown spectrum op {op!r}")


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "zak": cmd_zak, "spectrum": cmd_spectrum}


# -- argparse ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=K.SEED)
    common.add_argument("--tol", type=float, default=None)

    ap = _Parser(prog="lerchnil", description="Lerch L-functions on the Heisenberg nilmanifold")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", parents=[common], help="evaluate L^{+-}_{N,d}(chi, s, a, c, z)")
    ev.add_argument("--N", type=int, default=1)
    ev.add_argument("--d", type=int, default=1)
    ev.add_argument("--chi", default="principal")
    ev.add_argument("--sign", default="+")
    ev.add_argument("--s", required=True)
    ev.add_argument("--a", type=float, required=True)
    ev.add_argument("--c", type=float, required=True)
    ev.add_argument("--z", type=float, default=0.0)

    vf = sub.add_parser("verify", parents=[common], help="run a verification suite")
    vf.add_argument("suite", help=", ".join(SUITES))
    vf.add_argument("--N", type=int, default=None)
    vf.add_argument("--d", type=int, default=None)
    vf.add_argument("--chi", default=None, help="index of the character (primitive core for fe/intertwine)")
    vf.add_argument("--m", type=int, default=None)
    vf.add_argument("--form", choices=("derived", "printed"), default=None)

    zk = sub.add_parser("zak", parents=[common], help="dump a Weil-Brezin image on a grid")
    zk.add_argument("--profile", default="gaussian:1")
    zk.add_argument("--N", type=int, default=1)
    zk.add_argument("--d", type=int, default=1)
    zk.add_argument("--chi", default="principal")
    zk.add_argument("--additive", action="store_true")
    zk.add_argument("--k", type=int, default=0)
    zk.add_argument("--grid", type=int, default=32)

    sp = sub.add_parser("spectrum", parents=[common], help="Mellin tables and Delta_L residuals over tau")
    sp.add_argument("--op", choices=("D", "mellin", "deltaL"), default="D")
    sp.add_argument("--profile", default="gaussian:1")
    sp.add_argument("--tau", default="-5:5:0.5")
    sp.add_argument("--N", type=int, default=1)
    return ap


def _config(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "format", "out", "seed", "tol")}
    return RunConfig(ns.command, params, ns.format, ns.tol, ns.seed)


_VALUE_FLAGS = ("--tau", "--s", "--a", "--c", "--z", "--N")


def _glue_negative(argv: List[str]) -> List[str]:
    """Let '--tau -5:5:1' or '--a -0.3' through argparse by gluing them as '--flag=value'."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = build_parser().parse_args(argv)
        cfg = _config(ns)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # domain errors from the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the shutdown flush too
            sys.stdout = open(os.devnull, "w")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
