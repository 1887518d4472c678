"""Command-line front end; every subcommand emits a versioned JSON report."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import arith
from .curve import AffinePoint, parse_curve
from .descent import delta_divisor, two_torsion_image
from .errors import HyptwistError
from .ffsearch import AffineFormFF, find_mu, positivity_count
from .places import classify_bad_primes, default_bound, genericity_deficiencies, genericity_scan, multiplicative_primes
from .selmer import fake_selmer_upper
from .twistforge import INCONCLUSIVE, forge_cocycle, simple_twist_scan, verify_certificate

SCHEMA = "hyptwist-report/1"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

COMMANDS = ("classify", "genericity", "descent", "selmer-bound", "twist-scan", "forge", "ff-oracle", "verify")


@dataclass
class RunConfig:
    command: str
    curve: Optional[str] = None
    B: Optional[int] = None
    box: int = 10
    t: int = 1
    point: Optional[str] = None
    effort: int = arith.DEFAULT_EFFORT
    seed: int = arith.DEFAULT_SEED
    out: Optional[str] = None
    rigorous: bool = True
    real_condition: bool = True
    w: Optional[int] = None
    q: Optional[int] = None
    forms: Optional[str] = None
    eps: Optional[str] = None
    report: Optional[str] = None
    extras: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.effort <= 0 or self.box < 0:
            raise UsageError("budgets must be positive")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyptwist", description="2-descent and rank-one twists of odd-degree hyperelliptic Jacobians.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--curve", help='roots, e.g. "[0,1,3]"')
    p.add_argument("--B", type=int, help="lower bound for genericity primes")
    p.add_argument("--box", type=int, default=10, help="scan |n| <= box, 1 <= m <= box")
    p.add_argument("--t", type=int, default=1, help="twist parameter")
    p.add_argument("--point", help='rational point "x,y" on t*y^2 = f(x)')
    p.add_argument("--effort", type=int, default=arith.DEFAULT_EFFORT)
    p.add_argument("--seed", type=int, default=arith.DEFAULT_SEED)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--rigorous", dest="rigorous", action="store_true", default=True)
    mode.add_argument("--heuristic", dest="rigorous", action="store_false")
    p.add_argument("--no-real-condition", dest="real_condition", action="store_false")
    p.add_argument("--w", type=int, help="multiplicative prime for forge")
    p.add_argument("--q", type=int, help="field size for ff-oracle")
    p.add_argument("--forms", help='affine forms "alpha:beta,alpha:beta"')
    p.add_argument("--eps", help='targets "e1,e2"')
    p.add_argument("--report", help="report file for verify")
    return p


def _parse_point(text: str) -> AffinePoint:
    x, y = (Fraction(s.strip()) for s in text.split(","))
    return AffinePoint(x, y)


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command} requires --{', --'.join(missing)}")


def _classify(cfg):
    C = parse_curve(cfg.curve)
    return {"curve": list(C.roots), "genus": C.genus,
            "primes": {str(pc.prime): str(pc) for pc in classify_bad_primes(C)}}, False


def _genericity(cfg):
    C = parse_curve(cfg.curve)
    B = cfg.B if cfg.B is not None else default_bound(C)
    wit = genericity_scan(C, B)
    out = {"curve": list(C.roots), "B": B, "B_overridden": cfg.B is not None,
           "witness": wit.to_json() if wit else None,
           "valid": wit.validate(C) if wit else None,
           "deficiencies": [str(d) for d in genericity_deficiencies(C, B)],
           "types": {f"{i},{j}": ps for (i, j), ps in sorted(multiplicative_primes(C).items())}}
    return out, False


def _descent(cfg):
    C = parse_curve(cfg.curve)
    out = {"curve": list(C.roots), "t": arith.square_class(cfg.t),
           "two_torsion": [z.to_json() for z in two_torsion_image(C, cfg.t)]}
    if cfg.point:
        out["point"] = delta_divisor(C, cfg.t, _parse_point(cfg.point)).to_json()
    return out, False


def _selmer(cfg):
    C = parse_curve(cfg.curve)
    S = fake_selmer_upper(C, cfg.t, cfg.real_condition)
    out = S.to_json()
    out["curve"] = list(C.roots)
    out["conditions"] = [c.to_json() for c in S.conditions]
    return out, False


def _scan(cfg):
    C = parse_curve(cfg.curve)
    certs = simple_twist_scan(C, cfg.box, max(cfg.box, 1), cfg.real_condition)
    records = [c.to_json() for c in certs]
    inconclusive = all(c.verdict == INCONCLUSIVE for c in certs)
    return {"curve": list(C.roots), "box": cfg.box, "certificates": records}, inconclusive


def _forge(cfg):
    C = parse_curve(cfg.curve)
    ws = [cfg.w] if cfg.w else sorted(p for ps in multiplicative_primes(C).values() for p in ps)
    results = []
    for w in ws:
        fc = forge_cocycle(C, w)
        rec = fc.to_json()
        rec["rigor"] = "exact"
        results.append(rec)
    return {"curve": list(C.roots), "cocycles": results}, not results


def _ff(cfg):
    _need(cfg, "q", "forms", "eps")
    forms = []
    for chunk in cfg.forms.split(","):
        a, b = chunk.split(":")
        forms.append(AffineFormFF(int(a), int(b)))
    eps = [int(e) for e in cfg.eps.split(",")]
    count = positivity_count(cfg.q, forms, eps)
    mu = find_mu(cfg.q, forms, eps) if count else None
    return {"q": cfg.q, "positivity_count": count, "mu": mu}, mu is None


def _verify(cfg):
    _need(cfg, "report")
    with open(cfg.report) as fh:
        rep = json.load(fh)
    records = rep.get("result", {}).get("certificates", [])
    results = [verify_certificate(r, cfg.real_condition) for r in records]
    return {"checked": len(results), "agree": all(results), "per_certificate": results}, False


HANDLERS = {
    "classify": _classify, "genericity": _genericity, "descent": _descent, "selmer-bound": _selmer,
    "twist-scan": _scan, "forge": _forge, "ff-oracle": _ff, "verify": _verify,
}


def _summary(cmd: str, result: dict) -> str:
    if cmd == "twist-scan":
        return f"{len(result['certificates'])} twist classes scanned"
    if cmd == "verify":
        return f"verified {result['checked']} certificates: {'agree' if result['agree'] else 'DISAGREE'}"
    return f"{cmd}: done"


def _usage(parser, exc) -> int:
    print(f"usage error: {exc}", file=sys.stderr)
    print(parser.format_usage(), file=sys.stderr)
    print(f"report schema: {SCHEMA} {{schema, command, seed, config, result}}", file=sys.stderr)
    return EXIT_USAGE


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
        cfg.validate()
        if cfg.command not in ("ff-oracle", "verify"):
            _need(cfg, "curve")
    except UsageError as exc:
        return _usage(parser, exc)
    previous = arith.configure(effort=cfg.effort, seed=cfg.seed)
    try:
        result, inconclusive = HANDLERS[cfg.command](cfg)
        code = EXIT_INCONCLUSIVE if inconclusive else EXIT_OK
        if cfg.command == "verify" and not result["agree"]:
            code = EXIT_ERROR
    except UsageError as exc:
        return _usage(parser, exc)
    except (HyptwistError, ValueError, OSError) as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_ERROR
    finally:
        arith.configure(**previous)
    config = {k: v for k, v in asdict(cfg).items() if k not in ("extras", "out")}
    report = {"schema": SCHEMA, "command": cfg.command, "seed": cfg.seed, "config": config, "result": result}
    text = json.dumps(report, sort_keys=True, indent=2)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
        print(_summary(cfg.command, result) if code != EXIT_ERROR else result["message"], file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
