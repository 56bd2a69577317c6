"""Command-line front end: ``asai-padic verify | factor | measure``.

Every command builds a RunReport. With ``--json`` the report is printed as
JSON (and validated against the shipped schema); otherwise a table is
printed. The exit status is 0 exactly when every non-informational check
passed (known failures count as passes unless ``--strict``).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence

import jsonschema

from .characters import FiniteOrderCharacter, HeckeCharacterModel, conductor
from .errors import ArtifactError, InvalidInput, PoleAtS, UnsupportedCase
from .exact_arith import CyclotomicElement, PadicContext, RootOfUnity, eval_rational_function
from .iwasawa_measure import (
    AuxiliaryData,
    FiniteLevelMeasure,
    InterpolationData,
    LpConstants,
    ProjectiveMeasure,
    RayClassLevel,
    build_Lp,
    distribution_check,
    encode_digits,
    evaluate_at_character,
    hypothesis_violations,
    interpolation_rhs,
    lp_explicit_value,
    synth_distribution,
    tw_p,
)
from .local_factors import (
    SatakePlaceData,
    asai_blocks,
    asai_L_factor,
    blocks_gamma_factor,
    encode_value,
    modified_euler_factor_p,
    modified_euler_infty,
    modified_euler_p,
)
from .verification import SUITES, Row, VerifyConfig, backend, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


# ---------------------------------------------------------------------------
# schemas and input files


def load_schema(name: str) -> dict:
    text = resources.files("asai_padic").joinpath("data", "schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def sample_path(name: str):
    return resources.files("asai_padic").joinpath("data", "samples", name)


def _pointer(path: Sequence) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate(doc, schema_name: str, source: str = "<input>") -> None:
    """Raise InvalidInput naming the JSON pointer of the most relevant violation."""
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        ptr = _pointer(err.absolute_path)
        raise InvalidInput(f"{source}{ptr}: {err.message}", pointer=ptr, file=source, schema=schema_name)


def read_json(path: str, schema_name: str):
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}", file=path) from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not JSON ({exc.msg} at line {exc.lineno})", file=path) from exc
    validate(doc, schema_name, path)
    return doc, raw.encode()


def read_character(path: str):
    doc, raw = read_json(path, "character")
    if "finite_part" in doc:
        return HeckeCharacterModel.from_dict(doc), raw
    return FiniteOrderCharacter.from_dict(doc), raw


def read_measure(path: str):
    doc, raw = read_json(path, "measure")
    return ProjectiveMeasure.from_dict(doc), raw


def write_measure(mu: ProjectiveMeasure, path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    doc = mu.to_dict()
    validate(doc, "measure", path)
    with open(path, "w") as fh:
        fh.write(mu.to_json())
        fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# run report


@dataclass
class RunReport:
    """What a command did: inputs digest, per-check status, values and timing.

    Apart from ``timing`` the report is a function of the inputs and seed.
    """

    command: List[str]
    inputs: List[bytes] = field(default_factory=list)
    seed: Optional[int] = None
    checks: List[dict] = field(default_factory=list)
    values: Dict[str, object] = field(default_factory=dict)
    errors: List[dict] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        for chunk in [" ".join(self.command).encode(), *self.inputs]:
            h.update(hashlib.sha256(chunk).digest())
        return h.hexdigest()

    def add_row(self, row: Row) -> None:
        self.checks.append(row.to_dict())

    def add_check(self, check: str, ok: Optional[bool], residual=None, tolerance=None, note: str = "",
                  known: bool = False, **params) -> None:
        if ok is None:
            status = "info"
        elif ok:
            status = "pass"
        else:
            status = "known-fail" if known else "FAIL"
        self.checks.append({"check": check, "params": params, "residual": residual, "tolerance": tolerance,
                            "status": status, "note": note})

    def ok(self, strict: bool = False) -> bool:
        if self.errors:
            return False
        bad = {"FAIL", "known-fail"} if strict else {"FAIL"}
        return not any(c["status"] in bad for c in self.checks)

    def to_dict(self, strict: bool = False) -> dict:
        out = {
            "command": list(self.command),
            "inputs_digest": self.digest,
            "ok": self.ok(strict),
            "backend": backend(),
            "checks": self.checks,
            "values": self.values,
            "timing": self.timing,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.errors:
            out["errors"] = self.errors
        return out


def _complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _value(x) -> dict:
    """Numeric value, with the exact form alongside when there is one."""
    out = _complex(x)
    if isinstance(x, (int, CyclotomicElement, RootOfUnity)) or type(x).__name__ == "Fraction":
        out["exact"] = encode_value(x.to_cyclotomic() if isinstance(x, RootOfUnity) else x)
    return out


def _padic(v, denominator: int = 0) -> dict:
    return {"digits": encode_digits(v), "p": v.ctx.p, "precision": v.ctx.N, "valuation": v.valuation(),
            "denominator_exponent": denominator}


# ---------------------------------------------------------------------------
# verify


def _verify_config(args) -> VerifyConfig:
    return VerifyConfig(
        n=args.n, s=args.s, seed=args.seed, prime=args.prime, precision=args.precision, depth=args.depth,
        tol_ghate=args.tol_ghate, tol_bessel=args.tol_bessel, tol_unramified=args.tol_unramified,
        tol_plocal=args.tol_plocal, tol_arch=args.tol_arch, tol_cterm=args.tol_cterm,
    )


def cmd_verify(args, report: RunReport) -> None:
    cfg = _verify_config(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(run_suite, names, [cfg] * len(names)))
    else:
        results = [run_suite(name, cfg) for name in names]
    for res in results:
        for row in res.rows:
            report.add_row(row)
        if res.error is not None:
            report.errors.append({**res.error, "suite": res.suite})
        report.timing[res.suite] = round(res.seconds, 6)
    report.values["suites"] = {
        res.suite: {"ok": res.ok(args.strict), "rows": len(res.rows)} for res in results
    }


# ---------------------------------------------------------------------------
# factor


def _places_from_doc(doc: dict) -> dict:
    if "p_place" not in doc:
        return {"p_place": SatakePlaceData.from_dict(doc)}
    out = {
        "p_place": SatakePlaceData.from_dict(doc["p_place"]),
        "places": [SatakePlaceData.from_dict(d) for d in doc.get("places", [])],
        "tame": [SatakePlaceData.from_dict(d) for d in doc.get("tame", [])],
        "aux": SatakePlaceData.from_dict(doc["aux"]) if "aux" in doc else None,
        "conjugate_self_dual": bool(doc.get("conjugate_self_dual", False)),
        "r": int(doc.get("r", 1)),
        "xi_sq": int(doc.get("xi_sq", 1)),
    }
    lam = doc.get("lambda_EF")
    if lam is not None:
        out["lambda_EF"] = complex(RootOfUnity(int(lam["order"]), int(lam.get("exponent", 0))))
    return out


def _local_twist(phi: FiniteOrderCharacter, q: int):
    """phi at the uniformizer of Q_q, q != p, as an exact root of unity."""
    if phi.r == 0:
        return 1
    return phi(q).to_cyclotomic()


def _place_values(data: SatakePlaceData, twist, s: float, role: str) -> dict:
    out = {"role": role, "q": data.q, "kind": data.kind}
    try:
        out["L"] = _complex(eval_rational_function(asai_L_factor(data, twist), s))
    except PoleAtS as exc:
        out["L"] = None
        out["L_note"] = f"pole of order {exc.multiplicity}"
    try:
        out["gamma"] = _complex(blocks_gamma_factor(asai_blocks(data), data.q, twist)(s))
    except PoleAtS as exc:
        out["gamma"] = None
        out["gamma_note"] = f"L(1 - s, dual) has a pole of order {exc.multiplicity}"
    except UnsupportedCase as exc:
        out["gamma"] = None
        out["gamma_note"] = str(exc)
    return out


def cmd_factor(args, report: RunReport) -> None:
    doc, raw_s = read_json(args.satake, "satake")
    chi, raw_c = read_character(args.character)
    report.inputs += [raw_s, raw_c]
    phi = chi.finite_part if isinstance(chi, HeckeCharacterModel) else chi
    cfg = _places_from_doc(doc)
    p_place = cfg["p_place"]
    if p_place.q != phi.p:
        raise InvalidInput("the character's prime differs from the p-adic place", pointer="/p_place/q")
    have_weight = args.n is not None and args.alpha is not None
    if args.s is None and not have_weight:
        raise InvalidInput("give --s, or --n and --alpha (then s = n - alpha + 1)")
    s = args.s if args.s is not None else args.n - args.alpha + 1
    report.values["s"] = s
    places = [_place_values(p_place, phi, s, "p")]
    for v in cfg.get("places", []):
        places.append(_place_values(v, _local_twist(phi, v.q), s, "S"))
    if cfg.get("aux") is not None:
        v = cfg["aux"]
        places.append(_place_values(v, _local_twist(phi, v.q), s, "aux"))
    report.values["places"] = places
    report.values["conductor"] = conductor(phi)
    if not have_weight:
        return

    n, alpha = args.n, args.alpha
    report.values.update({"n": n, "alpha": alpha})
    data = InterpolationData(
        n, alpha, p_place, phi, cfg.get("places", ()), cfg.get("tame", ()), cfg.get("aux"),
        cfg.get("conjugate_self_dual", False), cfg.get("r", 1), cfg.get("xi_sq", 1), cfg.get("lambda_EF", 1),
    )
    violations = hypothesis_violations(data)
    for msg in violations:
        report.add_check("interpolation hypothesis", False, note=msg)
    if violations:
        return
    report.add_check("interpolation hypotheses", True)
    res = interpolation_rhs(data)
    parity = phi.infinity_signs[0] if phi.infinity_signs else 1
    try:
        E_inf, L_inf = modified_euler_infty(n, alpha, parity)
        Ep = modified_euler_p(p_place, phi, n, alpha)
        report.values["E_p*L_p"] = _value(Ep.value)
        report.values["E_p"] = _complex(modified_euler_factor_p(p_place, phi, n, alpha))
        report.values["E_inf"] = _complex(E_inf)
        report.values["L_inf(0)"] = _complex(L_inf)
    except ArtifactError as exc:
        report.errors.append(exc.to_dict())
        return
    report.values["rhs"] = {
        "value": _complex(res.value),
        "components": {k: _complex(v) for k, v in res.components.items()},
        "aux_factor": None if res.aux_factor is None else _complex(res.aux_factor),
        "symbols": list(res.symbols),
    }
    if res.p_cancellation_error is not None:
        tol = args.tol_plocal
        report.add_check("p-adic integral x corrections = E_p L_p", res.p_cancellation_error <= tol,
                         res.p_cancellation_error, tol)


# ---------------------------------------------------------------------------
# measure


def _measure_character(args, report: RunReport, p: int):
    if getattr(args, "character", None):
        chi, raw = read_character(args.character)
        report.inputs.append(raw)
    else:
        # the tame part only: p-power orders need ramified coefficients
        chi = FiniteOrderCharacter.from_generator(p, args.char_level, p - 1, args.char_exponent)
    weight = getattr(args, "weight", 0) or 0
    if weight:
        fin = chi.finite_part if isinstance(chi, HeckeCharacterModel) else chi
        chi = HeckeCharacterModel(fin, (weight,) * max(len(fin.infinity_signs), 1))
    return chi


def _constants(args) -> LpConstants:
    return LpConstants(c_infty=args.c_infty, xi_sq=args.xi_sq,
                       lambda_EF=RootOfUnity(4, args.lambda_exponent))


def _aux(args) -> Optional[AuxiliaryData]:
    if args.aux_q is None:
        return None
    return AuxiliaryData(args.aux_q, 1, args.aux_sigma)


def cmd_measure(args, report: RunReport) -> None:
    action = args.action
    if action == "synth":
        p = args.prime or 5
        report.seed = args.seed
        if args.delta is not None:
            ctx = PadicContext(p, args.precision)
            level = RayClassLevel(p, args.depth)
            top = FiniteLevelMeasure.delta(level, ctx, level.reduce(args.delta))
            mu = ProjectiveMeasure.from_top(top)
        else:
            mu = synth_distribution(args.seed, args.depth, p, args.precision)
        report.values["written"] = write_measure(mu, args.output)
        report.values["p"], report.values["N"], report.values["depth"] = p, args.precision, args.depth
        if args.output is None:
            report.values["measure"] = mu.to_dict()
        report.add_check("distribution property", distribution_check(mu).ok)
        return

    mu, raw = read_measure(args.file)
    report.inputs.append(raw)
    if action == "check":
        rep = distribution_check(mu)
        note = "" if rep.ok else f"fiber over x={rep.failure[1]} at level {rep.failure[0]}"
        report.add_check("distribution property", rep.ok, note=note, depth=mu.depth, p=mu.p)
        again = ProjectiveMeasure.from_json(mu.to_json())
        report.add_check("serialization round trip", again == mu and again.to_dict() == mu.to_dict())
    elif action == "eval":
        chi = _measure_character(args, report, mu.p)
        v = evaluate_at_character(mu, chi, level=args.level)
        report.values["value"] = _padic(v, mu.denominator)
        report.values["level"] = args.level if args.level is not None else mu.depth
        report.values["symbols"] = list(mu.symbols)
    elif action == "twist":
        out = tw_p(mu, args.k)
        report.values["written"] = write_measure(out, args.output)
        report.add_check("distribution property", distribution_check(out).ok, k=args.k)
        if args.output is None:
            report.values["measure"] = out.to_dict()
    elif action == "build-lp":
        consts, aux = _constants(args), _aux(args)
        out = build_Lp(mu, consts, args.n, args.alpha, args.m, aux)
        report.values["written"] = write_measure(out, args.output)
        report.values["twist_exponent"] = out.meta["twist_exponent"]
        report.values["denominator_exponent"] = out.denominator
        report.values["symbols"] = list(out.symbols)
        report.add_check("distribution property", distribution_check(out).ok)
        chi = _measure_character(args, report, mu.p)
        a = evaluate_at_character(out, chi)
        b, e = lp_explicit_value(mu, chi, consts, args.n, args.alpha, args.m, aux)
        report.values["value"] = _padic(a, out.denominator)
        report.add_check("eval = explicit finite sum", a == b and e == out.denominator)
        if args.output is None:
            report.values["measure"] = out.to_dict()
    elif action == "compare":
        other, raw2 = read_measure(args.other)
        report.inputs.append(raw2)
        lhs = tw_p(mu, args.k)
        diffs = {}
        for r in range(max(lhs.levels[0].r, other.levels[0].r), min(lhs.depth, other.depth) + 1):
            d = lhs.level(r) - other.level(r)
            diffs[str(r)] = min((c.valuation() for _, c in d.items()), default=mu.N)
        report.values["min_valuation_of_difference"] = diffs
        report.values["k"] = args.k
        report.add_check("Tw_p^k(first) vs second (no verdict)", None,
                         note="valuation of the difference per level; N means equal to working precision")


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable report")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for synthetic data")
    parser.add_argument("--precision", type=int, default=d(40), metavar="N", help="p-adic digits")
    parser.add_argument("--prime", type=int, default=d(None), metavar="p", help="restrict to one prime")
    parser.add_argument("--csv", default=d(None), metavar="PATH", help="write the check table as CSV")
    parser.add_argument("--strict", action="store_true", default=d(False),
                        help="known failures also give a nonzero exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asai-padic", description=__doc__.splitlines()[0], allow_abbrev=False)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    sub_kw = {"allow_abbrev": False}

    tol = VerifyConfig()
    v = sub.add_parser("verify", **sub_kw, help="run identity suites")
    _global_flags(v, suppress=True)
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--s", type=float, default=None)
    v.add_argument("--depth", type=int, default=tol.depth, help="measure depth R")
    v.add_argument("--jobs", type=int, default=1, help="worker processes for 'all'")
    for name in ("ghate", "bessel", "unramified", "plocal", "arch", "cterm"):
        v.add_argument(f"--tol-{name}", type=float, default=getattr(tol, f"tol_{name}"))

    f = sub.add_parser("factor", **sub_kw, help="local factors and interpolation components")
    _global_flags(f, suppress=True)
    f.add_argument("satake", help="place descriptor or configuration (JSON)")
    f.add_argument("character", help="character descriptor (JSON)")
    f.add_argument("--s", type=float, default=None)
    f.add_argument("--n", type=int, default=None)
    f.add_argument("--alpha", type=int, default=None)
    f.add_argument("--tol-plocal", type=float, default=tol.tol_plocal)

    m = sub.add_parser("measure", **sub_kw, help="projective measures over Z_p/p^N")
    _global_flags(m, suppress=True)
    ms = m.add_subparsers(dest="action", required=True)

    def char_flags(sp):
        sp.add_argument("--character", help="character descriptor (JSON)")
        sp.add_argument("--char-level", type=int, default=1, help="level of the default character")
        sp.add_argument("--char-exponent", type=int, default=1, help="the default character sends the generator to exp(2 pi i e/(p-1))")
        sp.add_argument("--weight", type=int, default=0, help="infinity exponent w of the p-adic avatar")

    sp = ms.add_parser("synth", **sub_kw, help="random compatible family")
    _global_flags(sp, suppress=True)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--delta", type=int, default=None, metavar="X0", help="point mass at x0 instead")
    sp.add_argument("-o", "--output")

    sp = ms.add_parser("check", **sub_kw, help="distribution property and round trip")
    _global_flags(sp, suppress=True)
    sp.add_argument("file")

    sp = ms.add_parser("eval", **sub_kw, help="integrate a character")
    _global_flags(sp, suppress=True)
    sp.add_argument("file")
    sp.add_argument("--level", type=int, default=None)
    char_flags(sp)

    sp = ms.add_parser("twist", **sub_kw, help="apply Tw_p^k")
    _global_flags(sp, suppress=True)
    sp.add_argument("file")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("-o", "--output")

    sp = ms.add_parser("build-lp", **sub_kw, help="assemble from partial zeta data")
    _global_flags(sp, suppress=True)
    sp.add_argument("file")
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--alpha", type=int, default=0)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--c-infty", type=int, default=1)
    sp.add_argument("--xi-sq", type=int, default=1)
    sp.add_argument("--lambda-exponent", type=int, default=0, help="lambda_{E/F} = i^e")
    sp.add_argument("--aux-q", type=int, default=None)
    sp.add_argument("--aux-sigma", type=int, default=None, help="group element for the auxiliary factor")
    sp.add_argument("-o", "--output")
    char_flags(sp)

    sp = ms.add_parser("compare", **sub_kw, help="Tw_p^k of one measure against another, no verdict")
    _global_flags(sp, suppress=True)
    sp.add_argument("file")
    sp.add_argument("other")
    sp.add_argument("--k", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def print_table(report: RunReport, strict: bool, out=sys.stdout) -> None:
    for c in report.checks:
        params = " ".join(f"{k}={v}" for k, v in (c.get("params") or {}).items())
        prefix = f"{c['suite']}: " if "suite" in c else ""
        line = f"{c['status']:<10} {prefix}{c['check']}"
        if params:
            line += f"  [{params}]"
        if c.get("residual") is not None:
            line += f"  residual={_fmt(c['residual'])} tol={_fmt(c.get('tolerance'))}"
        if c.get("note"):
            line += f"  ({c['note']})"
        print(line, file=out)
    for key, val in report.values.items():
        if key == "measure":
            continue
        print(f"{key}: {json.dumps(val)}", file=out)
    for err in report.errors:
        print(f"error [{err['kind']}]: {err['message']}", file=sys.stderr)
    total = sum(report.timing.values())
    print(f"{'OK' if report.ok(strict) else 'FAILED'} in {total:.2f}s", file=out)


def write_csv(report: RunReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "check", "params", "residual", "tolerance", "status", "note"])
        for c in report.checks:
            w.writerow([c.get("suite", ""), c["check"], json.dumps(c.get("params") or {}, sort_keys=True),
                        c.get("residual"), c.get("tolerance"), c["status"], c.get("note", "")])


COMMANDS = {"verify": cmd_verify, "factor": cmd_factor, "measure": cmd_measure}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = RunReport(argv, seed=args.seed if args.command == "verify" else None)
    t0 = time.perf_counter()
    status = None
    try:
        COMMANDS[args.command](args, report)
    except InvalidInput as exc:
        report.errors.append(exc.to_dict())
        status = EXIT_INPUT
    except ArtifactError as exc:
        report.errors.append(exc.to_dict())
        status = EXIT_FAIL
    if args.command != "verify":
        report.timing["total"] = round(time.perf_counter() - t0, 6)
    if status is None:
        status = EXIT_OK if report.ok(args.strict) else EXIT_FAIL
    if args.csv:
        write_csv(report, args.csv)
    if args.json:
        doc = report.to_dict(args.strict)
        validate(doc, "report", "<report>")
        print(json.dumps(doc, indent=1, default=str))
    else:
        print_table(report, args.strict)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
