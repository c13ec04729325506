"""Command-line surface.

Subcommands:

    plan {extrapolate|bht|bht-vv|section5|mz}
    weights {check|estimate}
    operator apply --op {maximal|hilbert|bht}
    rdf demo
    verify {bht|vv|iterated|mz|truncation}

Exponents on the command line are exact rationals ("2", "3/2", "inf");
floating literals are rejected.  Reports are JSON envelopes on stdout
(--emit csv switches tabular payloads to CSV).  Exit codes: 0 feasible /
certified, 2 infeasible or certification failure (report still emitted),
1 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import applications as app
from . import verifier as ver
from .errors import CertificationFailed, DomainError, ExtrapkitError, Infeasible, InvalidRange, OutOfRange, SearchFailed, UnknownSpec
from .exponents import Exponent, exp_str
from .extrapolation import (
    ExtrapolationRange,
    case_select,
    dual_range,
    proof_exponents,
    target_exponent,
)
from .grid import Grid
from .gridfn import FamilySpec, GridFunction, bht, hilbert, maximal, make_family
from .rdf import build_proof_objects, verify_case1_weight
from .reports import dumps, envelope, to_jsonable
from .weights import (
    GridWeight,
    PowerWeight,
    WeightClassSpec,
    estimate_class_constants,
    power_membership,
)

USAGE_EXIT = 1
INFEASIBLE_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


@dataclass
class RunConfig:
    """Parsed invocation: command path, output format, grid, seed."""

    command: str
    emit: str
    seed: int | None
    L: float
    N: list[int]


def _exp(text: str) -> Exponent:
    try:
        return Exponent.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))


def _frac(text: str) -> Fraction:
    t = text.strip()
    if "." in t or "e" in t.lower():
        raise argparse.ArgumentTypeError(
            f"{text!r}: floating literals are rejected; use an exact rational"
        )
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational")


def _weight_descriptor(text: str):
    if text == "unit":
        return "unit"
    if text.startswith("power:"):
        return PowerWeight(_frac(text[len("power:"):]))
    if text.startswith("file:"):
        path = text[len("file:"):]
        return lambda grid: _read_weight_csv(path, grid)
    raise argparse.ArgumentTypeError(
        f"weight descriptor {text!r} must be unit | power:NUM/DEN | file:PATH"
    )


def _read_weight_csv(path: str, grid: Grid | None = None) -> GridWeight:
    xs, vals = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "x":
                continue
            xs.append(float(row[0]))
            vals.append(float(row[1]))
    xs = np.asarray(xs)
    vals = np.asarray(vals)
    if xs.size < 2:
        raise DomainError(f"{path}: need at least two samples")
    steps = np.diff(xs)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise DomainError(f"{path}: grid spacing is not uniform")
    h = float(steps[0])
    L = (xs[-1] + h / 2) if xs[0] < 0 else None
    inferred = Grid(float(abs(xs[0]) + h / 2), xs.size)
    if grid is not None:
        inferred.require_same(grid, "weight file grid")
    return GridWeight(vals, inferred)


def _read_function_csv(path: str) -> GridFunction:
    xs, re_part, im_part = [], [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "x":
                continue
            xs.append(float(row[0]))
            re_part.append(float(row[1]))
            im_part.append(float(row[2]) if len(row) > 2 else 0.0)
    xs = np.asarray(xs)
    steps = np.diff(xs)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise DomainError(f"{path}: grid spacing is not uniform")
    h = float(steps[0])
    grid = Grid(float(abs(xs[0]) + h / 2), xs.size)
    vals = np.asarray(re_part)
    if any(im_part):
        vals = vals + 1j * np.asarray(im_part)
    return GridFunction(vals, grid)


def _write_function_csv(fn: GridFunction, out=None) -> None:
    wr = csv.writer(out if out is not None else sys.stdout)
    x = fn.grid.x()
    complex_out = np.iscomplexobj(fn.samples)
    wr.writerow(["x", "re", "im"] if complex_out else ["x", "re"])
    for i in range(fn.grid.N):
        v = fn.samples[i]
        if complex_out:
            wr.writerow([f"{x[i]:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
        else:
            wr.writerow([f"{x[i]:.17g}", f"{v:.17g}"])


def _emit(report: dict, emit: str, rows: list[dict] | None = None) -> None:
    if emit == "csv" and rows:
        wr = csv.writer(sys.stdout)
        keys = list(rows[0].keys())
        wr.writerow(keys)
        for row in rows:
            wr.writerow([to_jsonable(row.get(k)) for k in keys])
    else:
        print(dumps(report))


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = to_jsonable(v)
    return out


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------


def _cmd_plan_extrapolate(args) -> int:
    rng = ExtrapolationRange(args.pm, args.pp, args.p0, args.q0)
    pe = proof_exponents(rng, args.p)
    qm, qp = dual_range(rng)
    data = {
        "case": pe.case.value,
        "q_minus": qm,
        "q_plus": qp,
        "target_q": target_exponent(args.p, rng),
        "shift": rng.shift,
        **pe.as_dict(),
    }
    rep = envelope(
        "plan extrapolate",
        feasible=True,
        data=data,
        certified=list(pe.certified),
    )
    _emit(rep, args.emit, [_flatten(to_jsonable(data))])
    return 0


def _grid_of(args) -> list:
    return args.grid if getattr(args, "grid", None) else None


def _cmd_plan_bht(args) -> int:
    qs = _grid_of(args)
    if qs and args.emit == "csv":
        rows = []
        for q1 in qs:
            for q2 in qs:
                row = {"q1": exp_str(q1), "q2": exp_str(q2)}
                try:
                    plan = app.bht_plan(q1, q2)
                    pr = app.bht_power_range(q1, q2)
                    row.update(_flatten(to_jsonable(plan.as_dict())))
                    row.update(_flatten(to_jsonable(pr.as_dict())))
                    row["feasible"] = True
                except Infeasible as e:
                    row.update({"feasible": False, "reason": str(e)})
                rows.append(row)
        keys = sorted({k for r in rows for k in r}, key=str)
        rows = [{k: r.get(k, "") for k in keys} for r in rows]
        _emit({}, "csv", rows)
        return 0
    if args.s1 is not None or args.s2 is not None:
        if args.s1 is None or args.s2 is None:
            raise DomainError("provide both --s1 and --s2 for a vector-valued plan")
        plan = app.bht_vv_plan(args.q1, args.q2, args.s1, args.s2)
        pr = app.bht_vv_power_range(args.q1, args.q2, args.s1, args.s2)
        cmd = "plan bht-vv"
    else:
        plan = app.bht_plan(args.q1, args.q2)
        pr = app.bht_power_range(args.q1, args.q2)
        cmd = "plan bht"
    data = {**plan.as_dict(), "power_range": pr.as_dict()}
    rep = envelope(cmd, feasible=True, data=data, certified=list(plan.certified))
    _emit(rep, args.emit, [_flatten(to_jsonable(data))])
    return 0


def _cmd_plan_section5(args) -> int:
    plan = app.section5_plan(args.q1, args.q2, args.s1, args.s2, args.g1, args.g2, args.g3)
    rep = envelope(
        "plan section5",
        feasible=True,
        data=plan.as_dict(),
        certified=list(plan.certified),
    )
    _emit(rep, args.emit, [_flatten(to_jsonable(plan.as_dict()))])
    return 0


def _cmd_plan_mz(args) -> int:
    qjs = [Exponent.parse(tok) for tok in args.q.split(",")]
    plan = app.mz_plan(qjs, args.r)
    rep = envelope(
        "plan mz",
        feasible=plan.feasible,
        data=plan.data,
        certified=plan.certified,
        caveats=plan.caveats,
    )
    rows = [
        _flatten(to_jsonable(step)) for step in plan.data.get("steps", [])
    ] or [_flatten(to_jsonable(plan.data))]
    _emit(rep, args.emit, rows)
    return 0


def _cmd_weights_check(args) -> int:
    spec = WeightClassSpec(args.ap, args.rh)
    member, reasons = power_membership(PowerWeight(args.alpha), spec)
    rep = envelope(
        "weights check",
        feasible=member,
        data={"alpha": args.alpha, "ap": spec.p, "rh": spec.s, "member": member, "reasons": reasons},
    )
    _emit(rep, args.emit)
    return 0


def _cmd_weights_estimate(args) -> int:
    w = _read_weight_csv(args.file)
    spec = WeightClassSpec(args.ap, args.rh)
    rows = []
    for d in range(1, args.depth + 1):
        ap_c, rh_c = estimate_class_constants(w, spec, d)
        rows.append({"depth": d, "ap_const": ap_c, "rh_const": rh_c})
    rep = envelope(
        "weights estimate",
        feasible=all(np.isfinite(r["ap_const"]) and np.isfinite(r["rh_const"]) for r in rows),
        data={"file": args.file, "ap": spec.p, "rh": spec.s, "constants": rows},
        grid={"L": w.grid.L, "N": w.grid.N},
    )
    _emit(rep, args.emit, rows)
    return 0


def _cmd_operator_apply(args) -> int:
    f = _read_function_csv(getattr(args, "in"))
    if args.op == "maximal":
        out = maximal(f)
    elif args.op == "hilbert":
        out = hilbert(f)
    elif args.op == "bht":
        if args.in2 is None:
            raise DomainError("--op bht needs --in2")
        g = _read_function_csv(args.in2)
        out = bht(f, g, args.tmin, args.tmax)
    else:
        raise UnknownSpec(f"unknown operator {args.op!r}")
    _write_function_csv(out)
    return 0


def _cmd_rdf_demo(args) -> int:
    if args.case != "I":
        raise DomainError("the demo builds the two-sided construction (case I)")
    rng = ExtrapolationRange(args.pm, args.pp, args.p0, args.q0)
    pe = proof_exponents(rng, args.p)
    grid = Grid(args.L, args.N[0])
    w = ver.realize_weight(args.w, grid)
    fam = make_family(FamilySpec("smooth-bumps", count=1, arity=2), args.seed, grid)
    f = fam.members[0][0].abs()
    g = fam.members[0][1].abs()
    try:
        po = build_proof_objects(f, g, w, pe, rng, args.p)
        report = verify_case1_weight(po, pe, rng, args.p, w)
        certified = True
        data = {
            "proof_exponents": pe.as_dict(),
            "objects": po.as_dict(),
            "weight_report": report,
        }
        reason = None
    except CertificationFailed as e:
        certified = False
        data = {"proof_exponents": pe.as_dict(), "failures": [str(x) for x in e.failures]}
        reason = str(e)
    rep = envelope(
        "rdf demo",
        feasible=certified,
        data=data,
        certified=list(pe.certified) + (["H-certificates"] if certified else []),
        seed=args.seed,
        grid={"L": args.L, "N": args.N[0]},
        reason=reason,
    )
    print(dumps(rep))
    if args.trace and certified:
        with open(args.trace, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "h1", "H1", "h2", "H2", "mu1", "mu2", "W"])
            x = grid.x()
            for i in range(grid.N):
                wr.writerow(
                    [x[i], po.h1.samples[i], po.H1.samples[i], po.h2.samples[i],
                     po.H2.samples[i], po.mu1.samples[i], po.mu2.samples[i],
                     po.W.samples[i]]
                )
    return 0 if certified else INFEASIBLE_EXIT


def _family_spec(args, arity: int = 2) -> FamilySpec:
    return FamilySpec(kind=args.family, count=args.count, arity=arity)


def _report_from_ratio(cmd, rr) -> dict:
    return envelope(
        cmd,
        feasible=rr.verdict != "DIVERGENT",
        data=rr.as_dict(),
        certified=[],
        caveats=[rr.caveat],
        seed=rr.seed,
        grid={"L": rr.config.get("L"), "N": rr.resolutions},
    )


def _cmd_verify_bht(args) -> int:
    if args.plan_file:
        import json

        with open(args.plan_file) as fh:
            saved = json.load(fh)
        q1 = Exponent.parse(saved["data"]["q1"])
        q2 = Exponent.parse(saved["data"]["q2"])
    else:
        q1, q2 = args.q1, args.q2
    if q1 is None or q2 is None:
        raise DomainError("provide --q1/--q2 or --plan-file")
    a = args.a or Fraction(0)
    w1 = PowerWeight(-a / q1.frac) if a != 0 else "unit"
    w2 = PowerWeight(-a / q2.frac) if a != 0 else "unit"
    from .exponents import harmonic_sum

    rr = ver.ratio_sweep(
        "bht", q1, q2, harmonic_sum([q1, q2]), w1, w2,
        _family_spec(args), seed=args.seed, resolutions=args.N, L=args.L,
    )
    rep = _report_from_ratio("verify bht", rr)
    rows = [{"member": i, "ratio": r} for i, r in enumerate(rr.ratios)]
    _emit(rep, args.emit, rows)
    return 0 if rr.verdict != "DIVERGENT" else INFEASIBLE_EXIT


def _cmd_verify_vv(args) -> int:
    a = args.a or Fraction(0)
    w1 = PowerWeight(-a / args.q1.frac) if a != 0 else "unit"
    w2 = PowerWeight(-a / args.q2.frac) if a != 0 else "unit"
    rr = ver.vv_sweep(
        args.q1, args.q2, args.s1, args.s2, w1, w2,
        _family_spec(args), K=args.K, seed=args.seed, resolutions=args.N, L=args.L,
    )
    rep = _report_from_ratio("verify vv", rr)
    rows = [{"member": i, "ratio": r} for i, r in enumerate(rr.ratios)]
    _emit(rep, args.emit, rows)
    return 0 if rr.verdict != "DIVERGENT" else INFEASIBLE_EXIT


def _cmd_verify_iterated(args) -> int:
    rr = ver.iterated_vv_sweep(
        (args.t1, args.t2), (args.s1, args.s2), (args.q1, args.q2),
        _family_spec(args), J=args.J, K=args.K, seed=args.seed,
        resolutions=args.N, L=args.L,
    )
    rep = _report_from_ratio("verify iterated", rr)
    _emit(rep, args.emit, [{"member": i, "ratio": r} for i, r in enumerate(rr.ratios)])
    return 0 if rr.verdict != "DIVERGENT" else INFEASIBLE_EXIT


def _cmd_verify_mz(args) -> int:
    qjs = [Exponent.parse(tok) for tok in args.q.split(",")]
    rr = ver.mz_sweep(
        qjs, args.r, ["unit", "unit"], _family_spec(args), args.surrogate,
        seed=args.seed, resolutions=args.N, K=args.K, L=args.L,
    )
    rep = _report_from_ratio("verify mz", rr)
    _emit(rep, args.emit, [{"member": i, "ratio": r} for i, r in enumerate(rr.ratios)])
    return 0 if rr.verdict != "DIVERGENT" else INFEASIBLE_EXIT


def _cmd_verify_truncation(args) -> int:
    grid = Grid(args.L, args.N[0])
    fam = make_family(FamilySpec("smooth-bumps", count=1, arity=1), args.seed, grid)
    f = fam.members[0][0].abs()
    w = ver.realize_weight(args.w, grid)
    cuts = [float(Fraction(tok)) for tok in args.ncuts.split(",")]
    rows = ver.truncation_study(f, w, args.q, cuts)
    rep = envelope(
        "verify truncation",
        feasible=all(r["within_bound"] for r in rows),
        data={"rows": rows, "q": args.q},
        seed=args.seed,
        grid={"L": args.L, "N": args.N[0]},
    )
    _emit(rep, args.emit, rows)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_common(p, grid_default="4096"):
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--L", type=float, default=8.0)
    p.add_argument(
        "--N",
        type=lambda s: [int(tok) for tok in s.split(",")],
        default=[int(tok) for tok in grid_default.split(",")],
        help="comma-separated resolutions",
    )
    p.add_argument("--family", choices=("smooth-bumps", "modulated", "dyadic-concentration"), default="smooth-bumps")
    p.add_argument("--count", type=int, default=16)


def build_parser() -> _Parser:
    root = _Parser(prog="extrapkit", description=__doc__)
    sub = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    plan = sub.add_parser("plan")
    plan_sub = plan.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    pe = plan_sub.add_parser("extrapolate")
    pe.add_argument("--pm", type=_exp, required=True)
    pe.add_argument("--pp", type=_exp, required=True)
    pe.add_argument("--p0", type=_exp, required=True)
    pe.add_argument("--q0", type=_exp, required=True)
    pe.add_argument("--p", type=_exp, required=True)
    pe.add_argument("--emit", choices=("json", "csv"), default="json")
    pe.set_defaults(handler=_cmd_plan_extrapolate)

    for name in ("bht", "bht-vv"):
        pb = plan_sub.add_parser(name)
        pb.add_argument("--q1", type=_exp, required=True)
        pb.add_argument("--q2", type=_exp, required=True)
        req = name == "bht-vv"
        pb.add_argument("--s1", type=_exp, required=req, default=None)
        pb.add_argument("--s2", type=_exp, required=req, default=None)
        pb.add_argument("--grid", type=lambda s: [Exponent.parse(t) for t in s.split(",")], default=None)
        pb.add_argument("--emit", choices=("json", "csv"), default="json")
        pb.set_defaults(handler=_cmd_plan_bht)

    ps = plan_sub.add_parser("section5")
    for flag in ("--q1", "--q2", "--s1", "--s2"):
        ps.add_argument(flag, type=_exp, required=True)
    for flag in ("--g1", "--g2", "--g3"):
        ps.add_argument(flag, type=_frac, required=True)
    ps.add_argument("--emit", choices=("json", "csv"), default="json")
    ps.set_defaults(handler=_cmd_plan_section5)

    pm = plan_sub.add_parser("mz")
    pm.add_argument("--q", required=True, help="comma-separated targets, e.g. 3,3")
    pm.add_argument("--r", type=_exp, required=True)
    pm.add_argument("--emit", choices=("json", "csv"), default="json")
    pm.set_defaults(handler=_cmd_plan_mz)

    wts = sub.add_parser("weights")
    wts_sub = wts.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    wc = wts_sub.add_parser("check")
    wc.add_argument("--alpha", type=_frac, required=True)
    wc.add_argument("--ap", type=_exp, required=True)
    wc.add_argument("--rh", type=_exp, required=True)
    wc.add_argument("--emit", choices=("json", "csv"), default="json")
    wc.set_defaults(handler=_cmd_weights_check)
    we = wts_sub.add_parser("estimate")
    we.add_argument("--file", required=True)
    we.add_argument("--ap", type=_exp, required=True)
    we.add_argument("--rh", type=_exp, required=True)
    we.add_argument("--depth", type=int, required=True)
    we.add_argument("--emit", choices=("json", "csv"), default="json")
    we.set_defaults(handler=_cmd_weights_estimate)

    op = sub.add_parser("operator")
    op_sub = op.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    oa = op_sub.add_parser("apply")
    oa.add_argument("--op", choices=("maximal", "hilbert", "bht"), required=True)
    oa.add_argument("--in", dest="in", required=True)
    oa.add_argument("--in2", default=None)
    oa.add_argument("--tmin", type=float, default=None)
    oa.add_argument("--tmax", type=float, default=None)
    oa.set_defaults(handler=_cmd_operator_apply)

    rdf = sub.add_parser("rdf")
    rdf_sub = rdf.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    rd = rdf_sub.add_parser("demo")
    rd.add_argument("--case", default="I")
    rd.add_argument("--w", type=_weight_descriptor, default="unit")
    rd.add_argument("--pm", type=_exp, required=True)
    rd.add_argument("--pp", type=_exp, required=True)
    rd.add_argument("--p0", type=_exp, required=True)
    rd.add_argument("--q0", type=_exp, required=True)
    rd.add_argument("--p", type=_exp, required=True)
    rd.add_argument("--trace", default=None)
    _add_common(rd, grid_default="1024")
    rd.set_defaults(handler=_cmd_rdf_demo)

    vf = sub.add_parser("verify")
    vf_sub = vf.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    vb = vf_sub.add_parser("bht")
    vb.add_argument("--q1", type=_exp)
    vb.add_argument("--q2", type=_exp)
    vb.add_argument("--a", type=_frac, default=None)
    vb.add_argument("--plan-file", default=None)
    _add_common(vb, grid_default="4096,8192")
    vb.set_defaults(handler=_cmd_verify_bht)

    vv = vf_sub.add_parser("vv")
    for flag in ("--q1", "--q2", "--s1", "--s2"):
        vv.add_argument(flag, type=_exp, required=True)
    vv.add_argument("--a", type=_frac, default=None)
    vv.add_argument("--K", type=int, default=4)
    _add_common(vv, grid_default="2048,4096")
    vv.set_defaults(handler=_cmd_verify_vv)

    vi = vf_sub.add_parser("iterated")
    for flag in ("--q1", "--q2", "--s1", "--s2", "--t1", "--t2"):
        vi.add_argument(flag, type=_exp, required=True)
    vi.add_argument("--J", type=int, default=2)
    vi.add_argument("--K", type=int, default=2)
    _add_common(vi, grid_default="1024,2048")
    vi.set_defaults(handler=_cmd_verify_iterated)

    vm = vf_sub.add_parser("mz")
    vm.add_argument("--q", required=True)
    vm.add_argument("--r", type=_exp, required=True)
    vm.add_argument("--surrogate", choices=ver.SURROGATES, default="tensor-hilbert")
    vm.add_argument("--K", type=int, default=4)
    _add_common(vm, grid_default="1024,2048")
    vm.set_defaults(handler=_cmd_verify_mz)

    vt = vf_sub.add_parser("truncation")
    vt.add_argument("--q", type=_exp, required=True)
    vt.add_argument("--w", type=_weight_descriptor, default="unit")
    vt.add_argument("--ncuts", required=True, help="comma-separated cutoffs")
    _add_common(vt, grid_default="2048")
    vt.set_defaults(handler=_cmd_verify_truncation)

    return root


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (Infeasible, InvalidRange, OutOfRange, SearchFailed, CertificationFailed) as e:
        rep = envelope(
            f"{args.group} {getattr(args, 'cmd', '')}".strip(),
            feasible=False,
            data={},
            reason=str(e),
        )
        print(dumps(rep))
        return INFEASIBLE_EXIT
    except ExtrapkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
