"""Command line front end: analyze one substitution or a directory of them."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .apcomplex import build_ap_complex, h1_presentation
from .dirlimit import DLGroup, NotDiagonalizable
from .exactlin import InfeasibilityCertificate, Mat
from .spectral import (EigenvalueGroupDescriptor, InvariantFailure,
                       check_invariants, eigenvalue_group, tau_data,
                       theta_image)
from .splitting import (Seq1Certificate, decide_split_seq1, decide_split_seq3,
                        multiplicity_criterion)
from .substitution import (ParseError, Substitution, border_forcing,
                           incidence_matrix, is_primitive, parse_substitution,
                           periodicity_scan, pf_data)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2


def _frac(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def _vec(v):
    return [_frac(c) for c in v]


def _mat(M: Mat):
    return {"rows": M.rows, "cols": M.cols,
            "entries": [_vec(row) for row in M.data]}


def _ring(base: int) -> str:
    return "Z" if base in (0, 1) else "Z[1/%d]" % base


def _verdict_dict(v):
    out = {"outcome": v.outcome, "trail": list(v.trail)}
    if v.witness is not None:
        out["witness"] = _vec(v.witness)
    if v.prime is not None:
        out["prime"] = v.prime
    if v.reason:
        out["reason"] = v.reason
    c = v.certificate
    if isinstance(c, InfeasibilityCertificate):
        out["certificate"] = {
            "kind": "localized-infeasibility", "reason": c.reason,
            "prime": c.prime, "constraint_index": c.constraint_index,
            "combination": _vec(c.combination) if c.combination else None,
            "constant": _frac(c.constant) if c.constant is not None else None,
        }
    elif isinstance(c, Seq1Certificate):
        out["certificate"] = {
            "kind": "inf-membership", "prime": c.prime,
            "basis_index": c.basis_index, "level": c.level,
            "image": _vec(c.image), "inf_coords": _vec(c.inf_coords),
        }
    return out


def analyze_text(text: str, name: str = "<input>", route: str = "auto",
                 periodicity_bound: int = 32, verify_depth: int | None = None,
                 seed: int = 0):
    """Run the full pipeline; returns (report dict, exit code)."""
    rng = random.Random(seed)
    report = {"schema": 1, "input": {"name": name, "seed": seed}}
    s = parse_substitution(text)
    report["input"]["alphabet"] = list(map(str, s.alphabet))
    report["input"]["rules"] = {str(a): "".join(map(str, s.rules[a])) for a in s.alphabet}
    M = incidence_matrix(s)
    report["incidence_matrix"] = _mat(M)
    if not is_primitive(M):
        raise ParseError("substitution is not primitive")
    report["primitive"] = True
    periodicity = periodicity_scan(s, periodicity_bound)
    report["periodicity"] = periodicity
    if periodicity == "Periodic":
        report["status"] = "rejected-periodic"
        return report, EXIT_OK
    border = border_forcing(s)
    report["border_forcing"] = border
    if route == "auto":
        route = "bouquet" if border is not None else "collared"
    elif route == "bouquet" and border is None:
        raise ParseError("bouquet route requires a common prefix or suffix")
    report["route"] = route
    pf = pf_data(M)
    report["pf"] = {"minpoly": list(pf.minpoly), "dilation": pf.dilation,
                    "pisot": pf.pisot,
                    "charpoly_irreducible": pf.charpoly_irreducible}

    Y, sigma, _system = build_ap_complex(s, route)
    pres = h1_presentation(Y, sigma)
    report["complex"] = {"edges": len(Y.edges), "vertices": Y.vertex_count,
                         "rank_h1": pres.rank}
    G = DLGroup(er_action=pres.er_action, lattice=pres.sigma_lattice,
                presentation=pres)
    report["presentation"] = {
        "action": _mat(pres.action), "dim_er": G.dim,
        "er_action": _mat(pres.er_action),
        "er_charpoly": list(G.char_poly_coeffs()),
        "sigma_basis": [_vec(b) for b in pres.sigma_lattice.basis],
        "finitely_generated": G.is_finitely_generated(),
    }
    try:
        dec = G.decompose()
        report["decomposition"] = {
            "index": dec.index,
            "lines": [{"eigenvalue": l.eigenvalue, "ring": _ring(l.ring_base),
                       "generators": [_vec(v) for v in l.generators]}
                      for l in dec.lines],
            "coset_reps": [_vec(r) for r in dec.coset_reps],
        }
    except NotDiagonalizable as e:
        dec = None
        report["decomposition"] = {"refused": str(e)}

    desc = eigenvalue_group(s, pf, G)
    report["eigenvalue_group"] = {"mode": desc.mode, "E": desc.describe()}
    if desc.dilation is not None:
        report["eigenvalue_group"]["dilation"] = desc.dilation
    if desc.minpoly is not None:
        report["eigenvalue_group"]["minpoly"] = list(desc.minpoly)
    if desc.reason:
        report["eigenvalue_group"]["reason"] = desc.reason
    if desc.g_theta is not None:
        report["eigenvalue_group"]["g_theta"] = _vec(desc.g_theta.value)

    theta = None
    if desc.mode == "IntegerDilation":
        theta = theta_image(G, desc)
        report["theta_image"] = {"generator": _vec(theta.generator),
                                 "ring": _ring(abs(theta.eigenvalue)),
                                 "unit_ratio": _frac(theta.unit_ratio),
                                 "saturated": theta.saturated}
    td = None
    exit_code = EXIT_OK
    if desc.mode in ("IntegerDilation", "IrreduciblePisot"):
        td = tau_data(G, desc)
        tau_rep = {"inf_rank": td.inf_rank}
        if td.nu is not None:
            tau_rep["nu"] = _vec(td.nu)
            tau_rep["freq_generator"] = _frac(td.freq_generator)
            tau_rep["freq"] = "%s·%s" % (_frac(td.freq_generator), _ring(td.freq_base))
        if td.inf is not None:
            tau_rep["inf_generators"] = [_vec(td.inf.inclusion.col(j))
                                         for j in range(td.inf.inclusion.cols)]
            tau_rep["inf_action"] = _mat(td.inf.er_action)
        report["tau"] = tau_rep
        inv = check_invariants(G, desc, td, rng)
        report["invariants"] = [{"name": n, "passed": ok, "detail": detail}
                                for n, ok, detail in inv.checks]
        if not inv.passed:
            exit_code = EXIT_INVARIANT
    else:
        report["tau"] = {"unsupported": desc.reason}
        report["invariants"] = []

    report["multiplicity_criterion"] = multiplicity_criterion(
        G.char_poly_coeffs(), pf.minpoly)

    if td is not None:
        v3 = decide_split_seq3(G, theta, desc, rng, verify_depth=verify_depth)
        v1 = decide_split_seq1(G, td, desc, rng, verify_depth=verify_depth)
    else:
        v3 = decide_split_seq3(G, None, desc, rng)
        v1 = decide_split_seq1(G, None, desc, rng)
    report["sequence3"] = _verdict_dict(v3)
    report["sequence1"] = _verdict_dict(v1)
    report["status"] = "ok"
    return report, exit_code


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _fmt_vec(entries) -> str:
    return "(" + ",".join(str(Fraction(e)) for e in entries) + ")"


def report_text(report: dict, elapsed: float | None = None) -> str:
    lines = []
    inp = report["input"]
    lines.append("substitution %s" % inp["name"])
    for a in inp["alphabet"]:
        lines.append("  %s -> %s" % (a, inp["rules"][a]))
    if report.get("status") == "rejected-periodic":
        lines.append("periodicity scan: Periodic -- input rejected before cohomology")
        return "\n".join(lines) + "\n"
    lines.append("primitive: yes; periodicity scan: %s; border forcing: %s; route: %s"
                 % (report["periodicity"], report["border_forcing"], report["route"]))
    pf = report["pf"]
    lam = pf["dilation"] if pf["dilation"] is not None else "root of %s" % pf["minpoly"]
    lines.append("dilation: %s (Pisot: %s)" % (lam, pf["pisot"]))
    cx = report["complex"]
    lines.append("AP complex: %d edges, %d vertices; rank H1(Y) = %d; dim ER = %d"
                 % (cx["edges"], cx["vertices"], cx["rank_h1"],
                    report["presentation"]["dim_er"]))
    dec = report.get("decomposition", {})
    if "lines" in dec:
        parts = []
        for l in dec["lines"]:
            for gen in l["generators"]:
                parts.append("%s·%s" % (l["ring"], _fmt_vec(gen)))
        lines.append("H1(Omega) = %s, index %d" % (" ⊕ ".join(parts), dec["index"]))
    eg = report["eigenvalue_group"]
    lines.append("eigenvalue group E: %s (%s)" % (eg["E"], eg["mode"]))
    if "theta_image" in report:
        ti = report["theta_image"]
        lines.append("theta(E) = %s·%s (saturated: %s)"
                     % (ti["ring"], _fmt_vec(ti["generator"]), ti["saturated"]))
    tau = report.get("tau", {})
    if "nu" in tau:
        lines.append("nu = %s; freq(Omega) = %s; Inf rank %d"
                     % (_fmt_vec(tau["nu"]), tau["freq"], tau["inf_rank"]))
        for gen in tau.get("inf_generators", []):
            lines.append("  Inf generator: %s" % _fmt_vec(gen))
    for seq in ("sequence3", "sequence1"):
        v = report[seq]
        line = "%s: %s" % (seq, v["outcome"])
        if v.get("prime") is not None:
            line += " (certificate prime %d)" % v["prime"]
        if v.get("witness") is not None:
            line += " (witness %s)" % _fmt_vec(v["witness"])
        if v.get("reason"):
            line += " [%s]" % v["reason"]
        lines.append(line)
    bad = [c for c in report.get("invariants", []) if not c["passed"]]
    lines.append("invariant checks: %s"
                 % ("all passed" if not bad else "FAILED: " +
                    ", ".join(c["name"] for c in bad)))
    if elapsed is not None:
        lines.append("elapsed: %.3f s" % elapsed)
    return "\n".join(lines) + "\n"


def _cmd_analyze(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    start = time.monotonic()
    try:
        report, code = analyze_text(
            text, name=path.name, route=args.route,
            periodicity_bound=args.periodicity_bound,
            verify_depth=args.verify_depth, seed=args.seed)
    except ParseError as e:
        print("error: %s: %s" % (path, e), file=sys.stderr)
        return EXIT_USAGE
    except InvariantFailure as e:
        print("invariant failure: %s" % e, file=sys.stderr)
        return EXIT_INVARIANT
    elapsed = time.monotonic() - start
    if args.json:
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write(report_text(report, elapsed=elapsed))
    if args.strict and report.get("status") != "ok":
        return EXIT_INVARIANT
    return code


def _cmd_batch(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        print("error: %s is not a directory" % directory, file=sys.stderr)
        return EXIT_USAGE
    rows = []
    worst = EXIT_OK
    had_error = False
    for path in sorted(directory.glob("*.sub")):
        try:
            report, code = analyze_text(
                path.read_text(), name=path.name, route=args.route,
                periodicity_bound=args.periodicity_bound,
                verify_depth=args.verify_depth, seed=args.seed)
        except (ParseError, InvariantFailure, OSError) as e:
            rows.append((path.name, "error: %s" % e, "", "", "", ""))
            had_error = True
            continue
        worst = max(worst, code)
        if report.get("status") == "rejected-periodic":
            rows.append((path.name, "periodic", "", "", "", ""))
            continue
        pf = report["pf"]
        lam = str(pf["dilation"]) if pf["dilation"] is not None else "alg"
        idx = str(report["decomposition"].get("index", "-"))
        rows.append((path.name, lam, report["eigenvalue_group"]["mode"], idx,
                     report["sequence3"]["outcome"], report["sequence1"]["outcome"]))
    header = ("input", "dilation", "E mode", "index", "seq3", "seq1")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(6)]
    fmt = "  ".join("%%-%ds" % w for w in widths)
    print(fmt % header)
    for r in rows:
        print(fmt % r)
    if args.strict and had_error:
        return EXIT_INVARIANT
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="substcoh",
        description="Exact cohomology and splitting analysis for 1-D substitutions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("analyze", _cmd_analyze), ("batch", _cmd_batch)):
        p = sub.add_parser(name)
        if name == "analyze":
            p.add_argument("file")
            p.add_argument("--json", action="store_true")
        else:
            p.add_argument("dir")
        p.add_argument("--route", choices=["auto", "bouquet", "collared"],
                       default="auto")
        p.add_argument("--periodicity-bound", type=int, default=32)
        p.add_argument("--verify-depth", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--strict", action="store_true")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
