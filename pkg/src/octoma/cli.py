"""Command-line front end.

Every run writes a JSON report (stdout or ``--out``) and a short human summary
on stderr. The report holds no timing data, so identical argv gives identical
bytes; wall-clock times go to ``<out>.timing.json`` when ``--out`` is set.

Exit codes: 0 success, 1 negative check result, 2 input not positive
definite, 3 Newton did not converge, 4 singular Newton system, 64 usage error,
65 parse error, 66 missing input file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from octoma import __version__

EX_OK, EX_FAIL, EX_NOTPD, EX_MAXITER, EX_SINGULAR = 0, 1, 2, 3, 4
EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class InputParseError(Exception):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def _steps(text: str) -> int:
    key, _, val = text.partition("=")
    if key != "steps" or not val.isdigit() or int(val) < 1:
        raise argparse.ArgumentTypeError("expected steps=N with N >= 1")
    return int(val)


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_seed, default=d(0xC0FFEE), help="RNG seed, decimal or 0x-hex (default 0xC0FFEE)")
    p.add_argument("--count", type=int, default=d(1000), help="property-test batch size (default 1000)")
    p.add_argument("--backend", choices=("exact", "float"), default=d("exact"), help="scalar backend for verify")
    p.add_argument("--out", default=d(None), help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="octoma", description=__doc__.split("\n\n")[0],
                  formatter_class=argparse.RawDescriptionHelpFormatter,
                  epilog="Exit codes: 0 ok, 1 check failed, 2 not positive definite, 3 max iterations,\n"
                         "4 singular system, 64 usage, 65 parse error, 66 missing file.")
    _globals(top, suppress=False)
    top.add_argument("--version", action="version", version=f"octoma {__version__}")
    sub = top.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    common = _Parser(add_help=False)
    _globals(common, suppress=True)

    v = sub.add_parser("verify", parents=[common], help="run the property suites")
    v.add_argument("--suite", action="append", help="restrict to a suite (repeatable)")
    v.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")

    sz = sub.add_parser("syzygy", help="kernel of the ten quadrics")
    szs = sz.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    c = szs.add_parser("compute", parents=[common], help="compute minimal kernel generators")
    c.add_argument("matrix_out", nargs="?", help="write the generator matrix here")
    c.add_argument("--order", choices=("pot", "top"), default="top", help="module order for the graph module")
    c.add_argument("--basis", choices=("doubling", "table"), default="doubling", help="octonion coordinates")
    k = szs.add_parser("check", parents=[common], help="compare a matrix file with the computed kernel")
    k.add_argument("file")
    k.add_argument("--order", choices=("pot", "top"), default="top")

    h = sub.add_parser("hessian", parents=[common], help="octonionic Hessian of a polynomial file")
    h.add_argument("file")

    cc = sub.add_parser("current-check", parents=[common], help="closedness residuals of a Hermitian current")
    cc.add_argument("file")

    ma = sub.add_parser("ma", help="Monge-Ampere solver on the torus")
    mas = ma.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    for name, text in (("solve", "damped Newton solve"), ("manufacture", "solve a manufactured problem"),
                       ("diagnose", "observed sup norms of a given phi")):
        p = mas.add_parser(name, parents=[common], help=text)
        p.add_argument("config")
        if name != "diagnose":
            p.add_argument("--continuation", type=_steps, default=None, metavar="steps=N",
                           help="scale f linearly over N stages")
    return top


# --- input helpers ---------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}") from None


def _strip_comments(text: str) -> list[tuple[int, str]]:
    out = []
    for n, ln in enumerate(text.splitlines(), start=1):
        body = ln.split("#", 1)[0]
        if body.strip():
            out.append((n, body))
    return out


def _parse_poly_lines(pieces: list[tuple[int, str, int]]):
    """One polynomial broken across lines as ``(line, text, column offset)`` pieces.

    Continuation pieces may start with ``+`` or ``-``; errors keep their line.
    """
    from octoma.poly import Poly, PolyParseError, parse_poly

    total = Poly.zero()
    for i, (n, text, off) in enumerate(pieces):
        s = text.lstrip()
        o = off + len(text) - len(s)
        sign = 1
        if i and s[:1] in "+-":
            sign = -1 if s[0] == "-" else 1
            s, o = s[1:], o + 1
        try:
            total = total + parse_poly(s, line=n, col_offset=o).scale(sign)
        except PolyParseError as exc:
            raise InputParseError(str(exc).split(": ", 1)[1], exc.line, exc.col) from None
    return total


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputParseError(exc.msg, exc.lineno, exc.colno) from None


# --- commands -------------------------------------------------------------

def _run_suite(args: tuple) -> tuple[str, dict]:
    from octoma.suites import run_suites

    seed, count, backend, name = args
    return name, run_suites(seed, count, backend, only=[name])[name]


def cmd_verify(ns) -> tuple[int, dict, str]:
    from octoma.suites import SUITES

    names = ns.suite or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    jobs = [(ns.seed, ns.count, ns.backend, s) for s in names]
    if ns.jobs > 1:
        with ProcessPoolExecutor(ns.jobs) as pool:
            results = dict(pool.map(_run_suite, jobs))
    else:
        results = dict(map(_run_suite, jobs))
    suites = {s: results[s] for s in names}
    failed = sum(p["failed"] for r in suites.values() for p in r.values())
    passed = sum(p["passed"] for r in suites.values() for p in r.values())
    lines = [f"{s}: {sum(p['passed'] for p in r.values())}/{sum(p['instances'] for p in r.values())}"
             for s, r in suites.items()]
    lines += [f"  FAIL {s}.{n}: {p.get('first_failure', '')}" for s, r in suites.items()
              for n, p in r.items() if p["failed"]]
    return (EX_OK if failed == 0 else EX_FAIL), {"suites": suites, "passed": passed, "failed": failed}, "\n".join(lines)


def cmd_syzygy_compute(ns) -> tuple[int, dict, str]:
    from octoma.syzygy import (reference_generators, format_modvecs, modules_equal, same_up_to_sign_and_order,
                               syzygy_kernel, ten_quadrics)

    basis = syzygy_kernel(ten_quadrics(ns.basis), kind=ns.order)
    gens = basis.generators
    text = format_modvecs(gens)
    if ns.matrix_out:
        with open(ns.matrix_out, "w") as fh:
            fh.write(text)
    result = {
        "basis": ns.basis,
        "order": ns.order,
        "generators": [line for line in text.splitlines()],
        "count": len(gens),
        "degrees": sorted({max(p.degree() for p in v) for v in gens}),
        "groebner_size": len(basis.groebner),
        "kernel_groebner_elements": basis.kernel_groebner_size,
    }
    if ns.basis == "doubling":
        result["equals_bundled_matrix"] = modules_equal(gens, reference_generators())
        result["same_columns_up_to_sign"] = same_up_to_sign_and_order(gens, reference_generators())
    summary = f"{len(gens)} generators (Groebner basis of size {len(basis.groebner)}, {ns.order} order)"
    return EX_OK, result, summary


def cmd_syzygy_check(ns) -> tuple[int, dict, str]:
    from octoma.poly import PolyParseError
    from octoma.syzygy import module_containment, parse_modvecs, syzygy_kernel, ten_quadrics

    try:
        cols = parse_modvecs(_read(ns.file))
    except PolyParseError as exc:
        raise InputParseError(str(exc).split(": ", 1)[1], exc.line, exc.col) from None
    if not cols:
        raise InputParseError("matrix file holds no vectors")
    for i, v in enumerate(cols):
        if len(v) != 10:
            raise InputParseError(f"vector {i + 1} has {len(v)} entries, expected 10")
    row = ten_quadrics("doubling")
    kernel = syzygy_kernel(row, kind=ns.order).generators
    from octoma.syzygy import pairing

    not_syz = [i for i, v in enumerate(cols) if not pairing(v, row).is_zero()]
    file_in, bad_file = module_containment(cols, kernel)
    kern_in, bad_kern = module_containment(kernel, cols)
    equal = file_in and kern_in
    result = {
        "vectors": len(cols),
        "kernel_generators": len(kernel),
        "file_in_kernel": file_in,
        "kernel_in_file": kern_in,
        "non_syzygies": not_syz,
        "file_vectors_outside": bad_file,
        "kernel_vectors_outside": bad_kern,
        "modules_equal": equal,
    }
    summary = (f"file in kernel: {file_in}; kernel in file: {kern_in}; "
               f"modules {'equal' if equal else 'differ'}")
    return (EX_OK if equal else EX_FAIL), result, summary


def _herm_poly_json(H) -> dict:
    from octoma.poly import format_poly

    return {"d1": format_poly(H.d1), "d2": format_poly(H.d2), "q": [format_poly(p) for p in H.q.c]}


def cmd_hessian(ns) -> tuple[int, dict, str]:
    from octoma.polycalc import hess_oct, herm_det_poly
    from octoma.poly import format_poly

    lines = _strip_comments(_read(ns.file))
    if not lines:
        raise InputParseError("file holds no polynomial")
    u = _parse_poly_lines([(n, body, 0) for n, body in lines])
    H = hess_oct(u)
    result = {"u": format_poly(u), "hessian": _herm_poly_json(H), "det": format_poly(herm_det_poly(H))}
    q = " + ".join(f"({format_poly(p)})*e{k}" if k else f"({format_poly(p)})"
                   for k, p in enumerate(H.q.c) if not p.is_zero()) or "0"
    summary = f"[[{format_poly(H.d1)}, {q}],\n [conj, {format_poly(H.d2)}]]"
    return EX_OK, result, summary


_CURRENT_NAMES = ("T11", "T22") + tuple(f"T12_{k}" for k in range(8))


def _read_current(path: str):
    from octoma.polycalc import HermPolyMatrix, OctPoly, hess_oct
    from octoma.poly import Poly

    entries: dict[str, list[tuple[int, str, int]]] = {}
    current = None
    for n, body in _strip_comments(_read(path)):
        name, eq, rest = body.partition("=")
        key = name.strip()
        if eq and key and " " not in key and (key in _CURRENT_NAMES or key == "u"):
            current = key
            if key in entries:
                raise InputParseError(f"{key} given twice", n, 1)
            entries[key] = [(n, rest, len(name) + 1)]
        elif eq and key.replace("_", "").isalnum() and not key[0].isdigit():
            raise InputParseError(f"unknown entry {key!r}; expected u, T11, T22 or T12_0..T12_7", n,
                                  len(name) - len(name.lstrip()) + 1)
        elif current is None:
            raise InputParseError("expected 'NAME = polynomial'", n, 1)
        else:
            entries[current].append((n, body, 0))

    def poly(key):
        return _parse_poly_lines(entries[key]) if key in entries else Poly.zero()

    if "u" in entries:
        if len(entries) > 1:
            raise InputParseError("give either u or the entries of T, not both", entries["u"][0][0], 1)
        return hess_oct(poly("u")), True
    if not entries:
        raise InputParseError("file holds no entries")
    return HermPolyMatrix(poly("T11"), poly("T22"), OctPoly(tuple(poly(f"T12_{k}") for k in range(8)))), False


def cmd_current_check(ns) -> tuple[int, dict, str]:
    from octoma.poly import format_poly
    from octoma.polycalc import closed_current_residual, closed_current_residual_scalar

    T, from_u = _read_current(ns.file)
    r1, r2 = closed_current_residual(T)
    scal = closed_current_residual_scalar(T)
    closed_oct = r1.is_zero() and r2.is_zero()
    closed_scal = all(p.is_zero() for p in scal)
    result = {
        "from_potential": from_u,
        "current": _herm_poly_json(T),
        "octonionic_residuals": [[format_poly(p) for p in r.c] for r in (r1, r2)],
        "scalar_residuals": [format_poly(p) for p in scal],
        "closed": closed_oct,
        "scalar_closed": closed_scal,
    }
    nz = sum(not p.is_zero() for p in scal)
    summary = f"closed: {closed_oct} ({nz} of 16 scalar residuals nonzero)"
    if closed_oct != closed_scal:
        summary += "\nwarning: octonionic and scalar residuals disagree"
    return (EX_OK if closed_oct and closed_scal else EX_FAIL), result, summary


def _problem(ns):
    from octoma.ma_solver import problem_from_json
    from octoma.herm2 import HermParseError
    from octoma.octonion import OctonionParseError

    doc = _load_json(ns.config)
    try:
        prob = problem_from_json(doc, os.path.dirname(os.path.abspath(ns.config)))
    except HermParseError as exc:
        raise InputParseError(f"G0 constant: {exc}", None, None) from None
    except OctonionParseError as exc:
        raise InputParseError(f"octonion: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        raise InputParseError(f"config: {msg}") from None
    if getattr(ns, "continuation", None):
        prob.config = dataclasses.replace(prob.config, continuation=ns.continuation)
    return prob


def _solve_result(rep, extra: dict | None = None) -> dict:
    out = rep.to_json()
    out.update(extra or {})
    return out


def cmd_ma_solve(ns) -> tuple[int, dict, str]:
    from octoma.ma_solver import TrigPoly, newton_solve, sup_difference

    prob = _problem(ns)
    f = prob.f if prob.f is not None else TrigPoly()
    rep = newton_solve(f, prob.g0, prob.config, prob.initial)
    sup_phi = sup_difference(rep.solution, TrigPoly())
    summary = (f"converged in {rep.iterations} iterations; residual {rep.residual_sup:.3e}; "
               f"sup|phi| {sup_phi:.3e}; min margin {rep.min_margin:.3e}")
    return EX_OK, _solve_result(rep, {"sup_phi": sup_phi}), summary


def cmd_ma_manufacture(ns) -> tuple[int, dict, str]:
    from octoma.ma_solver import manufacture, newton_solve, sup_difference

    prob = _problem(ns)
    if prob.phi_star is None:
        raise InputParseError("config: manufacture needs 'phi_star'")
    man = manufacture(prob.phi_star, prob.g0, prob.config)
    rep = newton_solve(man.f_nodes, prob.g0, prob.config, prob.initial)
    err = sup_difference(rep.solution, prob.phi_star)
    extra = {"phi_star": prob.phi_star.to_json(), "sup_error": err,
             "manufactured_projection_residual": man.projection_residual}
    summary = (f"converged in {rep.iterations} iterations; sup|phi - phi*| = {err:.3e}; "
               f"residual {rep.residual_sup:.3e}")
    return EX_OK, _solve_result(rep, extra), summary


def cmd_ma_diagnose(ns) -> tuple[int, dict, str]:
    from octoma.ma_solver import diagnostics

    prob = _problem(ns)
    phi = prob.phi if prob.phi is not None else prob.phi_star
    if phi is None:
        raise InputParseError("config: diagnose needs 'phi' or 'phi_star'")
    d = diagnostics(phi, prob.g0, prob.g0.constant)
    result = {"sup_phi": d.sup_phi, "sup_laplacian": d.sup_laplacian, "min_margin": d.min_margin}
    summary = f"sup|phi| {d.sup_phi:.3e}; sup|Laplacian phi| {d.sup_laplacian:.3e}; min margin {d.min_margin:.3e}"
    return EX_OK, result, summary


COMMANDS = {
    ("verify", None): cmd_verify,
    ("syzygy", "compute"): cmd_syzygy_compute,
    ("syzygy", "check"): cmd_syzygy_check,
    ("hessian", None): cmd_hessian,
    ("current-check", None): cmd_current_check,
    ("ma", "solve"): cmd_ma_solve,
    ("ma", "manufacture"): cmd_ma_manufacture,
    ("ma", "diagnose"): cmd_ma_diagnose,
}


def _error_code(exc: BaseException) -> tuple[int, str]:
    from octoma.herm2 import NotPositiveDefinite
    from octoma.ma_solver import MaxIterations, SingularNewtonSystem

    if isinstance(exc, InputParseError):
        return EX_DATAERR, "parse_error"
    if isinstance(exc, FileNotFoundError):
        return EX_NOINPUT, "missing_input"
    if isinstance(exc, NotPositiveDefinite):
        return EX_NOTPD, "not_positive_definite"
    if isinstance(exc, MaxIterations):
        return EX_MAXITER, "max_iterations"
    if isinstance(exc, SingularNewtonSystem):
        return EX_SINGULAR, "singular_system"
    raise exc


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        key = (ns.command, getattr(ns, "action", None))
        if ns.command is None or key not in COMMANDS:
            raise UsageError("missing command" if ns.command is None else f"missing action for {ns.command}")
        if ns.count < 1:
            raise UsageError("--count must be positive")
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"octoma: error: {exc}", file=sys.stderr)
        return EX_USAGE
    name = " ".join(k for k in key if k)
    report = {"command": name, "seed": ns.seed, "count": ns.count, "backend": ns.backend,
              "version": __version__}
    t0 = time.perf_counter()
    try:
        code, result, summary = COMMANDS[key](ns)
        report.update(status="ok" if code == EX_OK else "failed", exit_code=code, result=result)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"octoma: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except Exception as exc:  # mapped domain errors; anything else propagates
        code, kind = _error_code(exc)
        err = {"type": kind, "message": str(exc)}
        if isinstance(exc, InputParseError) and exc.line is not None:
            err.update(line=exc.line, col=exc.col)
        if getattr(exc, "condition", None) is not None:
            err["condition"] = exc.condition
        report.update(status="error", exit_code=code, error=err)
        summary = f"error ({kind}): {exc}"
    elapsed = time.perf_counter() - t0
    _emit(report, ns.out)
    if ns.out:
        with open(ns.out + ".timing.json", "w") as fh:
            json.dump({"command": name, "wall_time_seconds": elapsed}, fh)
            fh.write("\n")
    print(summary, file=sys.stderr)
    print(f"[{name}: exit {report['exit_code']}, {elapsed:.2f}s]", file=sys.stderr)
    return report["exit_code"]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
