#!/usr/bin/env python3
"""Solve an LP-format MIP written by `dom emit-lp` with SciPy's HiGHS wrapper.

Usage: milp_solve.py MODEL.lp SOLUTION.sol [--gap G] [--time-limit T]

The solution file holds `objective`, `bound` and `status` lines followed by
one `name value` pair per variable. Only the subset of the LP format that the
model writer produces is understood: a single objective, named constraints,
explicit bounds and a Binaries section.
"""

import argparse
import math
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

SECTIONS = {
    "minimize": "objective",
    "subject to": "constraints",
    "bounds": "bounds",
    "binaries": "binaries",
    "end": "end",
}
SENSES = ("<=", ">=", "=")


class LpError(Exception):
    pass


def parse_expression(tokens, where):
    terms = []
    sign, coef = 1.0, None
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -1.0 if tok == "-" else 1.0
            continue
        try:
            coef = float(tok)
            continue
        except ValueError:
            pass
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise LpError(f"{where}: bad token {tok!r}")
        terms.append((tok, sign * (1.0 if coef is None else coef)))
        sign, coef = 1.0, None
    if coef is not None:
        raise LpError(f"{where}: dangling coefficient")
    return terms


def read_lp(path):
    statements = {"objective": [], "constraints": [], "bounds": [], "binaries": []}
    section = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("\\", 1)[0].strip()
            if not line:
                continue
            key = line.lower()
            if key in SECTIONS:
                section = SECTIONS[key]
                continue
            if section is None or section == "end":
                raise LpError(f"{path}:{lineno}: text outside a section")
            rows = statements[section]
            starts_new = section in ("bounds", "binaries") or ":" in line
            if starts_new or not rows:
                rows.append((lineno, line))
            else:
                rows[-1] = (rows[-1][0], rows[-1][1] + " " + line)
    return statements


def build(statements, path):
    names, index = [], {}

    def var(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    if len(statements["objective"]) != 1:
        raise LpError(f"{path}: expected exactly one objective")
    lineno, text = statements["objective"][0]
    _, _, body = text.partition(":")
    objective = [(var(n), c) for n, c in parse_expression(body.split(), f"{path}:{lineno}")]

    rows, cols, vals, lo, hi = [], [], [], [], []
    for r, (lineno, text) in enumerate(statements["constraints"]):
        where = f"{path}:{lineno}"
        _, _, body = text.partition(":")
        tokens = body.split()
        pos = next((k for k, t in enumerate(tokens) if t in SENSES), None)
        if pos is None or pos + 2 != len(tokens):
            raise LpError(f"{where}: constraint needs one sense and a right-hand side")
        rhs = float(tokens[pos + 1])
        for name, coef in parse_expression(tokens[:pos], where):
            rows.append(r)
            cols.append(var(name))
            vals.append(coef)
        sense = tokens[pos]
        lo.append(rhs if sense in (">=", "=") else -np.inf)
        hi.append(rhs if sense in ("<=", "=") else np.inf)

    lower, upper = {}, {}
    for lineno, text in statements["bounds"]:
        tokens = text.split()
        if len(tokens) == 3 and tokens[1] == ">=":
            lower[var(tokens[0])] = float(tokens[2])
        elif len(tokens) == 5 and tokens[1] == tokens[3] == "<=":
            k = var(tokens[2])
            lower[k], upper[k] = float(tokens[0]), float(tokens[4])
        else:
            raise LpError(f"{path}:{lineno}: unsupported bound {text!r}")
    binaries = set()
    for _, text in statements["binaries"]:
        for name in text.split():
            k = var(name)
            binaries.add(k)
            lower[k], upper[k] = 0.0, 1.0

    n = len(names)
    c = np.zeros(n)
    for k, coef in objective:
        c[k] += coef
    lb = np.array([lower.get(k, 0.0) for k in range(n)])
    ub = np.array([upper.get(k, np.inf) for k in range(n)])
    integrality = np.array([1 if k in binaries else 0 for k in range(n)])
    a = coo_matrix((vals, (rows, cols)), shape=(len(lo), n)).tocsr()
    return names, c, a, np.array(lo), np.array(hi), lb, ub, integrality


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("lp_file")
    ap.add_argument("sol_file")
    ap.add_argument("--gap", type=float, default=1e-8)
    ap.add_argument("--time-limit", default="none")
    args = ap.parse_args(argv)

    try:
        names, c, a, lo, hi, lb, ub, integrality = build(read_lp(args.lp_file), args.lp_file)
    except (LpError, ValueError, OSError) as exc:
        print(f"milp_solve: {exc}", file=sys.stderr)
        return 2

    options = {"mip_rel_gap": args.gap, "disp": False}
    if args.time_limit != "none":
        options["time_limit"] = float(args.time_limit)
    constraints = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(c, constraints=constraints, integrality=integrality,
               bounds=Bounds(lb, ub), options=options)

    with open(args.sol_file, "w") as out:
        out.write(f"# scipy.optimize.milp: {res.message}\n")
        if res.x is None:
            status = {2: "infeasible", 3: "unbounded"}.get(res.status, "error")
            out.write(f"status {status}\n")
            return 0
        out.write("status " + ("time-limit" if res.status == 1 else "optimal") + "\n")
        out.write(f"objective {res.fun!r}\n")
        bound = getattr(res, "mip_dual_bound", None)
        if bound is not None and math.isfinite(bound):
            out.write(f"bound {bound!r}\n")
        for name, value in zip(names, res.x):
            out.write(f"{name} {float(value)!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
