"""Command-line front end: wreathwords <subcommand> [flags]."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import groups as groups_mod
from .exactnum import (CycloNumber, RationalFunction, cyclo_to_json, falling_factorial, format_rf,
                       laurent_expand, laurent_to_json, rf_to_json)
from .freegrp import (DEFAULT_VERTEX_CAP, CapExceeded, WordError, build_w_graph, cyclic_reduce,
                      enumerate_quotients, parse_word, power_decompose)
from .groups import BudgetExceeded, GroupError, load_group
from .measure import (expect_stable, frobenius_terms, stable_inner, verify_main_theorem)
from .oracle import OracleBudgetExceeded, exact_expectation, mc_expectation
from .schreier import ActionSpec, rows_to_csv, run_experiment, summarize
from .stable import FunctionSyntaxError, MultiPartition, StableFunction, parse_stable
from . import whitehead

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text):
    return [int(x) for x in str(text).replace(",", " ").split()]


def _caps(text):
    out = {"vertices": DEFAULT_VERTEX_CAP, "budget": groups_mod.DEFAULT_ENUM_CAP}
    if text:
        for item in text.split(","):
            k, _, v = item.partition("=")
            if k.strip() not in out:
                raise UsageError(f"unknown cap {k!r}; use vertices=..,budget=..")
            out[k.strip()] = int(float(v))
            if out[k.strip()] <= 0:
                raise UsageError("caps must be positive")
    return out


def _common(p, word=True, fn=True):
    if word:
        p.add_argument("-w", "--word", required=True)
    p.add_argument("-G", "--group", default="trivial")
    if fn:
        p.add_argument("-f", "--fn", default="Ind(phi0)")
    p.add_argument("-K", "--laurent", type=int, default=None)
    p.add_argument("--eval", type=_ints, default=[])
    p.add_argument("--caps", default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", action="store_true")


def build_parser():
    p = _Parser(prog="wreathwords", description="Exact word measures on G wr S_n.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    _common(sub.add_parser("expect", help="E_w[f] as a rational function of n"))
    q = sub.add_parser("inner", help="stable inner product <f, g>")
    _common(q, word=False)
    q.add_argument("-g", "--gn", default="1")
    for name in ("pirank", "crit"):
        q = sub.add_parser(name, help="primitivity rank and critical subgroups")
        _common(q, fn=False)
        q.add_argument("--phi", default=None)
    q = sub.add_parser("verify", help="check the unified expansion coefficient by coefficient")
    _common(q)
    q.add_argument("--perturb", default=None, help="add this scalar to the predicted c_sub (harness test)")
    q = sub.add_parser("basis", help="a-basis and sInd-basis forms of f")
    _common(q, word=False)
    q = sub.add_parser("quotients", help="closed partitions of the w-graph with L factors")
    _common(q, fn=False)
    q.add_argument("-lam", "--lam", default="[1]")
    q = sub.add_parser("oracle", help="enumerated or sampled E_w[f] at given n")
    _common(q)
    q.add_argument("--n", type=_ints, required=True)
    q.add_argument("--method", choices=("exact", "mc", "auto"), default="auto")
    q.add_argument("--samples", type=int, default=2000)
    q = sub.add_parser("schreier", help="random Schreier graph spectral experiment")
    q.add_argument("--action", default="signed_points")
    q.add_argument("-G", "--group", default="cyclic2")
    q.add_argument("--n", type=_ints, default=[50])
    q.add_argument("--r", type=int, default=4)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    q.add_argument("--out", default=None)
    q.add_argument("--csv", action="store_true", default=True)
    return p


def _word(text):
    w = parse_word(text)
    if len(w) == 0:
        raise WordError("empty word")
    return w


def _cyclo_text(x):
    return str(x)


def _rf_json(f):
    return {"rational_function": rf_to_json(f), "text": format_rf(f)}


def _series_json(s):
    out = laurent_to_json(s)
    out["text"] = " + ".join(f"({c})*n^{s.lead_order - p}" for p, c in enumerate(s.coeffs) if not c.is_zero()) or "0"
    return out


def cmd_expect(a, caps):
    G = load_group(a.group)
    w = _word(a.word)
    f = parse_stable(a.fn, G)
    res = expect_stable(w, f, G, cap=caps["vertices"])
    K = a.laurent if a.laurent is not None else 4
    out = {"word": str(w), "group": G.name, "function": f.text()}
    out.update(_rf_json(res.value))
    out["laurent"] = _series_json(laurent_expand(res.value, K))
    out["validFrom"] = res.valid_from
    out["quotientCount"] = res.quotient_count
    if a.eval:
        out["eval"] = [{"n": n, "value": cyclo_to_json(res.evaluate_at(n)), "text": str(res.evaluate_at(n))}
                       for n in a.eval]
    return out, EXIT_OK


def cmd_inner(a, caps):
    G = load_group(a.group)
    f = parse_stable(a.fn, G)
    g = parse_stable(a.gn, G)
    val = stable_inner(f, g)
    out = {"group": G.name, "f": f.text(), "g": g.text(), "value": cyclo_to_json(val), "text": str(val)}
    if len(g.terms) == 1 and len(f.terms) == 1:
        (mu, c), = g.terms.items()
        (lam, _), = f.terms.items()
        if c == 1 and len(mu.parts) == 1 and mu.parts[0][1] == 1 and len(lam.parts) <= 8:
            out["frobenius_terms"] = [{"tau": list(t), "inner_rest_one": str(x), "inner_summary_phi": str(y)}
                                      for t, x, y in frobenius_terms(lam, G, mu.parts[0][0])]
    return out, EXIT_OK


def _crit_json(rep, detailed):
    out = {"pi": rep.pi_json(), "crit_count": rep.crit_count}
    if rep.phi:
        out["phi"] = rep.phi
    if detailed:
        out["critical"] = [{"rank": h.rank, "image": h.quotient.image.dump(), "w_word": str(h.w_word),
                            "expectation": cyclo_to_json(h.expectation)} for h in rep.critical]
    return out


def _phi_index(G, name):
    names = G.char_names or []
    if name in names:
        return names.index(name)
    if name.startswith("phi") and name[3:].isdigit() and int(name[3:]) < len(G.characters):
        return int(name[3:])
    raise UsageError(f"unknown character {name!r}")


def cmd_pirank(a, caps, detailed=False):
    w = _word(a.word)
    if a.phi is None:
        out = _crit_json(whitehead.primitivity_rank(w), detailed)
    else:
        G = load_group(a.group)
        i = _phi_index(G, a.phi)
        chi = G.characters[i]
        rep = whitehead.phi_rank(w, chi, G, name=a.phi)
        c_phi, c_pi = whitehead.critical_values(w, chi, G)
        out = _crit_json(rep, detailed)
        out["C_phi"] = cyclo_to_json(c_phi)
        out["Cpi_phi"] = cyclo_to_json(c_pi)
        out["pi_plain"] = whitehead.primitivity_rank(w).pi_json()
    out["word"] = str(w)
    return out, EXIT_OK


def cmd_verify(a, caps):
    G = load_group(a.group)
    w = _word(a.word)
    f = parse_stable(a.fn, G)
    perturb = None
    if a.perturb is not None:
        perturb = parse_stable(a.perturb, G).constant_term()
    rep = verify_main_theorem(w, f, G, a.laurent, perturb=perturb)
    rows = [{"power": r["power"], "expected": None if r["expected"] is None else str(r["expected"]),
             "actual": str(r["actual"]), "ok": r["ok"]} for r in rep["rows"]]
    oracle_rows = []
    ok = rep["pass"]
    res = expect_stable(w, f, G)
    for n in a.eval:
        try:
            exact = exact_expectation(w, f, G, n)
            got = res.evaluate_at(n)
            good = got == exact
            oracle_rows.append({"n": n, "method": "exact", "engine": str(got), "oracle": str(exact), "ok": good})
        except OracleBudgetExceeded:
            got = res.evaluate_at(n).to_complex()
            mc = mc_expectation(w, f, G, n, samples=2000, seed=a.seed)
            good = abs(got.real - mc.mean_re) <= 4 * mc.stderr_re + 1e-12 and \
                abs(got.imag - mc.mean_im) <= 4 * mc.stderr_im + 1e-12
            oracle_rows.append({"n": n, "method": "mc", "engine": str(got), "oracle": str(mc.mean),
                                "stderr": mc.stderr, "ok": good})
        ok = ok and good
    pi = rep["pi"]
    out = {"word": str(w), "group": G.name, "function": f.text(), "pass": ok,
           "pi": "inf" if pi == whitehead.INF else pi, "c0": str(rep["c0"]), "c_sub": str(rep["c_sub"]),
           "coefficients": rows, "oracle": oracle_rows, "value": format_rf(rep["value"])}
    bad = [r for r in rows if not r["ok"]]
    if bad:
        out["failure"] = f"coefficient of n^{bad[0]['power']}: expected {bad[0]['expected']}, got {bad[0]['actual']}"
    return out, EXIT_OK if ok else EXIT_VERIFY


def cmd_basis(a, caps):
    G = load_group(a.group)
    f = parse_stable(a.fn, G)
    return {"group": G.name, "sInd": f.to_sInd().text(), "a": f.to_a().text(), "degree": f.degree}, EXIT_OK


def _L_text(V, Es):
    den = " ".join(f"(n)_{e}" for e in Es if e) or "1"
    return f"(n)_{V} / ({den})"


def cmd_quotients(a, caps):
    w = _word(a.word)
    core, _ = cyclic_reduce(w)
    lam = [int(x) for x in a.lam.strip("[]() ").replace(",", " ").split()]
    g = build_w_graph(core, sorted(lam, reverse=True))
    qs = enumerate_quotients(g, caps["vertices"])
    items = []
    for q in qs:
        V, Es = q.L_key(core.rank)
        L = RationalFunction(falling_factorial(V))
        for e in Es:
            L = L / RationalFunction(falling_factorial(e))
        items.append({"partition": [list(b) for b in q.partition], "chi": q.image.euler_char(),
                      "components": len(q.image.components()),
                      "rank": [1 - len(c) + sum(1 for s, _, _ in q.image.edges if s in set(c)) for c in q.image.components()],
                      "L": _L_text(V, Es), "L_value": format_rf(L), "image": q.image.dump()})
    items.sort(key=lambda d: -d["chi"])
    return {"word": str(core), "lam": lam, "count": len(items), "quotients": items}, EXIT_OK


def cmd_oracle(a, caps):
    G = load_group(a.group)
    w = parse_word(a.word)
    f = parse_stable(a.fn, G)
    rows = []
    for n in a.n:
        row = {"word": str(w), "group": G.name, "n": n, "f": f.text()}
        method = a.method
        if method in ("exact", "auto"):
            try:
                v = exact_expectation(w, f, G, n, budget=caps["budget"])
                z = v.to_complex()
                row.update(method="exact", value_re=z.real, value_im=z.imag, stderr=0.0, samples="", seed="",
                           exact=str(v))
            except OracleBudgetExceeded:
                if method == "exact":
                    raise
                method = "mc"
        if method == "mc":
            mc = mc_expectation(w, f, G, n, samples=a.samples, seed=a.seed)
            row.update(method="mc", value_re=mc.mean_re, value_im=mc.mean_im, stderr=mc.stderr,
                       samples=mc.samples, seed=mc.seed)
        rows.append(row)
    if a.csv:
        cols = ["word", "group", "n", "f", "method", "value_re", "value_im", "stderr", "samples", "seed"]
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)
        return buf.getvalue(), EXIT_OK
    return {"rows": rows}, EXIT_OK


def cmd_schreier(a, caps):
    G = load_group(a.group)
    spec = ActionSpec(a.action, a.k)
    rows = run_experiment(spec, G, a.n, a.r, a.trials, a.seed)
    if a.csv:
        return rows_to_csv(rows), EXIT_OK
    return {"rows": rows, "summary": summarize(rows)}, EXIT_OK


COMMANDS = {"expect": cmd_expect, "inner": cmd_inner, "pirank": cmd_pirank,
            "crit": lambda a, c: cmd_pirank(a, c, detailed=True), "verify": cmd_verify, "basis": cmd_basis,
            "quotients": cmd_quotients, "oracle": cmd_oracle, "schreier": cmd_schreier}


def run(argv=None):
    """Returns (output text, exit code)."""
    try:
        a = build_parser().parse_args(argv)
        caps = _caps(getattr(a, "caps", None))
        groups_mod.DEFAULT_ENUM_CAP = caps["budget"]
    except UsageError as e:
        return json.dumps({"error": str(e), "kind": "usage"}), EXIT_USAGE
    except SystemExit as e:  # --help
        return "", EXIT_OK if not e.code else EXIT_USAGE
    try:
        out, code = COMMANDS[a.cmd](a, caps)
    except whitehead.ProperPowerError as e:
        return json.dumps({"error": str(e), "kind": "proper_power", "pi": 1}), EXIT_COMPUTE
    except (UsageError, WordError, FunctionSyntaxError) as e:
        return json.dumps({"error": str(e), "kind": "usage"}), EXIT_USAGE
    except (GroupError, CapExceeded, BudgetExceeded, OracleBudgetExceeded, ZeroDivisionError,
            ValueError) as e:
        return json.dumps({"error": str(e), "kind": type(e).__name__}), EXIT_COMPUTE
    text = out if isinstance(out, str) else json.dumps(out, indent=2, default=str)
    if getattr(a, "out", None):
        with open(a.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    return text, code


def main(argv=None):
    text, code = run(argv)
    stream = sys.stderr if code in (EXIT_USAGE, EXIT_COMPUTE) else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
