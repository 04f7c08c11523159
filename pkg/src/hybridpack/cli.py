"""Command-line experiment runner.

Every subcommand prints one JSON document (``"schema": 1``) and optionally
writes it to ``--output`` or to ``$HYBRIDPACK_OUTPUT_DIR``. Exit codes:
0 when every check passes, 1 when a check fails, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .errors import ContractViolation, InvalidArgumentError
from .protocols.report import _jsonable

SCHEMA = 1
OUTPUT_DIR_ENV = "HYBRIDPACK_OUTPUT_DIR"


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parser

def _common(p: argparse.ArgumentParser, dims: bool = True) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    if dims:
        p.add_argument("--d", type=int, dest="d", help="internal dimension")
        p.add_argument("--D", type=int, dest="D", help="external dimension")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--output", help="report path")
    p.add_argument("--format", choices=("json", "csv"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hybridpack", description="Hybrid-packaged qudit experiments")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    _common(sub.add_parser("gates-verify", help="algebraic identities and gauge checks"))
    _common(sub.add_parser("bases-verify", help="Bell completeness and MUB overlaps"))

    q = sub.add_parser("qec", help="code verification")
    q.add_argument("code", choices=("shor", "steane", "surface"))
    q.add_argument("--local-dim", type=int, dest="local_dim")
    q.add_argument("--exhaustive", action="store_true", default=None)
    q.add_argument("--L", type=int, dest="L")
    q.add_argument("--p", type=float, dest="p")
    _common(q)

    c = sub.add_parser("compile", help="Solovay-Kitaev compilation of a random target")
    c.add_argument("--local-dim", type=int, dest="local_dim")
    c.add_argument("--levels", type=int)
    c.add_argument("--t0", type=int)
    _common(c, dims=False)

    pr = sub.add_parser("protocol", help="communication protocols")
    pr.add_argument("name", choices=("teleport", "superdense", "six-state", "bb84", "b92", "cglmp",
                                     "secret-sharing", "randomness", "qsdc"))
    pr.add_argument("--eve", choices=("none", "intercept"))
    pr.add_argument("--parties", type=int)
    pr.add_argument("--M", type=int, dest="M")
    pr.add_argument("--p-dec", type=float, dest="p_dec")
    pr.add_argument("--bias", type=float)
    _common(pr)

    al = sub.add_parser("algorithm", help="algorithm kernels")
    al.add_argument("name", choices=("qft", "qpe", "grover", "shor", "hhl", "dtqw", "ctqw"))
    al.add_argument("--n", type=int, dest="n", help="register size or search space")
    al.add_argument("--M", type=int, dest="M")
    al.add_argument("--a", type=int, dest="a")
    al.add_argument("--marked", type=int)
    al.add_argument("--theta", type=float)
    al.add_argument("--steps", type=int)
    _common(al)

    me = sub.add_parser("metrology", help="quantum Fisher information")
    me.add_argument("probe", choices=("ghz", "noon", "dephasing"))
    me.add_argument("--n-sites", type=int, dest="n_sites")
    me.add_argument("--gamma-t", type=float, dest="gamma_t")
    _common(me)

    no = sub.add_parser("noise", help="error-budget arithmetic")
    no.add_argument("--t-L", type=int, dest="t_L")
    no.add_argument("--p-th", type=float, dest="p_th")
    _common(no)
    return ap


# ------------------------------------------------------------------ config

_DEFAULTS = {"d": 2, "D": 1, "seed": 0, "trials": 1000, "format": "json", "output": None, "noise": None,
             "local_dim": 2, "exhaustive": False, "L": 3, "p": 0.02, "levels": 2, "t0": 20, "eve": "none",
             "parties": 3, "M": 2, "p_dec": 0.5, "bias": 0.0, "n": None, "a": None, "marked": 0,
             "theta": None, "steps": 20, "n_sites": 3, "gamma_t": 0.5, "t_L": 10, "p_th": None}


def load_config(path: str | None, allowed) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    if "dims" in cfg:
        dims = cfg.pop("dims")
        if not isinstance(dims, dict) or set(dims) - {"d", "D"}:
            raise UsageError("dims must be an object with keys d and D")
        cfg.update(dims)
    unknown = set(cfg) - set(allowed) - {"subcommand", "noise"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def resolve(args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(args).items() if k != "config"}
    cfg = load_config(args.config, flags)
    if "subcommand" in cfg and cfg["subcommand"] != args.subcommand:
        raise UsageError(f"config is for {cfg['subcommand']!r}, not {args.subcommand!r}")
    out = {k: _DEFAULTS.get(k) for k in flags}
    out["noise"] = None
    out.update({k: v for k, v in cfg.items() if k != "subcommand"})
    out.update({k: v for k, v in flags.items() if v is not None})
    return out


def _dims(o):
    from .hilbert import make_dims

    return make_dims(int(o["d"]), int(o["D"]))


# ---------------------------------------------------------------- handlers

def cmd_gates_verify(o):
    from .gates import library, raising_operator, verify_identities
    from .hilbert import ChargeAssignment, commutes_with_charge

    dims = _dims(o)
    rows = verify_identities(dims)
    charge = ChargeAssignment(dims, leak_levels=0, charged=(1,))
    raised = commutes_with_charge(raising_operator(charge), charge, 1e-12)
    gauge = [{"gate": g.name, "passed": bool(commutes_with_charge(g, charge, 1e-12))} for g in library(dims)]
    passed = all(r["passed"] for r in rows) and all(g["passed"] for g in gauge) and not raised
    return "gates-verify", {"d": dims.d, "D": dims.D}, {"identities": rows, "gauge": gauge,
                                                       "raising_operator_commutes": raised}, {}, {}, passed


def cmd_bases_verify(o):
    from .bases import bell_basis_matrix, bell_two_index_matrix, mub_triplet, overlap_table

    dims = _dims(o)
    N = dims.N
    B = bell_basis_matrix(N)
    gram = float(np.max(np.abs(B.conj().T @ B - np.eye(N * N))))
    res = float(np.max(np.abs(B @ B.conj().T - np.eye(N * N))))
    T2 = bell_two_index_matrix(dims)
    gram2 = float(np.max(np.abs(T2.conj().T @ T2 - np.eye(T2.shape[1]))))
    agg = {"bell_gram_error": gram, "bell_resolution_error": res, "two_index_count": T2.shape[1],
           "two_index_gram_error": gram2}
    mub_dev = 0.0
    if N >= 2:
        fam = mub_triplet(N)
        for i in range(3):
            for j in range(i + 1, 3):
                mub_dev = max(mub_dev, float(np.max(np.abs(overlap_table(fam.bases[i], fam.bases[j]) - 1 / N))))
    agg["mub_max_deviation"] = mub_dev
    passed = gram <= 1e-10 and res <= 1e-9 and gram2 <= 1e-10 and mub_dev <= 1e-9
    return "bases-verify", {"d": dims.d, "D": dims.D}, agg, {}, {}, passed


def cmd_qec(o):
    from . import qec

    code = o["code"]
    if code == "surface":
        dims = _dims(o)
        agg = {"single_edge": qec.single_edge_report(int(o["L"]), dims)}
        mc = qec.monte_carlo_logical_rate(int(o["L"]), dims, float(o["p"]), int(o["trials"]), int(o["seed"]))
        agg["monte_carlo"] = mc
        se = agg["single_edge"]
        passed = se["errors_tested"] == se["errors_corrected"]
        return "qec-surface", {"d": dims.d, "D": dims.D, "L": o["L"], "p": o["p"], "trials": o["trials"],
                               "seed": o["seed"]}, agg, {}, {}, passed
    N = int(o["local_dim"])
    if code == "shor":
        built, cw = qec.shor_build(N), qec.shor_codeword(1 % N, N)
    else:
        built, cw = qec.steane_build(N), qec.steane_codeword(1 % N, N)
    if o["exhaustive"]:
        res = qec.exhaustive_single_errors(built, cw)
        ref = {"errors_tested": built.n_phys * (N * N - 1)}
    else:
        res = _sampled_errors(built, cw, int(o["trials"]), int(o["seed"]))
        ref = {}
    passed = res["errors_tested"] == res["errors_corrected"]
    return f"qec-{code}", {"local_dim": N, "seed": o["seed"]}, res, ref, {}, passed


def _sampled_errors(code, codeword, trials: int, seed: int) -> dict:
    from .qec import apply_error, lookup_correct, single_site_errors
    from .state import fidelity

    errs = list(single_site_errors(code.n_phys, code.N))
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(errs), min(trials, len(errs)))
    ok = 0
    for i in picks:
        site, s, t = errs[int(i)]
        fixed = lookup_correct(apply_error(codeword, site, s, t), code)[0]
        ok += fidelity(fixed, codeword) >= 1 - 1e-9
    return {"code": code.kind, "N": code.N, "errors_tested": len(picks), "errors_corrected": int(ok)}


def cmd_compile(o):
    from .compiler import build_net, haar_unitary, sk_compile

    N = int(o["local_dim"])
    rng = np.random.default_rng(int(o["seed"]))
    net = build_net(None, int(o["t0"]), N)
    target = haar_unitary(N, rng)
    results = [sk_compile(target, net, k) for k in range(int(o["levels"]) + 1)]
    agg = {"levels": [{"level": r.levels, "epsilon": r.epsilon, "length": r.length, "word": r.word.tokens()}
                      for r in results], "net_size": len(net.words) if hasattr(net, "words") else None}
    eps = [r.epsilon for r in results]
    passed = all(b < a for a, b in zip(eps, eps[1:]))
    return "compile", {"local_dim": N, "t0": o["t0"], "levels": o["levels"], "seed": o["seed"]}, agg, {}, {}, passed


def cmd_protocol(o):
    from . import protocols as P
    from .state import from_amplitudes

    dims = _dims(o)
    eve = o["eve"] == "intercept"
    cfg = P.ProtocolConfig(dims, int(o["trials"]), int(o["seed"]), eve, float(o["p_dec"]), M=int(o["M"]))
    name = o["name"]
    if name == "teleport":
        rng = np.random.default_rng(int(o["seed"]))
        v = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
        rep = P.teleport(from_amplitudes(v / np.linalg.norm(v), dims, 1), seed=int(o["seed"]))
    elif name == "superdense":
        rep = P.superdense_report(dims, int(o["seed"]))
    elif name == "six-state":
        rep = P.qkd_six_state(cfg)
    elif name in ("bb84", "b92"):
        rep = P.qkd_reduce(name, cfg)
    elif name == "cglmp":
        rep = P.cglmp_bell(dims)[1]
    elif name == "secret-sharing":
        rep = P.secret_share(int(o["parties"]), dims, int(o["M"]), int(o["seed"]), int(o["trials"]), eve)
    elif name == "randomness":
        rep = P.randomness_expand(cfg, bias=float(o["bias"]))
    else:
        rep = P.qsdc_run(cfg)
    d = rep.to_dict(include_records=False)
    return rep.protocol, d["params"], d["aggregates"], d["reference"], d["deviation_sigma"], bool(rep.passed)


def cmd_algorithm(o):
    from . import algorithms as A

    dims = _dims(o)
    N = dims.N
    name = o["name"]
    table = None
    if name == "qft":
        n = int(o["n"] or 2)
        err = float(np.max(np.abs(A.circuit_unitary(A.qft_circuit(N, n), N, n) - A.qft_matrix(N, n))))
        return "qft", {"N": N, "n": n}, {"circuit_vs_dense": err}, {}, {}, err <= 1e-9
    if name == "qpe":
        n = int(o["n"] or 2)
        theta = float(o["theta"]) if o["theta"] is not None else 1.0 / N
        U = np.diag([1.0, np.exp(2j * np.pi * theta)])
        p = A.qpe_estimate(U, np.array([0, 1.0]), n, N)
        ker = A.qpe_kernel(theta, n, N)
        dev = float(np.max(np.abs(p - ker)))
        table = [{"outcome": y, "probability": float(v)} for y, v in enumerate(p)]
        return ("qpe", {"N": N, "n_c": n, "theta": theta}, {"kernel_deviation": dev, "peak": int(np.argmax(p)),
                "distribution": [float(v) for v in p]}, {}, {}, dev <= 1e-9, table)
    if name == "grover":
        size = int(o["n"] or N)
        plan = A.GroverPlan.make(size, int(o["marked"]))
        s, psi = A.grover_search(plan)
        table = [{"outcome": y, "probability": float(abs(v) ** 2)} for y, v in enumerate(psi)]
        return ("grover", {"N": size, "marked": plan.marked, "k": plan.k}, {"success": s},
                {"success": plan.closed_form()}, {}, abs(s - plan.closed_form()) <= 1e-10, table)
    if name == "shor":
        inst = A.FactoringInstance(int(o["M"] or 15), int(o["a"] or 7), N=N)
        res = A.shor_order_find(inst, int(o["seed"]), int(o["trials"]))
        rows = res.pop("trials")
        res["trial_count"] = len(rows)
        passed = res["classical"] or res["successes"] * 2 >= len(rows)
        return "shor", {"M": inst.M, "a": inst.a, "N": N, "seed": o["seed"]}, res, {}, {}, passed
    if name == "hhl":
        x, resid, info = A.hhl_solve(A.HHLInstance(np.diag([1.0, 2.0]), np.ones(2) / np.sqrt(2), 1.0, 2))
        info["residual"] = resid
        return "hhl", {"A": "diag(1,2)", "m": 2}, info, {}, {}, info["fidelity"] >= 1 - 1e-6
    if name == "dtqw":
        from .hilbert import make_dims

        steps = int(o["steps"])
        wd = make_dims(2, 2 * steps + 3)
        init = np.zeros(wd.N, dtype=complex)
        c = steps + 1
        init[c], init[wd.D + c] = 1 / np.sqrt(2), 1j / np.sqrt(2)
        P = A.dtqw_run(steps, init, A.hadamard_coin(), A.cycle_shifts(wd.D), wd)
        var = np.array([A.position_variance(p, c) for p in P])
        expo = A.ballistic_exponent(var)
        return "dtqw", {"steps": steps}, {"variance": var, "exponent": expo}, {"classical_variance": steps}, {}, expo > 1.5
    probs, _ = A.ctqw_run(np.array([[1.0, -1.0], [-1.0, 1.0]]), 1.0, np.array([1.0, 0.0]))
    ref = math.cos(1.0) ** 2
    return "ctqw", {"graph": "K2", "t": 1.0}, {"p0": float(probs[0])}, {"p0": ref}, {}, abs(probs[0] - ref) < 1e-10


def cmd_metrology(o):
    from . import metrology as M

    dims = _dims(o)
    n = int(o["n_sites"])
    if o["probe"] == "ghz":
        tr = M.report_triple(M.ghz_reference(n, dims.d), M.qfi_pure(M.ghz_probe(n, dims)))
    elif o["probe"] == "noon":
        tr = M.report_triple(M.noon_reference(n), M.qfi_pure(M.noon_probe(n, dims)))
    else:
        res = M.dephased_ghz_trajectories(n, dims.d, 1.0, float(o["gamma_t"]), int(o["trials"]), int(o["seed"]))
        tr = M.report_triple(res["decay_formula"], res["monte_carlo"])
        tr["details"] = res
    return f"metrology-{o['probe']}", {"d": dims.d, "D": dims.D, "n_sites": n}, tr, {}, {}, tr["relative_deviation"] <= 1e-9


def cmd_noise(o):
    from .noise import NoiseParams, effective_rate, gv_event_probability, lru_interval_bound, threshold_bound

    dims = _dims(o)
    try:
        params = NoiseParams.from_dict(o["noise"] or {})
    except (InvalidArgumentError, ContractViolation) as exc:
        raise UsageError(str(exc)) from None
    p_th = o["p_th"] if o["p_th"] is not None else (threshold_bound(dims.N, params.gap_over_kT) if dims.N >= 2 else None)
    bud = effective_rate(params, int(o["t_L"]), p_th)
    agg = {"p_eff": bud.p_eff, "p_gv": gv_event_probability(params), "p_th": p_th,
           "lru_interval_bound": lru_interval_bound(params, p_th) if p_th is not None else None,
           "below_threshold": (bud.p_eff <= p_th) if p_th is not None else None}
    return "noise", {"d": dims.d, "D": dims.D, "t_L": o["t_L"], "noise": o["noise"] or {}}, agg, {}, {}, True


HANDLERS = {"gates-verify": cmd_gates_verify, "bases-verify": cmd_bases_verify, "qec": cmd_qec,
            "compile": cmd_compile, "protocol": cmd_protocol, "algorithm": cmd_algorithm,
            "metrology": cmd_metrology, "noise": cmd_noise}


# -------------------------------------------------------------------- run

def _csv(table) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(table)
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        o = resolve(args)
        out = HANDLERS[args.subcommand](o)
    except (UsageError, ValueError) as exc:
        print(f"hybridpack: error: {exc}", file=sys.stderr)
        return 2
    name, params, aggregates, reference, deviation, passed = out[:6]
    table = out[6] if len(out) > 6 else None
    doc = {"schema": SCHEMA, "protocol": name, "params": params, "aggregates": aggregates,
           "reference": reference, "deviation_sigma": deviation, "passed": bool(passed)}
    if o["format"] == "csv":
        if table is None:
            print("hybridpack: error: csv output is only available for qpe and grover", file=sys.stderr)
            return 2
        text = _csv(table)
    else:
        text = json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    path = o["output"]
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{name}.{o['format']}")
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
