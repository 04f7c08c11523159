"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hybridpack.algorithms import FactoringInstance, GroverPlan, HHLInstance, grover_search, hhl_solve, shor_order_find
from hybridpack.bases import bell_basis_matrix, bell_two_index_matrix, mub_triplet, overlap_table
from hybridpack.compiler import build_net, haar_unitary, sk_compile
from hybridpack.gates import h_matrix, library, omega, raising_operator, x_matrix, z_matrix
from hybridpack.hilbert import ChargeAssignment, commutes_with_charge, make_dims
from hybridpack.metrology import (fidelity_curvature_qfi, ghz_probe, ghz_reference, noon_probe, noon_reference,
                                  qfi_pure)
from hybridpack.noise import (NoiseParams, effective_rate, gv_event_probability, leaked_fraction_mc,
                              lru_interval_bound, threshold_bound)
from hybridpack.protocols import (ProtocolConfig, cglmp_bell, lhv_maximum, qkd_six_state, qsdc_run, secret_share,
                                  six_state_eve_reference, superdense, superdense_capacity, teleport)
from hybridpack.qec import (all_commute, apply_error, code_projector, exhaustive_single_errors, lookup_correct,
                            monte_carlo_logical_rate, shor_build, shor_codeword, single_edge_report, steane_build,
                            steane_codeword, surface_build, transversal_h)
from hybridpack.state import fidelity, from_amplitudes


def verdict(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _maxnorm(a, b):
    return float(np.max(np.abs(a - b)))


def test_01_gate_algebra():
    t = time.perf_counter()
    worst = {"XZ=wZX": 0.0, "HXH+=Z": 0.0, "HZH+=X+": 0.0, "H^4=I": 0.0}
    for N in (2, 3, 4, 6, 12):
        X, Z, H = x_matrix(N), z_matrix(N), h_matrix(N)
        Hd = H.conj().T
        errs = {
            "XZ=wZX": _maxnorm(X @ Z, omega(N) * Z @ X),
            "HXH+=Z": _maxnorm(H @ X @ Hd, Z),
            "HZH+=X+": _maxnorm(H @ Z @ Hd, X.conj().T),
            "H^4=I": _maxnorm(np.linalg.matrix_power(H, 4), np.eye(N)),
        }
        worst = {k: max(worst[k], v) for k, v in errs.items()}
    elapsed = time.perf_counter() - t
    ok = all(v <= 1e-12 for v in worst.values()) and elapsed < 1
    detail = ", ".join(f"{k} err={v:.1e}" for k, v in worst.items())
    verdict(1, ok, f"{detail}; {elapsed:.3f}s")


def test_02_gauge_contract():
    t = time.perf_counter()
    bad = []
    for d, D in ((2, 1), (3, 1), (2, 2), (2, 3), (3, 2)):
        dims = make_dims(d, D)
        ch = ChargeAssignment(dims)
        bad += [f"{g.name}@{d}x{D}" for g in library(dims) if not commutes_with_charge(g, ch, 1e-12)]
    raiser = raising_operator(ChargeAssignment(make_dims(2, 3)))
    caught = not commutes_with_charge(raiser, ChargeAssignment(make_dims(2, 3)), 1e-12)
    elapsed = time.perf_counter() - t
    verdict(2, not bad and caught and elapsed < 1,
            f"violating library gates={bad}, raising operator rejected={caught}; {elapsed:.3f}s")


def test_03_bell_completeness():
    gram = resolve = 0.0
    for N in range(2, 7):
        B = bell_basis_matrix(N)
        gram = max(gram, _maxnorm(B.conj().T @ B, np.eye(N * N)))
        resolve = max(resolve, _maxnorm(B @ B.conj().T, np.eye(N * N)))
    B2 = bell_two_index_matrix(make_dims(2, 3))
    two = _maxnorm(B2.conj().T @ B2, np.eye(36))
    ok = gram <= 1e-10 and resolve <= 1e-9 and B2.shape[1] == 36 and two <= 1e-10
    verdict(3, ok, f"gram={gram:.1e}, resolution={resolve:.1e}, two-index states={B2.shape[1]} (gram {two:.1e})")


def test_04_mub_triplet():
    worst = 0.0
    for N in (2, 3, 5, 4, 6):
        bases = mub_triplet(N).bases
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, float(np.max(np.abs(overlap_table(bases[i], bases[j]) - 1 / N))))
    verdict(4, worst <= 1e-9, f"max |overlap^2 - 1/N| = {worst:.1e}")


def test_05_teleportation():
    t = time.perf_counter()
    fmin, branches = 1.0, 0
    rng = np.random.default_rng(2024)
    for d, D in ((2, 1), (2, 3)):
        dims = make_dims(d, D)
        for _ in range(2):
            v = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
            rep = teleport(from_amplitudes(v / np.linalg.norm(v), dims, 1))
            fmin = min(fmin, rep.aggregates["min_fidelity"])
            branches += rep.aggregates["branches"]
    elapsed = time.perf_counter() - t
    verdict(5, fmin >= 1 - 1e-9 and branches == 2 * (4 + 36) and elapsed < 5,
            f"min fidelity={fmin:.12f} over {branches} branches; {elapsed:.2f}s")


def test_06_superdense():
    failures, cap_ok = 0, True
    for N in range(2, 9):
        dims = make_dims(N, 1)
        failures += sum(superdense(m, dims, seed=m) != m for m in range(N * N))
        cap_ok &= superdense_capacity(N) == 2 * math.log2(N)
    verdict(6, failures == 0 and cap_ok, f"decode failures={failures}, capacity 2log2N={cap_ok}")


def test_07_six_state():
    rows, ok = [], True
    for d, D in ((2, 1), (2, 3)):
        dims = make_dims(d, D)
        cfg = ProtocolConfig(dims, trials=20_000, seed=7)
        eve = qkd_six_state(cfg, eve=True)
        clean = qkd_six_state(cfg, eve=False)
        ref = six_state_eve_reference(dims.N)
        dev = eve.deviation_sigma["eve_accuracy"]
        ok &= dev <= 3 and clean.aggregates["qber"] == 0.0 and abs(eve.reference["eve_accuracy"] - ref) < 1e-12
        rows.append(f"N={dims.N} acc={eve.aggregates['eve_accuracy']:.4f} ref={ref:.4f} ({dev:.2f} sigma) "
                    f"qber0={clean.aggregates['qber']}")
    verdict(7, ok, "; ".join(rows))


def test_08_shor_code():
    rows, ok = [], True
    for N in (2, 3):
        t = time.perf_counter()
        rep = exhaustive_single_errors(shor_build(N), shor_codeword(1 % N, N))
        elapsed = time.perf_counter() - t
        ok &= rep["errors_tested"] == 9 * (N * N - 1) == rep["errors_corrected"]
        if N == 3:
            ok &= elapsed < 60
        rows.append(f"N={N} {rep['errors_corrected']}/{rep['errors_tested']} in {elapsed:.1f}s")
    verdict(8, ok, "; ".join(rows))


def test_09_steane_code():
    rows, ok = [], True
    for N in (2, 3):
        code = steane_build(N)
        cw = steane_codeword(0, N)
        fixed_all, syndromes, count = True, {}, 0
        for site in range(7):
            for e in range(1, N):
                for s, t in ((e, 0), (0, e)):
                    out, syn, _ = lookup_correct(apply_error(cw, site, s, t), code)
                    fixed_all &= fidelity(out, cw) >= 1 - 1e-9
                    syndromes[(site, s, t)] = syn
                    count += 1
        distinct = len(set(syndromes.values())) == count and not any(not any(v) for v in syndromes.values())
        ok &= fixed_all and distinct
        rows.append(f"N={N} {count} errors corrected={fixed_all} distinct syndromes={distinct}")
    P = code_projector(steane_build(2))
    H = transversal_h(2)
    h_ok = _maxnorm(H @ P @ H.conj().T, P) < 1e-9
    verdict(9, ok and h_ok, "; ".join(rows) + f"; transversal H preserves codespace={h_ok}")


def test_10_surface_code():
    ok, rows = True, []
    for L in (2, 3):
        for d, D in ((2, 2), (2, 3)):
            code = surface_build(L, make_dims(d, D))
            comm = all_commute(code.checks)
            logic = all(code.logicals[f"Z{t}"].phase_with(code.logicals[f"X{t}"]) == 1
                        and all(c.phase_with(code.logicals[f"{k}{t}"]) == 0 for c in code.checks for k in "XZ")
                        for t in ("d", "D"))
            ok &= comm and logic
    for d, D in ((2, 2), (2, 3)):
        edge = single_edge_report(3, make_dims(d, D))
        ok &= edge["errors_corrected"] == edge["errors_tested"]
        r2 = monte_carlo_logical_rate(2, make_dims(d, D), 0.02, 10_000, seed=11)
        r3 = monte_carlo_logical_rate(3, make_dims(d, D), 0.02, 10_000, seed=11)
        ok &= r3["rate"] < r2["rate"]
        rows.append(f"(d,D)=({d},{D}) edges {edge['errors_corrected']}/{edge['errors_tested']}, "
                    f"p=0.02 rate L2={r2['rate']:.4f} L3={r3['rate']:.4f}")
    verdict(10, ok, "checks commute, logical Z X = w X Z per layer; " + "; ".join(rows))


def test_11_compiler():
    t = time.perf_counter()
    net = build_net(None, 20, 2)
    charge = ChargeAssignment(make_dims(2, 1))
    rng = np.random.default_rng(11)
    monotone = gauge = 0
    worst = [0.0, 0.0, 0.0]
    for _ in range(100):
        U = haar_unitary(2, rng)
        U = U / np.sqrt(np.linalg.det(U))
        res = [sk_compile(U, net, k) for k in range(3)]
        e = [r.epsilon for r in res]
        worst = [max(w, x) for w, x in zip(worst, e)]
        monotone += e[2] < e[1] < e[0]
        gauge += all(r.word.prefix_gauge_ok(charge) for r in res)
    elapsed = time.perf_counter() - t
    verdict(11, monotone == 100 and gauge == 100,
            f"eps2<eps1<eps0 on {monotone}/100, gauge-safe prefixes {gauge}/100, "
            f"worst eps={[round(w, 4) for w in worst]}, net={len(net)} words; {elapsed:.0f}s")


def test_12_grover():
    worst = 0.0
    for N in (4, 16, 64):
        plan = GroverPlan.make(N, marked=N // 3)
        p, _ = grover_search(plan)
        worst = max(worst, abs(p - plan.closed_form()))
    p4, _ = grover_search(GroverPlan.make(4, 1, k=1))
    verdict(12, worst <= 1e-10 and abs(p4 - 1) <= 1e-12, f"max |p - sin^2| = {worst:.1e}, N=4 k=1 success={p4!r}")


def test_13_shor_factoring():
    t = time.perf_counter()
    out = shor_order_find(FactoringInstance(15, 7), seed=0, trials=50)
    elapsed = time.perf_counter() - t
    ok = out["successes"] >= 25 and sorted(out["factors"]) == [3, 5] and elapsed < 120
    verdict(13, ok, f"M=15 factors={sorted(out['factors'])} in {out['successes']}/50 trials; {elapsed:.1f}s")


def test_14_hhl():
    rng = np.random.default_rng(5)
    cases = [(np.array([[1.5, 0.5], [0.5, 1.5]]), np.array([1.0, 0.3]), 1.0, 2)]
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    cases.append((Q @ np.diag([1.0, 2.0, 3.0, 5.0]) @ Q.T, rng.normal(size=4), 1.0, 3))
    fids = []
    for A, b, C, m in cases:
        x, _, info = hhl_solve(HHLInstance(A, b, C, m))
        direct = np.linalg.solve(A, b)
        fids.append(float(abs(np.vdot(direct / np.linalg.norm(direct), x)) ** 2))
    verdict(14, min(fids) >= 1 - 1e-6, f"fidelity vs direct solve: 2x2={fids[0]:.12f}, 4x4={fids[1]:.12f}")


def test_15_metrology():
    ghz_err = 0.0
    for d in range(2, 6):
        for n in range(1, 5):
            if d**n > 5**4:
                continue
            ghz_err = max(ghz_err, abs(qfi_pure(ghz_probe(n, make_dims(d, 1))) - ghz_reference(n, d)))
    noon_err = max(abs(qfi_pure(noon_probe(n, make_dims(2, 2))) - noon_reference(n)) for n in range(1, 5))
    fd_err = max(abs(fidelity_curvature_qfi(p) - qfi_pure(p))
                 for p in (ghz_probe(3, make_dims(3, 1)), ghz_probe(2, make_dims(2, 3)), noon_probe(3, make_dims(2, 2))))
    ok = ghz_err <= 1e-9 and noon_err <= 1e-9 and fd_err <= 1e-4
    verdict(15, ok, f"GHZ err={ghz_err:.1e}, NOON err vs 4n^2={noon_err:.3g}, finite-difference err={fd_err:.1e}")


def test_16_cglmp():
    vals = {N: cglmp_bell(make_dims(N, 1))[0] for N in (2, 3)}
    claimed = {N: cglmp_bell(make_dims(N, 1))[1].reference["claimed_quantum_value"] for N in (2, 3)}
    lhv = lhv_maximum(2)
    info = ", ".join(f"N={N} I={vals[N]:.4f} (claimed {claimed[N]:.4f}, informational)" for N in vals)
    verdict(16, all(v > 2 for v in vals.values()) and abs(lhv - 2) < 1e-12, f"{info}; LHV max N=2 = {lhv}")


def test_17_noise_arithmetic():
    checks = {
        "p_eff": effective_rate(NoiseParams(p_gc=0.001, p_leak=0.0001), 10).p_eff == pytest.approx(0.002, abs=1e-12),
        "p_eff(p_leak=0)": effective_rate(NoiseParams(p_gc=0.001), 50).p_eff == 0.001,
        "t_L bound=18": lru_interval_bound(NoiseParams(p_gc=0.001, p_leak=0.0005), 0.01) == 18,
        "threshold N=2 gap->inf = 0.25": abs(threshold_bound(2, math.inf) - 0.25) < 1e-12,
        "threshold N=6 gap->inf = 0.1": abs(threshold_bound(6, math.inf) - 0.1) < 1e-12,
        "threshold N=2 gap=0 = 0": threshold_bound(2, 0.0) == 0.0,
        "q(gap=0)=p_gv0": gv_event_probability(NoiseParams(p_gv0=0.1)) == 0.1,
        "q(gap=ln10)=0.01": abs(gv_event_probability(NoiseParams(p_gv0=0.1, gap_over_kT=math.log(10))) - 0.01) < 1e-15,
    }
    p, t_L, trials = 0.02, 10, 20_000
    f = leaked_fraction_mc(p, t_L, trials, seed=17)
    q = 1 - (1 - p) ** t_L
    sigmas = abs(f - q) / math.sqrt(q * (1 - q) / trials)
    checks["leak MC within 3 sigma"] = sigmas <= 3
    failed = [k for k, v in checks.items() if not v]
    verdict(17, not failed, f"failed={failed}; threshold_bound(2, inf)={threshold_bound(2, math.inf)}; "
                            f"leak fraction {f:.4f} vs {q:.4f} ({sigmas:.2f} sigma)")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "hybridpack.cli", *argv], capture_output=True, text=True).stdout


def test_18_determinism():
    runs = [
        ("protocol", "six-state", "--d", "2", "--D", "3", "--trials", "2000", "--seed", "4", "--eve", "intercept"),
        ("qec", "surface", "--L", "2", "--trials", "500", "--seed", "4"),
        ("algorithm", "shor", "--M", "15", "--a", "7", "--trials", "5", "--seed", "4"),
    ]
    same = []
    for argv in runs:
        a, b = _cli(*argv), _cli(*argv)
        same.append(bool(a) and a == b and json.loads(a)["schema"] == 1)
    cfg = ProtocolConfig(make_dims(2, 2), trials=1000, seed=8)
    lib = [qsdc_run(cfg, eve=True).to_json() == qsdc_run(cfg, eve=True).to_json(),
           secret_share(3, make_dims(2, 1), seed=8, trials=500, eve=True).to_json()
           == secret_share(3, make_dims(2, 1), seed=8, trials=500, eve=True).to_json()]
    verdict(18, all(same) and all(lib), f"CLI reports identical={same}, library reports identical={lib}")
