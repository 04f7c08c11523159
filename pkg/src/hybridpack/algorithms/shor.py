"""Order finding with base-``N`` digit registers and classical post-processing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError
from ..gates import GateOp
from ..state import as_rng


def _ceil_log(x: float, base: int) -> int:
    n = 0
    while base**n < x:
        n += 1
    return n


@dataclass
class FactoringInstance:
    M: int
    a: int
    N: int = 2
    n_c: int = field(init=False)
    n_w: int = field(init=False)
    r: int | None = None

    def __post_init__(self):
        if self.M < 3 or self.M % 2 == 0:
            raise InvalidArgumentError("M must be an odd composite")
        if all(self.M % p for p in range(3, math.isqrt(self.M) + 1, 2)):
            raise InvalidArgumentError(f"{self.M} is prime")
        self.n_w = _ceil_log(self.M, self.N)
        self.n_c = _ceil_log(self.M**2, self.N)


def modmul_permutation(a: int, M: int, size: int) -> np.ndarray:
    """``|y> -> |a y mod M>`` for ``y < M``; labels ``>= M`` are fixed."""
    perm = np.arange(size)
    y = np.arange(M)
    perm[:M] = (a * y) % M
    return perm


def modmul_gate(inst: FactoringInstance, power: int = 1) -> GateOp:
    W = inst.N**inst.n_w
    perm = modmul_permutation(pow(inst.a, power, inst.M), inst.M, W)
    P = np.zeros((W, W))
    P[perm, np.arange(W)] = 1
    return GateOp(f"V_a^{power}", P, arity=inst.n_w, local_dim=inst.N)


def control_distribution(inst: FactoringInstance) -> np.ndarray:
    """Control-register outcome distribution after controlled powers and the inverse transform."""
    N, n_c = inst.N, inst.n_c
    Q, W = N**n_c, N**inst.n_w
    state = np.zeros((Q, W), dtype=complex)
    state[:, 1] = 1 / np.sqrt(Q)
    digits = np.stack(np.unravel_index(np.arange(Q), (N,) * n_c), axis=1)
    for i in range(n_c):
        base = pow(inst.a, N ** (n_c - 1 - i), inst.M)
        for c in range(1, N):
            perm = modmul_permutation(pow(base, c, inst.M), inst.M, W)
            sel = digits[:, i] == c
            moved = np.zeros_like(state[sel])
            moved[:, perm] = state[sel]
            state[sel] = moved
    # inverse QFT on the control index (numpy FFT has the same sign convention)
    state = np.fft.fft(state, axis=0) / np.sqrt(Q)
    return np.sum(np.abs(state) ** 2, axis=1)


def convergents(num: int, den: int):
    """Successive continued-fraction convergents ``(p, q)`` of ``num/den``."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    while den:
        a, (num, den) = num // den, (den, num % den)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def order_from_sample(s: int, Q: int, a: int, M: int, max_multiple: int = 2) -> int | None:
    """First convergent denominator ``q <= M`` with ``a^(kq) = 1`` for some ``k <= max_multiple``.

    Small multiples recover ``r`` when ``s/Q`` lands on ``k/r`` with ``gcd(k, r) > 1``.
    """
    for _, q in convergents(s, Q):
        if q > M:
            break
        if q == 0:
            continue
        for mult in range(1, max_multiple + 1):
            r = q * mult
            if pow(a, r, M) == 1:
                return r
    return None


def factors_from_order(a: int, r: int, M: int):
    """``gcd(a^{r/2} +- 1, M)`` or ``None`` for odd ``r`` or ``a^{r/2} = -1``."""
    if r % 2:
        return None
    h = pow(a, r // 2, M)
    if h == M - 1:
        return None
    f = sorted({math.gcd(h - 1, M), math.gcd(h + 1, M)} - {1, M})
    return tuple(f) if f else None


def shor_order_find(inst: FactoringInstance, seed=0, trials: int = 1) -> dict:
    """Run ``trials`` sampled measurements; each trial records ``s``, the order and factors."""
    g = math.gcd(inst.a, inst.M)
    if g != 1:
        res = {"M": inst.M, "a": inst.a, "classical": True, "factors": sorted({g, inst.M // g}),
               "trials": [], "successes": 0}
        return res
    rng = as_rng(seed)
    P = control_distribution(inst)
    Q = P.size
    samples = rng.choice(Q, size=trials, p=P / P.sum())
    rows, ok = [], 0
    for s in samples:
        r = order_from_sample(int(s), Q, inst.a, inst.M)
        f = factors_from_order(inst.a, r, inst.M) if r else None
        status = "ok" if f else ("no-order" if r is None else "retry")
        ok += status == "ok"
        rows.append({"s": int(s), "r": r, "factors": list(f) if f else None, "status": status})
    orders = [row["r"] for row in rows if row["r"]]
    inst.r = min(orders) if orders else None
    return {"M": inst.M, "a": inst.a, "N": inst.N, "n_c": inst.n_c, "n_w": inst.n_w, "classical": False,
            "r": inst.r, "trials": rows, "successes": ok,
            "factors": sorted({x for row in rows if row["factors"] for x in row["factors"]})}
