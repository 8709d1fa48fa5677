"""Pure-Python sampling kernels.

Fallback used when the compiled extension ``relcalc._kernels`` is not
available. Both backends implement the same arithmetic, operation for
operation, and produce bit-identical streams; the extension exists only for
speed (the rejection loops draw millions of variates).

Stream contract
---------------
A stream is identified by a 64-bit ``key`` plus a draw position ``pos``.
Raw output j of stream ``key`` is::

    mix64(key + (j + 1) * GOLDEN)   (all arithmetic mod 2**64)

where ``mix64`` is the SplitMix64 finaliser and GOLDEN is 2**64 / phi.
Substream ``index`` of ``key`` has key::

    mix64(mix64(key ^ DERIVE_TWEAK) + index * GOLDEN)

so derived keys form a SplitMix64 output sequence of their own. Uniform
deviates take 52 random bits and live strictly inside (0, 1), which keeps
every log/power below finite.

Variate algorithms: standard normal by the Marsaglia polar method (second
value discarded, so draws are stateless); gamma by Marsaglia-Tsang squeeze
for shape >= 1 with the u**(1/shape) boost for shape < 1; beta as
g1/(g1+g2); binomial by counting n Bernoulli uniforms (n is small here).
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
DERIVE_TWEAK = 0x5851F42D4C957F2D
_INV52 = 1.0 / 4503599627370496.0  # 2**-52, exact

OP_LEAF = 0
OP_SERIES = 1
OP_PARALLEL = 2


def mix64(z: int) -> int:
    """SplitMix64 finaliser (Stafford variant 13) on a 64-bit word."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def raw_u64(key: int, pos: int) -> int:
    """Raw 64-bit output at position pos of the stream keyed by key."""
    return mix64((key + ((pos + 1) * GOLDEN)) & MASK64)


def derive_key(key: int, index: int) -> int:
    """Key of substream index; pure function of (key, index)."""
    h = mix64(key ^ DERIVE_TWEAK)
    return mix64((h + (index * GOLDEN)) & MASK64)


def uniform_one(key: int, pos: int) -> tuple[float, int]:
    """One uniform deviate in the open interval (0, 1)."""
    r = raw_u64(key, pos)
    return ((r >> 12) + 0.5) * _INV52, pos + 1


def normal_one(key: int, pos: int) -> tuple[float, int]:
    """One standard normal deviate (polar method, pair partner discarded)."""
    while True:
        a, pos = uniform_one(key, pos)
        b, pos = uniform_one(key, pos)
        u = 2.0 * a - 1.0
        v = 2.0 * b - 1.0
        s = u * u + v * v
        if s < 1.0 and s > 0.0:
            return u * math.sqrt(-2.0 * math.log(s) / s), pos


def gamma_one(key: int, pos: int, shape: float) -> tuple[float, int]:
    """One standard gamma deviate for any shape > 0."""
    if shape < 1.0:
        g, pos = gamma_one(key, pos, shape + 1.0)
        u, pos = uniform_one(key, pos)
        return g * math.pow(u, 1.0 / shape), pos
    d = shape - (1.0 / 3.0)
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x, pos = normal_one(key, pos)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u, pos = uniform_one(key, pos)
        xx = x * x
        if u < 1.0 - 0.0331 * xx * xx:
            return d * v, pos
        if math.log(u) < 0.5 * xx + d * (1.0 - v + math.log(v)):
            return d * v, pos


def beta_one(key: int, pos: int, alpha: float, beta: float) -> tuple[float, int]:
    """One beta deviate, strictly inside (0, 1)."""
    g1, pos = gamma_one(key, pos, alpha)
    g2, pos = gamma_one(key, pos, beta)
    return g1 / (g1 + g2), pos


def binomial_one(key: int, pos: int, n: int, theta: float) -> tuple[int, int]:
    """One binomial count out of n Bernoulli(theta) trials."""
    c = 0
    for _ in range(n):
        u, pos = uniform_one(key, pos)
        if u < theta:
            c += 1
    return c, pos


def _eval_program(ops, args, thetas, stack):
    """Evaluate a postfix block-diagram program over leaf values."""
    sp = 0
    for i in range(len(ops)):
        op = ops[i]
        m = args[i]
        if op == OP_LEAF:
            stack[sp] = thetas[m]
            sp += 1
        elif op == OP_SERIES:
            base = sp - m
            acc = stack[base]
            for j in range(base + 1, sp):
                acc = acc * stack[j]
            stack[base] = acc
            sp = base + 1
        else:  # OP_PARALLEL
            base = sp - m
            acc = 1.0
            for j in range(base, sp):
                acc = acc * (1.0 - stack[j])
            stack[base] = 1.0 - acc
            sp = base + 1
    return stack[0]


def _program_scratch(ops, args):
    """Max stack depth a program needs (pushes minus pops, tracked)."""
    sp = 0
    deepest = 0
    for i in range(len(ops)):
        if ops[i] == OP_LEAF:
            sp += 1
        else:
            sp -= args[i] - 1
        if sp > deepest:
            deepest = sp
    return deepest


def propagate_run(key, slot_start, slot_stop, ops, args, alphas, betas):
    """Draw one system-reliability value per slot in [slot_start, slot_stop).

    Slot i uses substream derive_key(key, i) from position 0; leaves are
    drawn in program (canonical tree) order, then the program is evaluated.
    """
    ops = [int(o) for o in ops]
    args = [int(a) for a in args]
    alphas = [float(a) for a in alphas]
    betas = [float(b) for b in betas]
    n_leaves = len(alphas)
    thetas = [0.0] * n_leaves
    stack = [0.0] * max(_program_scratch(ops, args), 1)
    out = np.empty(slot_stop - slot_start, dtype=np.float64)
    for i, slot in enumerate(range(slot_start, slot_stop)):
        skey = derive_key(key, slot)
        pos = 0
        for k in range(n_leaves):
            thetas[k], pos = beta_one(skey, pos, alphas[k], betas[k])
        out[i] = _eval_program(ops, args, thetas, stack)
    return out


def condition_run(key, slot_start, slot_stop, ops, args, alphas, betas,
                  n_ts, x_star, budget):
    """Rejection-condition each slot on a system test outcome.

    Per slot: repeatedly draw a candidate system value (exactly as in
    propagate_run), simulate x ~ Binomial(n_ts, candidate), and accept when
    x == x_star. ``budget`` caps the total number of candidates across the
    whole call; slots are filled in index order, so results and the cutoff
    point are independent of how the caller chunks the slot range.

    Returns (values, accepted, attempts); accepted < requested means the
    budget ran out.
    """
    ops = [int(o) for o in ops]
    args = [int(a) for a in args]
    alphas = [float(a) for a in alphas]
    betas = [float(b) for b in betas]
    n_leaves = len(alphas)
    thetas = [0.0] * n_leaves
    stack = [0.0] * max(_program_scratch(ops, args), 1)
    requested = slot_stop - slot_start
    out = np.empty(requested, dtype=np.float64)
    accepted = 0
    attempts = 0
    for slot in range(slot_start, slot_stop):
        skey = derive_key(key, slot)
        pos = 0
        matched = False
        while attempts < budget:
            attempts += 1
            for k in range(n_leaves):
                thetas[k], pos = beta_one(skey, pos, alphas[k], betas[k])
            cand = _eval_program(ops, args, thetas, stack)
            x, pos = binomial_one(skey, pos, n_ts, cand)
            if x == x_star:
                out[accepted] = cand
                accepted += 1
                matched = True
                break
        if not matched:
            break
    return out[:accepted].copy(), accepted, attempts


def discrete_run(key, n_sim, marginal, conditional, z_index, budget):
    """Rejection sampling from a discrete conditional p(y | z = z_index).

    Draws y from ``marginal`` and z from row y of ``conditional`` (both by
    inverse-CDF scan on a single sequential stream), keeping y when z hits
    z_index. Returns (accepted y indices, attempts).
    """
    marginal = [float(p) for p in marginal]
    conditional = [[float(p) for p in row] for row in conditional]
    ny = len(marginal)
    y_fallback = _last_positive(marginal)
    z_fallbacks = [_last_positive(row) for row in conditional]
    out = np.empty(n_sim, dtype=np.int64)
    accepted = 0
    attempts = 0
    pos = 0
    while accepted < n_sim and attempts < budget:
        attempts += 1
        u, pos = uniform_one(key, pos)
        y = _pick(marginal, ny, u, y_fallback)
        u, pos = uniform_one(key, pos)
        z = _pick(conditional[y], len(conditional[y]), u, z_fallbacks[y])
        if z == z_index:
            out[accepted] = y
            accepted += 1
    return out[:accepted].copy(), attempts


def _pick(probs, n, u, fallback):
    cum = 0.0
    for k in range(n):
        cum = cum + probs[k]
        if u < cum:
            return k
    return fallback


def _last_positive(probs):
    last = 0
    for k in range(len(probs)):
        if probs[k] > 0.0:
            last = k
    return last
