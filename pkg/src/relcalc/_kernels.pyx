# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled sampling kernels.

Mirrors ``relcalc._pykernels`` operation for operation; the two backends
must produce bit-identical streams (the build disables FP contraction so
the C arithmetic rounds exactly like CPython's). See _pykernels for the
stream contract and algorithm notes.
"""

from libc.math cimport log, sqrt, pow
from libc.stdint cimport uint64_t, int64_t

import numpy as np

cdef uint64_t GOLDEN_C = 0x9E3779B97F4A7C15
cdef uint64_t DERIVE_TWEAK_C = 0x5851F42D4C957F2D
cdef double INV52 = 1.0 / 4503599627370496.0  # 2**-52, exact

MASK64 = (1 << 64) - 1
GOLDEN = GOLDEN_C
DERIVE_TWEAK = DERIVE_TWEAK_C

OP_LEAF = 0
OP_SERIES = 1
OP_PARALLEL = 2


cdef inline uint64_t _mix64(uint64_t z) noexcept:
    z ^= z >> 30
    z = z * <uint64_t>0xBF58476D1CE4E5B9
    z ^= z >> 27
    z = z * <uint64_t>0x94D049BB133111EB
    z ^= z >> 31
    return z


cdef inline uint64_t _raw(uint64_t key, uint64_t pos) noexcept:
    return _mix64(key + (pos + 1) * GOLDEN_C)


cdef inline uint64_t _derive(uint64_t key, uint64_t index) noexcept:
    cdef uint64_t h = _mix64(key ^ DERIVE_TWEAK_C)
    return _mix64(h + index * GOLDEN_C)


cdef inline double _uniform(uint64_t key, uint64_t *pos) noexcept:
    cdef uint64_t r = _raw(key, pos[0])
    pos[0] += 1
    return (<double>(r >> 12) + 0.5) * INV52


cdef inline double _normal(uint64_t key, uint64_t *pos) noexcept:
    cdef double a, b, u, v, s
    while True:
        a = _uniform(key, pos)
        b = _uniform(key, pos)
        u = 2.0 * a - 1.0
        v = 2.0 * b - 1.0
        s = u * u + v * v
        if s < 1.0 and s > 0.0:
            return u * sqrt(-2.0 * log(s) / s)


cdef double _gamma(uint64_t key, uint64_t *pos, double shape) noexcept:
    cdef double g, u, d, c, x, v, xx
    if shape < 1.0:
        g = _gamma(key, pos, shape + 1.0)
        u = _uniform(key, pos)
        return g * pow(u, 1.0 / shape)
    d = shape - (1.0 / 3.0)
    c = 1.0 / sqrt(9.0 * d)
    while True:
        x = _normal(key, pos)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = _uniform(key, pos)
        xx = x * x
        if u < 1.0 - 0.0331 * xx * xx:
            return d * v
        if log(u) < 0.5 * xx + d * (1.0 - v + log(v)):
            return d * v


cdef inline double _beta(uint64_t key, uint64_t *pos, double alpha, double beta) noexcept:
    cdef double g1 = _gamma(key, pos, alpha)
    cdef double g2 = _gamma(key, pos, beta)
    return g1 / (g1 + g2)


cdef inline int64_t _binomial(uint64_t key, uint64_t *pos, int64_t n, double theta) noexcept:
    cdef int64_t c = 0
    cdef int64_t i
    cdef double u
    for i in range(n):
        u = _uniform(key, pos)
        if u < theta:
            c += 1
    return c


cdef inline double _eval_program(int64_t[::1] ops, int64_t[::1] args,
                                 double *thetas, double *stack) noexcept:
    cdef Py_ssize_t i, j, base, sp = 0
    cdef int64_t op, m
    cdef double acc
    for i in range(ops.shape[0]):
        op = ops[i]
        m = args[i]
        if op == 0:  # leaf
            stack[sp] = thetas[m]
            sp += 1
        elif op == 1:  # series
            base = sp - m
            acc = stack[base]
            for j in range(base + 1, sp):
                acc = acc * stack[j]
            stack[base] = acc
            sp = base + 1
        else:
            base = sp - m
            acc = 1.0
            for j in range(base, sp):
                acc = acc * (1.0 - stack[j])
            stack[base] = 1.0 - acc
            sp = base + 1
    return stack[0]


cdef Py_ssize_t _program_scratch(int64_t[::1] ops, int64_t[::1] args):
    cdef Py_ssize_t i, sp = 0, deepest = 0
    for i in range(ops.shape[0]):
        if ops[i] == 0:  # leaf
            sp += 1
        else:
            sp -= args[i] - 1
        if sp > deepest:
            deepest = sp
    return deepest


def mix64(z):
    """SplitMix64 finaliser (Stafford variant 13) on a 64-bit word."""
    return _mix64(<uint64_t>(z & MASK64))


def raw_u64(key, pos):
    """Raw 64-bit output at position pos of the stream keyed by key."""
    return _raw(<uint64_t>key, <uint64_t>pos)


def derive_key(key, index):
    """Key of substream index; pure function of (key, index)."""
    return _derive(<uint64_t>key, <uint64_t>index)


def uniform_one(key, pos):
    """One uniform deviate in the open interval (0, 1)."""
    cdef uint64_t p = <uint64_t>pos
    cdef double v = _uniform(<uint64_t>key, &p)
    return v, p


def normal_one(key, pos):
    """One standard normal deviate (polar method, pair partner discarded)."""
    cdef uint64_t p = <uint64_t>pos
    cdef double v = _normal(<uint64_t>key, &p)
    return v, p


def gamma_one(key, pos, shape):
    """One standard gamma deviate for any shape > 0."""
    cdef uint64_t p = <uint64_t>pos
    cdef double v = _gamma(<uint64_t>key, &p, <double>shape)
    return v, p


def beta_one(key, pos, alpha, beta):
    """One beta deviate, strictly inside (0, 1)."""
    cdef uint64_t p = <uint64_t>pos
    cdef double v = _beta(<uint64_t>key, &p, <double>alpha, <double>beta)
    return v, p


def binomial_one(key, pos, n, theta):
    """One binomial count out of n Bernoulli(theta) trials."""
    cdef uint64_t p = <uint64_t>pos
    cdef int64_t v = _binomial(<uint64_t>key, &p, <int64_t>n, <double>theta)
    return v, p


def propagate_run(key, slot_start, slot_stop, ops, args, alphas, betas):
    """Draw one system-reliability value per slot in [slot_start, slot_stop).

    Slot i uses substream derive_key(key, i) from position 0; leaves are
    drawn in program (canonical tree) order, then the program is evaluated.
    """
    cdef uint64_t k = <uint64_t>key
    cdef int64_t start = <int64_t>slot_start
    cdef int64_t stop = <int64_t>slot_stop
    cdef int64_t[::1] ops_v = np.ascontiguousarray(ops, dtype=np.int64)
    cdef int64_t[::1] args_v = np.ascontiguousarray(args, dtype=np.int64)
    cdef double[::1] alphas_v = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] betas_v = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t n_leaves = alphas_v.shape[0]
    thetas_arr = np.zeros(max(n_leaves, 1), dtype=np.float64)
    stack_arr = np.zeros(max(_program_scratch(ops_v, args_v), 1), dtype=np.float64)
    cdef double[::1] thetas = thetas_arr
    cdef double[::1] stack = stack_arr
    out = np.empty(stop - start, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef int64_t slot
    cdef Py_ssize_t i, leaf
    cdef uint64_t skey, pos
    for i in range(stop - start):
        slot = start + i
        skey = _derive(k, <uint64_t>slot)
        pos = 0
        for leaf in range(n_leaves):
            thetas[leaf] = _beta(skey, &pos, alphas_v[leaf], betas_v[leaf])
        out_v[i] = _eval_program(ops_v, args_v, &thetas[0], &stack[0])
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
    cdef uint64_t k = <uint64_t>key
    cdef int64_t start = <int64_t>slot_start
    cdef int64_t stop = <int64_t>slot_stop
    cdef int64_t nts = <int64_t>n_ts
    cdef int64_t xstar = <int64_t>x_star
    cdef int64_t cap = <int64_t>budget
    cdef int64_t[::1] ops_v = np.ascontiguousarray(ops, dtype=np.int64)
    cdef int64_t[::1] args_v = np.ascontiguousarray(args, dtype=np.int64)
    cdef double[::1] alphas_v = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] betas_v = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t n_leaves = alphas_v.shape[0]
    thetas_arr = np.zeros(max(n_leaves, 1), dtype=np.float64)
    stack_arr = np.zeros(max(_program_scratch(ops_v, args_v), 1), dtype=np.float64)
    cdef double[::1] thetas = thetas_arr
    cdef double[::1] stack = stack_arr
    out = np.empty(stop - start, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef int64_t slot, x, accepted = 0, attempts = 0
    cdef Py_ssize_t leaf
    cdef uint64_t skey, pos
    cdef double cand
    cdef bint matched
    for slot in range(start, stop):
        skey = _derive(k, <uint64_t>slot)
        pos = 0
        matched = False
        while attempts < cap:
            attempts += 1
            for leaf in range(n_leaves):
                thetas[leaf] = _beta(skey, &pos, alphas_v[leaf], betas_v[leaf])
            cand = _eval_program(ops_v, args_v, &thetas[0], &stack[0])
            x = _binomial(skey, &pos, nts, cand)
            if x == xstar:
                out_v[accepted] = cand
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
    cdef uint64_t k = <uint64_t>key
    cdef int64_t n = <int64_t>n_sim
    cdef int64_t zi = <int64_t>z_index
    cdef int64_t cap = <int64_t>budget
    cdef double[::1] marg = np.ascontiguousarray(marginal, dtype=np.float64)
    cdef double[:, ::1] cond = np.ascontiguousarray(conditional, dtype=np.float64)
    cdef Py_ssize_t ny = marg.shape[0]
    cdef Py_ssize_t nz = cond.shape[1]
    cdef int64_t y_fallback = _last_positive(&marg[0], ny)
    z_fb_arr = np.zeros(ny, dtype=np.int64)
    cdef int64_t[::1] z_fallbacks = z_fb_arr
    cdef Py_ssize_t r
    for r in range(ny):
        z_fallbacks[r] = _last_positive(&cond[r, 0], nz)
    out = np.empty(max(n, 0), dtype=np.int64)
    cdef int64_t[::1] out_v = out
    cdef int64_t accepted = 0, attempts = 0
    cdef int64_t y, z
    cdef uint64_t pos = 0
    cdef double u
    while accepted < n and attempts < cap:
        attempts += 1
        u = _uniform(k, &pos)
        y = _pick(&marg[0], ny, u, y_fallback)
        u = _uniform(k, &pos)
        z = _pick(&cond[y, 0], nz, u, z_fallbacks[y])
        if z == zi:
            out_v[accepted] = y
            accepted += 1
    return out[:accepted].copy(), attempts


cdef inline int64_t _pick(double *probs, Py_ssize_t n, double u, int64_t fallback) noexcept:
    cdef double cum = 0.0
    cdef Py_ssize_t j
    for j in range(n):
        cum = cum + probs[j]
        if u < cum:
            return j
    return fallback


cdef inline int64_t _last_positive(double *probs, Py_ssize_t n) noexcept:
    cdef int64_t last = 0
    cdef Py_ssize_t j
    for j in range(n):
        if probs[j] > 0.0:
            last = j
    return last
