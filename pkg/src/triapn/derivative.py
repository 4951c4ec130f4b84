"""Differential analysis of the trivariate family C_u over F_{2^m}^3.

C_u(x, y, z) = (x^3 + u*y^2*z, y^3 + u*x*z^2, z^3 + u*x^2*y).

Because C_u is quadratic, the solutions of C_u(v + a) + C_u(v) + C_u(a) +
C_u(0) = 0 for a fixed difference triple a form the kernel of an
F_2-linear map on F_q^3.  This module realizes that map as a 3m x 3m bit
matrix, computes kernel dimensions and differential spectra from it, and
searches for difference triples whose kernel has dimension >= 2 (at least
4 solutions), packaging them as independently re-verified certificates.

Vectors in F_q^3 are packed as ints with the x coordinate in the low m
bits, then y, then z.  Difference triples are scanned in encoding order:
code(a) = (alpha << 2m) | (beta << m) | gamma.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

from .gf2m import FieldCtx, elem_to_hex, hex_to_elem, make_field

Triple = tuple[int, int, int]

SPECTRUM_MAX_M = 9
WITNESS_SCHEMA = "witness/1"


class CertificateError(RuntimeError):
    """A certificate failed its independent re-verification."""


def encode_triple(a: Triple, m: int) -> int:
    return (a[0] << (2 * m)) | (a[1] << m) | a[2]


def decode_triple(code: int, m: int) -> Triple:
    mask = (1 << m) - 1
    return ((code >> (2 * m)) & mask, (code >> m) & mask, code & mask)


def pack_vec(v: Triple, m: int) -> int:
    """Pack a solution vector (x, y, z) with x in the low bits."""
    return v[0] | (v[1] << m) | (v[2] << (2 * m))


def unpack_vec(w: int, m: int) -> Triple:
    mask = (1 << m) - 1
    return (w & mask, (w >> m) & mask, (w >> (2 * m)) & mask)


def rotate_triple(a: Triple) -> Triple:
    """Cyclic shift matching the coordinate symmetry of C_u."""
    return (a[1], a[2], a[0])


# -- evaluation ----------------------------------------------------------------


def eval_cu(x: int, y: int, z: int, u: int, ctx: FieldCtx) -> Triple:
    """Image of (x, y, z) under C_u."""
    return (
        ctx.pow(x, 3) ^ ctx.mul(ctx.mul(u, ctx.square(y)), z),
        ctx.pow(y, 3) ^ ctx.mul(ctx.mul(u, x), ctx.square(z)),
        ctx.pow(z, 3) ^ ctx.mul(ctx.mul(u, ctx.square(x)), y),
    )


def verify_solution(a: Triple, v: Triple, u: int, ctx: FieldCtx) -> bool:
    """Direct arithmetic check of the three linearized equations.

    Deliberately independent of the matrix/kernel code path: certificates
    must not inherit a linear-algebra bug.
    """
    al, be, ga = a
    x, y, z = v
    mul, sq = ctx.mul, ctx.square
    e1 = mul(al, sq(x)) ^ mul(sq(al), x) ^ mul(mul(u, ga), sq(y)) ^ mul(mul(u, sq(be)), z)
    e2 = mul(be, sq(y)) ^ mul(sq(be), y) ^ mul(mul(u, al), sq(z)) ^ mul(mul(u, sq(ga)), x)
    e3 = mul(ga, sq(z)) ^ mul(sq(ga), z) ^ mul(mul(u, be), sq(x)) ^ mul(mul(u, sq(al)), y)
    return e1 == 0 and e2 == 0 and e3 == 0


# -- the linear map as a bit matrix --------------------------------------------


@dataclass(frozen=True)
class BitMatrix:
    """Square matrix over GF(2); row i is an int bitmask over columns."""

    n: int
    rows: tuple[int, ...]

    def mul_vec(self, v: int) -> int:
        out = 0
        for i, row in enumerate(self.rows):
            out |= (bin(row & v).count("1") & 1) << i
        return out

    @classmethod
    def from_columns(cls, cols: list[int], n: int) -> "BitMatrix":
        rows = [0] * n
        for j, col in enumerate(cols):
            while col:
                low = col & -col
                rows[low.bit_length() - 1] |= 1 << j
                col ^= low
        return cls(n, tuple(rows))

    def columns(self) -> list[int]:
        cols = [0] * self.n
        for i, row in enumerate(self.rows):
            while row:
                low = row & -row
                cols[low.bit_length() - 1] |= 1 << i
                row ^= low
        return cols


def derivative_matrix(a: Triple, u: int, ctx: FieldCtx) -> BitMatrix:
    """Matrix M with M*v = 0 exactly when v solves the linearized system."""
    m = ctx.m
    mul, sq = ctx.mul, ctx.square
    al, be, ga = a
    a2, b2, g2 = sq(al), sq(be), sq(ga)
    ua, ub, ug = mul(u, al), mul(u, be), mul(u, ga)
    ua2, ub2, ug2 = mul(u, a2), mul(u, b2), mul(u, g2)
    cols = []
    for j in range(m):
        e = 1 << j
        s = sq(e)
        cols.append((mul(al, s) ^ mul(a2, e))
                    | (mul(ug2, e) << m)
                    | (mul(ub, s) << (2 * m)))
    for j in range(m):
        e = 1 << j
        s = sq(e)
        cols.append(mul(ug, s)
                    | ((mul(be, s) ^ mul(b2, e)) << m)
                    | (mul(ua2, e) << (2 * m)))
    for j in range(m):
        e = 1 << j
        s = sq(e)
        cols.append(mul(ub2, e)
                    | (mul(ua, s) << m)
                    | ((mul(ga, s) ^ mul(g2, e)) << (2 * m)))
    return BitMatrix.from_columns(cols, 3 * m)


def _column_rank(cols: list[int]) -> int:
    piv: dict[int, int] = {}
    for col in cols:
        cur = col
        while cur:
            hb = cur.bit_length() - 1
            p = piv.get(hb)
            if p is None:
                piv[hb] = cur
                break
            cur ^= p
    return len(piv)


def kernel_dim(M: BitMatrix) -> int:
    return M.n - _column_rank(M.columns())


def kernel_basis(M: BitMatrix) -> list[int]:
    """Basis of {v : M*v = 0}, each vector an n-bit int."""
    n = M.n
    pivots: dict[int, int] = {}  # pivot column -> reduced row
    for row in M.rows:
        cur = row
        while cur:
            c = cur.bit_length() - 1
            p = pivots.get(c)
            if p is None:
                pivots[c] = cur
                break
            cur ^= p
    # back-substitution to reduced echelon form
    for c in sorted(pivots):
        r = pivots[c]
        for c2, r2 in pivots.items():
            if c2 != c and (r2 >> c) & 1:
                pivots[c2] = r2 ^ r
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = 1 << f
        for c, r in pivots.items():
            if (r >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def solution_count(a: Triple, u: int, ctx: FieldCtx) -> int:
    """Exact number of solutions of the linearized system; always a power of 2."""
    if a == (0, 0, 0):
        raise ValueError("the difference triple must be nonzero")
    return 1 << kernel_dim(derivative_matrix(a, u, ctx))


# -- fast per-triple kernel dimensions ------------------------------------------

_WORK_CACHE: dict[tuple, dict] = {}


def _tables(m: int, modulus: int, u: int) -> dict:
    """Per-process lookup tables for the hot spectrum/search loops."""
    key = (m, modulus, u)
    t = _WORK_CACHE.get(key)
    if t is not None:
        return t
    ctx = make_field(m, modulus)
    q = ctx.q
    mul, sq = ctx.mul, ctx.square
    SQ = [sq(c) for c in range(q)]
    UMUL = [mul(u, c) for c in range(q)]
    basis_sq = [sq(1 << j) for j in range(m)]
    me = [[mul(c, 1 << j) for j in range(m)] for c in range(q)]
    ms = [[mul(c, basis_sq[j]) for j in range(m)] for c in range(q)]
    self0 = [[ms[c][j] ^ me[SQ[c]][j] for j in range(m)] for c in range(q)]
    shift1, shift2 = m, 2 * m
    t = {
        "ctx": ctx,
        "SQ": SQ,
        "UMUL": UMUL,
        "ME0": me,
        "ME1": [[v << shift1 for v in row] for row in me],
        "ME2": [[v << shift2 for v in row] for row in me],
        "MS0": ms,
        "MS1": [[v << shift1 for v in row] for row in ms],
        "MS2": [[v << shift2 for v in row] for row in ms],
        "SELF0": self0,
        "SELF1": [[v << shift1 for v in row] for row in self0],
        "SELF2": [[v << shift2 for v in row] for row in self0],
    }
    _WORK_CACHE[key] = t
    return t


def _chunk_scan(args):
    """Kernel-dimension histogram (and optionally first witness) per alpha block.

    args = (m, modulus, u, a_lo, a_hi, want_histogram, stop_at_witness).
    Returns (histogram dict or None, first code with dim >= 2 or None).
    """
    m, modulus, u, a_lo, a_hi, want_hist, stop_at_witness = args
    t = _tables(m, modulus, u)
    q = 1 << m
    SQ, UMUL = t["SQ"], t["UMUL"]
    ME0, ME1, ME2 = t["ME0"], t["ME1"], t["ME2"]
    MS0, MS1, MS2 = t["MS0"], t["MS1"], t["MS2"]
    SELF0, SELF1, SELF2 = t["SELF0"], t["SELF1"], t["SELF2"]
    n = 3 * m
    rng_m = range(m)
    hist: dict[int, int] = {} if want_hist else None
    first = None
    for al in range(a_lo, a_hi):
        selfx = SELF0[al]
        ua = UMUL[al]
        ua2 = UMUL[SQ[al]]
        me2_ua2 = ME2[ua2]
        ms1_ua = MS1[ua]
        for be in range(q):
            if al == 0 and be == 0:
                ga_start = 1  # skip the zero triple
            else:
                ga_start = 0
            ub = UMUL[be]
            ub2 = UMUL[SQ[be]]
            ms2_ub = MS2[ub]
            selfy = SELF1[be]
            me0_ub2 = ME0[ub2]
            for ga in range(ga_start, q):
                ug = UMUL[ga]
                ug2 = UMUL[SQ[ga]]
                me1_ug2 = ME1[ug2]
                ms0_ug = MS0[ug]
                selfz = SELF2[ga]
                piv = [0] * n
                deps = 0
                for j in rng_m:
                    for cur in (
                        selfx[j] | me1_ug2[j] | ms2_ub[j],
                        ms0_ug[j] | selfy[j] | me2_ua2[j],
                        me0_ub2[j] | ms1_ua[j] | selfz[j],
                    ):
                        while cur:
                            hb = cur.bit_length() - 1
                            p = piv[hb]
                            if p:
                                cur ^= p
                            else:
                                piv[hb] = cur
                                break
                        else:
                            deps += 1
                if want_hist:
                    hist[deps] = hist.get(deps, 0) + 1
                if deps >= 2 and first is None:
                    first = (al << (2 * m)) | (be << m) | ga
                    if stop_at_witness:
                        return hist, first
    return hist, first


def _alpha_chunks(q: int) -> list[tuple[int, int]]:
    """Fixed alpha-block partition, independent of the worker count."""
    step = max(1, q // 64)
    return [(lo, min(lo + step, q)) for lo in range(0, q, step)]


def _run_chunks(argses, threads):
    if threads <= 1 or len(argses) <= 1:
        for a in argses:
            yield _chunk_scan(a)
        return
    ctxm = multiprocessing.get_context("fork")
    with ctxm.Pool(threads) as pool:
        yield from pool.imap(_chunk_scan, argses)


# -- spectra ---------------------------------------------------------------------


@dataclass
class SpectrumReport:
    """Histogram of kernel dimensions over all nonzero difference triples."""

    m: int
    modulus: int
    u: int
    histogram: dict[int, int]

    @property
    def max_kernel_dim(self) -> int:
        return max(self.histogram)

    @property
    def differential_uniformity(self) -> int:
        return 1 << self.max_kernel_dim

    @property
    def is_apn(self) -> bool:
        return self.max_kernel_dim == 1

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "modulus": elem_to_hex(self.modulus),
            "u": elem_to_hex(self.u),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_kernel_dim": self.max_kernel_dim,
            "differential_uniformity": self.differential_uniformity,
            "is_apn": self.is_apn,
        }


def _guard_family(ctx: FieldCtx) -> None:
    if ctx.m % 3 != 0:
        raise ValueError(f"the family needs 3 | m; got m={ctx.m}")


def differential_spectrum(u: int, ctx: FieldCtx, threads: int = 1,
                          progress=None) -> SpectrumReport:
    """Exact kernel-dimension histogram over all q^3 - 1 nonzero triples."""
    _guard_family(ctx)
    if ctx.m > SPECTRUM_MAX_M:
        raise ValueError(
            f"exhaustive spectrum is limited to m <= {SPECTRUM_MAX_M} "
            f"(q^3 = 2^{3 * ctx.m} triples); use sampled witness search instead")
    if ctx.q ** 3 < (1 << 15):
        threads = 1
    argses = [(ctx.m, ctx.modulus, u, lo, hi, True, False)
              for lo, hi in _alpha_chunks(ctx.q)]
    hist: dict[int, int] = {}
    for i, (part, _) in enumerate(_run_chunks(argses, threads)):
        for k, v in part.items():
            hist[k] = hist.get(k, 0) + v
        if progress is not None:
            progress((i + 1) / len(argses))
    total = sum(hist.values())
    if total != ctx.q ** 3 - 1:
        raise AssertionError(f"histogram covers {total} triples, expected {ctx.q ** 3 - 1}")
    return SpectrumReport(ctx.m, ctx.modulus, u, hist)


def is_apn(u: int, ctx: FieldCtx, threads: int = 1) -> bool:
    return differential_spectrum(u, ctx, threads).is_apn


def differential_uniformity(u: int, ctx: FieldCtx, threads: int = 1) -> int:
    return differential_spectrum(u, ctx, threads).differential_uniformity


# -- permutation test --------------------------------------------------------------


def is_permutation(u: int, ctx: FieldCtx) -> bool:
    """True iff C_u is injective on F_q^3, by marking images in a bitmap."""
    _guard_family(ctx)
    if ctx.m > SPECTRUM_MAX_M:
        raise ValueError(f"permutation check is limited to m <= {SPECTRUM_MAX_M}")
    m, q = ctx.m, ctx.q
    mul, sq = ctx.mul, ctx.square
    CUBE = [ctx.pow(c, 3) for c in range(q)]
    SQ = [sq(c) for c in range(q)]
    seen = bytearray(1 << max(0, 3 * m - 3))
    for x in range(q):
        x3 = CUBE[x]
        ux = mul(u, x)
        ux2 = mul(u, SQ[x])
        for y in range(q):
            c1_base = x3
            uy2 = mul(u, SQ[y])
            y3 = CUBE[y]
            w3 = mul(ux2, y)
            for z in range(q):
                c1 = c1_base ^ mul(uy2, z)
                c2 = y3 ^ mul(ux, SQ[z])
                c3 = CUBE[z] ^ w3
                idx = (c1 << (2 * m)) | (c2 << m) | c3
                bit = 1 << (idx & 7)
                if seen[idx >> 3] & bit:
                    return False
                seen[idx >> 3] |= bit
    return True


# -- witness certificates -----------------------------------------------------------


@dataclass
class WitnessCertificate:
    """A verified non-APN witness: a difference triple with >= 4 solutions."""

    m: int
    modulus: int
    u: int
    triple: Triple
    kernel_dim: int
    kernel_basis: list[Triple]
    solutions: list[Triple]
    reverified: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        tri = lambda t: [elem_to_hex(c) for c in t]
        return {
            "schema": WITNESS_SCHEMA,
            "m": self.m,
            "modulus": elem_to_hex(self.modulus),
            "u": elem_to_hex(self.u),
            "triple": tri(self.triple),
            "kernel_dim": self.kernel_dim,
            "kernel_basis": [tri(t) for t in self.kernel_basis],
            "solutions": [tri(t) for t in self.solutions],
            "reverified": dict(self.reverified),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WitnessCertificate":
        if doc.get("schema") != WITNESS_SCHEMA:
            raise ValueError(f"unexpected certificate schema {doc.get('schema')!r}")
        tri = lambda t: tuple(int(c, 16) for c in t)
        return cls(
            m=doc["m"],
            modulus=int(doc["modulus"], 16),
            u=int(doc["u"], 16),
            triple=tri(doc["triple"]),
            kernel_dim=doc["kernel_dim"],
            kernel_basis=[tri(t) for t in doc["kernel_basis"]],
            solutions=[tri(t) for t in doc["solutions"]],
            reverified=dict(doc.get("reverified", {})),
        )


def build_certificate(a: Triple, u: int, ctx: FieldCtx) -> WitnessCertificate | None:
    """Certificate for a triple with kernel dimension >= 2, else None.

    Every invariant is re-established through direct arithmetic before the
    certificate is returned; a failure there is a hard internal error.
    """
    M = derivative_matrix(a, u, ctx)
    basis = kernel_basis(M)
    k = len(basis)
    if k < 2:
        return None
    m = ctx.m
    vecs = {0}
    for b in basis:
        vecs |= {v ^ b for v in vecs}
    if len(vecs) != 1 << k:
        raise CertificateError("kernel basis is not linearly independent")
    solutions = sorted(unpack_vec(v, m) for v in vecs)
    flags = {
        "solutions_solve_system": all(verify_solution(a, v, u, ctx) for v in solutions),
        "contains_zero": (0, 0, 0) in solutions,
        "contains_triple": a in solutions,
        "count_is_power_of_two": len(solutions) == 1 << k,
    }
    if not all(flags.values()):
        raise CertificateError(f"certificate re-verification failed: {flags}")
    return WitnessCertificate(
        m=ctx.m, modulus=ctx.modulus, u=u, triple=a, kernel_dim=k,
        kernel_basis=sorted(unpack_vec(v, m) for v in basis),
        solutions=solutions, reverified=flags)


def verify_certificate(cert: WitnessCertificate) -> list[str]:
    """Re-check a loaded certificate from scratch; returns failure messages."""
    failures = []
    try:
        ctx = make_field(cert.m, cert.modulus)
    except ValueError as err:
        return [f"bad field: {err}"]
    if not 0 < cert.u < ctx.q:
        failures.append("u out of range")
        return failures
    if cert.kernel_dim < 2:
        failures.append(f"kernel dimension {cert.kernel_dim} < 2")
    if len(cert.solutions) != 1 << cert.kernel_dim:
        failures.append("solution count is not 2^kernel_dim")
    if len(cert.kernel_basis) != cert.kernel_dim:
        failures.append("basis size differs from kernel dimension")
    if (0, 0, 0) not in cert.solutions:
        failures.append("zero solution missing")
    if cert.triple not in cert.solutions:
        failures.append("the difference triple is not listed as a solution")
    for v in cert.solutions:
        if not all(0 <= c < ctx.q for c in v):
            failures.append(f"solution {v} out of range")
        elif not verify_solution(cert.triple, v, cert.u, ctx):
            failures.append(f"solution {v} does not solve the system")
    packed = [pack_vec(v, cert.m) for v in cert.kernel_basis]
    if _column_rank(packed) != len(packed):
        failures.append("basis vectors are linearly dependent")
    span = {0}
    for b in packed:
        span |= {v ^ b for v in span}
    if span != {pack_vec(v, cert.m) for v in cert.solutions}:
        failures.append("solutions are not the span of the basis")
    return failures


# -- search ------------------------------------------------------------------------


@dataclass
class SearchResult:
    strategy: str
    found: bool
    certificate: WitnessCertificate | None
    scanned: int | None = None
    draws_used: int | None = None
    seed: int | None = None
    max_draws: int | None = None

    def to_json(self) -> dict:
        doc = {
            "strategy": self.strategy,
            "found": self.found,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }
        if self.scanned is not None:
            doc["scanned"] = self.scanned
        if self.strategy == "sampled":
            doc["generator"] = "splitmix64"
            doc["seed"] = self.seed
            doc["max_draws"] = self.max_draws
            doc["draws_used"] = self.draws_used
        return doc


_GAMMA64 = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def draw_code(seed: int, index: int, bits: int) -> int:
    """Deterministic 64-bit mixing generator; draw index -> triple code.

    Each index consumes ceil(bits/64) mixed words, so the mapping is
    independent of how draws are partitioned across workers.
    """
    words = (bits + 63) // 64
    v = 0
    for w in range(words):
        v = (v << 64) | _mix64((seed + (index * words + w + 1) * _GAMMA64) & _MASK64)
    return v & ((1 << bits) - 1)


def witness_search(
    u: int,
    ctx: FieldCtx,
    strategy: str = "exhaustive",
    seed: int = 0,
    max_draws: int = 10 ** 6,
    threads: int = 1,
) -> SearchResult:
    """Find a triple whose kernel has dimension >= 2, or report not-found.

    Exhaustive mode scans triples in increasing encoding order and returns
    the first witness, which makes an exhaustive not-found a proof that no
    witness exists.  Sampled mode draws triples from the seeded generator;
    not-found there is merely inconclusive.
    """
    _guard_family(ctx)
    m, q = ctx.m, ctx.q
    if strategy == "exhaustive":
        if ctx.q ** 3 < (1 << 15):
            threads = 1
        argses = [(m, ctx.modulus, u, lo, hi, False, True)
                  for lo, hi in _alpha_chunks(q)]
        scanned = 0
        for (lo, hi), (_, code) in zip(_alpha_chunks(q), _run_chunks(argses, threads)):
            if code is not None:
                cert = build_certificate(decode_triple(code, m), u, ctx)
                if cert is None:
                    raise CertificateError("scan reported a witness the matrix path rejects")
                return SearchResult("exhaustive", True, cert, scanned=code + 1)
            scanned = (hi << (2 * m))
        return SearchResult("exhaustive", False, None, scanned=q ** 3 - 1)
    if strategy == "sampled":
        bits = 3 * m
        for i in range(max_draws):
            code = draw_code(seed, i, bits)
            if code == 0:
                continue
            a = decode_triple(code, m)
            if kernel_dim(derivative_matrix(a, u, ctx)) >= 2:
                cert = build_certificate(a, u, ctx)
                return SearchResult("sampled", True, cert,
                                    draws_used=i + 1, seed=seed, max_draws=max_draws)
        return SearchResult("sampled", False, None,
                            draws_used=max_draws, seed=seed, max_draws=max_draws)
    raise ValueError(f"unknown strategy {strategy!r}")
