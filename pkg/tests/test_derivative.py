"""Kernel engine: matrix vs brute force, spectra, permutations, witnesses."""

import json
import random

import pytest

from triapn import derivative as dv
from triapn.gf2m import make_field, smallest_non_seventh_power

F3 = make_field(3)
F6 = make_field(6)


def brute_solution_count(a, u, ctx):
    q = ctx.q
    return sum(1 for x in range(q) for y in range(q) for z in range(q)
               if dv.verify_solution(a, (x, y, z), u, ctx))


# -- eval_cu ---------------------------------------------------------------------


def test_eval_cu_fixed_points():
    assert dv.eval_cu(0, 0, 0, 2, F3) == (0, 0, 0)
    # without a mixed monomial the cross terms vanish
    assert dv.eval_cu(1, 0, 0, 2, F3) == (1, 0, 0)
    # the first input that activates every cross term
    u = 2
    assert dv.eval_cu(1, 1, 0, u, F3) == (1, 1, u)


def test_eval_cu_dual_path():
    # independent evaluation through repeated multiplication only
    ctx = F3
    u = 2
    for v in ((2, 2, 2), (3, 5, 7), (1, 6, 4)):
        x, y, z = v
        mul = ctx.mul
        cube = lambda c: mul(mul(c, c), c)
        expected = (
            cube(x) ^ mul(mul(u, mul(y, y)), z),
            cube(y) ^ mul(mul(u, x), mul(z, z)),
            cube(z) ^ mul(mul(u, mul(x, x)), y),
        )
        assert dv.eval_cu(x, y, z, u, ctx) == expected


# -- the matrix realization ---------------------------------------------------------


def test_zero_triple_gives_zero_matrix():
    M = dv.derivative_matrix((0, 0, 0), 2, F3)
    assert all(r == 0 for r in M.rows)
    assert dv.kernel_dim(M) == 9


def test_identity_matrix_kernel():
    M = dv.BitMatrix(4, (1, 2, 4, 8))
    assert dv.kernel_dim(M) == 0
    assert dv.kernel_basis(M) == []


def test_bitmatrix_column_roundtrip():
    rng = random.Random(4)
    for _ in range(20):
        rows = tuple(rng.randrange(1 << 9) for _ in range(9))
        M = dv.BitMatrix(9, rows)
        assert dv.BitMatrix.from_columns(M.columns(), 9).rows == rows


def test_triple_is_always_in_the_kernel():
    for code in range(1, 512, 7):
        a = dv.decode_triple(code, 3)
        M = dv.derivative_matrix(a, 2, F3)
        assert M.mul_vec(dv.pack_vec(a, 3)) == 0


def test_matrix_agrees_with_brute_force_exhaustively_m3():
    u = 2
    for code in range(1, 512):
        a = dv.decode_triple(code, 3)
        M = dv.derivative_matrix(a, u, F3)
        k = dv.kernel_dim(M)
        assert brute_solution_count(a, u, F3) == 1 << k
        for b in dv.kernel_basis(M):
            assert M.mul_vec(b) == 0
            assert dv.verify_solution(a, dv.unpack_vec(b, 3), u, F3)


def test_matrix_matches_direct_derivative_condition():
    # M*v = 0 iff C_u(v+a) + C_u(v) + C_u(a) + C_u(0) = 0, checked for a
    # sample of triples over all 512 vectors
    u = 2
    c0 = dv.eval_cu(0, 0, 0, u, F3)
    for code in (1, 9, 73, 100, 311, 511):
        a = dv.decode_triple(code, 3)
        M = dv.derivative_matrix(a, u, F3)
        ca = dv.eval_cu(*a, u, F3)
        for w in range(512):
            v = dv.unpack_vec(w, 3)
            vpa = tuple(p ^ r for p, r in zip(v, a))
            s = tuple(
                p ^ q ^ r ^ t
                for p, q, r, t in zip(dv.eval_cu(*vpa, u, F3), dv.eval_cu(*v, u, F3), ca, c0))
            assert (s == (0, 0, 0)) == (M.mul_vec(w) == 0)


def test_solution_count_guards_and_bounds():
    with pytest.raises(ValueError):
        dv.solution_count((0, 0, 0), 2, F3)
    assert dv.solution_count((1, 0, 0), 2, F3) >= 2


# -- spectra ----------------------------------------------------------------------------


def test_spectrum_m3_is_apn():
    rep = dv.differential_spectrum(2, F3)
    assert rep.histogram == {1: 511}
    assert rep.is_apn and rep.differential_uniformity == 2


def test_spectrum_m3_all_non_residues():
    for u in range(2, 8):
        assert dv.differential_spectrum(u, F3).is_apn


def test_spectrum_guards():
    with pytest.raises(ValueError, match="3 \\| m"):
        dv.differential_spectrum(2, make_field(4))
    with pytest.raises(ValueError, match="limited"):
        dv.differential_spectrum(2, make_field(12))


def test_spectrum_m6_matches_golden_and_thread_count():
    import pathlib

    golden = json.loads((pathlib.Path(__file__).parent / "golden"
                         / "spectrum_m6_u0x02.json").read_text())
    rep = dv.differential_spectrum(2, F6, threads=2)
    assert {str(k): v for k, v in rep.histogram.items()} == golden["histogram"]
    assert sum(rep.histogram.values()) == 64 ** 3 - 1
    assert rep.differential_uniformity <= 8 and not rep.is_apn
    rep1 = dv.differential_spectrum(2, F6, threads=1)
    assert rep1.histogram == rep.histogram


def test_uniformity_second_non_residue_m6():
    # the next non-7th-power after the default
    u = 3
    assert F6.pow(u, 9) != 1
    rep = dv.differential_spectrum(u, F6, threads=2)
    assert not rep.is_apn
    assert rep.differential_uniformity in (4, 8)


def test_rotation_symmetry_of_kernel_dims():
    u = 2
    for code in range(1, 512):
        a = dv.decode_triple(code, 3)
        k1 = dv.kernel_dim(dv.derivative_matrix(a, u, F3))
        k2 = dv.kernel_dim(dv.derivative_matrix(dv.rotate_triple(a), u, F3))
        assert k1 == k2
    rng = random.Random(13)
    for _ in range(100):
        a = tuple(rng.randrange(64) for _ in range(3))
        if a == (0, 0, 0):
            continue
        k1 = dv.kernel_dim(dv.derivative_matrix(a, 2, F6))
        k2 = dv.kernel_dim(dv.derivative_matrix(dv.rotate_triple(a), 2, F6))
        assert k1 == k2


# -- permutation --------------------------------------------------------------------------


def test_permutation_m3():
    for u in range(2, 8):
        assert dv.is_permutation(u, F3)
    # recorded actuals: cubing is a bijection on F_8, so u=0 passes; u=1 fails
    assert dv.is_permutation(0, F3)
    assert not dv.is_permutation(1, F3)


# -- witnesses ------------------------------------------------------------------------------


def test_witness_exhaustive_m3_not_found():
    res = dv.witness_search(2, F3)
    assert not res.found and res.certificate is None
    assert res.to_json()["found"] is False


def test_witness_exhaustive_m6():
    res = dv.witness_search(2, F6)
    assert res.found
    cert = res.certificate
    assert cert.kernel_dim >= 2
    assert len(cert.solutions) == 1 << cert.kernel_dim >= 4
    # first witness in encoding order, frozen from the first verified run
    assert cert.triple == (1, 1, 2)
    assert dv.verify_certificate(cert) == []
    # thread count never changes the result
    res2 = dv.witness_search(2, F6, threads=2)
    assert res2.certificate.to_json() == cert.to_json()


def test_witness_certificate_roundtrip_and_tamper():
    cert = dv.witness_search(2, F6).certificate
    doc = cert.to_json()
    again = dv.WitnessCertificate.from_json(json.loads(json.dumps(doc)))
    assert dv.verify_certificate(again) == []
    bad = json.loads(json.dumps(doc))
    bad["solutions"][1] = ["0x1", "0x0", "0x0"]
    failures = dv.verify_certificate(dv.WitnessCertificate.from_json(bad))
    assert failures
    bad2 = json.loads(json.dumps(doc))
    bad2["kernel_dim"] = 1
    assert dv.verify_certificate(dv.WitnessCertificate.from_json(bad2))


def test_witness_sampled_m9():
    f9 = make_field(9)
    u = smallest_non_seventh_power(f9)
    res = dv.witness_search(u, f9, strategy="sampled", seed=1, max_draws=10 ** 6)
    assert res.found
    assert res.draws_used == 3  # recorded from the first verified run
    assert res.certificate.kernel_dim >= 2
    assert dv.verify_certificate(res.certificate) == []
    again = dv.witness_search(u, f9, strategy="sampled", seed=1, max_draws=10 ** 6)
    assert again.to_json() == res.to_json()


def test_witness_strategy_validation():
    with pytest.raises(ValueError, match="strategy"):
        dv.witness_search(2, F6, strategy="guess")
    with pytest.raises(ValueError, match="3 \\| m"):
        dv.witness_search(2, make_field(4))


def test_draw_code_determinism():
    a = [dv.draw_code(1, i, 27) for i in range(5)]
    b = [dv.draw_code(1, i, 27) for i in range(5)]
    assert a == b
    assert all(0 <= v < 1 << 27 for v in a)
    assert dv.draw_code(1, 0, 27) != dv.draw_code(2, 0, 27)
    # multi-word path for wide codes
    wide = dv.draw_code(5, 0, 90)
    assert 0 <= wide < 1 << 90
    assert wide == dv.draw_code(5, 0, 90)


def test_triple_encoding_roundtrip():
    for code in (0, 1, 511, 12345):
        assert dv.encode_triple(dv.decode_triple(code, 6), 6) == code
    assert dv.unpack_vec(dv.pack_vec((3, 5, 7), 6), 6) == (3, 5, 7)
