import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerdet import _kernels
from cornerdet.errors import (
    DefinitenessError,
    DomainError,
    FormulaInapplicableError,
    ShapeError,
    UnsupportedSymbolError,
)
from cornerdet.linalg import determinant
from cornerdet.symbols import HermitianFisherHartwig, LaurentPolynomial, PureFisherHartwig
from cornerdet.toeplitz import (
    GST_THRESHOLD,
    CornerPerturbation,
    build_perturbation,
    build_toeplitz,
    corners_of,
    det_ratio_from_corners,
    gst_corners,
    gst_inverse,
    inverse_corners,
    inverse_corners_of_matrix,
    levinson_first_column,
    perturbed_det_ratio_exact,
)

from conftest import ANTIDIAGONAL, BLOCK2, EXAMPLE_44, IDENTITY, tame_symbol

coef = st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False)


def dominant_laurent(offdiag, hermitian=False):
    """A Laurent symbol with a dominant constant term, so every T_n is well conditioned."""
    coeffs = {0: 2.0 + sum(abs(c) for c in offdiag) * (2 if hermitian else 1)}
    for k, c in enumerate(offdiag, start=1):
        coeffs[k] = c
        coeffs[-k] = np.conj(c) if hermitian else c * 0.5j
    return LaurentPolynomial(coeffs)


# -- construction -----------------------------------------------------------

def test_toeplitz_entries():
    s = LaurentPolynomial({-2: 5, -1: 3, 0: 1, 1: 2, 2: 4})
    T = build_toeplitz(s, 4)
    for j in range(4):
        for k in range(4):
            assert T[j, k] == s.coefficient(j - k)


def test_toeplitz_of_quartic_fh():
    T = build_toeplitz(PureFisherHartwig(2, 2), 6)
    assert T[0, 0] == 6 and T[1, 0] == -4 and T[2, 0] == 1 and T[3, 0] == 0


def test_perturbation_layout():
    E = build_perturbation(BLOCK2, 6)
    np.testing.assert_array_equal(E[:2, :2], BLOCK2.E11)
    np.testing.assert_array_equal(E[:2, 4:], BLOCK2.E12)
    np.testing.assert_array_equal(E[4:, :2], BLOCK2.E21)
    np.testing.assert_array_equal(E[4:, 4:], BLOCK2.E22)
    assert np.all(E[2:4, :] == 0) and np.all(E[:, 2:4] == 0)
    with pytest.raises(ShapeError):
        build_perturbation(BLOCK2, 3)


def test_perturbation_validation():
    with pytest.raises(ShapeError):
        CornerPerturbation(2, np.eye(2), np.eye(3), np.eye(2), np.eye(2))
    with pytest.raises(DomainError):
        CornerPerturbation(0, [], [], [], [])
    with pytest.raises(ShapeError):
        CornerPerturbation.scalar(np.eye(3))
    p = CornerPerturbation.from_block_matrix(BLOCK2.block_matrix())
    np.testing.assert_array_equal(p.E21, BLOCK2.E21)


def test_scalar_perturbation_entries_land_in_corners():
    E = build_perturbation(CornerPerturbation.scalar([[1, 2], [3, 4]]), 5)
    assert (E[0, 0], E[0, 4], E[4, 0], E[4, 4]) == (1, 2, 3, 4)
    assert np.count_nonzero(E) == 4


# -- GST --------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=4), st.integers(2, 12))
def test_gst_inverse_matches_dense_inverse(offdiag, n):
    T = build_toeplitz(dominant_laurent(offdiag), n)
    inv = np.linalg.inv(T)
    np.testing.assert_allclose(gst_inverse(inv[:, 0], inv[:, -1]), inv, atol=1e-12)
    m0 = max(1, n // 3)
    c = gst_corners(inv[:, 0], inv[:, -1], m0)
    ref = corners_of(inv, m0)
    for name in ("S11", "S12", "S21", "S22"):
        np.testing.assert_allclose(getattr(c, name), getattr(ref, name), atol=1e-12)


def test_gst_rejects_zero_first_entry():
    # T_2(t + 1/t) = [[0, 1], [1, 0]] is its own inverse, so x_1 = 0
    T = build_toeplitz(LaurentPolynomial({1: 1, -1: 1}), 2)
    inv = np.linalg.inv(T)
    with pytest.raises(FormulaInapplicableError):
        gst_inverse(inv[:, 0], inv[:, 1])
    c = inverse_corners_of_matrix(T, 1)
    assert c.S12[0, 0] == pytest.approx(1) and c.S11[0, 0] == pytest.approx(0)


@pytest.mark.parametrize("n", [GST_THRESHOLD + 1, 150])
def test_inverse_corners_large_n_uses_gst(n):
    s = EXAMPLE_44
    c = inverse_corners(s, n, 3)
    inv = np.linalg.inv(build_toeplitz(s, n))
    np.testing.assert_allclose(c.block_matrix(), corners_of(inv, 3).block_matrix(), rtol=1e-9, atol=1e-12)


# -- Levinson ---------------------------------------------------------------

def test_levinson_quadratic_fh():
    d = levinson_first_column(PureFisherHartwig(1, 1), 6)
    np.testing.assert_allclose(d.first_column, np.arange(6, 0, -1) / 7, atol=1e-14)
    np.testing.assert_allclose(d.det_ratios, np.arange(2, 8) / np.arange(1, 7), rtol=1e-14)
    # predictor polynomial is monic
    assert d.monic_coeffs[-1] == pytest.approx(1)


@pytest.mark.parametrize("backend_name", sorted(_kernels.BACKENDS))
def test_levinson_matches_solve(backend_name):
    s = EXAMPLE_44
    n = 40
    d = levinson_first_column(s, n, _kernels.BACKENDS[backend_name])
    ref = np.linalg.solve(build_toeplitz(s, n), np.eye(n)[:, 0])
    np.testing.assert_allclose(d.first_column, ref, rtol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), st.integers(1, 30))
def test_levinson_gram_identity(offdiag, n):
    s = dominant_laurent(offdiag, hermitian=True)
    d = levinson_first_column(s, n)
    T = build_toeplitz(s, n)
    np.testing.assert_allclose(d.first_column, np.linalg.solve(T, np.eye(n)[:, 0]), rtol=1e-9, atol=1e-12)
    # det T_n / det T_{n-1} = a_0 prod (1 - |alpha_j|^2)
    a0 = T[0, 0].real
    prod = a0 * np.prod(1 - np.abs(d.verblunsky) ** 2)
    ratio = determinant(T) / (determinant(T[:-1, :-1]) if n > 1 else 1)
    assert prod == pytest.approx(ratio.real, rel=1e-10)
    assert d.kappa ** 2 == pytest.approx(1 / np.prod(1 - np.abs(d.verblunsky) ** 2), rel=1e-12)
    # alpha_{k-1} = -c_{k+1}^{(k+1)} / c_1^{(k+1)}
    if n > 1:
        sub = levinson_first_column(s, n - 1)
        c = levinson_first_column(s, n).first_column
        assert d.verblunsky[-1] == pytest.approx(-c[-1] / c[0], abs=1e-12)
        np.testing.assert_allclose(sub.verblunsky, d.verblunsky[:-1], atol=1e-15)


def test_levinson_backends_agree():
    s = HermitianFisherHartwig(((1, 0.45),))
    ref = levinson_first_column(s, 200, _kernels.BACKENDS["python"])
    for b in _kernels.BACKENDS.values():
        d = levinson_first_column(s, 200, b)
        np.testing.assert_allclose(d.first_column, ref.first_column, rtol=1e-12)
        np.testing.assert_allclose(d.verblunsky, ref.verblunsky, atol=1e-14)


def test_levinson_errors():
    with pytest.raises(DefinitenessError) as info:
        levinson_first_column(LaurentPolynomial({0: 1, 1: 2, -1: 2}), 4)
    assert info.value.index == 0
    with pytest.raises(DefinitenessError):
        levinson_first_column(LaurentPolynomial({0: -1}), 3)
    with pytest.raises(DomainError):
        levinson_first_column(LaurentPolynomial({0: 3, 1: 1}), 3)
    with pytest.raises(DomainError):
        levinson_first_column(EXAMPLE_44, 0)


# -- corner ratios ----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), st.integers(1, 2), st.integers(4, 90), st.data())
def test_ratio_matches_direct_determinants(offdiag, m0, n, data):
    s = dominant_laurent(offdiag)
    blocks = [np.array(data.draw(st.lists(coef, min_size=m0 * m0, max_size=m0 * m0))).reshape(m0, m0)
              for _ in range(4)]
    p = CornerPerturbation(m0, *blocks)
    T = build_toeplitz(s, n)
    direct = determinant(T + build_perturbation(p, n)) / determinant(T)
    assert perturbed_det_ratio_exact(s, p, n) == pytest.approx(direct, rel=1e-9, abs=1e-12)


def test_ratio_examples():
    # |1 - t|^2 with antidiagonal unit corners: det goes from n + 1 to 4
    assert perturbed_det_ratio_exact(PureFisherHartwig(1, 1), ANTIDIAGONAL, 6) == pytest.approx(4 / 7, rel=1e-13)
    # |1 - t|^4: (n+1)^3 / ((n+1)(n+2)^2(n+3)/12)
    assert perturbed_det_ratio_exact(PureFisherHartwig(2, 2), ANTIDIAGONAL, 6) == pytest.approx(343 / 336, rel=1e-12)
    assert perturbed_det_ratio_exact(tame_symbol(), CornerPerturbation.zero(), 9) == 1
    with pytest.raises(ShapeError):
        perturbed_det_ratio_exact(tame_symbol(), BLOCK2, 3)


def test_ratio_from_corners_checks_size():
    c = inverse_corners(tame_symbol(), 8, 2)
    with pytest.raises(ShapeError):
        det_ratio_from_corners(c, IDENTITY)


def test_inverse_corners_of_tame_symbol_approach_wiener_hopf():
    # (T(a)^{-1})_{11} = (a_+^{-1})_0 (a_-^{-1})_0 / G(a) = 1; the off-corner S12 decays like 2^-n
    c = inverse_corners(tame_symbol(0.5, 0.5), 60, 1)
    assert c.S11[0, 0] == pytest.approx(1, abs=1e-15)
    assert abs(c.S12[0, 0]) < 1e-15


def test_unknown_symbol_type():
    with pytest.raises(UnsupportedSymbolError):
        build_toeplitz(object(), 3)


# -- cancellation in the corner determinant ---------------------------------------

@pytest.mark.parametrize("n", [30, 60, 100])
def test_cancelling_ratio_is_recomputed(n):
    # tame symbol with antidiagonal corners: the ratio is ~ 2**(2 - n), far below the corner entries
    from conftest import tame_dets
    det, pert = tame_dets(0.5, 0.5, n)
    assert perturbed_det_ratio_exact(tame_symbol(), ANTIDIAGONAL, n) == pytest.approx(pert / det, rel=1e-12)


def test_cancelling_ratio_matches_extended_oracle():
    from conftest import mp_det
    s = LaurentPolynomial({0: 2.5, 1: -1 + 0.25j, -1: -1})
    E = CornerPerturbation.scalar([[0, 1], [1, 0]])
    n = 45
    T = build_toeplitz(s, n)
    ref = mp_det(T + build_perturbation(E, n)) / mp_det(T)
    assert perturbed_det_ratio_exact(s, E, n) == pytest.approx(ref, rel=1e-10)


def test_well_conditioned_ratio_stays_in_double(monkeypatch):
    import cornerdet.toeplitz as tp

    def boom(*_):
        raise AssertionError("extended path should not run")
    monkeypatch.setattr(tp, "_mp_ratio", boom)
    assert perturbed_det_ratio_exact(PureFisherHartwig(1, 1), ANTIDIAGONAL, 6) == pytest.approx(4 / 7)
