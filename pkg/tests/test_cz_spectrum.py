import math

import numpy as np
import pytest

from polyembed.core import Sign
from polyembed.cz_spectrum import (
    AsymptoticOperatorSpec,
    SpectralPoint,
    asymptotic_operator_spectrum,
    conley_zehnder_from_spectrum,
    cz_morse_bott,
    cz_via_spectrum,
    loop_winding,
    operator_matrix,
)
from polyembed.errors import DegenerateEigenvector, Unsupported

# Reference spectrum of the operator at T = 2*pi on [-8, 8], computed once on a
# 2048-point grid: (eigenvalue, winding, multiplicity).
REFERENCE_2PI = [
    (-6.2831853071798545, 0, 1),
    (0.0, 0, 1),
    (3.8832220774507835, 1, 2),
]


def analytic_spectrum(T, lo, hi, n_max=50):
    """Closed form: 0, -T, and (-T +- sqrt(T^2 + 16 pi^2 n^2))/2 twice each, winding +-n."""
    out = [(0.0, 0, 1), (-T, 0, 1)]
    for n in range(1, n_max):
        r = math.sqrt(T * T + 16 * math.pi ** 2 * n * n)
        out += [((-T + r) / 2, n, 2), ((-T - r) / 2, -n, 2)]
    return sorted(p for p in out if lo <= p[0] <= hi)


def test_operator_is_symmetric():
    A = operator_matrix(AsymptoticOperatorSpec(1.3, 64))
    assert np.allclose(A, A.T, atol=1e-12)


@pytest.mark.parametrize("T", [1.0, 2 * math.pi, 0.5])
def test_matches_analytic_spectrum(T):
    got = asymptotic_operator_spectrum(AsymptoticOperatorSpec(T, 256), (-8, 8))
    want = analytic_spectrum(T, -8, 8)
    assert [(p.winding, p.multiplicity) for p in got] == [(w, m) for _, w, m in want]
    for p, (v, _, _) in zip(got, want):
        assert abs(p.eigenvalue - v) <= 1e-8


def test_reference_grid():
    got = asymptotic_operator_spectrum(AsymptoticOperatorSpec(2 * math.pi, 256), (-8, 8))
    assert len(got) == len(REFERENCE_2PI)
    for p, (v, w, m) in zip(got, REFERENCE_2PI):
        assert abs(p.eigenvalue - v) <= 1e-8
        assert (p.winding, p.multiplicity) == (w, m)


def test_window_is_respected():
    pts = asymptotic_operator_spectrum(AsymptoticOperatorSpec(1.0, 64), (-0.5, 0.5))
    assert [p.winding for p in pts] == [0]
    with pytest.raises(ValueError):
        asymptotic_operator_spectrum(AsymptoticOperatorSpec(1.0, 64), (1, -1))


def test_small_grid_rejected():
    with pytest.raises(ValueError):
        AsymptoticOperatorSpec(1.0, 4)


def test_winding_of_loops():
    t = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    assert loop_winding(np.cos(3 * t), np.sin(3 * t)) == 3
    assert loop_winding(np.cos(t), -np.sin(t)) == -1
    assert loop_winding(np.ones_like(t), np.zeros_like(t)) == 0
    with pytest.raises(DegenerateEigenvector):
        loop_winding(np.cos(t), np.zeros_like(t))


def test_cz_from_windings():
    pts = [SpectralPoint(-1.0, 0, 1), SpectralPoint(0.0, 0, 1), SpectralPoint(2.0, 1, 2)]
    assert conley_zehnder_from_spectrum(pts, 0.5) == 0
    assert conley_zehnder_from_spectrum(pts, -0.5) == 1
    with pytest.raises(ValueError):
        conley_zehnder_from_spectrum(pts, 0.0)


@pytest.mark.parametrize("sign,cz", [(Sign.NEGATIVE, 0), (Sign.POSITIVE, 1)])
def test_spectral_cz_agrees_with_table(sign, cz):
    assert cz_via_spectrum(sign) == cz
    assert cz_morse_bott(sign).cz == cz


def test_fixed_ends_unsupported():
    with pytest.raises(Unsupported):
        cz_morse_bott("+", movable=False)
