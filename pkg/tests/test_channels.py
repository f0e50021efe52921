import numpy as np
import pytest

from qchan import (
    DensityMatrix,
    KrausChannel,
    ad,
    apply,
    bloch_map,
    builtin_kernel,
    commutator,
    from_bloch,
    gad,
    gdc,
    hs_norm_sq,
    nmd,
    nmd_kernel,
    pd,
    rtn,
    rtn_kernel,
    unruh,
)
from conftest import sample_ball

ALL_CONSTRUCTORS = {
    "rtn": lambda: rtn(0.5),
    "nmd": lambda: nmd(0.3),
    "pd": lambda: pd(0.25),
    "ad": lambda: ad(0.25),
    "gad": lambda: gad(0.3, 0.6),
    "unruh": lambda: unruh(np.pi / 6),
    "gdc": lambda: gdc(0.7, 0.1, 0.1, 0.1),
}


def completeness_deviation(ch):
    total = sum(k.conj().T @ k for k in ch.ops)
    return float(np.max(np.abs(total - np.eye(ch.dim))))


def test_rtn_scales_off_diagonals():
    lam = 0.37
    p, x = 0.3, 0.21 - 0.11j
    rho = np.array([[1 - p, x], [np.conj(x), p]])
    out = apply(rtn(lam), rho).mat
    expected = np.array([[1 - p, x * lam], [np.conj(x) * lam, p]])
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_ad_action_matches_matrix_form():
    g = 0.4
    p, q = 0.35, 0.2 + 0.15j
    rho = np.array([[1 - p, q], [np.conj(q), p]])
    out = apply(ad(g), rho).mat
    expected = np.array(
        [
            [1 - p * (1 - g), q * np.sqrt(1 - g)],
            [np.conj(q) * np.sqrt(1 - g), p * (1 - g)],
        ]
    )
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_identity_channel_is_identity(rng):
    ident = KrausChannel((np.eye(2),), "identity")
    for v in sample_ball(rng, 20):
        rho = from_bloch(v)
        np.testing.assert_allclose(apply(ident, rho).mat, rho.mat, atol=1e-15)


def test_rtn_limits():
    assert np.allclose(rtn(1.0).ops[1], 0)
    out = apply(rtn(0.0), from_bloch((1, 0, 0))).mat
    assert abs(out[0, 1]) < 1e-15


def test_pd_limits():
    rho = from_bloch((1, 0, 0))
    np.testing.assert_allclose(apply(pd(0.0), rho).mat, rho.mat, atol=1e-15)
    assert abs(apply(pd(1.0), rho).mat[0, 1]) < 1e-15


def test_ad_full_decay(rng):
    for v in sample_ball(rng, 20):
        out = apply(ad(1.0), from_bloch(v)).mat
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-14)


def test_gad_xi_one_is_identity(rng):
    for alpha in (0.0, 0.3, 1.0):
        ch = gad(alpha, 1.0)
        for v in sample_ball(rng, 5):
            rho = from_bloch(v)
            np.testing.assert_allclose(apply(ch, rho).mat, rho.mat, atol=1e-14)


def test_gad_alpha_one_reduces_to_ad():
    xi = 0.35
    g_ops = gad(1.0, xi).ops
    a_ops = ad(1.0 - xi).ops
    np.testing.assert_allclose(g_ops[0], a_ops[0], atol=1e-15)
    np.testing.assert_allclose(g_ops[1], a_ops[1], atol=1e-15)
    assert np.allclose(g_ops[2], 0) and np.allclose(g_ops[3], 0)


def test_unruh_operators():
    r = np.pi / 6
    ch = unruh(r)
    np.testing.assert_allclose(ch.ops[0], np.diag([np.cos(r), 1.0]), atol=1e-15)
    assert ch.ops[1][1, 0] == pytest.approx(np.sin(r))
    assert completeness_deviation(ch) < 1e-15


def test_unruh_acceleration_mapping():
    from qchan import unruh_r_from_acceleration

    for x in (0.0, 0.5, 2.0, 10.0):
        r = unruh_r_from_acceleration(x)
        assert 0.0 <= r <= np.pi / 4 + 1e-12
        assert np.cos(r) == pytest.approx((1 + np.exp(-x)) ** -0.5, abs=1e-15)
    # vanishing acceleration: the channel becomes noiseless
    assert unruh_r_from_acceleration(50.0) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(ValueError):
        unruh_r_from_acceleration(-1.0)


def test_gdc_uniform_weights_depolarize():
    ch = gdc(0.25, 0.25, 0.25, 0.25)
    out = apply(ch, from_bloch((0.4, 0.3, -0.5))).mat
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-14)


@pytest.mark.parametrize(
    "build, message",
    [
        (lambda: rtn(1.2), "kernel value"),
        (lambda: nmd(-1.1), "kernel value"),
        (lambda: pd(1.5), "gamma"),
        (lambda: ad(-0.1), "gamma"),
        (lambda: gad(1.2, 0.5), "alpha"),
        (lambda: gad(0.5, -0.2), "xi"),
        (lambda: unruh(1.0), "r must"),
        (lambda: gdc(0.5, 0.6, 0.0, -0.1), "negative weight"),
        (lambda: gdc(0.5, 0.2, 0.2, 0.2), "sum to 1"),
    ],
)
def test_constructor_rejects_bad_parameters(build, message):
    with pytest.raises(ValueError, match=message):
        build()


def test_kraus_channel_rejects_incomplete_sets():
    with pytest.raises(ValueError, match="completeness"):
        KrausChannel((np.diag([1.0, 1.0]), np.diag([1.0, 0.0])), "broken")
    with pytest.raises(ValueError, match="at least one"):
        KrausChannel((), "empty")


def test_completeness_across_parameter_grids():
    worst = 0.0
    grid = np.linspace(0, 1, 51)
    for v in np.linspace(-1, 1, 51):
        worst = max(worst, completeness_deviation(rtn(v)), completeness_deviation(nmd(v)))
    for g in grid:
        worst = max(worst, completeness_deviation(pd(g)), completeness_deviation(ad(g)))
    for r in np.linspace(0, np.pi / 4, 51):
        worst = max(worst, completeness_deviation(unruh(r)))
    for a in grid:
        for x in grid[::5]:
            worst = max(worst, completeness_deviation(gad(a, x)))
    rng = np.random.default_rng(7)
    for _ in range(60):
        w = rng.exponential(size=4)
        w /= w.sum()
        worst = max(worst, completeness_deviation(gdc(*w)))
    assert worst < 1e-10


def test_apply_outputs_are_valid_states(rng):
    # DensityMatrix construction re-validates Hermiticity, trace and positivity.
    vs = sample_ball(rng, 200)
    for name, build in ALL_CONSTRUCTORS.items():
        ch = build()
        for v in vs:
            out = apply(ch, from_bloch(v))
            assert out.dim == 2, name


def test_unital_and_nonunital_channels():
    mixed = np.eye(2) / 2
    for ch in (rtn(0.4), nmd(-0.2), pd(0.7), gdc(0.4, 0.3, 0.2, 0.1)):
        np.testing.assert_allclose(apply(ch, mixed).mat, mixed, atol=1e-12)
    for ch in (ad(0.5), gad(0.8, 0.4), unruh(np.pi / 5 / 2)):
        assert np.max(np.abs(apply(ch, mixed).mat - mixed)) > 1e-3


def test_dephasing_channels_preserve_diagonal_commutativity():
    rho = np.diag([0.7, 0.3])
    sigma = np.diag([0.2, 0.8])
    for ch in (rtn(0.6), nmd(0.1), pd(0.3), gdc(0.5, 0.2, 0.2, 0.1)):
        out_a = apply(ch, rho)
        out_b = apply(ch, sigma)
        assert hs_norm_sq(commutator(out_a, out_b)) <= 1e-20


def test_apply_dimension_mismatch():
    rho3 = DensityMatrix(np.eye(3) / 3)
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply(pd(0.2), rho3)


def test_bloch_map_matches_apply(rng):
    from qchan import to_bloch

    for build in ALL_CONSTRUCTORS.values():
        ch = build()
        a, c = bloch_map(ch)
        for v in sample_ball(rng, 30):
            direct = np.array(tuple(to_bloch(apply(ch, from_bloch(v)))))
            np.testing.assert_allclose(a @ v + c, direct, atol=1e-12)


# -- memory kernels ---------------------------------------------------------

def test_rtn_kernel_starts_at_one():
    assert rtn_kernel(0.0, 1.0, 2.0) == 1.0
    assert rtn_kernel(0.0, 4.0, 0.5) == 1.0


def test_rtn_kernel_markovian_regime_is_monotone():
    # 4 b^2 < gamma^2: no oscillation, |Lambda| decays
    ts = np.linspace(0, 6, 400)
    vals = [rtn_kernel(t, 4.0, 0.5) for t in ts]
    diffs = np.diff(vals)
    assert np.all(diffs <= 1e-12)
    assert all(0.0 <= v <= 1.0 for v in vals)


def test_rtn_kernel_nonmarkovian_regime_revives():
    # 4 b^2 > gamma^2: the kernel crosses zero and comes back
    ts = np.linspace(0, 5, 2001)
    vals = np.array([rtn_kernel(t, 1.0, 2.0) for t in ts])
    signs = np.sign(vals)
    crossings = np.nonzero(np.diff(signs) != 0)[0]
    assert crossings.size >= 1
    first = crossings[0]
    assert np.max(np.abs(vals[first + 1 :])) > 1e-3
    assert np.max(np.abs(vals)) <= 1.0


def test_rtn_kernel_critical_form():
    g = 2.0
    b = g / 2.0
    for t in (0.0, 0.3, 1.7):
        assert rtn_kernel(t, g, b) == pytest.approx((1 + g * t) * np.exp(-g * t), abs=1e-15)


def test_rtn_kernel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        rtn_kernel(-0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        rtn_kernel(0.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        rtn_kernel(0.1, 1.0, -2.0)


def test_nmd_kernel():
    assert nmd_kernel(0.0) == 1.0
    assert nmd_kernel(0.5) == 0.0
    assert nmd_kernel(1.0) == -1.0
    with pytest.raises(ValueError):
        nmd_kernel(1.2)


def test_builtin_kernel_registry():
    k = builtin_kernel("rtn-damped", {"gamma": 1.0, "b": 2.0})
    assert k.evaluate(0.0) == 1.0
    assert "gamma=1" in k.label
    assert builtin_kernel("nmd-linear", {}).evaluate(0.25) == 0.5
    with pytest.raises(ValueError, match="unknown kernel"):
        builtin_kernel("nope", {})
    with pytest.raises(ValueError, match="needs parameter"):
        builtin_kernel("rtn-damped", {"gamma": 1.0})
