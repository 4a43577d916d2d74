"""
Tests for the tensor engine, gradient checks and Adam
"""
import numpy as np
import pytest

from turnkan.numcore import Adam, Parameter, Tensor, adam_step, finite_diff_check, forward_backward
from turnkan.numcore.functional import (
    conv1d,
    dropout,
    log_softmax,
    max_pool1d,
    softmax,
    weighted_cross_entropy,
)
from turnkan.utils.exceptions import (
    ConfigurationError,
    DomainError,
    GradientError,
    NumericalError,
    ShapeError,
)


def upstream(rng: np.random.Generator, shape: tuple) -> Tensor:
    """Fixed weights that turn a tensor output into a scalar"""
    return Tensor(rng.uniform(0.5, 1.5, size=shape))


def test_square_gradient():
    """f(x) = x^2 at 3 has value 9 and slope 6"""
    x = Parameter(3.0, name="x")
    out, (grad,) = forward_backward(lambda: x ** 2, [x])
    assert out.item() == 9.0
    assert float(grad) == pytest.approx(6.0)


def test_sum_gradient_is_all_ones(rng):
    x = Parameter(rng.normal(size=(4, 3)))
    _, (grad,) = forward_backward(lambda: x.sum(), [x])
    np.testing.assert_array_equal(grad, np.ones((4, 3)))


def test_tanh_matvec_matches_finite_differences(rng):
    w = Parameter(rng.normal(size=(3, 3)), name="w")
    v = Tensor(rng.normal(size=3))
    assert finite_diff_check(lambda: (w @ v).tanh().sum(), w) < 1e-6


def test_linear_map_is_exact(rng):
    w = Parameter(rng.uniform(0.5, 1.5, size=(4, 3)))
    x = Tensor(rng.uniform(0.5, 1.5, size=(5, 4)))
    c = upstream(rng, (5, 3))
    assert finite_diff_check(lambda: ((x @ w) * c).sum(), w) < 1e-8


def test_relu_away_from_kink(rng):
    values = rng.uniform(0.1, 1.0, size=8) * rng.choice([-1.0, 1.0], size=8)
    x = Parameter(values)
    c = upstream(rng, (8,))
    assert finite_diff_check(lambda: (x.relu() * c).sum(), x) < 1e-6


def test_constant_graph_has_zero_error():
    x = Parameter(np.ones(3))
    assert finite_diff_check(lambda: Tensor(2.0), x) == 0.0


def test_finite_diff_rejects_non_positive_step():
    x = Parameter(np.ones(2))
    with pytest.raises(ConfigurationError):
        finite_diff_check(lambda: x.sum(), x, eps=0.0)


@pytest.mark.parametrize("seed", range(10))
def test_elementwise_ops_pass_gradient_check(seed):
    rng = np.random.default_rng(seed)
    x = Parameter(rng.uniform(0.2, 2.0, size=(3, 4)))
    c = upstream(rng, (3, 4))

    graphs = [
        lambda: (x.exp() * c).sum(),
        lambda: (x.log() * c).sum(),
        lambda: (x.sigmoid() * c).sum(),
        lambda: (x.log_sigmoid() * c).sum(),
        lambda: (x.silu() * c).sum(),
        lambda: ((x ** 1.5) * c).sum(),
        lambda: ((c / x) - x * c).mean(),
        lambda: (x.reshape(4, 3).transpose() * c).sum(),
        lambda: (x[1:, ::2] * c[1:, ::2]).sum(),
    ]
    for graph in graphs:
        assert finite_diff_check(graph, x) < 1e-4


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("padding", ["valid", "same"])
def test_conv1d_gradients(seed, padding):
    rng = np.random.default_rng(seed)
    x = Parameter(rng.normal(size=(2, 3, 12)), name="x")
    w = Parameter(rng.normal(0.0, 0.3, size=(4, 3, 5)), name="w")
    b = Parameter(rng.normal(size=4), name="b")
    out_length = 12 if padding == "same" else 8
    c = upstream(rng, (2, 4, out_length))

    def graph() -> Tensor:
        return (conv1d(x, w, b, padding=padding).tanh() * c).sum()

    for parameter in (x, w, b):
        assert finite_diff_check(graph, parameter) < 1e-4


def test_conv1d_output_length():
    x = Tensor(np.zeros((1, 6, 30)))
    w = Tensor(np.zeros((5, 6, 7)))
    assert conv1d(x, w, padding="valid").shape == (1, 5, 24)
    assert conv1d(x, w, padding="same").shape == (1, 5, 30)


def test_conv1d_rejects_channel_mismatch():
    with pytest.raises(ShapeError) as exc:
        conv1d(Tensor(np.zeros((1, 4, 10))), Tensor(np.zeros((2, 3, 3))))
    assert exc.value.op == "conv1d"


@pytest.mark.parametrize("seed", range(5))
def test_max_pool_gradient(seed):
    rng = np.random.default_rng(seed)
    x = Parameter(rng.normal(size=(2, 3, 9)))
    c = upstream(rng, (2, 3, 3))
    assert finite_diff_check(lambda: (max_pool1d(x, 3) * c).sum(), x) < 1e-4


def test_max_pool_ties_go_to_earliest_index():
    x = Parameter(np.array([[[1.0, 1.0, 0.0, 2.0]]]))
    _, (grad,) = forward_backward(lambda: max_pool1d(x, 2).sum(), [x])
    np.testing.assert_array_equal(grad, [[[1.0, 0.0, 0.0, 1.0]]])


def test_dropout_is_identity_outside_training(rng):
    x = Tensor(rng.normal(size=(4, 5)))
    assert dropout(x, 0.5, rng, training=False) is x


def test_dropout_keeps_expectation(rng):
    x = Tensor(np.ones((200, 200)))
    out = dropout(x, 0.3, rng, training=True).data
    assert set(np.unique(np.round(out, 12))) <= {0.0, round(1 / 0.7, 12)}
    assert out.mean() == pytest.approx(1.0, abs=0.02)


def test_softmax_rows_sum_to_one(rng):
    logits = rng.normal(scale=30.0, size=(50, 3))
    np.testing.assert_allclose(softmax(logits).sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(softmax(np.zeros((1, 3))), [[1 / 3, 1 / 3, 1 / 3]])
    np.testing.assert_allclose(np.exp(log_softmax(logits)), softmax(logits), atol=1e-12)


def test_weighted_cross_entropy_hand_value():
    logits = Tensor(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    loss = weighted_cross_entropy(logits, np.array([0, 1]), np.array([0.5, 2.0, 1.0]))
    assert loss.item() == pytest.approx(0.68930, abs=1e-4)


def test_unit_weights_give_plain_cross_entropy(rng):
    logits = rng.normal(size=(6, 3))
    labels = np.array([0, 1, 2, 2, 1, 0])
    loss = weighted_cross_entropy(Tensor(logits), labels, np.ones(3)).item()
    expected = -np.mean(log_softmax(logits)[np.arange(6), labels])
    assert loss == pytest.approx(expected, rel=1e-12)


def test_cross_entropy_vanishes_for_confident_predictions():
    logits = Tensor(np.array([[800.0, 0.0, 0.0]]))
    loss = weighted_cross_entropy(logits, np.array([0]), np.ones(3)).item()
    assert np.isfinite(loss)
    assert loss == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_weighted_cross_entropy_gradient(seed):
    rng = np.random.default_rng(seed)
    logits = Parameter(rng.normal(size=(7, 3)))
    labels = rng.integers(0, 3, size=7)
    weights = rng.uniform(0.3, 3.0, size=3)
    assert finite_diff_check(lambda: weighted_cross_entropy(logits, labels, weights), logits) < 1e-4


def test_weighted_cross_entropy_rejects_bad_labels():
    with pytest.raises(DomainError):
        weighted_cross_entropy(Tensor(np.zeros((2, 3))), np.array([0, 3]), np.ones(3))
    with pytest.raises(ShapeError):
        weighted_cross_entropy(Tensor(np.zeros((2, 3))), np.array([0]), np.ones(3))


def test_shape_mismatch_names_the_operation():
    with pytest.raises(ShapeError) as exc:
        Tensor(np.ones((2, 3))) @ Tensor(np.ones((2, 3)))
    assert exc.value.op == "matmul"
    with pytest.raises(ShapeError) as exc:
        Tensor(np.ones((2, 3))) + Tensor(np.ones((4, 3)))
    assert exc.value.op == "add"


def test_backward_requires_scalar_root():
    x = Parameter(np.ones(3))
    with pytest.raises(GradientError):
        (x * 2.0).backward()


def test_zero_grad_clears_exactly(rng):
    x = Parameter(rng.normal(size=5))
    (x * x).sum().backward()
    assert np.any(x.grad != 0.0)
    x.zero_grad()
    np.testing.assert_array_equal(x.grad, np.zeros(5))
    assert x.grad.shape == x.shape


def test_repeated_passes_are_bit_identical(rng):
    w = Parameter(rng.normal(size=(4, 4)))
    v = Tensor(rng.normal(size=4))

    def graph() -> Tensor:
        return ((w @ v).tanh() * (w @ v).sigmoid()).sum()

    out_a, (grad_a,) = forward_backward(graph, [w])
    out_b, (grad_b,) = forward_backward(graph, [w])
    assert out_a.item() == out_b.item()
    np.testing.assert_array_equal(grad_a, grad_b)


def test_backward_is_linear(rng):
    w = Parameter(rng.normal(size=(3, 3)))
    v = Tensor(rng.normal(size=3))

    def first() -> Tensor:
        return (w @ v).tanh().sum()

    def second() -> Tensor:
        return (w * w).sum()

    _, (g1,) = forward_backward(first, [w])
    _, (g2,) = forward_backward(second, [w])
    _, (g_sum,) = forward_backward(lambda: first() + second(), [w])
    np.testing.assert_allclose(g_sum, g1 + g2, rtol=1e-12, atol=1e-15)


def test_adam_leaves_parameters_alone_on_zero_gradient(rng):
    p = Parameter(rng.normal(size=4))
    before = p.data.copy()
    optimizer = Adam([p], lr=0.1)
    optimizer.step()
    np.testing.assert_array_equal(p.data, before)


def test_adam_minimizes_quadratic():
    w = Parameter(np.array([0.0]), name="w")
    optimizer = Adam([w], lr=0.1)
    for _ in range(200):
        optimizer.zero_grad()
        ((w - 2.0) ** 2).sum().backward()
        optimizer.step()
    assert abs(w.data[0] - 2.0) < 1e-2


def test_adam_first_step_is_lr_times_sign(rng):
    p = Parameter(rng.normal(size=6))
    p.grad = rng.uniform(0.5, 2.0, size=6) * rng.choice([-1.0, 1.0], size=6)
    before = p.data.copy()
    optimizer = Adam([p], lr=0.01)
    optimizer.step()
    np.testing.assert_allclose(p.data - before, -0.01 * np.sign(p.grad), rtol=1e-6)


def test_adam_moments_persist_across_steps():
    p = Parameter(np.array([0.0]))
    optimizer = Adam([p], lr=0.1)
    for _ in range(2):
        p.grad = np.array([1.0])
        optimizer.step()
    assert optimizer.t == 2
    assert p.data[0] == pytest.approx(-0.2, rel=1e-6)


def test_adam_step_follows_the_bias_corrected_update(rng):
    p = Parameter(rng.normal(size=5))
    optimizer = Adam([p], lr=0.05, beta1=0.8, beta2=0.99, eps_hat=1e-6)
    expected = p.data.copy()
    m = np.zeros(5)
    v = np.zeros(5)
    for t in (1, 2, 3):
        g = rng.normal(size=5)
        p.grad = g.copy()
        adam_step(optimizer)
        m = 0.8 * m + 0.2 * g
        v = 0.99 * v + 0.01 * g ** 2
        m_hat = m / (1 - 0.8 ** t)
        v_hat = v / (1 - 0.99 ** t)
        expected = expected - 0.05 * m_hat / (np.sqrt(v_hat) + 1e-6)
        np.testing.assert_allclose(p.data, expected, rtol=1e-12, atol=1e-15)
    assert optimizer.t == 3


def test_adam_rejects_non_finite_gradient():
    p = Parameter(np.array([1.0, 2.0]), name="w")
    p.grad = np.array([np.nan, 0.0])
    with pytest.raises(NumericalError) as exc:
        Adam([p], lr=0.1).step()
    assert "w" in exc.value.message


def test_adam_rejects_negative_learning_rate():
    with pytest.raises(ConfigurationError):
        Adam([Parameter(np.zeros(1))], lr=-1.0)
