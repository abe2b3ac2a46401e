import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigwind.exceptions import DomainError, RangeError, ShapeError
from sigwind.tensor import (
    TruncatedTensor,
    all_words,
    as_word,
    bracket,
    index_word,
    is_group_like,
    shuffle_defect,
    tensor_exp,
    tensor_inverse,
    tensor_log,
    tensor_mul,
    word_coefficient,
    word_index,
)

small = st.floats(-2, 2, allow_nan=False)


def random_tensor(rng, d=2, N=4, scalar=0.0):
    t = TruncatedTensor(d, N, rng.normal(size=TruncatedTensor(d, N).coeffs.size))
    c = np.array(t.coeffs)
    c[0] = scalar
    return TruncatedTensor(d, N, c)


def test_word_index_roundtrip():
    for k in range(5):
        for i, w in enumerate(all_words(3, k)):
            assert word_index(w, 3) == i
            assert index_word(i, k, 3) == w


def test_as_word_accepts_strings_and_rejects_bad_letters():
    assert as_word("1212") == (1, 2, 1, 2)
    assert as_word("") == ()
    with pytest.raises(DomainError):
        as_word("13", d=2)


def test_identity_is_unit():
    rng = np.random.default_rng(1)
    a = random_tensor(rng, scalar=0.7)
    one = TruncatedTensor.identity(2, 4)
    assert tensor_mul(one, a) == a
    assert tensor_mul(a, one) == a


def test_mul_matches_word_concatenation():
    a = TruncatedTensor.from_words(2, 4, {"1": 1.0, "12": 2.0})
    b = TruncatedTensor.from_words(2, 4, {"2": 3.0, "": 1.0})
    p = tensor_mul(a, b)
    assert p["12"] == 2.0 + 3.0
    assert p["122"] == 6.0
    assert p[""] == 0.0


def test_mul_associative():
    rng = np.random.default_rng(2)
    a, b, c = (random_tensor(rng, scalar=s) for s in (1.0, 0.3, -2.0))
    lhs = tensor_mul(tensor_mul(a, b), c)
    rhs = tensor_mul(a, tensor_mul(b, c))
    assert lhs.allclose(rhs, 1e-12)


def test_exp_log_inverse_pair():
    rng = np.random.default_rng(3)
    x = random_tensor(rng)
    assert tensor_log(tensor_exp(x)).allclose(x, 1e-12)
    g = tensor_exp(x)
    assert tensor_exp(tensor_log(g)).allclose(g, 1e-12)


def test_exp_of_letter_is_scaled_powers():
    e = tensor_exp(TruncatedTensor.vector([1.0, 0.0], 4))
    for k in range(5):
        assert e[(1,) * k] == pytest.approx(1 / math.factorial(k))
    assert e["12"] == 0.0


def test_exp_log_domain_errors():
    with pytest.raises(DomainError):
        tensor_exp(TruncatedTensor.identity(2, 3))
    with pytest.raises(DomainError):
        tensor_log(TruncatedTensor.zero(2, 3))


def test_inverse():
    rng = np.random.default_rng(4)
    g = random_tensor(rng, scalar=1.0)
    assert tensor_mul(g, tensor_inverse(g)).allclose(TruncatedTensor.identity(2, 4), 1e-12)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        tensor_mul(TruncatedTensor.zero(2, 3), TruncatedTensor.zero(2, 4))
    with pytest.raises(ShapeError):
        TruncatedTensor(2, 2, [1.0, 2.0])


def test_word_coefficient_range():
    with pytest.raises(RangeError):
        word_coefficient(TruncatedTensor.zero(2, 2), "121")


def test_bracket_antisymmetric_and_jacobi():
    rng = np.random.default_rng(5)
    a, b, c = (random_tensor(rng) for _ in range(3))
    assert (bracket(a, b) + bracket(b, a)).norm() < 1e-12
    jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert jac.norm() < 1e-10


def test_json_roundtrip():
    rng = np.random.default_rng(6)
    a = random_tensor(rng, scalar=1.0)
    back = TruncatedTensor.from_json(a.to_json())
    assert back == a
    data = json.loads(a.to_json())
    assert set(data) == {"d", "N", "coeffs"}


def test_immutable_storage():
    t = TruncatedTensor.identity(2, 2)
    with pytest.raises(ValueError):
        t.coeffs[0] = 3.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=4))
def test_exp_of_lie_is_group_like(vs):
    # products of exponentials of vectors are group-like
    g = TruncatedTensor.identity(2, 4)
    for v in vs:
        g = tensor_mul(g, tensor_exp(TruncatedTensor.vector(v, 4)))
    assert shuffle_defect(g) < 1e-9 * max(1.0, g.norm() ** 2)


def test_non_group_like_detected():
    t = TruncatedTensor.from_words(2, 2, {"": 1.0, "1": 1.0})
    assert not is_group_like(t)
