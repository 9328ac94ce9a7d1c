import numpy as np
import pytest

from contpath import RngStream, model_forward, model_init
from contpath.serialize import ParseError, deserialize_model, load_model, save_model, serialize_model

GRID = np.linspace(0, 1, 101)


def noisy_model(dims, activation="relu", seed=0):
    m = model_init(dims, activation, seed=seed)
    m.set_params(RngStream(seed, 8).normal(m.n_params) * 10.0 ** RngStream(seed, 9).uniform(m.n_params) * 7)
    return m


@pytest.mark.parametrize("dims,act", [([1, 1], "relu"), ([1, 16, 2], "tanh"), ([1, 8, 8, 3], "relu")])
def test_round_trip_is_bit_exact(dims, act):
    m = noisy_model(dims, act)
    back = deserialize_model(serialize_model(m))
    assert back.layer_dims == m.layer_dims and back.activation == act
    assert np.array_equal(back.params(), m.params())
    assert np.array_equal(model_forward(back, GRID), model_forward(m, GRID))


def test_file_round_trip(tmp_path):
    m = noisy_model([1, 4, 2], seed=3)
    save_model(m, tmp_path / "m.txt")
    assert np.array_equal(load_model(tmp_path / "m.txt").params(), m.params())


def test_minimal_document():
    m = model_init([1, 1])
    m.set_params(np.array([2.0, 3.0]))
    text = serialize_model(m)
    assert text.splitlines() == ["contpath-model 1", "activation relu", "dims 1 1", "layer 0",
                                 "weight 1 1", "2.0", "bias 1", "3.0", "end"]
    assert model_forward(deserialize_model(text), 0.5)[0] == 4.0


@pytest.mark.parametrize("keep,section", [(0, "header"), (2, "dims"), (4, "layer 0 weight"),
                                          (7, "layer 0 bias"), (10, "layer 1 weight")])
def test_truncation_names_missing_section(keep, section):
    lines = serialize_model(model_init([1, 2, 1])).splitlines()
    with pytest.raises(ParseError, match=f"before the {section} section"):
        deserialize_model("\n".join(lines[:keep]))


@pytest.mark.parametrize("line,bad,message", [
    (0, "contpath-model 2", "version"),
    (2, "dims 1 x 2", "integers"),
    (4, "weight 3 1", "shape"),
    (5, "oops", "malformed"),
    (5, "0.5 0.5", "expected 1 numbers"),
])
def test_malformed_lines_report_line_number(line, bad, message):
    lines = serialize_model(model_init([1, 2, 1])).splitlines()
    lines[line] = bad
    with pytest.raises(ParseError, match=message) as err:
        deserialize_model("\n".join(lines))
    assert err.value.line == line + 1


def test_trailing_content_rejected():
    with pytest.raises(ParseError):
        deserialize_model(serialize_model(model_init([1, 1])) + "layer 1\n")


def test_unknown_activation_rejected():
    text = serialize_model(model_init([1, 1])).replace("activation relu", "activation gelu")
    with pytest.raises(ParseError):
        deserialize_model(text)
