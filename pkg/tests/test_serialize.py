import json
import random
from fractions import Fraction as F

import pytest

from finstoch import FinSpace, discrete, ergodic_decomposition, state
from finstoch import serialize as ser
from finstoch.errors import ParseError
from finstoch.sampling import (
    random_function_system,
    random_kernel,
    random_space,
    random_stochastic_system,
)


def roundtrip(to_json, from_json, obj):
    text = ser.canonical_json(to_json(obj))
    again = from_json(json.loads(text))
    assert again == obj
    assert ser.canonical_json(to_json(again)) == text


@pytest.mark.parametrize("raw, value", [("1/2", F(1, 2)), ("3", F(3)), (2, F(2)), ("-1/4", F(-1, 4)), (" 2 / 6 ", F(1, 3))])
def test_parse_rational(raw, value):
    assert ser.parse_rational(raw) == value


@pytest.mark.parametrize("raw", ["1/0", "abc", 0.5, True, None, "1/2/3"])
def test_parse_rational_rejects(raw):
    with pytest.raises(ParseError):
        ser.parse_rational(raw, "here")


def test_format_rational_is_lowest_terms():
    assert ser.format_rational(F(2, 4)) == "1/2"
    assert ser.format_rational(F(1)) == "1"
    assert ser.format_rational(F(0)) == "0"


def test_canonical_json_is_compact_and_sorted():
    assert ser.canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_random_roundtrips():
    rng = random.Random(1)
    for _ in range(100):
        x, y = random_space(rng), random_space(rng)
        roundtrip(ser.space_to_json, ser.space_from_json, x)
        roundtrip(ser.kernel_to_json, ser.kernel_from_json, random_kernel(rng, x, y))
        sys = (random_function_system if rng.random() < 0.5 else random_stochastic_system)(rng, 8)
        roundtrip(ser.system_to_json, ser.system_from_json, sys)


def test_decomposition_roundtrip(sys1, p_mixed):
    d = ergodic_decomposition(p_mixed, sys1)
    roundtrip(ser.decomposition_to_json, ser.decomposition_from_json, d)


def test_fixture_roundtrip_bytes(fixtures):
    raw = (fixtures / "sys1.json").read_text().strip()
    sys = ser.system_from_json(json.loads(raw))
    assert ser.canonical_json(ser.system_to_json(sys)) == raw


def test_bare_weight_list(sys1):
    p = ser.state_from_json(["1/4", "1/4", "1/2", 0], sys1.space)
    assert p == state(sys1.space, [F(1, 4), F(1, 4), F(1, 2), 0])
    with pytest.raises(ParseError):
        ser.state_from_json(["1/2"], None)


def test_rows_shorthand_for_generators():
    obj = {
        "space": ser.space_to_json(discrete("ab")),
        "generators": {"m": {"rows": [["1", "0"], ["1/2", "1/2"]]}},
    }
    sys = ser.system_from_json(obj)
    assert sys.kernels[0].rows == ((1, 0), (F(1, 2), F(1, 2)))


@pytest.mark.parametrize(
    "obj, fragment",
    [
        ({"generators": {}}, "missing key 'space'"),
        ({"space": {"carrier": ["a"], "atoms": [[0]]}, "generators": {"m": {"rows": [["1/0"]]}}}, "generators.m.rows[0][0]"),
        ({"space": {"carrier": ["a", "b"], "atoms": [[0], [1]]}, "generators": {"m": {"rows": [["1/2", "1/3"], ["0", "1"]]}}}, "generators.m"),
        ({"space": {"carrier": ["a", "b"], "atoms": [[0]]}, "generators": {}}, "system"),
        ({"space": {"carrier": ["a", "b"], "atoms": [[0], [1]]}, "generators": {"t": {"map": {"a": "z", "b": "a"}}}}, "generators.t"),
    ],
)
def test_parse_errors_name_location(obj, fragment):
    with pytest.raises(ParseError) as info:
        ser.system_from_json(obj)
    assert fragment in str(info.value)


def test_coarse_space_roundtrip():
    roundtrip(ser.space_to_json, ser.space_from_json, FinSpace(("a", "b", "c"), ((0, 2), (1,))))
