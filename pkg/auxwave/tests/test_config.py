from fractions import Fraction
from pathlib import Path

import pytest

from auxwave.config import (
    RunConfig,
    format_value,
    load_recipe,
    parse_bindings,
    parse_interval,
    parse_value,
)
from auxwave.exceptions import ConfigError

RECIPES = Path(__file__).resolve().parents[2] / "docs" / "recipes"


@pytest.mark.parametrize(
    ("text", "value"),
    [
        ("1/4", Fraction(1, 4)),
        ("0.25", Fraction(1, 4)),
        ("-3", Fraction(-3)),
        ("1e-3", Fraction(1, 1000)),
        ("1+2i", complex(1, 2)),
        ("2i", 2j),
        ("1.5-0.5i", complex(1.5, -0.5)),
        ("3+0i", Fraction(3)),
    ],
)
def test_parse_value(text, value):
    assert parse_value(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "i2"])
def test_parse_value_rejects(text):
    with pytest.raises(ConfigError):
        parse_value(text)


def test_format_value():
    assert format_value(Fraction(1, 4)) == "1/4"
    assert format_value(complex(1, -2)) == "1-2i"


def test_bindings():
    assert parse_bindings("A=1/4, B=-1,C1=1") == {
        "A": Fraction(1, 4),
        "B": Fraction(-1),
        "C1": Fraction(1),
    }
    assert parse_bindings(["A=1", "B=2"]) == {"A": 1, "B": 2}
    assert parse_bindings(None) == {}
    for bad in ("A=1,A=2", "A", "1A=2", "A=x"):
        with pytest.raises(ConfigError):
            parse_bindings(bad)


def test_interval():
    assert parse_interval("-5", "5") == (-5.0, 5.0)
    with pytest.raises(ConfigError):
        parse_interval("1", "1")


@pytest.mark.parametrize(
    "overrides",
    [
        {"tol": 0},
        {"npoints": 1},
        {"interval": (1.0, 1.0)},
        {"mode": "numeric"},
        {"strategy": "guess"},
        {"aux_case": "21"},
        {"order": 0},
        {"params": {"1A": 1}},
    ],
)
def test_run_config_validation(overrides):
    with pytest.raises(ConfigError):
        RunConfig(**overrides)


def test_run_config_defaults(tmp_path):
    config = RunConfig(aux_case=4, out_dir=str(tmp_path))
    assert config.aux_case == "4"
    assert config.out_dir == tmp_path
    assert config.describe()["b"] == "-2"


def test_recipe_file(tmp_path):
    path = tmp_path / "wave.cfg"
    path.write_text(
        "# logistic wave\n"
        "kind = aux\n"
        "case = 4\n"
        "params = A=1, B=-1, C1=1   # logistic\n"
        "interval = -3 3\n"
        "npoints = 11\n"
    )
    recipe = load_recipe(path)
    assert recipe.name == "wave"
    assert recipe.params == {"A": 1, "B": -1, "C1": 1}
    assert recipe.interval == (-3.0, 3.0)
    assert recipe.filename == "wave.csv"


@pytest.mark.parametrize(
    "body",
    [
        "kind = aux\ncase = 4\ncolour = red\n",
        "kind = aux\ncase = 4\ncase = 5\n",
        "kind = aux\ncase 4\n",
        "case = 4\n",
        "kind = aux\ncase = 99\n",
        "kind = classical\na = 1\n",
        "kind = aux\ncase = 4\nnpoints = many\n",
    ],
)
def test_bad_recipes(tmp_path, body):
    path = tmp_path / "bad.cfg"
    path.write_text(body)
    with pytest.raises(ConfigError):
        load_recipe(path)


def test_shipped_recipes_load():
    recipes = sorted(RECIPES.glob("*.cfg"))
    assert [p.stem for p in recipes] == ["figure1", "figure2a", "figure2b", "figure3"]
    for path in recipes:
        load_recipe(path)
