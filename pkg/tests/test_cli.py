import io
import json

import pytest

from erjw.cli import RunConfig, UsageError, dispatch, main, parse_config, parse_monomial


def run(argv):
    cfg = parse_config(argv)
    out = io.StringIO()
    code = dispatch(cfg, out)
    return code, out.getvalue()


def test_defaults_in_header():
    code, text = run(["point"])
    assert code == 0
    assert text.splitlines()[0] == "# erjw point space=smash n=1 max_len=10 v1_cap=12 margin=4 seed=0"
    assert "E8: 0" in text


def test_fgl_shows_golden_values():
    code, text = run(["fgl", "--order", "5"])
    assert code == 0
    assert "x^2 y^2: 3/7 + 16/7 v1h^3" in text
    assert "(1/7 + 10/7 v1h^3) uh^4" in text


def test_verify_passes_and_is_deterministic():
    a = run(["verify", "--space", "smash", "--n", "2", "--page", "4", "--max-len", "10"])
    b = run(["verify", "--space", "smash", "--n", "2", "--page", "4", "--max-len", "10"])
    assert a == b and a[0] == 0


def test_json_schema_tag():
    code, text = run(["pages", "--n", "1", "--max-len", "8", "--format", "json", "--page", "4"])
    data = json.loads(text)
    assert data["schema"] == "erjw/1" and data["pages"][0]["page"] == 4


def test_d1_seeded_is_reproducible():
    assert run(["d1", "--n", "2", "--max-len", "6", "--seed", "3"]) == run(
        ["d1", "--n", "2", "--max-len", "6", "--seed", "3"])
    code, text = run(["d1", "--element", "u1", "--max-len", "4"])
    assert "d1(u1) = 2 v2^5 u1 + v1h v2^5 p1" in text


def test_usage_errors_exit_2(capsys):
    assert main(["pages", "--margin", "2"]) == 2
    assert main(["nonsense"]) == 2
    with pytest.raises(UsageError):
        parse_monomial("q3", 1, 4)
    with pytest.raises(UsageError):
        RunConfig("pages", n=2, max_len=3).window()
