import pytest

from monbcs.errors import ConfigError
from monbcs.lattice import (ModelParams, Spin, default_window, flatten,
                            parse_config_text, unflatten)


def test_flatten_known_values():
    assert flatten(1, Spin.UP, 4) == 0
    assert flatten(1, Spin.DOWN, 4) == 4
    # enumerate the full ordering for L=8 and read off (3, down)
    L = 8
    ordering = [(s, Spin.UP) for s in range(1, L + 1)] + \
               [(s, Spin.DOWN) for s in range(1, L + 1)]
    assert ordering.index((3, Spin.DOWN)) == 10
    assert flatten(3, Spin.DOWN, 8) == 10


@pytest.mark.parametrize("L", [2, 4, 8, 32])
def test_flatten_roundtrip(L):
    seen = set()
    for site in range(1, L + 1):
        for spin in (Spin.UP, Spin.DOWN):
            flat = flatten(site, spin, L)
            seen.add(flat)
            mode = unflatten(flat, L)
            assert (mode.site, mode.spin, mode.flat) == (site, spin, flat)
    assert seen == set(range(2 * L))


def test_flatten_out_of_range():
    with pytest.raises(IndexError):
        flatten(0, Spin.UP, 4)
    with pytest.raises(IndexError):
        flatten(5, Spin.UP, 4)
    with pytest.raises(IndexError):
        unflatten(8, 4)


def test_params_validation():
    with pytest.raises(ConfigError):
        ModelParams(L=5, delta=1.0)          # odd L rejected
    with pytest.raises(ConfigError):
        ModelParams(L=1)
    with pytest.raises(ConfigError):
        ModelParams(L=4, gamma=200.0, dt=0.01)   # gamma*dt > 1
    with pytest.raises(ConfigError):
        ModelParams(L=4, dt=0.0)
    with pytest.raises(ConfigError):
        ModelParams(L=4, delta=-1.0)
    p = ModelParams(L=4, gamma=100.0, dt=0.01)   # gamma*dt == 1 allowed
    assert p.p_measure == 1.0
    # escape hatch for the exact-diagonalization cross-checks only
    assert ModelParams(L=3, allow_odd_L=True).L == 3


CONFIG = """
# smoke configuration
L = 8
delta = 1.0
gamma = 0.0
t_max = 10
n_traj = 1
seed = 42
output_dir = out
"""


def test_parse_config_defaults():
    rc = parse_config_text(CONFIG)
    assert rc.J == 1.0 and rc.dt == 0.01
    assert rc.init_state == "neel"
    assert rc.cut == 4
    # scaled default exceeds t_max=10, so the window falls back to the
    # second half of the run
    assert (rc.window_start, rc.window_end) == (5.0, 10.0)


def test_parse_config_scaled_default_window():
    rc = parse_config_text(CONFIG.replace("t_max = 10", "t_max = 100"))
    assert (rc.window_start, rc.window_end) == default_window(8)


def test_parse_config_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text(CONFIG + "\nfoo = 1\n")


def test_parse_config_missing_key():
    text = CONFIG.replace("seed = 42", "")
    with pytest.raises(ConfigError, match="seed"):
        parse_config_text(text)


def test_parse_config_overrides_and_types():
    rc = parse_config_text(CONFIG, overrides={"gamma": "2.5", "cut": "3"})
    assert rc.gamma == 2.5 and rc.cut == 3
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text(CONFIG, overrides={"bogus": "1"})
    with pytest.raises(ConfigError, match="cannot parse"):
        parse_config_text(CONFIG.replace("L = 8", "L = eight"))


def test_parse_config_rejects_odd_L_and_bad_window():
    with pytest.raises(ConfigError):
        parse_config_text(CONFIG.replace("L = 8", "L = 7"))
    with pytest.raises(ConfigError):
        parse_config_text(CONFIG + "window_start = 9\nwindow_end = 20\n")


def test_default_window_scales_with_L():
    assert default_window(32) == (150.0, 300.0)
    assert default_window(64) == (300.0, 600.0)
    assert default_window(16) == (75.0, 150.0)
