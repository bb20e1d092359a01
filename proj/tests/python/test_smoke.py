import math
import os
import subprocess

import pytest

import pyfairgame as pf

GAMES = os.environ.get("FAIRGAME_GAMES", os.path.join(os.path.dirname(__file__), "..", "..", "games"))


def game_path(name):
    return os.path.join(GAMES, name)


@pytest.fixture(scope="module")
def fig1():
    return pf.load_game(game_path("fig1.game"))


def test_load_and_shape(fig1):
    g, phi = fig1
    assert g.num_players == 2
    assert g.num_joint_actions == 6
    assert g.num_joint_events == 1
    assert g.caps == [5.0, 50.0]
    assert g.action_labels(0) == ["alpha", "beta", "gamma"]
    assert str(phi) == "10*log(1+u1)+log(1+u2)"


def test_round_trip(fig1):
    g, _ = fig1
    assert pf.Game.from_text(g.to_text()) == g


def test_unique_ce_point(fig1):
    g, _ = fig1
    rep = pf.certify(g, [0, 0, 0.45, 0.15, 0.3, 0.1], kind="ce", tol=1e-9)
    assert rep["satisfied"]
    assert rep["utilities"] == pytest.approx([3.5, 2.4], abs=1e-12)


def test_fairness_optimum(fig1):
    g, phi = fig1
    r = pf.optimize_static(g, phi, kind="cce")
    assert r["utilities"] == pytest.approx([3.7322540618694515, 5.909090696706006], abs=1e-3)
    assert r["value"] == pytest.approx(17.476854385165115, abs=1e-6)
    assert sum(r["pmf"]) == pytest.approx(1.0, abs=1e-12)


def test_silhouette_hull(fig1):
    g, _ = fig1
    pts = pf.silhouette(g, directions=64)
    assert len(pts) == 64
    hull = pf.hull_vertices([p["utilities"] for p in pts])
    expect = {(3.5, 2.4), (3.5, 9.3), (3.8773006134969323, 3.7914110429447847)}
    assert len(hull) == 3
    for v in hull:
        assert any(abs(v[0] - e[0]) < 1e-3 and abs(v[1] - e[1]) < 1e-3 for e in expect)


def test_fairness_parse_round_trip():
    for text, n in [("10*log(1+u1)+log(1+u2)", 2), ("2*u1+u2", 2), ("min(u1,u2,5)", 2)]:
        assert str(pf.Fairness.parse(text, n)) == text
    with pytest.raises(ValueError):
        pf.Fairness.parse("log(1+u1)+u2", 2)


def test_dpp_run_and_bounds():
    g, phi = pf.load_game(game_path("coord.game"))
    r = pf.run_dpp(g, phi, V=200, T=50000, seed=3)
    assert r["final_u_avg"] == pytest.approx([0.75, 0.75], abs=0.01)
    b = pf.theorem_bounds(g, phi, 200.0)
    assert b["B"] == pytest.approx(4.0)
    assert r["phi_of_gamma_avg"] >= b["phi_star"] - b["B"] / 200.0 - 0.05


def test_stochastic_policy_certification():
    g, phi = pf.load_game(game_path("stoch222.game"))
    r = pf.run_dpp(g, phi, V=50, T=200000, seed=1, extract_policy=True)
    rows = r["policy"]
    assert len(rows) == g.num_joint_events
    gains = []
    for i in range(g.num_players):
        base = pf.certify_policy(g, rows, kind="cce")["utilities"][i]
        gains.append(pf.best_deviation(g, rows, i, kind="cce")["value"] - base)
    assert max(gains) <= 0.05 * max(g.caps)


def test_optimize_stochastic_matches_static_on_singleton_events(fig1):
    g, phi = fig1
    r = pf.optimize_stochastic(g, phi, kind="cce")
    assert r["value"] == pytest.approx(17.476854385165115, abs=1e-5)


def test_cli_exit_codes(fig1):
    cli = os.environ.get("FAIRGAME_CLI")
    if not cli:
        pytest.skip("FAIRGAME_CLI not set")
    out = subprocess.run([cli, "validate", game_path("fig1.game")],
                         capture_output=True, text=True,
                         env={**os.environ, "FAIRGAME_OUT": os.environ.get("TMPDIR", "/tmp") + "/pysmoke"})
    assert out.returncode == 0
    assert "2 players" in out.stdout
    bad = subprocess.run([cli, "validate", game_path("does_not_exist.game")],
                         capture_output=True, text=True)
    assert bad.returncode == 2
