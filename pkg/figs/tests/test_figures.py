from pathlib import Path

import pytest

from rotcool_figs import FigureError, FigureSpec, bars_distribution, loss_trace, render
from rotcool_figs.cli import main

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"

SWEEP_2D = """axis1,axis2,efficiency,loss,flag
4.0,3e-05,0.98,0.01,ok
4.0,6e-05,0.97,0.01,ok
6.0,3e-05,0.99,0.008,ok
6.0,6e-05,0.985,0.009,ok
"""

SWEEP_1D = """axis1,axis2,efficiency,loss,flag
0.0,,0.99,0.0,ok
0.01,,0.76,0.2,ok
0.02,,0.55,0.35,ok
"""

TRAJ = """time,label,n,population
0.0,0,0,0.3
0.0,1,0,0.7
10.0,0,0,0.3
10.0,0,1,0.58
10.0,1,0,0.1
10.0,u,0,0.02
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


# --- structural regeneration from the shipped example data ------------------

def test_example_heatmap_stirap_delay_width(tmp_path):
    out = render(FigureSpec(inputs=(str(EXAMPLES / "stirap_delay_width_sweep.csv"),),
                            kind="heatmap", output=str(tmp_path / "fig3a.png"),
                            xlabel="delay tau (1/nu)", ylabel="width T (1/nu)"))
    assert out.exists() and out.stat().st_size > 0


def test_example_heatmap_carp_rabi_chirp(tmp_path):
    out = render(FigureSpec(inputs=(str(EXAMPLES / "carp_rabi_chirp_sweep.csv"),),
                            kind="heatmap", output=str(tmp_path / "fig5a.png"),
                            xlabel="peak Rabi frequency (nu)", ylabel="chirp rate (nu^2)"))
    assert out.exists() and out.stat().st_size > 0


def test_example_three_method_comparison(tmp_path):
    inputs = tuple(str(EXAMPLES / f"{m}_decay_sweep.csv")
                   for m in ("stirap", "scrap", "carp"))
    out = render(FigureSpec(inputs=inputs, kind="curve",
                            labels=("STIRAP", "SCRAP", "CARP"),
                            output=str(tmp_path / "fig6.png"),
                            xlabel="decay rate (nu)", ylabel="efficiency"))
    assert out.exists() and out.stat().st_size > 0


@pytest.mark.parametrize("which", ["first", "last"])
def test_example_population_bars(tmp_path, which):
    out = render(FigureSpec(inputs=(str(EXAMPLES / "six_level" / "trajectory.csv"),),
                            kind="bars", which=which,
                            output=str(tmp_path / f"fig8_{which}.png")))
    assert out.exists() and out.stat().st_size > 0


def test_example_loss_curve(tmp_path):
    traj = EXAMPLES / "six_level" / "trajectory.csv"
    out = render(FigureSpec(inputs=(str(traj),), kind="loss",
                            output=str(tmp_path / "fig9.png")))
    assert out.exists() and out.stat().st_size > 0
    times, losses = loss_trace(str(traj))
    # the loss trace is a cumulative decay record: non-decreasing, small
    assert all(b >= a - 1e-9 for a, b in zip(losses, losses[1:]))
    assert 0.0 <= losses[-1] < 0.1


def test_example_bars_normalized():
    traj = EXAMPLES / "six_level" / "trajectory.csv"
    for which in ("first", "last"):
        _, dist = bars_distribution(str(traj), which)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-6)


# --- schema coupling ---------------------------------------------------------

def test_consumes_only_documented_sweep_columns(tmp_path):
    csv_path = write(tmp_path, "sweep.csv", SWEEP_2D)
    out = render(FigureSpec(inputs=(str(csv_path),), kind="heatmap",
                            output=str(tmp_path / "h.png")))
    assert out.exists()


def test_missing_column_is_named(tmp_path):
    bad = SWEEP_2D.replace("axis1,", "xaxis,")
    csv_path = write(tmp_path, "sweep.csv", bad)
    with pytest.raises(FigureError, match="axis1"):
        render(FigureSpec(inputs=(str(csv_path),), kind="heatmap",
                          output=str(tmp_path / "h.png")))
    assert not (tmp_path / "h.png").exists()


def test_empty_csv_is_an_error(tmp_path):
    csv_path = write(tmp_path, "empty.csv", "axis1,axis2,efficiency,loss,flag\n")
    with pytest.raises(FigureError, match="no data rows"):
        render(FigureSpec(inputs=(str(csv_path),), kind="curve",
                          output=str(tmp_path / "c.png")))
    assert not (tmp_path / "c.png").exists()


def test_error_rows_are_skipped(tmp_path):
    text = SWEEP_1D + "0.04,,,,error:step size underflow\n"
    csv_path = write(tmp_path, "sweep.csv", text)
    out = render(FigureSpec(inputs=(str(csv_path),), kind="curve",
                            output=str(tmp_path / "c.png")))
    assert out.exists()


def test_heatmap_requires_second_axis(tmp_path):
    csv_path = write(tmp_path, "sweep.csv", SWEEP_1D)
    with pytest.raises(FigureError, match="axis2"):
        render(FigureSpec(inputs=(str(csv_path),), kind="heatmap",
                          output=str(tmp_path / "h.png")))


def test_bars_reject_unnormalized(tmp_path):
    text = TRAJ.replace("10.0,0,1,0.58", "10.0,0,1,0.28")
    csv_path = write(tmp_path, "traj.csv", text)
    with pytest.raises(FigureError, match="sum to"):
        bars_distribution(str(csv_path), "last")


def test_synthetic_bars_and_loss(tmp_path):
    csv_path = write(tmp_path, "traj.csv", TRAJ)
    t_sel, dist = bars_distribution(str(csv_path), "first")
    assert t_sel == 0.0
    assert dist[("1", 0)] == pytest.approx(0.7)
    times, losses = loss_trace(str(csv_path))
    assert losses == [0.0, pytest.approx(0.02)]


# --- command line ------------------------------------------------------------

def test_cli_curve(tmp_path, capsys):
    a = write(tmp_path, "a.csv", SWEEP_1D)
    out = tmp_path / "c.png"
    rc = main(["curve", "--input", str(a), "--label", "one", "--out", str(out)])
    assert rc == 0
    assert out.exists()


def test_cli_missing_column_exit_code(tmp_path, capsys):
    bad = write(tmp_path, "bad.csv", SWEEP_2D.replace("efficiency", "eff"))
    rc = main(["heatmap", "--input", str(bad), "--out", str(tmp_path / "h.png")])
    assert rc == 1
    assert "efficiency" in capsys.readouterr().err


def test_cli_missing_file_exit_code(tmp_path):
    rc = main(["loss", "--input", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "l.png")])
    assert rc == 1
