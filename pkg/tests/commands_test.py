import csv
import io
import logging

import pytest

from src import composite_ops
from src.commands import (
    EXIT_FAILURE,
    EXIT_OFF_CURVE,
    EXIT_OK,
    EXIT_USAGE,
    MUL_ALGORITHMS,
    build_parser,
    run,
)
from src.config import ConfigHandler
from src.curve_core import point_add, scalar_mul_reference
from src.formatting import format_point, format_x
from src.fp_arith import NULL_COUNTER
from src.montgomery_baseline import montgomery_x
from tests.conftest import curve_path

logger = logging.getLogger(__name__)


@pytest.fixture
def cli(tmp_path, monkeypatch):
    monkeypatch.delenv("ECC_SEED", raising=False)
    cfg = str(tmp_path) + "/ecbench.cfg"
    with open(cfg, "w") as f:
        f.write(f"[general]\ncurve = {curve_path('p521.curve')}\nworkers = 2\n")
        f.write(f"[bench]\ntrials = 1\nout = {tmp_path}/bench.csv\n")
    config = ConfigHandler(cfg, logger)

    def invoke(*argv):
        args = build_parser().parse_args(["--config", cfg, *argv])
        out = io.StringIO()
        code = run(args, config, logger, out)
        return code, out.getvalue().splitlines()

    return invoke


def test_recode_naf(cli):
    code, lines = cli("recode", "--k", "f", "--mode", "naf")
    assert code == EXIT_OK
    assert lines == ["1 0 0 0 -1", "bases: 2 2 2 2 2", "density: 0.400", "inversions: 1"]


def test_recode_base16(cli):
    code, lines = cli("recode", "--k", "27A6", "--mode", "base16")
    assert lines[0] == "2 7 10 6"
    assert lines[-1] == "inversions: 4"


def test_recode_mixed_is_default(cli):
    code, lines = cli("recode", "--k", "2f")
    assert lines[0] == "3 -1"
    assert lines[-1] == "inversions: 2"


def test_recode_zero(cli):
    code, lines = cli("recode", "--k", "0", "--mode", "naf")
    assert code == EXIT_OK
    assert lines[0] == "0"
    assert lines[-1] == "inversions: 0"


@pytest.mark.parametrize("bad", ["0x1f", "-5", "12g", ""])
def test_malformed_hex_is_a_usage_error(bad):
    with pytest.raises(SystemExit) as e:
        build_parser().parse_args(["recode", "--k", bad])
    assert e.value.code == 2


def test_malformed_point_is_a_usage_error():
    with pytest.raises(SystemExit) as e:
        build_parser().parse_args(["mul", "--k", "5", "--point", "3"])
    assert e.value.code == 2


def test_algorithms_agree(cli, p521):
    expected = format_point(scalar_mul_reference(0x27A6, p521.base_point(), p521.params, NULL_COUNTER))
    for algo in MUL_ALGORITHMS:
        if algo == "montgomery-xz":
            continue
        code, lines = cli("mul", "--k", "27a6", "--algo", algo)
        assert code == EXIT_OK
        assert lines[0] == f"point = {expected}"
        assert lines[1].startswith("mul=")


def test_mul_counts_and_trace(cli):
    code, lines = cli("mul", "--k", "27a6", "--algo", "base16", "--trace")
    assert " inv=4 " in lines[1]
    assert lines[2:] == [
        "step 0: kind=mul-small block=2 base=1 inv=1",
        "step 1: kind=radix-promote block=7 base=16 inv=1",
        "step 2: kind=radix-promote block=10 base=16 inv=1",
        "step 3: kind=radix-promote block=6 base=16 inv=1",
    ]


def test_zero_scalar_prints_infinity(cli):
    code, lines = cli("mul", "--k", "0")
    assert code == EXIT_OK
    assert lines[0] == "point = infinity"


def test_off_curve_point(cli):
    code, lines = cli("mul", "--curve", curve_path("toy97.curve"), "--k", "5", "--point", "0,1")
    assert code == EXIT_OFF_CURVE
    assert lines == []


def test_kernel_form(cli, toy97):
    E, G = toy97.params, toy97.base_point()
    Q = scalar_mul_reference(3, G, E, NULL_COUNTER)
    q_text = f"{Q.x.value:x},{Q.y.value:x}"
    expected = format_point(point_add(G, scalar_mul_reference(11, Q, E, NULL_COUNTER), E, NULL_COUNTER))
    for extra in ([], ["--kernel-table"]):
        code, lines = cli("mul", "--curve", curve_path("toy97.curve"), "--k", "b", "--q", q_text, *extra)
        assert code == EXIT_OK
        assert lines[0] == f"point = {expected}"


def test_kernel_table_needs_q(cli):
    assert cli("mul", "--k", "5", "--kernel-table")[0] == EXIT_USAGE


def test_montgomery_ladder(cli, mont101):
    C = mont101.montgomery
    G = mont101.base_point()
    x = montgomery_x(C, scalar_mul_reference(25, G, mont101.params, NULL_COUNTER))
    expected_inv = 0 if x is None else 1
    code, lines = cli("mul", "--curve", curve_path("mont101.curve"), "--k", "19", "--algo", "montgomery-xz")
    assert code == EXIT_OK
    assert lines[0] == f"x = {format_x(x)}"
    assert f" inv={expected_inv} " in lines[1]


def test_montgomery_ladder_needs_a_montgomery_curve(cli):
    assert cli("mul", "--k", "5", "--algo", "montgomery-xz")[0] == EXIT_USAGE


def test_missing_curve_file(cli, tmp_path):
    assert cli("mul", "--curve", str(tmp_path / "nope.curve"), "--k", "5")[0] == EXIT_USAGE


def test_verify(cli):
    code, lines = cli("verify", "--curve", curve_path("toy97.curve"), "--exhaustive-bits", "5", "--random-trials", "3")
    assert code == EXIT_OK
    assert lines[-1].startswith("checks=")
    assert lines[-1].endswith("failures=0")


def test_verify_reports_failures(cli, monkeypatch):
    monkeypatch.setattr(composite_ops, "triple", lambda P, E, c: composite_ops.double2(P, E, c))
    code, lines = cli("verify", "--curve", curve_path("toy97.curve"), "--exhaustive-bits", "3", "--random-trials", "2")
    assert code == EXIT_FAILURE
    assert any(line.startswith("FAIL curve=toy97 algo=triple k=3 point=") for line in lines)


def test_bench_writes_csv(cli, tmp_path):
    code, lines = cli("bench", "--curve", curve_path("toy97.curve"), "--seed", "5")
    assert code == EXIT_OK
    assert lines[0] == "curve=toy97 trials=1"
    with open(tmp_path / "bench.csv") as f:
        rows = f.read().splitlines()
    assert rows[0] == "routine,mul,sqr,add_sub,inv,wall_ns_mean"
    assert rows[1].startswith("composite-3P,")


def test_complement_multiply(cli, p521):
    k = p521.order - 3
    expected = format_point(scalar_mul_reference(k, p521.base_point(), p521.params, NULL_COUNTER))
    code, lines = cli("mul", "--k", f"{k:x}", "--algo", "complement")
    assert code == EXIT_OK
    assert lines[0] == f"point = {expected}"
    assert lines[1].endswith(" neg=1")


def test_complement_needs_the_order(cli):
    assert cli("mul", "--curve", curve_path("toy97.curve"), "--k", "5", "--algo", "complement")[0] == EXIT_USAGE


def test_bench_folds_squarings(cli, tmp_path):
    code, lines = cli("bench", "--curve", curve_path("toy97.curve"), "--seed", "5", "--fold-sqr")
    assert code == EXIT_OK
    with open(tmp_path / "bench.csv") as f:
        rows = list(csv.reader(f))
    assert all(row[2] == "0" for row in rows[1:])
