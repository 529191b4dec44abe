import io

import pytest

from solvergen.cli import EXIT_COMPUTE, EXIT_INPUT, EXIT_OK, EXIT_USAGE, main, parse_order
from solvergen.poly import MonomialOrder
from solvergen.template import read_template

TOY = "ring x, y over zp(30011)\nx + y^2 - 1\nx*y - 1\n"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def toy_file(tmp_path):
    p = tmp_path / "toy.sys"
    p.write_text(TOY)
    return p


def test_gb_grevlex(toy_file):
    code, out = run("gb", toy_file)
    assert code == EXIT_OK
    assert "generators 3" in out
    assert "K=3" in out


def test_gb_lex(toy_file):
    code, out = run("gb", toy_file, "--order", "lex")
    assert code == EXIT_OK and "generators 2" in out


def test_gb_positive_dimensional(tmp_path, capsys):
    p = tmp_path / "pd.sys"
    p.write_text("ring x, y over zp(7)\nx*y - 1\n")
    assert run("gb", p)[0] == EXIT_INPUT
    assert "zero-dimensional" in capsys.readouterr().err


def test_bad_inputs(tmp_path, toy_file):
    p = tmp_path / "bad.sys"
    p.write_text("ring x over zp(7)\nx +* 1\n")
    assert run("gb", p)[0] == EXIT_INPUT
    assert run("gb", tmp_path / "missing.sys")[0] == EXIT_INPUT
    assert run("gb", toy_file, "--order", "sideways")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == EXIT_USAGE


def test_cap_exceeded_is_computation_failure():
    assert run("template", "toy", "--basis", "lex", "--action", "y", "--max-degree", "2")[0] == EXIT_COMPUTE


def test_parse_order():
    names = ("x", "y")
    assert parse_order("grevlex", names) == MonomialOrder.grevlex()
    assert parse_order("lex[y>x]", names) == MonomialOrder.lex((1, 0))
    assert parse_order("weighted(1:2)", names) == MonomialOrder.weighted((1, 2))


def test_fan_lines(toy_file, tmp_path):
    code, out = run("fan", toy_file)
    rows = [l for l in out.splitlines()[1:] if not l.startswith("#")]
    assert code == EXIT_OK and len(rows) == 3
    single = tmp_path / "one.sys"
    single.write_text("ring x, y over zp(7)\nx - 1\ny - 2\n")
    rows = [l for l in run("fan", single)[1].splitlines()[1:] if not l.startswith("#")]
    assert len(rows) == 1


def test_bench_toy_heuristic():
    code, out = run("bench", "toy", "--mode", "heuristic", "--samples", 100)
    rows = [l.split(",") for l in out.splitlines()[1:] if not l.startswith("#")]
    assert code == EXIT_OK and len(rows) == 100
    assert all(r[5] == "true" for r in rows)


def test_bench_grevlex_single_row():
    code, out = run("bench", "stitch2", "--mode", "grevlex")
    rows = [l for l in out.splitlines()[1:] if not l.startswith("#")]
    assert len(rows) == 1
    assert "# reference stitch2 grevlex 48x66" in out


def test_solve_toy():
    code, out = run("solve", "toy")
    rows = [l.split(",") for l in out.splitlines() if l[:1].isdigit()]
    assert code == EXIT_OK and len(rows) == 3
    assert all(float(r[-1]) < 1e-9 for r in rows)


def test_solve_histogram():
    out = run("solve", "toy", "--hist")[1]
    hist = out.split("log10_residual_bin,count\n")[1].splitlines()
    assert sum(int(l.split(",")[1]) for l in hist) == 3


def test_solve_stitching_contains_planted():
    from solvergen import problems

    inst = problems.generate("stitch2", 5, "float")
    f = 1 / inst.ground_truth[1] ** 0.5
    out = run("solve", "stitch2", "--seed", 5)[1]
    gs = [complex(l.split(",")[2].replace("i", "j")) for l in out.splitlines() if l[:1].isdigit()]
    assert min(abs(1 / g**0.5 - f) for g in gs) / f < 1e-6


def test_solve_efl_count():
    out = run("solve", "efl", "--basis", "heuristic")[1]
    assert len([l for l in out.splitlines() if l[:1].isdigit()]) <= 19


def test_template_roundtrip(tmp_path):
    path = tmp_path / "toy.tpl"
    code, out = run("template", "toy", "--action", "y", "--out", path)
    assert code == EXIT_OK
    t = read_template(path)
    assert t.size == (2, 5)
    assert "size 2x5" in out
    assert "basis exponents: (0,0) (1,0) (0,1)" in out


def test_gen_then_gb(tmp_path):
    path = tmp_path / "s.sys"
    assert run("gen", "stitch2", "--out", path)[0] == EXIT_OK
    assert "K=18" in run("gb", path)[1]


def test_sample_flags():
    code, out = run("sample", "stitch2", "--count", 5)
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert code == EXIT_OK and len(rows) == 5
    assert all(r[3] == "true" for r in rows)
