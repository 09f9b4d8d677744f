import csv
import io
import json

import pytest

from alcovebm import cli
from alcovebm.coxeter_hecke import coxeter, kl_h
from alcovebm.rootdata import get_datum

WIN = "interval:(-2,-1):(0,1)"


def ok(*argv):
    status, out, err = cli.run(list(argv))
    assert status == 0, err
    return out


def fails(*argv):
    status, out, err = cli.run(list(argv))
    assert out == ""
    return status, json.loads(err)


# -- kl -------------------------------------------------------------------------------

def test_kl_table_matches_the_library():
    out = ok("kl", "s0s1s0", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    d = get_datum("A1")
    cx = coxeter("A1")
    x = cx.from_word([0, 1, 0])
    assert len(rows) == sum(len(cx.lower_interval(z)) for z in cx.lower_interval(x))
    top_rows = [r for r in rows if r["x"] == "s0s1s0"]
    assert {r["y"]: r["h"] for r in top_rows}["e"] == str(kl_h(d, cx.e, x))


def test_kl_of_the_identity_is_one_row():
    assert ok("kl", "e", "--format", "csv") == "y,x,h\ne,e,1\n"


def test_kl_antispherical_flavor():
    out = ok("kl", "s0s1", "--flavor", "n", "--format", "csv")
    assert out.splitlines() == ["y,x,n", "e,e,1", "e,s0,v", "s0,s0,1", "s0,s0s1,v", "s0s1,s0s1,1"]


# -- bm / act / ch ----------------------------------------------------------------------

def test_bm_text_report():
    out = ok("bm", "(0,1)", "--window", WIN)
    assert out.splitlines()[0].split() == ["vertex", "length", "stalk", "costalk"]
    assert '"BM3": true' in out
    assert "(-1,0)   -1      1      v^-2" in out


def test_bm_json_carries_normalizations():
    data = json.loads(ok("bm", "s0", "--graph", "bruhat", "--format", "json"))
    assert data["meta"]["length_normalization"] == "l(A_0^+) = 0"
    assert data["meta"]["type"] == "A1"
    assert data["rows"][0] == ["e", "0", "1", "v^-2"]


def test_bm_of_a_skyscraper():
    out = ok("bm", "(0,1)", "--window", "depth:0", "--skyscraper", "--format", "csv")
    assert out.splitlines()[1:] == ['"(0,1)",0,1,1']


def test_bm_in_a2():
    out = ok("bm", "s1s2s1s0", "--graph", "bruhat", "--type", "A2", "--format", "csv")
    assert len(out.splitlines()) - 1 == len(coxeter("A2").lower_interval(
        coxeter("A2").from_word([1, 2, 1, 0])))


def test_act_with_the_empty_word_echoes():
    out = ok("act", "(0,1)", "e", "--window", "depth:2", "--format", "csv")
    for row in list(csv.DictReader(io.StringIO(out))):
        assert row["before"] == row["after"] == "1"


def test_act_on_a_skyscraper():
    out = ok("act", "(0,1)", "s1", "--skyscraper", "--window", "interval:(-1,0):(1,2)")
    assert "decomposition: B((0,1))(-1)" in out


def test_act_associativity_flag():
    out = ok("act", "(1,2)", "s0s1", "--window", "interval:(-6,-5):(3,4)", "--check-assoc")
    assert "associative: True" in out


def test_act_random_word_is_seeded():
    args = ("act", "(0,1)", "random:2", "--window", "interval:(-6,-5):(3,4)")
    assert ok(*args, "--seed", "3") == ok(*args, "--seed", "3")


def test_ch_of_a_skyscraper():
    assert ok("ch", "(0,1)", "--skyscraper", "--window", "depth:0") == "(1)(0,1)\n"


def test_ch_homomorphism_flag():
    out = ok("ch", "(0,1)", "--window", "interval:(-4,-3):(2,3)", "--check", "1")
    assert "homomorphism: True" in out


# -- hom / export ------------------------------------------------------------------------

def test_hom_scan_csv():
    out = ok("hom", "scan", "(0,1)", "--steps", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["dimension"] for r in rows] == ["1"] * 5
    assert {r["verdict"] for r in rows} == {"stable"}


def test_hom_grk():
    assert ok("hom", "grk", "(0,1)", "--window", "interval:(-3,-2):(0,1)") == "v^-4 + 2v^-2 + 1\n"
    out = ok("hom", "grk", "(0,1)", "--window", "interval:(-3,-2):(0,1)", "--format", "csv")
    assert out.splitlines()[1] == "v^-4 + 2v^-2 + 1,1,1"


def test_export_dot():
    out = ok("export", "dot", "--window", "interval:(-1,0):(1,2)")
    assert out.startswith("graph moment {") and out.count(" -- ") == 2


def test_export_json_schema():
    data = json.loads(ok("export", "json", "--graph", "bruhat", "--vertex", "s0"))
    assert set(data) == {"vertices", "edges", "order", "meta"}
    assert data["edges"] == [{"u": 1, "v": 0, "label": ["2", "0", "-1"]}]


# -- determinism, errors, configuration --------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("kl", "s0s1s0", "--format", "json"),
    ("bm", "(0,1)", "--window", WIN, "--format", "json"),
    ("export", "json", "--window", WIN),
])
def test_output_is_deterministic(argv):
    assert ok(*argv) == ok(*argv)


def test_budget_error_exits_with_two():
    status, err = fails("bm", "s0s1s0s1", "--graph", "bruhat", "--budget", "2")
    assert status == 2 and err["error"] == "resource" and err["type"] == "BudgetError"


def test_window_error_exits_with_two():
    status, err = fails("act", "(0,1)", "s0", "--window", "depth:0")
    assert status == 2 and err["type"] == "WindowStabilityError"


def test_unknown_type_exits_with_one():
    status, err = fails("bm", "(0,1)", "--type", "Z9")
    assert status == 1 and err["error"] == "input"


def test_bad_vertex_exits_with_one():
    status, err = fails("hom", "grk", "s0", "--window", WIN)
    assert status == 1


def test_config_rejects_unknown_fields(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"bogus": 1}')
    status, err = fails("bm", "(0,1)", "--config", str(p))
    assert status == 1 and "bogus" in err["message"]


def test_config_file_supplies_defaults(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"format": "csv", "window": WIN}))
    assert ok("bm", "(0,1)", "--config", str(p)) == ok("bm", "(0,1)", "--format", "csv", "--window", WIN)


@pytest.mark.parametrize("data", [{"cutoff": 0}, {"budget": -1}, {"format": "xml"}])
def test_config_limits(data):
    with pytest.raises(cli.ConfigError):
        cli.RunConfig.from_dict(data)


def test_dot_only_for_export():
    status, err = fails("kl", "s0", "--format", "dot")
    assert status == 1


def test_cache_replays_identical_runs(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    first = ok("kl", "s0s1", "--format", "csv")
    assert len(list(tmp_path.iterdir())) == 1
    assert ok("kl", "s0s1", "--format", "csv") == first


@pytest.mark.parametrize("text,word", [("e", []), ("s0s1", [0, 1]), ("0,2", [0, 2]), ("102", [1, 0, 2])])
def test_parse_word(text, word):
    assert cli.parse_word(text) == word


def test_main_writes_streams(capsys):
    assert cli.main(["kl", "e", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "y,x,h\ne,e,1\n"
