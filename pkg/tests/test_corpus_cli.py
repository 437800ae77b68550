"""Corpus format, expression grammar, instance generation, CLI surface."""

import json

import pytest

from cmreg import hilbert_function, make_ring
from cmreg.cli import main, replay_witness, run_one_check
from cmreg.corpus import (
    Recipe,
    generate_instance,
    parse_corpus,
    parse_polynomial,
    random_module,
    seeded_stream,
    serialize_corpus,
)
from cmreg.errors import CmregError, CorpusParseError

SAMPLE = """# a comment
ring p=32003 vars=x,y
module M
shifts 0
relations
[x^2]
[x*y - 3*y^2]
module F
shifts 0,1
relations
[(x + y)*(x - y), 2*x]
"""


def test_parse_sample():
    ring, mods = parse_corpus(SAMPLE)
    assert ring.p == 32003 and ring.var_names == ("x", "y")
    assert set(mods) == {"M", "F"}
    assert len(mods["M"].relations) == 2
    assert mods["F"].ambient.twists == (0, 1)


def test_roundtrip_serialize_parse():
    ring, mods = parse_corpus(SAMPLE)
    text = serialize_corpus(ring, mods)
    ring2, mods2 = parse_corpus(text)
    assert serialize_corpus(ring2, mods2) == text
    for name in mods:
        for i in range(-2, 8):
            assert hilbert_function(mods[name], i) == hilbert_function(mods2[name], i)


def test_parse_polynomial_grammar():
    ring = make_ring(("x", "y"))
    q = parse_polynomial("-(x + y)^2 + 2*x*y", ring)
    r = parse_polynomial("-x^2 - y^2", ring)
    assert q == r
    assert parse_polynomial("0", ring).is_zero()
    assert parse_polynomial("32003*x", ring).is_zero()


@pytest.mark.parametrize(
    "text,line,col_predicate",
    [
        ("module M\n", 1, lambda c: c >= 1),                    # ring must come first
        ("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[x^2, y]\n", 5,
         lambda c: c >= 1),                                      # arity mismatch
        ("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[x$]\n", 5,
         lambda c: c > 1),                                       # bad character
        ("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[w]\n", 5,
         lambda c: c > 1),                                       # unknown variable
        ("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[(x]\n", 5,
         lambda c: c > 1),                                       # unbalanced paren
        ("ring p=32003 vars=x,y\nmodule M\nmodule M\n", 3, lambda c: c >= 1),
        ("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[x + y^2]\n", 6,
         lambda c: c >= 1),                                      # inhomogeneous
    ],
)
def test_parse_errors_carry_line_and_col(text, line, col_predicate):
    with pytest.raises(CorpusParseError) as exc:
        parse_corpus(text)
    assert exc.value.line == line
    assert col_predicate(exc.value.col)


def test_rank_zero_roundtrip():
    text = "ring p=32003 vars=x,y\nmodule Z\nshifts none\nrelations\n"
    ring, mods = parse_corpus(text)
    assert mods["Z"].ambient.rank == 0
    assert serialize_corpus(ring, mods).splitlines()[2] == "shifts none"


def test_generation_deterministic():
    recipe = Recipe()
    a = generate_instance(recipe, 42, ("M", "N")).serialize()
    b = generate_instance(recipe, 42, ("M", "N")).serialize()
    c = generate_instance(recipe, 43, ("M", "N")).serialize()
    assert a == b
    assert a != c


def test_recipe_caps():
    with pytest.raises(CmregError):
        Recipe(num_vars=5)
    with pytest.raises(CmregError):
        Recipe(max_gens=9)
    with pytest.raises(CmregError):
        Recipe(kind="weird")


def test_cli_gen_deterministic(capsys):
    assert main(["gen", "--seed", "5", "--count", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--seed", "5", "--count", "2"]) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("ring p=32003 vars=x,y,z")


def test_cli_inspection_commands(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    main(["gen", "--seed", "5"])
    corpus.write_text(capsys.readouterr().out)
    assert main(["hilbert", str(corpus)]) == 0
    out = capsys.readouterr().out
    assert "series=" in out and "alpha=" in out
    assert main(["betti", str(corpus)]) == 0
    assert "reg=" in capsys.readouterr().out
    assert main(["reg", "--route", "betti", "--route", "postulation",
                 "--route", "conca", "--route", "sat", str(corpus)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4
    assert len({ln.split()[-1] for ln in lines}) == 1  # all routes agree
    assert main(["lc-profile", str(corpus)]) == 0
    assert "H^0:" in capsys.readouterr().out


def test_cli_check_stream_and_determinism(capsys):
    assert main(["check", "serre", "--count", "3", "--seed", "9"]) == 0
    first = capsys.readouterr()
    records = [json.loads(line) for line in first.out.strip().splitlines()]
    assert len(records) == 3
    assert all(r["verdict"] in ("HOLDS", "HYPOTHESIS_NOT_MET") for r in records)
    assert "done:" in first.err
    assert main(["check", "serre", "--count", "3", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first.out


def test_cli_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[x$]\n")
    assert main(["hilbert", str(bad)]) == 2
    assert "line 5" in capsys.readouterr().err
    assert main(["hilbert", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()


def test_cli_usage_error_exit_2(capsys):
    assert main(["check", "nonsense"]) == 2
    capsys.readouterr()


def test_cli_degree_cap_exit_3(tmp_path, capsys, monkeypatch):
    import cmreg.groebner as gb

    monkeypatch.setattr(gb, "DEFAULT_DEGREE_CAP", 2)
    corpus = tmp_path / "c.txt"
    corpus.write_text(
        "ring p=32003 vars=x,y\nmodule M\nshifts 0\nrelations\n[x*y]\n[x^2 + y^2]\n"
    )
    assert main(["betti", str(corpus)]) == 3
    assert "resource limit" in capsys.readouterr().err


def test_witness_replay_identity(capsys):
    recipe = Recipe()
    for kind in ("serre", "tensor", "im", "hom", "almost", "postulation",
                 "indep", "complex"):
        rep, wit = run_one_check(kind, 17, 0, recipe, 0, f"{kind}-00017")
        rep2 = replay_witness(wit)
        assert rep2.to_dict() == rep.to_dict(), kind


def test_replay_command(tmp_path, capsys):
    recipe = Recipe()
    rep, wit = run_one_check("serre", 21, 0, recipe, 0, "serre-00021")
    path = tmp_path / "w.json"
    path.write_text(json.dumps(wit))
    assert main(["replay", str(path)]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["instance"] == "serre-00021"
    assert main(["replay", str(tmp_path / "nope.json")]) == 2
    capsys.readouterr()


def test_violated_writes_witness_and_exit_1(tmp_path, capsys, monkeypatch):
    from cmreg import cli as cli_mod
    from cmreg.checks import CheckReport

    def fake(kind, iseed, k, recipe, a, instance_id):
        return (CheckReport(kind, instance_id, "VIOLATED"),
                {"check": kind, "instance": instance_id, "seed": iseed,
                 "recipe": recipe.to_dict(), "corpus": "", "extra": {}})

    monkeypatch.setattr(cli_mod, "run_one_check", fake)
    code = main(["check", "serre", "--count", "1", "--seed", "3",
                 "--witness-dir", str(tmp_path)])
    captured = capsys.readouterr()
    assert code == 1
    record = json.loads(captured.out)
    wfile = record["witness"]["file"]
    assert wfile.startswith(str(tmp_path))
    payload = json.loads(open(wfile).read())
    assert payload["check"] == "serre"


def test_env_seed_default(monkeypatch, capsys):
    monkeypatch.setenv("CMREG_SEED", "77")
    assert main(["gen"]) == 0
    with_env = capsys.readouterr().out
    monkeypatch.delenv("CMREG_SEED")
    assert main(["gen", "--seed", "77"]) == 0
    assert capsys.readouterr().out == with_env
