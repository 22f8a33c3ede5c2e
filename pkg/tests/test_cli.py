import pytest

from coxkit.cli import main

D333 = "verts 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 3\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "d333.cox": D333,
        "z4.pres": "gens a\nrel a^4\n",
        "v4.pres": "gens a b\nrel a^2\nrel b^2\nrel [a, b]\n",
        "z2.pres": "gens s\nrel s^2\n",
        "chi.f": "forall y . [x, y^6] = 1\n",
        "s3.perm": "degree 3\n(1 2)\n(1 2 3)\n",
        "bad.cox": "verts 2\nedge 1 3 3\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys, files):
    code, out, _ = run(capsys, "classify", files["d333.cox"])
    assert code == 0 and out.splitlines()[0] == "Affine(Ã₂)"
    code, out, _ = run(capsys, "classify", files["d333.cox"], "--format", "records")
    assert out.strip() == "component\t1,2,3\tAffine\tA~2"


def test_classify_error_reports_line(capsys, files):
    code, _, err = run(capsys, "classify", files["bad.cox"])
    assert code == 2 and err.startswith("coxkit: error:") and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "classify", str(tmp_path / "nope"))
    assert code == 2 and "cannot read" in err


def test_centralizer(capsys, files):
    code, out, _ = run(capsys, "centralizer", files["d333.cox"], "--gen", "1")
    assert code == 0
    assert "commuting generators: s1\n" in out and "k = e - v + 1 = 1" in out


def test_special_subgroups(capsys, files):
    code, out, _ = run(capsys, "special-subgroups", files["d333.cox"])
    assert code == 0 and out.splitlines()[-1] == "7 special spherical subsets"


def test_word_eq_and_order(capsys, files):
    g = "3 1 2 3 1 2"
    assert run(capsys, "word-eq", files["d333.cox"], "--w1", g + " 1", "--w2", "1 " + g)[1].strip() == "equal"
    assert run(capsys, "word-eq", files["d333.cox"], "--w1", "1 2", "--w2", "2 1")[1].strip() == "not equal"
    assert run(capsys, "order", files["d333.cox"], "--w", "1 2")[1].strip() == "Finite(3)"
    code, out, _ = run(capsys, "order", files["d333.cox"], "--w", g, "--bound", "20")
    assert code == 0 and "20" in out
    code, _, err = run(capsys, "order", files["d333.cox"], "--w", "4")
    assert code == 2 and "out of range" in err


def test_hom_count(capsys, files):
    code, out, _ = run(capsys, "hom-count", "--presentation", files["z4.pres"], "--target", "4.1")
    assert code == 0 and out.strip() == "target order 4: 4 homomorphisms, 2 surjective"
    code, out, _ = run(capsys, "hom-count", "--presentation", files["z2.pres"], "--target", files["s3.perm"],
                       "--format", "records")
    assert out.split("\t")[1:] == ["6", "4", "0\n"]
    assert run(capsys, "hom-count", "--presentation", files["z2.pres"], "--target", "99.9")[0] == 2


def test_fingerprint_and_compare(capsys, files, tmp_path):
    f1, f2, f3 = (str(tmp_path / n) for n in ("z4.fp", "v4.fp", "z4b.fp"))
    assert run(capsys, "fingerprint", "--presentation", files["z4.pres"], "--bound", "8", "--out", f1)[0] == 0
    run(capsys, "fingerprint", "--presentation", files["v4.pres"], "--bound", "8", "--out", f2)
    run(capsys, "fingerprint", "--presentation", files["z4.pres"], "--bound", "8", "--out", f3)
    code, out, _ = run(capsys, "compare-fingerprints", f1, f2)
    assert code == 1 and out.startswith("FirstDifference at 2.1")
    code, out, _ = run(capsys, "compare-fingerprints", f1, f3)
    assert code == 0 and out.strip() == "Equal up to order 8"
    code, out, _ = run(capsys, "compare-fingerprints", f1, f2, "--format", "records")
    assert out.strip() == "difference\t2\t2.1\t2\t1\t4\t3"
    code, out, _ = run(capsys, "fingerprint", "--presentation", files["z4.pres"], "--bound", "2")
    assert out.splitlines()[0] == "bound 2"


def test_emit_formulas(capsys, files, tmp_path):
    code, out, _ = run(capsys, "emit-formula", "--kind", "chi", "--m", "6")
    assert code == 0 and out.splitlines()[1] == "forall y . x^-1 y^-1 y^-1 y^-1 y^-1 y^-1 y^-1 x y y y y y y = 1"
    code, out, _ = run(capsys, "emit-formula", "--kind", "finite-g", "--presentation", files["z2.pres"],
                       "--format", "records")
    assert out.splitlines()[:2] == ["tag\tuniversal", "free\tx1"]
    code, out, _ = run(capsys, "emit-formula", "--kind", "gamma", "--presentation", files["z2.pres"],
                       "--w", "s", "--theta", "forall y . [x, y] = 1", "--hom-words", "s")
    assert code == 0 and out.startswith("# tag: EA; free variables: z1")
    assert run(capsys, "emit-formula", "--kind", "chi")[0] == 2
    assert run(capsys, "emit-formula", "--kind", "finite-g")[0] == 2


def test_emit_then_eval(capsys, files, tmp_path):
    code, out, _ = run(capsys, "emit-formula", "--kind", "finite-g", "--presentation", files["z2.pres"])
    formula = tmp_path / "fg.f"
    formula.write_text(out)
    code, out, _ = run(capsys, "eval", "--formula", str(formula), "--model", "2.1")
    assert code == 0 and out.splitlines() == ["holds at x1 = (1 2)", "1 of 2 assignments of x1"]


def test_eval(capsys, files):
    code, out, _ = run(capsys, "eval", "--formula", files["chi.f"], "--model", "S3")
    assert code == 0 and out.splitlines()[-1] == "6 of 6 assignments of x"
    code, out, _ = run(capsys, "eval", "--formula", files["chi.f"], "--model", "6.2", "--assign", "x=0")
    assert out.strip() == "true"
    code, out, _ = run(capsys, "eval", "--formula", files["chi.f"], "--model", "6.2", "--assign", "x=0",
                       "--format", "records")
    assert out.strip() == "value\t1"
    assert run(capsys, "eval", "--formula", files["chi.f"], "--model", "6.2", "--assign", "x")[0] == 2


def test_eval_budget(capsys, files, monkeypatch):
    monkeypatch.setenv("COXKIT_BUDGET", "3")
    code, _, err = run(capsys, "eval", "--formula", files["chi.f"], "--model", "6.2", "--assign", "x=0")
    assert code == 2 and "quantifier visits" in err


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper", "--section", "classification")
    assert code == 0 and out.splitlines()[-1] == "overall: pass (6/6 checks passed)"
    code, out, _ = run(capsys, "verify-paper", "--section", "brink", "--format", "records", "--seed", "3")
    assert code == 0 and all(line.split("\t")[2] == "pass" for line in out.splitlines())
    with pytest.raises(SystemExit):
        main(["verify-paper", "--section", "nosuch"])
