import json
from pathlib import Path

import pytest

from gecka.cli import run
from gecka.session import export_session_xml

from util import table1_session

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "table1-session.xml"


def test_fixture_is_canonical():
    # the committed fixture must stay byte-equal to the canonical export
    assert FIXTURE.read_text(encoding="utf-8") == export_session_xml(table1_session())


def test_validate_fixture(capsys):
    assert run(["validate", str(FIXTURE)]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_broken_file(tmp_path, capsys):
    bad = tmp_path / "bad.xml"
    bad.write_text(FIXTURE.read_text().replace('seq="2"', 'seq="9"'), encoding="utf-8")
    assert run(["validate", str(bad)]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_export_assertions(tmp_path, capsys):
    out = tmp_path / "a.tsv"
    assert run(["export", "--assertions", str(FIXTURE), "-o", str(out)]) == 0
    tsv = out.read_text(encoding="utf-8")
    assert "the result of blending an orange with a blender, is orange juice" in tsv
    assert all(len(line.split("\t")) == 5 for line in tsv.strip().split("\n"))


def test_gen_dungeon_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen-dungeon", "--seed", "42", "--width", "32", "--height", "32", "-o", str(a)]) == 0
    assert run(["gen-dungeon", "--seed", "42", "--width", "32", "--height", "32", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["width"] == 32 and len(doc["tiles"]) == 32


def test_gen_dungeon_too_small(capsys):
    assert run(["gen-dungeon", "--seed", "1", "--width", "4", "--height", "4"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_simulate_trace(tmp_path):
    scene_file = tmp_path / "scene.json"
    run(["gen-dungeon", "--seed", "7", "--width", "24", "--height", "24", "-o", str(scene_file)])
    script = tmp_path / "cmds.txt"
    script.write_text("# demo script\nmove 12 12\nmove 12 12\nwait\n", encoding="utf-8")
    trace_a = tmp_path / "a.jsonl"
    trace_b = tmp_path / "b.jsonl"
    for target in (trace_a, trace_b):
        assert run([
            "simulate", "--scene", str(scene_file), "--seed", "3",
            "--script", str(script), "--trace", str(target),
        ]) == 0
    assert trace_a.read_bytes() == trace_b.read_bytes()
    lines = [json.loads(line) for line in trace_a.read_text().strip().split("\n")]
    header = lines[0]
    assert header["prng"] == "splitmix64" and header["seed"] == 3 and "scene" in header
    assert all({"turn", "kind", "payload"} <= set(e) for e in lines[1:])


def test_stats_command(tmp_path, capsys):
    from fastapi.testclient import TestClient
    from gecka.server import create_app

    data_dir = tmp_path / "data"
    with TestClient(create_app(data_dir)) as client:
        client.post(
            "/api/sessions",
            content=FIXTURE.read_bytes(),
            headers={"content-type": "application/xml"},
        )
    assert run(["stats", "--data-dir", str(data_dir), "--top", "3"]) == 0
    out = capsys.readouterr().out
    assert "bag\tfill\tsand\tsandbag\tflood control\t1" in out


def test_corpus_command(tmp_path, capsys):
    nouns = tmp_path / "nouns.txt"
    verbs = tmp_path / "verbs.txt"
    counts = tmp_path / "counts.tsv"
    nouns.write_text("bread\nwater\n", encoding="utf-8")
    verbs.write_text("cut\n", encoding="utf-8")
    counts.write_text("cut\tbread\t1000\ncut\twater\t3\n", encoding="utf-8")
    assert run(["corpus", "--nouns", str(nouns), "--verbs", str(verbs), "--counts", str(counts)]) == 0
    assert capsys.readouterr().out == "cut\tbread\t1000\ncut\twater\t3\n"


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as err:
        run(["gen-dungeon", "--seed", "42", "--bogus-flag"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run(["no-such-command"])
    assert err.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        run(["--version"])
    assert err.value.code == 0
    assert capsys.readouterr().out.strip()
