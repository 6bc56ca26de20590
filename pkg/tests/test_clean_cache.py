from klgrowth.klcore import KLTable, save_cache
from klgrowth.rootsys import build_root_system
from klgrowth.weylaff import generate
from scripts.clean_cache import clean_cache_dir, inspect_cache


def write_current(path):
    save_cache(KLTable(generate(build_root_system("A", 1), 3)).build_all(), path)


def test_inspect_current_cache(tmp_path):
    path = tmp_path / "a1.klc"
    write_current(path)
    info = inspect_cache(path)
    assert info == {"version": 1, "group": "A1 affine L=3", "entries": 25}


def test_inspect_rejects_other_files(tmp_path):
    path = tmp_path / "notes.klc"
    path.write_text("hello\nworld\n", encoding="utf-8")
    assert inspect_cache(path) is None


def test_clean_removes_only_stale_files(tmp_path, capsys):
    write_current(tmp_path / "current.klc")
    stale = tmp_path / "stale.klc"
    stale.write_text("# klgrowth kl-cache v0\n# group A1 affine L=1\ne | e | 1\n", encoding="utf-8")
    (tmp_path / "other.klc").write_text("not a cache\n", encoding="utf-8")

    assert clean_cache_dir(tmp_path, dry_run=True) == [stale]
    assert stale.exists()

    assert clean_cache_dir(tmp_path) == [stale]
    assert not stale.exists()
    assert (tmp_path / "current.klc").exists()
    assert (tmp_path / "other.klc").exists()
    assert "🧹 stale.klc" in capsys.readouterr().out
