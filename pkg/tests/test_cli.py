import threading
import time

import pytest
import requests

from lectern.cli import build_parser, main
from lectern.storage import CatalogueStore

from conftest import seed_catalogue


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:
    def test_no_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_ingest_without_url_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["ingest", "--data-root", "/tmp/x"])
        assert err.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as err:
            main(["reindex", "--data-root", str(tmp_path), "--frobnicate"])
        assert err.value.code == 2

    @pytest.mark.parametrize("command", [
        "serve", "ingest", "reindex", "validate", "check-links", "export", "stats"])
    def test_help_lists_flags(self, command, capsys):
        with pytest.raises(SystemExit) as err:
            main([command, "--help"])
        assert err.value.code == 0
        out = capsys.readouterr().out
        assert "--data-root" in out and "--config" in out

    def test_missing_data_root_is_operational_error(self, capsys, monkeypatch):
        monkeypatch.delenv("LECTERN_DATA_ROOT", raising=False)
        code, _, err = run(["reindex"], capsys)
        assert code == 1 and "data root" in err


class TestIngest:
    def test_ingest_prints_record_template(self, tmp_path, fixture_server, capsys):
        code, out, err = run([
            "ingest", f"{fixture_server}/huck.txt",
            "--data-root", str(tmp_path / "data"),
            "--author", "Twain, Mark",
            "--directory", "American - 1800-1899",
            "--reformat", "add-blank-lines",
            "--title", "Adventures Of Huckleberry Finn",
            "--yes",
        ], capsys)
        assert code == 0
        assert out.startswith("Template-Type: DOCUMENT")
        assert "Title: Adventures Of Huckleberry Finn" in out
        assert "archived at" in err
        store = CatalogueStore(tmp_path / "data")
        assert len(store.records) == 1

    def test_ingest_policy_failure_exit_1(self, tmp_path, fixture_server, capsys):
        code, out, err = run([
            "ingest", f"{fixture_server}/doc.pdf",
            "--data-root", str(tmp_path / "data"),
            "--author", "Twain, Mark",
            "--directory", "American - 1800-1899",
            "--yes",
        ], capsys)
        assert code == 1
        assert "policy" in err

    def test_prompt_abort_without_confirmation(self, tmp_path, fixture_server,
                                               capsys, monkeypatch):
        monkeypatch.setattr("builtins.input", lambda *_: "n")
        code, out, err = run([
            "ingest", f"{fixture_server}/huck.txt",
            "--data-root", str(tmp_path / "data"),
            "--author", "Twain, Mark",
            "--directory", "American - 1800-1899",
        ], capsys)
        assert code == 1 and "aborted" in err
        assert CatalogueStore(tmp_path / "data").records == {}


class TestOperations:
    def test_reindex_reports_counts(self, tmp_path, capsys):
        store = CatalogueStore(tmp_path / "data")
        seed_catalogue(store)
        code, out, _ = run(["reindex", "--data-root", str(tmp_path / "data")], capsys)
        assert code == 0
        assert out.strip() == (
            f"reindexed {len(store.records)} documents, "
            f"{sum(store.content_index(r).paragraph_count for r in store.records)}"
            " paragraphs")

    def test_validate_clean_catalogue(self, tmp_path, capsys):
        seed_catalogue(CatalogueStore(tmp_path / "data"))
        code, out, _ = run(["validate", "--data-root", str(tmp_path / "data")], capsys)
        assert code == 0 and "all records valid" in out

    def test_validate_reports_violations(self, tmp_path, capsys):
        store = CatalogueStore(tmp_path / "data")
        seed_catalogue(store)
        # orphan an author key by rewriting the authority file
        path = store.root / "authorities" / "authors.tsv"
        lines = [l for l in path.read_text().splitlines() if "Twain" not in l]
        path.write_text("\n".join(lines) + "\n")
        code, out, err = run(["validate", "--data-root", str(tmp_path / "data")], capsys)
        assert code == 1
        assert "unknown-key" in out and "violation" in err

    def test_export_writes_zip_and_manifest(self, tmp_path, capsys):
        seed_catalogue(CatalogueStore(tmp_path / "data"))
        out_zip = tmp_path / "american.zip"
        code, out, _ = run(["export", "american", "--out", str(out_zip),
                            "--data-root", str(tmp_path / "data")], capsys)
        assert code == 0
        assert out_zip.exists() and out_zip.with_suffix(".manifest").exists()
        assert out.count("\n") == 15

    def test_export_unknown_collection_exit_1(self, tmp_path, capsys):
        seed_catalogue(CatalogueStore(tmp_path / "data"))
        code, _, err = run(["export", "martian", "--out", str(tmp_path / "m.zip"),
                            "--data-root", str(tmp_path / "data")], capsys)
        assert code == 1 and "empty-collection" in err

    def test_check_links_row_per_record(self, tmp_path, fixture_server, capsys):
        store = CatalogueStore(tmp_path / "data")
        seed_catalogue(store)
        code, out, _ = run(["check-links", "--data-root", str(tmp_path / "data")],
                           capsys)
        assert code == 0
        assert len(out.splitlines()) == len(store.records)


class TestStatsAgainstLiveServer:
    def test_stats_round_trip(self, tmp_path, capsys):
        import uvicorn

        from lectern.config import ServiceConfig
        from lectern.service import create_app

        seed_catalogue(CatalogueStore(tmp_path / "data"))
        config = ServiceConfig(data_root=tmp_path / "data", port=0,
                               admin_token="t0k3n")
        app = create_app(config)
        server = uvicorn.Server(uvicorn.Config(
            app, host="127.0.0.1", port=0, log_level="critical"))
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                pytest.fail("server did not start")
            time.sleep(0.02)
        port = server.servers[0].sockets[0].getsockname()[1]
        base = f"http://127.0.0.1:{port}"
        try:
            requests.get(f"{base}/search", params={"q": "twain"}, timeout=5)
            code, out, _ = run(["stats", "--data-root", str(tmp_path / "data"),
                                "--url", base], capsys)
            assert code == 0
            assert "/search\t1" in out
        finally:
            server.should_exit = True
            thread.join(timeout=5)

    def test_stats_unreachable_exit_1(self, tmp_path, capsys):
        code, _, err = run(["stats", "--data-root", str(tmp_path / "data"),
                            "--url", "http://127.0.0.1:9"], capsys)
        assert code == 1 and "could not reach" in err


def test_parser_exit_code_contract_documented():
    parser = build_parser()
    assert parser.prog == "lectern"
