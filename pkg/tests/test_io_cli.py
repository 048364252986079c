import json

import numpy as np
import pytest

from posmap import io
from posmap.cli import main
from posmap.mapcore import BFormMap, builtin_map, canonical_decompose
from posmap.matkernel import random_hermitian
from posmap.schmidt import BipartitePureState

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def run(capsys, *argv):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


class TestFormat:
    def test_float_rendering(self):
        assert io.dumps(0.1) == "0.10000000000000001"
        assert io.dumps(1.0) == "1.0"
        assert io.dumps(-0.0) == "-0.0"
        assert io.dumps({"b": 1, "a": [2 / 3, 2]}) == '{"a": [0.66666666666666663, 2], "b": 1}'

    def test_map_round_trip_bit_exact(self, tmp_path, rng):
        B = BFormMap(3, random_hermitian(9, rng) / 7)
        io.save_map(B, tmp_path / "m.json")
        B2 = io.load_map(tmp_path / "m.json")
        np.testing.assert_array_equal(B.matrix, B2.matrix)

    def test_kraus_round_trip(self, tmp_path, rng):
        B = BFormMap(2, random_hermitian(4, rng))
        io.save_map(B, tmp_path / "k.json", repr="kraus")
        np.testing.assert_allclose(io.load_map(tmp_path / "k.json").matrix, B.matrix, atol=1e-12)

    def test_state_round_trip(self, tmp_path, rng):
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi = BipartitePureState((3, 2), v / np.linalg.norm(v))
        io.save_state(psi, tmp_path / "s.json")
        rho, dims, pure = io.load_state(tmp_path / "s.json")
        assert dims == (3, 2) and pure
        np.testing.assert_array_equal(rho, np.outer(psi.amplitudes, psi.amplitudes.conj()))
        io.save_state((rho, dims), tmp_path / "d.json")
        rho2, _, pure2 = io.load_state(tmp_path / "d.json")
        assert not pure2
        np.testing.assert_array_equal(rho, rho2)

    @pytest.mark.parametrize("doc, field", [
        ({"format": "nope", "dim": 2, "builtin": {"name": "identity"}}, "format"),
        ({"format": "posmap-map-v1", "dim": 0, "builtin": {"name": "identity"}}, "dim"),
        ({"format": "posmap-map-v1", "dim": 2}, "exactly one"),
        ({"format": "posmap-map-v1", "dim": 2, "bform": [[[1, 0]]], "builtin": {"name": "x"}}, "exactly one"),
        ({"format": "posmap-map-v1", "dim": 1, "bform": [[[1, "a"]]]}, "bform[0][0]"),
        ({"format": "posmap-map-v1", "dim": 2, "bform": [[[1, 0]]]}, "bform"),
        ({"format": "posmap-map-v1", "dim": 1, "kraus": [{"weight": 1}]}, "kraus[0]"),
        ({"format": "posmap-map-v1", "dim": 2, "kraus": [{"weight": 1, "matrix": [[[1, 0]]]}]}, "kraus[0].matrix"),
    ])
    def test_schema_errors_name_field(self, doc, field):
        with pytest.raises(io.SchemaError, match=field.replace("[", r"\[").replace("]", r"\]")):
            io.map_from_dict(doc)


class TestAnalyze:
    def test_reduction(self, tmp_path, capsys):
        io.save_map(builtin_map("reduction", 2), tmp_path / "r.json", repr="builtin")
        code, out, _ = run(capsys, "analyze", tmp_path / "r.json", "--json")
        assert code == 0
        rep = json.loads(out)
        assert rep["upper_bound"] == 1
        assert rep["negative_kraus"] == [{"eigenvalue": -1.0, "rank": 2}]
        assert list(rep) == sorted(rep)

    def test_identity_text(self, tmp_path, capsys):
        io.save_map(builtin_map("identity", 2), tmp_path / "i.json")
        code, out, _ = run(capsys, "analyze", tmp_path / "i.json")
        assert code == 0 and "completely positive" in out

    def test_non_hermitian(self, tmp_path, capsys):
        M = np.triu(np.ones((4, 4)))
        path = write(tmp_path / "bad.json", {"format": "posmap-map-v1", "dim": 2, "bform": io.encode_matrix(M)})
        code, _, err = run(capsys, "analyze", path)
        assert code == 1 and "tolerance" in err and "Hermitian" in err

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "analyze", tmp_path / "none.json")
        assert code == 1 and "cannot read" in err

    def test_bad_json(self, tmp_path, capsys):
        (tmp_path / "x.json").write_text("{not json")
        assert run(capsys, "analyze", tmp_path / "x.json")[0] == 1

    def test_twelve_digits(self, tmp_path, capsys):
        io.save_map(builtin_map("depolarizing", 3, [1 / 3]), tmp_path / "d.json")
        _, out, _ = run(capsys, "analyze", tmp_path / "d.json")
        assert "2.11111111111" in out and "2.111111111111" not in out


class TestCertify:
    def test_transpose(self, tmp_path, capsys):
        io.save_map(builtin_map("transpose", 2), tmp_path / "t.json")
        code, out, _ = run(capsys, "certify", tmp_path / "t.json", "--m", 2, "--json",
                           "--emit-witness", tmp_path / "w.json")
        assert code == 0
        rep = json.loads(out)
        assert rep["verdict"] == "ViolationFound" and abs(rep["lambda_min"] + 0.5) < 1e-9
        rho, dims, pure = io.load_state(tmp_path / "w.json")
        assert pure and dims == (2, 2)
        # the emitted witness feeds straight back into the witness command
        code, out, _ = run(capsys, "witness", tmp_path / "w.json", "--map", "builtin:transpose", "--json")
        assert code == 0 and json.loads(out)["entangled"] is True

    def test_no_violation_is_exit_zero(self, tmp_path, capsys):
        io.save_map(builtin_map("transpose", 2), tmp_path / "t.json")
        code, out, _ = run(capsys, "certify", tmp_path / "t.json", "--m", 1, "--restarts", 20)
        assert code == 0 and "NoViolationFound" in out

    def test_bad_m(self, tmp_path, capsys):
        io.save_map(builtin_map("transpose", 2), tmp_path / "t.json")
        assert run(capsys, "certify", tmp_path / "t.json", "--m", 3)[0] == 1
        assert run(capsys, "certify", tmp_path / "t.json", "--m", 0)[0] == 1
        assert run(capsys, "certify", tmp_path / "t.json")[0] == 1  # --m is required

    def test_seed_env(self, tmp_path, capsys, monkeypatch):
        io.save_map(builtin_map("reduction", 3), tmp_path / "r.json")
        args = ("certify", tmp_path / "r.json", "--m", 1, "--restarts", 2, "--max-iters", 50, "--json")
        monkeypatch.setenv("POSMAP_SEED", "17")
        assert json.loads(run(capsys, *args)[1])["seed"] == 17
        assert json.loads(run(capsys, *args, "--seed", 4)[1])["seed"] == 4
        monkeypatch.setenv("POSMAP_SEED", "x")
        assert run(capsys, *args)[0] == 1

    def test_reverification_failure_is_exit_two(self, tmp_path, capsys, monkeypatch):
        import posmap.cli as cli

        io.save_map(builtin_map("transpose", 2), tmp_path / "t.json")
        monkeypatch.setattr(cli, "verify_witness", lambda *a, **k: False)
        assert run(capsys, "certify", tmp_path / "t.json", "--m", 2)[0] == 2


class TestWitness:
    def test_bell(self, tmp_path, capsys):
        io.save_state(BipartitePureState((2, 2), BELL), tmp_path / "bell.json")
        code, out, _ = run(capsys, "witness", tmp_path / "bell.json", "--map", "builtin:transpose",
                           "--compare-ppt", "--json")
        rep = json.loads(out)
        assert code == 0 and rep["entangled"] is True
        assert rep["lambda_min"] == pytest.approx(-0.5, abs=1e-9) and rep["ppt_lambda_min"] == pytest.approx(-0.5)
        assert rep["caveat"] is False

    def test_product(self, tmp_path, capsys):
        io.save_state(BipartitePureState((2, 2), [1, 0, 0, 0]), tmp_path / "p.json")
        code, out, _ = run(capsys, "witness", tmp_path / "p.json", "--map", "builtin:reduction")
        assert code == 0 and "inconclusive" in out

    def test_trace_not_one(self, tmp_path, capsys):
        rho = 0.9 * np.outer(BELL, BELL)
        write(tmp_path / "s.json", {"format": "posmap-state-v1", "dims": [2, 2], "density": io.encode_matrix(rho)})
        code, _, err = run(capsys, "witness", tmp_path / "s.json", "--map", "builtin:transpose")
        assert code == 1 and "trace" in err

    def test_map_file_and_caveat(self, tmp_path, capsys, rng):
        io.save_map(BFormMap(2, random_hermitian(4, rng) - 4 * np.eye(4)), tmp_path / "m.json")
        io.save_state(BipartitePureState((2, 2), BELL), tmp_path / "bell.json")
        code, out, _ = run(capsys, "witness", tmp_path / "bell.json", "--map", tmp_path / "m.json")
        assert code == 0 and "caveat" in out

    def test_unknown_builtin(self, tmp_path, capsys):
        io.save_state(BipartitePureState((2, 2), BELL), tmp_path / "bell.json")
        assert run(capsys, "witness", tmp_path / "bell.json", "--map", "builtin:nope")[0] == 1


class TestGen:
    def test_depolarizing_cp(self, tmp_path, capsys):
        assert run(capsys, "gen", "--builtin", "depolarizing", "--dim", 2, "--param", 1.0,
                   "-o", tmp_path / "d.json")[0] == 0
        _, out, _ = run(capsys, "analyze", tmp_path / "d.json", "--json")
        assert json.loads(out)["cp"] is True

    @pytest.mark.parametrize("repr_", ["builtin", "bform", "kraus"])
    def test_transpose_dim3(self, tmp_path, capsys, repr_):
        run(capsys, "gen", "--builtin", "transpose", "--dim", 3, "--repr", repr_, "-o", tmp_path / "t.json")
        B = io.load_map(tmp_path / "t.json")
        assert np.linalg.eigvalsh(B.matrix)[0] == pytest.approx(-1)
        _, out, _ = run(capsys, "analyze", tmp_path / "t.json", "--json")
        assert json.loads(out)["eigenvalues"][-1] == -1.0

    def test_round_trip_matches_in_memory(self, tmp_path, capsys):
        run(capsys, "gen", "--builtin", "reduction", "--dim", 3, "-o", tmp_path / "r.json")
        _, from_file, _ = run(capsys, "analyze", tmp_path / "r.json", "--json")
        io.save_map(builtin_map("reduction", 3), tmp_path / "mem.json", repr="bform")
        _, from_mem, _ = run(capsys, "analyze", tmp_path / "mem.json", "--json")
        assert from_file == from_mem

    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "gen", "--builtin", "identity", "--dim", 2)
        assert code == 0 and json.loads(out)["format"] == "posmap-map-v1"

    def test_unknown(self, capsys):
        code, _, err = run(capsys, "gen", "--builtin", "swap", "--dim", 2)
        assert code == 1 and "unknown builtin" in err

    def test_bad_params(self, capsys):
        assert run(capsys, "gen", "--builtin", "depolarizing", "--dim", 2)[0] == 1
