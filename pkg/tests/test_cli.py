import io

import numpy as np
import pytest

from nrldpc.basegraph import CodeConfig, expand, load_bg1
from nrldpc.cli import main, parse_grid
from nrldpc.sweep import parse_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_shipped(capsys):
    code, out, _ = run(["validate"], capsys)
    assert code == 0
    assert "FAIL" not in out


def test_validate_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0 0 1 2 3 4 5 6 7 8\n0 0 1 2 3 4 5 6 7 8\n")
    code, out, _ = run(["validate", str(path)], capsys)
    assert code == 2
    assert "FAIL unique entry" in out


def test_validate_unparsable(tmp_path, capsys):
    path = tmp_path / "junk.txt"
    path.write_text("zero one\n")
    code, out, _ = run(["validate", str(path)], capsys)
    assert code == 2 and "FAIL parse" in out


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    code, _, err = run(["encode", "--z", "97"], capsys)
    assert code == 1


def test_nonstandard_z_needs_lifting_set(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("0" * 22 * 17)
    code, _, err = run(["encode", "--z", "17", "--in", str(src)], capsys)
    assert code == 1 and "--lifting-set" in err
    code, _, _ = run(["encode", "--z", "17", "--lifting-set", "0", "--in", str(src)], capsys)
    assert code == 0


@pytest.mark.parametrize("packed", [False, True])
def test_encode_roundtrip(tmp_path, capsys, packed):
    Z = 8
    cfg = CodeConfig(Z=Z, mb=4, lifting_set=0)
    rng = np.random.default_rng(1)
    info = rng.integers(0, 2, (3, cfg.k), dtype=np.uint8)
    src, dst = tmp_path / "in", tmp_path / "out"
    if packed:
        src.write_bytes(np.packbits(info.reshape(-1)).tobytes())
    else:
        src.write_text("\n".join("".join(map(str, row)) for row in info))
    argv = ["--out", str(dst), "encode", "--z", str(Z), "--in", str(src)] + (["--packed"] if packed else [])
    code, _, _ = run(argv, capsys)
    assert code == 0
    if packed:
        bits = np.unpackbits(np.frombuffer(dst.read_bytes(), dtype=np.uint8))[: 3 * cfg.n_code]
        cw = bits.reshape(3, cfg.n_code)
    else:
        cw = np.array([[int(c) for c in line] for line in dst.read_text().split()], dtype=np.uint8)
    H = expand(load_bg1(), cfg)
    assert np.array_equal(cw[:, : cfg.k], info)
    assert not H.syndrome(cw).any()


def test_encode_rejects_partial_frame(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("0101")
    code, _, _ = run(["encode", "--z", "8", "--in", str(src)], capsys)
    assert code == 1


def test_throughput_table(capsys):
    code, out, _ = run(["throughput", "--fclk", "526MHz", "--z", "96", "48", "24", "--csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1].startswith("96,single-96,2304,2,1.34656e+10")
    assert lines[3].startswith("24,quad-24,576,8,")


def test_ber_sweep_with_rate_alias(tmp_path, capsys):
    dst = tmp_path / "s.csv"
    code, _, _ = run(["ber-sweep", "--z", "8", "--rate", "1/2", "--ebn0", "0:1:1", "--max-frames", "5",
                      "--out", str(dst)], capsys)
    assert code == 0
    rows = parse_csv(io.StringIO(dst.read_text()))
    assert [r["ebn0_db"] for r in rows] == [0.0, 1.0]
    assert all(r["mb"] == 24 and r["frames"] == 5 for r in rows)


def test_shiftnet_verify(capsys):
    code, out, _ = run(["shiftnet-verify", "--n", "24", "--exhaustive"], capsys)
    assert code == 0
    assert "300 passed, 0 failed" in out


def test_parse_grid():
    assert parse_grid("0:0.5:2") == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert parse_grid("1,3") == [1.0, 3.0]
