import pytest

from hsss.cli import main
from hsss.dealer import DealerState, PublicBundle
from hsss.vault import VaultFile


@pytest.fixture
def deployment(tmp_path):
    secrets = []
    for j, data in enumerate([b"first secret\n", bytes(range(256))]):
        p = tmp_path / f"s{j}.bin"
        p.write_bytes(data)
        secrets.append(p)
    out = tmp_path / "dealer"
    assert main(["setup", "--groups", "2,1", "--secret-file", *map(str, secrets),
                 "--out-dir", str(out), "--seed", "5"]) == 0
    shares = tmp_path / "shares"
    assert main(["distribute", "--state", str(out / "dealer.state"), "--out-dir", str(shares)]) == 0
    return tmp_path, out, shares, secrets


def files(out):
    return [str(out / "dealer.state"), str(out / "public.bundle"), str(out / "secrets.vault")]


def recover_args(out, shares, j, names, dest):
    state, bundle, vault = files(out)
    return ["recover", "--index", str(j), "--share", *[str(shares / f"{n}.share") for n in names],
            "--state", state, "--bundle", bundle, "--vault", vault, "--out", str(dest)]


def test_setup_writes_parseable_files(deployment):
    _, out, shares, _ = deployment
    state = DealerState.from_text((out / "dealer.state").read_text())
    assert state.t == 2
    PublicBundle.from_text((out / "public.bundle").read_text())
    VaultFile.from_text((out / "secrets.vault").read_text())
    assert sorted(p.name for p in shares.iterdir()) == ["P1.share", "P2.share", "P3.share"]


def test_verify_share(deployment, capsys):
    _, out, shares, _ = deployment
    assert main(["verify-share", "--share", str(shares / "P1.share"), "--bundle", files(out)[1]]) == 0
    assert capsys.readouterr().out.strip() == "OK"
    bad = shares / "bad.share"
    text = (shares / "P1.share").read_text()
    bad.write_text(("0" if text[0] != "0" else "1") + text[1:])
    assert main(["verify-share", "--share", str(bad), "--bundle", files(out)[1]]) == 1
    assert capsys.readouterr().out.strip() == "REJECTED: not in g*"


def test_recover_and_verify_secret(deployment, tmp_path):
    _, out, shares, secrets = deployment
    for j in (0, 1):
        dest = tmp_path / f"rec{j}.bin"
        assert main(recover_args(out, shares, j, ["P2", "P3"], dest)) == 0
        assert dest.read_bytes() == secrets[j].read_bytes()
        assert main(["verify-secret", "--file", str(dest), "--index", str(j), "--bundle", files(out)[1]]) == 0
    other = tmp_path / "rec0.bin"
    assert main(["verify-secret", "--file", str(other), "--index", "1", "--bundle", files(out)[1]]) == 1


def test_recover_insufficient_writes_nothing(deployment, tmp_path):
    _, out, shares, _ = deployment
    dest = tmp_path / "nope.bin"
    assert main(recover_args(out, shares, 0, ["P1", "P2"], dest)) == 1
    assert not dest.exists()


def test_refresh_invalidates_old_shares(deployment, tmp_path):
    _, out, shares, secrets = deployment
    assert main(["refresh", "--state", files(out)[0], "--seed", "8"]) == 0
    assert main(["verify-share", "--share", str(shares / "P1.share"), "--bundle", files(out)[1]]) == 1
    new_shares = tmp_path / "new"
    assert main(["distribute", "--state", files(out)[0], "--out-dir", str(new_shares)]) == 0
    dest = tmp_path / "r.bin"
    assert main(recover_args(out, new_shares, 1, ["P1", "P3"], dest)) == 0
    assert dest.read_bytes() == secrets[1].read_bytes()


def test_proactive_subcommands(deployment, tmp_path):
    _, out, shares, secrets = deployment
    state_file = files(out)[0]
    assert main(["refresh-share", "--state", state_file, "--b", "0"]) == 0
    assert main(["add-controlling", "--state", state_file]) == 0
    assert DealerState.from_text((out / "dealer.state").read_text()).t == 3
    assert main(["revoke", "--state", state_file, "--b", "2", "--swap-controlling"]) == 0
    state = DealerState.from_text((out / "dealer.state").read_text())
    assert state.t == 3 and len(state.controlling) == 2
    new_secret = tmp_path / "new.bin"
    new_secret.write_bytes(b"rotated")
    assert main(["update-secret", "--state", state_file, "--index", "0", "--secret-file", str(new_secret)]) == 0
    dest = tmp_path / "r.bin"
    assert main(recover_args(out, shares, 0, ["P1"], dest)) == 0
    assert dest.read_bytes() == b"rotated"
    assert main(["revoke", "--state", state_file, "--b", "0"]) == 2


def test_epoch_mismatch_is_error(deployment, tmp_path):
    _, out, shares, _ = deployment
    old_bundle = tmp_path / "old.bundle"
    old_bundle.write_text((out / "public.bundle").read_text())
    assert main(["refresh", "--state", files(out)[0]]) == 0
    state, _, vault = files(out)
    args = ["recover", "--index", "0", "--share", str(shares / "P1.share"), str(shares / "P3.share"),
            "--state", state, "--bundle", str(old_bundle), "--vault", vault]
    assert main(args) == 2


def test_usage_errors(tmp_path, monkeypatch):
    assert main([]) == 2
    assert main(["setup", "--groups", "2"]) == 2
    assert main(["verify-share", "--share", str(tmp_path / "missing"), "--bundle", "x"]) == 2
    monkeypatch.setenv("HSSS_HASH", "md5")
    assert main(["bench", "--t", "1", "--n", "1", "--trials", "1"]) == 2


def test_seeded_setup_is_byte_identical(tmp_path):
    secret = tmp_path / "s.bin"
    secret.write_bytes(b"x" * 40)
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        main(["setup", "--groups", "3,1", "--secret-file", str(secret), "--out-dir", str(d), "--seed", "77"])
        outs.append([p.read_bytes() for p in map(lambda f: d / f, ["dealer.state", "public.bundle", "secrets.vault"])])
    assert outs[0] == outs[1]


def test_bench_and_simulate(tmp_path, capsys):
    report, fig = tmp_path / "bench.txt", tmp_path / "bench.png"
    assert main(["bench", "--t", "2", "4", "--n", "4", "8", "--trials", "2", "--out", str(report),
                 "--plot", str(fig)]) == 0
    assert report.read_text().splitlines()[0] == "t n hash_us shamir_us ratio"
    assert fig.exists()
    sc = tmp_path / "sc.txt"
    sc.write_text("groups 2,2\nsecrets 1\nseed 1\nfault dealer-corrupt P1\n")
    exp = tmp_path / "exp.txt"
    exp.write_text("rejected P1 g*-mismatch\nrecovered 0\n")
    capsys.readouterr()
    assert main(["simulate", "--scenario", str(sc), "--expect", str(exp)]) == 0
    assert "REJECT P1" in capsys.readouterr().out
    exp.write_text("all-accepted\n")
    assert main(["simulate", "--scenario", str(sc), "--expect", str(exp)]) == 1
