"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Secrets are read from and written to files only.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from hsss import bench as bench_mod
from hsss import dealer as D
from hsss.dealer import DealerState, PublicBundle
from hsss.entropy import Entropy
from hsss.errors import (
    ExcessSharesError,
    HSSSError,
    InsufficientSharesError,
    InvalidShareError,
    UnknownSecretIndex,
    VaultAuthenticationError,
)
from hsss.hashcore import HASH_ID, share_from_hex, share_to_hex
from hsss.harness import Scenario, run_scenario, transcript_check
from hsss.recovery import RecoveryRequest, check_epochs, recover, validate_share, verify_recovered_secret
from hsss.vault import VaultFile

STATE_FILE = "dealer.state"
BUNDLE_FILE = "public.bundle"
VAULT_FILE = "secrets.vault"

EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2

VERIFICATION_ERRORS = (
    InvalidShareError,
    InsufficientSharesError,
    ExcessSharesError,
    VaultAuthenticationError,
)


class UsageError(Exception):
    pass


def _read_text(path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _entropy(args) -> Entropy:
    return Entropy(args.seed)


def write_triple(out_dir, state: DealerState, bundle: PublicBundle, vault: VaultFile) -> None:
    out = Path(out_dir)
    _write_text(out / STATE_FILE, state.to_text())
    _write_text(out / BUNDLE_FILE, bundle.to_text())
    _write_text(out / VAULT_FILE, vault.to_text())


def load_state(path) -> DealerState:
    return DealerState.from_text(_read_text(path))


def load_bundle(path) -> PublicBundle:
    return PublicBundle.from_text(_read_text(path))


def load_vault(path) -> VaultFile:
    return VaultFile.from_text(_read_text(path))


def read_share_file(path) -> tuple[str, bytes]:
    text = _read_text(path).strip()
    try:
        share = share_from_hex(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    return Path(path).stem, share


def cmd_setup(args) -> int:
    secrets = [_read_bytes(p) for p in args.secret_file]
    t = args.t if args.t is not None else len(args.groups)
    state, bundle, vault = D.setup(t, args.groups, secrets, _entropy(args), neutral_dealer=args.neutral_dealer)
    write_triple(args.out_dir, state, bundle, vault)
    print(f"t={state.t} participants={state.group_assignment.n} secrets={state.m} -> {args.out_dir}")
    return EXIT_OK


def cmd_distribute(args) -> int:
    state = load_state(args.state)
    out = Path(args.out_dir)
    for pid, share in D.distribute(state).items():
        _write_text(out / f"{pid}.share", share_to_hex(share) + "\n")
    print(f"wrote {state.group_assignment.n} share files to {out}")
    return EXIT_OK


def cmd_verify_share(args) -> int:
    _, share = read_share_file(args.share)
    if validate_share(share, load_bundle(args.bundle)):
        print("OK")
        return EXIT_OK
    print("REJECTED: not in g*")
    return EXIT_REJECTED


def cmd_recover(args) -> int:
    submitted = [read_share_file(p) for p in args.share]
    state = load_state(args.state)
    secret = recover(RecoveryRequest(args.index, submitted), state, load_bundle(args.bundle), load_vault(args.vault))
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "wb") as fh:
            fh.write(secret)
    else:
        sys.stdout.buffer.write(secret)
        sys.stdout.flush()
    return EXIT_OK


def cmd_verify_secret(args) -> int:
    if verify_recovered_secret(_read_bytes(args.file), args.index, load_bundle(args.bundle)):
        print("OK")
        return EXIT_OK
    print("REJECTED: not in r*")
    return EXIT_REJECTED


def _load_dealer(args):
    state = load_state(args.state)
    vault_path = args.vault or Path(args.state).with_name(VAULT_FILE)
    vault = load_vault(vault_path)
    check_epochs(state, D.publish(state), vault)
    secrets = [_read_bytes(p) for p in args.secret_file] if args.secret_file else None
    out_dir = args.out_dir or Path(args.state).parent
    return state, vault, secrets, out_dir


def _finish(out_dir, triple, label: str) -> int:
    state = triple[0]
    write_triple(out_dir, *triple)
    print(f"{label}: t={state.t} epoch={state.epoch} -> {out_dir}")
    return EXIT_OK


def cmd_refresh(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    return _finish(out, D.refresh(state, secrets, _entropy(args), vault=vault), "refresh")


def cmd_refresh_share(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    return _finish(out, D.refresh_share(state, args.b, secrets, _entropy(args), vault=vault), "refresh-share")


def cmd_revoke(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    op = D.swap_in_controlling if args.swap_controlling else D.revoke
    return _finish(out, op(state, args.b, secrets, _entropy(args), vault=vault), "revoke")


def cmd_add_controlling(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    return _finish(out, D.add_controlling_share(state, secrets, _entropy(args), vault=vault), "add-controlling")


def cmd_retire_controlling(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    return _finish(out, D.retire_controlling_share(state, args.b, secrets, _entropy(args), vault=vault),
                   "retire-controlling")


def cmd_add_group(args) -> int:
    state, vault, secrets, out = _load_dealer(args)
    return _finish(out, D.add_group(state, args.size, secrets, _entropy(args), vault=vault), "add-group")


def cmd_update_secret(args) -> int:
    state, vault, _, out = _load_dealer(args)
    triple = D.update_secret(state, args.index, _read_bytes(args.new_secret), vault, _entropy(args))
    return _finish(out, triple, "update-secret")


def cmd_bench(args) -> int:
    if len(args.t) != len(args.n):
        raise UsageError("--t and --n need the same number of values")
    rows = bench_mod.bench_compare(list(zip(args.t, args.n)), args.trials, _entropy(args))
    report = bench_mod.format_report(rows, args.phase)
    sys.stdout.write(report)
    print(bench_mod.CAVEAT, file=sys.stderr)
    if args.out:
        _write_text(Path(args.out), report)
    if args.plot:
        from hsss.plotting import plot_bench

        plot_bench(rows, args.plot, args.phase)
    return EXIT_OK


def cmd_simulate(args) -> int:
    transcript = run_scenario(Scenario.from_text(_read_text(args.scenario)))
    text = transcript.to_text()
    if args.out:
        _write_text(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if args.expect:
        result = transcript_check(transcript, _read_text(args.expect))
        if not result:
            print(f"EXPECTATION FAILED: {result.divergence}", file=sys.stderr)
            return EXIT_REJECTED
        print("EXPECTATIONS OK", file=sys.stderr)
    return EXIT_OK


def _dealer_flags(p, secrets: bool = True) -> None:
    p.add_argument("--state", required=True, help="dealer state file")
    p.add_argument("--vault", help=f"vault file (default: {VAULT_FILE} next to the state)")
    p.add_argument("--out-dir", help="where to write the new files (default: the state's directory)")
    if secrets:
        p.add_argument("--secret-file", nargs="+", help="plaintext secrets; default re-opens the vault")
    p.add_argument("--seed", type=int, help="deterministic randomness for fixtures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsss", description="Hash-based threshold multi-secret sharing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate basis, keys, bundle and vault")
    p.add_argument("--t", type=int, help="threshold (default: number of groups)")
    p.add_argument("--groups", type=_int_list, required=True, help="group sizes, e.g. 2,2,3")
    p.add_argument("--secret-file", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--neutral-dealer", action="store_true", help="use the empty dealer share")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("distribute", help="write one share file per participant")
    p.add_argument("--state", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("verify-share", help="check a share against g*")
    p.add_argument("--share", required=True)
    p.add_argument("--bundle", required=True)
    p.set_defaults(func=cmd_verify_share)

    p = sub.add_parser("recover", help="combine shares and open a vault entry")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--share", nargs="+", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--vault", required=True)
    p.add_argument("--out", help="output file for the secret (default: stdout)")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify-secret", help="check a recovered secret against r*")
    p.add_argument("--file", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--bundle", required=True)
    p.set_defaults(func=cmd_verify_secret)

    p = sub.add_parser("refresh", help="replace every basis share")
    _dealer_flags(p)
    p.set_defaults(func=cmd_refresh)

    p = sub.add_parser("refresh-share", help="replace one basis share")
    p.add_argument("--b", type=int, required=True)
    _dealer_flags(p)
    p.set_defaults(func=cmd_refresh_share)

    p = sub.add_parser("revoke", help="revoke a group's basis share")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--swap-controlling", action="store_true",
                   help="fill the slot with a dealer-held controlling share")
    _dealer_flags(p)
    p.set_defaults(func=cmd_revoke)

    p = sub.add_parser("add-controlling", help="add a dealer-held controlling share")
    _dealer_flags(p)
    p.set_defaults(func=cmd_add_controlling)

    p = sub.add_parser("retire-controlling", help="remove a controlling share")
    p.add_argument("--b", type=int, required=True)
    _dealer_flags(p)
    p.set_defaults(func=cmd_retire_controlling)

    p = sub.add_parser("add-group", help="add a participant group with a fresh share")
    p.add_argument("--size", type=int, required=True)
    _dealer_flags(p)
    p.set_defaults(func=cmd_add_group)

    p = sub.add_parser("update-secret", help="replace one secret without touching the shares")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--secret-file", dest="new_secret", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--vault")
    p.add_argument("--out-dir")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_update_secret, secret_file=None)

    p = sub.add_parser("bench", help="time the hash scheme against Shamir")
    p.add_argument("--t", type=int, nargs="+", default=[8, 32, 64])
    p.add_argument("--n", type=int, nargs="+", default=[16, 64, 128])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--phase", choices=["recover", "total"], default="recover")
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--plot", help="render a figure (png/pdf/svg) to this path")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("simulate", help="run a scripted protocol scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--expect", help="expectations file to check against the transcript")
    p.add_argument("--out", help="write the transcript here instead of stdout")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    hash_id = os.environ.get("HSSS_HASH")
    if hash_id is not None and hash_id != HASH_ID:
        print(f"error: HSSS_HASH={hash_id!r} is not supported (only {HASH_ID})", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except VERIFICATION_ERRORS as exc:
        print(f"REJECTED: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (HSSSError, UsageError, OSError, UnknownSecretIndex) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
