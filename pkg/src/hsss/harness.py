"""Deterministic protocol simulation with scripted Byzantine faults.

Dealer, combiner and participants are synchronous state machines. A FIFO
scheduler delivers typed messages over reliable in-memory channels and the
transcript records every message plus every accept/reject decision.

Scenario file directives, one per line::

    groups 2,2
    secrets 2
    seed 42
    fault dealer-corrupt P1
    fault participant-corrupt P3
    fault participant-stale P2
    fault honest
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from hsss import dealer as dealer_ops
from hsss.dealer import DealerState, PublicBundle
from hsss.entropy import Entropy
from hsss.errors import FormatError, HSSSError, InsufficientSharesError
from hsss.hashcore import hash, share_from_hex, share_to_hex
from hsss.recovery import RecoveryRequest, recover, validate_share, verify_recovered_secret

DEALER = "D"
COMBINER = "C"
SECRET_BYTES = 32

MESSAGE_KINDS = (
    "ShareDelivery",
    "BundlePublish",
    "RecoveryRequest",
    "ShareSubmission",
    "SecretDelivery",
    "Rejection",
)
FAULT_KINDS = ("honest", "dealer-corrupt", "participant-corrupt", "participant-stale")


@dataclass(frozen=True)
class Message:
    kind: str
    sender: str
    recipient: str
    payload: bytes

    def __post_init__(self):
        if self.kind not in MESSAGE_KINDS:
            raise ValueError(f"unknown message kind {self.kind!r}")


@dataclass(frozen=True)
class Fault:
    kind: str
    target: str | None = None


@dataclass
class Scenario:
    group_sizes: list[int]
    secret_count: int = 1
    faults: list[Fault] = field(default_factory=list)
    seed: int = 0

    @classmethod
    def from_text(cls, text: str) -> "Scenario":
        groups, secrets, seed, faults = None, 1, 0, []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            key, args = parts[0], parts[1:]
            try:
                if key == "groups" and len(args) == 1:
                    groups = [int(x) for x in args[0].split(",")]
                elif key == "secrets" and len(args) == 1:
                    secrets = int(args[0])
                elif key == "seed" and len(args) == 1:
                    seed = int(args[0])
                elif key == "fault" and args and args[0] in FAULT_KINDS:
                    if args[0] == "honest":
                        faults.append(Fault("honest"))
                    elif len(args) == 2:
                        faults.append(Fault(args[0], args[1]))
                    else:
                        raise FormatError(f"fault {args[0]} needs a target participant")
                else:
                    raise FormatError(f"bad scenario directive {line!r}")
            except ValueError as exc:
                if isinstance(exc, FormatError):
                    raise
                raise FormatError(f"bad scenario directive {line!r}") from exc
        if groups is None:
            raise FormatError("scenario needs a 'groups' directive")
        return cls(groups, secrets, faults, seed)

    def faults_of(self, kind: str) -> set[str]:
        return {f.target for f in self.faults if f.kind == kind}


@dataclass(frozen=True)
class Event:
    seq: int
    kind: str  # MSG, ACCEPT, REJECT, RECOVERED
    party: str
    detail: str
    message: Message | None = None

    def to_line(self) -> str:
        return f"{self.seq:04d} {self.kind} {self.party} {self.detail}"


@dataclass
class Transcript:
    events: list[Event] = field(default_factory=list)
    # every dealer state the run went through, for structural checks
    states: list[DealerState] = field(default_factory=list, repr=False)

    def add(self, kind: str, party: str, detail: str, message: Message | None = None) -> None:
        self.events.append(Event(len(self.events), kind, party, detail, message))

    def to_text(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    def decisions(self, kind: str | None = None) -> list[Event]:
        return [e for e in self.events if e.kind != "MSG" and (kind is None or e.kind == kind)]


def _fingerprint(payload: bytes) -> str:
    return hash(payload)[:8].hex()


def _flip_bit(data: bytes, bit: int = 0) -> bytes:
    buf = bytearray(data)
    buf[bit // 8] ^= 1 << (bit % 8)
    return bytes(buf)


class Participant:
    def __init__(self, pid: str, group: int, fault: str | None):
        self.pid = pid
        self.group = group
        self.fault = fault
        self.bundle: PublicBundle | None = None
        self.shares: list[bytes] = []  # every accepted share, oldest first
        self.received: dict[int, bytes] = {}

    @property
    def holds_valid_share(self) -> bool:
        return bool(self.shares) and validate_share(self.shares[-1], self.bundle)

    def submission(self) -> bytes:
        if self.fault == "participant-stale" and len(self.shares) > 1:
            return self.shares[0]
        share = self.shares[-1]
        if self.fault == "participant-corrupt":
            return _flip_bit(share)
        return share

    def handle(self, msg: Message, tx: Transcript) -> list[Message]:
        if msg.kind == "BundlePublish":
            self.bundle = PublicBundle.from_text(msg.payload.decode())
        elif msg.kind == "ShareDelivery":
            share = share_from_hex(msg.payload.decode())
            if validate_share(share, self.bundle):
                self.shares.append(share)
                tx.add("ACCEPT", self.pid, f"share epoch={self.bundle.epoch}")
            else:
                tx.add("REJECT", self.pid, f"share epoch={self.bundle.epoch} g*-mismatch")
        elif msg.kind == "SecretDelivery":
            j_text, secret_hex = msg.payload.decode().split(" ")
            j = int(j_text)
            secret = bytes.fromhex(secret_hex)
            self.received[j] = secret
            if verify_recovered_secret(secret, j, self.bundle):
                tx.add("ACCEPT", self.pid, f"secret j={j}")
            else:
                tx.add("REJECT", self.pid, f"secret j={j} r*-mismatch")
        elif msg.kind == "Rejection":
            pass
        return []


class Combiner:
    """Trusted combiner holding the dealer state; recovers secrets on request."""

    def __init__(self, party: str = COMBINER):
        self.party = party
        self.state: DealerState | None = None
        self.vault = None
        self.bundle: PublicBundle | None = None
        self.pending: dict[int, tuple[list[str], list[tuple[str, bytes]]]] = {}

    def handle(self, msg: Message, tx: Transcript) -> list[Message]:
        if msg.kind == "BundlePublish":
            self.bundle = PublicBundle.from_text(msg.payload.decode())
            return []
        if msg.kind == "RecoveryRequest":
            j_text, members = msg.payload.decode().split(" ")
            self.pending[int(j_text)] = (members.split(",") if members else [], [])
            return self._maybe_recover(int(j_text), tx)
        if msg.kind == "ShareSubmission":
            j_text, share_hex = msg.payload.decode().split(" ")
            j = int(j_text)
            self.pending[j][1].append((msg.sender, share_from_hex(share_hex)))
            return self._maybe_recover(j, tx)
        return []

    def _maybe_recover(self, j: int, tx: Transcript) -> list[Message]:
        members, submitted = self.pending[j]
        if len(submitted) < len(members):
            return []
        del self.pending[j]
        out, valid = [], []
        for pid, share in submitted:
            if validate_share(share, self.bundle):
                valid.append((pid, share))
            else:
                tx.add("REJECT", self.party, f"share-from {pid} j={j} g*-mismatch")
                out.append(Message("Rejection", self.party, pid, f"{j} g*-mismatch".encode()))
        try:
            secret = recover(RecoveryRequest(j, valid), self.state, self.bundle, self.vault)
        except InsufficientSharesError as exc:
            tx.add("REJECT", self.party, f"recover j={j} insufficient-distinct-shares {exc.count}/{exc.required}")
            return out + [
                Message("Rejection", self.party, pid, f"{j} insufficient-distinct-shares".encode())
                for pid in members
            ]
        except HSSSError as exc:
            reason = type(exc).__name__
            tx.add("REJECT", self.party, f"recover j={j} {reason}")
            return out + [Message("Rejection", self.party, pid, f"{j} {reason}".encode()) for pid in members]
        tx.add("RECOVERED", self.party, f"j={j}")
        payload = f"{j} {secret.hex()}".encode()
        return out + [Message("SecretDelivery", self.party, pid, payload) for pid in members]


class Simulation:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.rng = Entropy(scenario.seed)
        self.tx = Transcript()
        self.queue: deque[Message] = deque()
        self.combiner = Combiner()
        self.participants: dict[str, Participant] = {}
        self.secrets: list[bytes] = []

    def send(self, msgs) -> None:
        self.queue.extend(msgs)

    def run_queue(self) -> None:
        while self.queue:
            msg = self.queue.popleft()
            self.tx.add("MSG", msg.sender, f"{msg.kind} ->{msg.recipient} {_fingerprint(msg.payload)}", msg)
            handler = self.combiner if msg.recipient == COMBINER else self.participants[msg.recipient]
            self.send(handler.handle(msg, self.tx))

    def publish_and_deliver(self, state, bundle, vault) -> None:
        self.tx.states.append(state)
        self.combiner.state, self.combiner.vault = state, vault
        payload = bundle.to_text().encode()
        self.send(Message("BundlePublish", DEALER, r, payload) for r in [COMBINER, *self.participants])
        corrupt = self.scenario.faults_of("dealer-corrupt")
        for pid, share in dealer_ops.distribute(state).items():
            if pid in corrupt:
                share = _flip_bit(share)
            self.send([Message("ShareDelivery", DEALER, pid, share_to_hex(share).encode())])
        self.run_queue()

    def coalition(self, state: DealerState) -> list[str]:
        """One representative per group, preferring scripted faulty participants."""
        faulty = self.scenario.faults_of("participant-corrupt") | self.scenario.faults_of("participant-stale")
        chosen = []
        for members in state.group_assignment.groups.values():
            ready = [p for p in members if self.participants[p].holds_valid_share]
            picks = [p for p in members if p in faulty and self.participants[p].shares] or ready
            if picks:
                chosen.append(picks[0])
        return chosen

    def run(self) -> Transcript:
        sc = self.scenario
        self.secrets = [self.rng.bytes(SECRET_BYTES) for _ in range(sc.secret_count)]
        state, bundle, vault = dealer_ops.setup(len(sc.group_sizes), sc.group_sizes, self.secrets, self.rng)
        for b, members in state.group_assignment.groups.items():
            for pid in members:
                kinds = [f.kind for f in sc.faults if f.target == pid]
                self.participants[pid] = Participant(pid, b, kinds[0] if kinds else None)
        unknown = {f.target for f in sc.faults if f.target is not None} - set(self.participants)
        if unknown:
            raise FormatError(f"fault targets unknown participants: {sorted(unknown)}")

        self.publish_and_deliver(state, bundle, vault)
        if sc.faults_of("participant-stale"):
            state, bundle, vault = dealer_ops.refresh(state, self.secrets, self.rng)
            self.publish_and_deliver(state, bundle, vault)

        for j in range(sc.secret_count):
            members = self.coalition(state)
            if not members:
                self.tx.add("REJECT", COMBINER, f"recover j={j} no-participants")
                continue
            self.send([Message("RecoveryRequest", members[0], COMBINER, f"{j} {','.join(members)}".encode())])
            for pid in members:
                share = self.participants[pid].submission()
                self.send([Message("ShareSubmission", pid, COMBINER, f"{j} {share_to_hex(share)}".encode())])
            self.run_queue()
        return self.tx


def run_scenario(scenario: Scenario) -> Transcript:
    return Simulation(scenario).run()


@dataclass
class CheckResult:
    ok: bool
    divergence: str | None = None

    def __bool__(self):
        return self.ok


def parse_expectations(lines) -> list[list[str]]:
    if isinstance(lines, str):
        lines = lines.splitlines()
    out = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "all-accepted" and len(parts) == 1:
            pass
        elif parts[0] == "rejected" and len(parts) == 3:
            pass
        elif parts[0] in ("recovered", "not-recovered") and len(parts) == 2 and parts[1].isdigit():
            pass
        else:
            raise FormatError(f"malformed expectation {line!r}")
        out.append(parts)
    return out


def transcript_check(transcript: Transcript, expectations) -> CheckResult:
    """Check declarative expectations against a transcript.

    Supported expectations: ``all-accepted``, ``rejected <party> <reason>``,
    ``recovered <j>`` (combiner recovered it and every recipient verified it)
    and ``not-recovered <j>``.
    """
    for exp in parse_expectations(expectations):
        if exp[0] == "all-accepted":
            bad = transcript.decisions("REJECT")
            if bad:
                return CheckResult(False, f"all-accepted: {bad[0].to_line()}")
        elif exp[0] == "rejected":
            party, reason = exp[1], exp[2]
            if not any(e.party == party and reason in e.detail.split() for e in transcript.decisions("REJECT")):
                return CheckResult(False, f"no rejection by {party} with reason {reason}")
        else:
            j = int(exp[1])
            recovered = any(e.detail == f"j={j}" for e in transcript.decisions("RECOVERED"))
            verified_bad = [e for e in transcript.decisions("REJECT") if e.detail == f"secret j={j} r*-mismatch"]
            got = recovered and not verified_bad
            if exp[0] == "recovered" and not got:
                return CheckResult(False, f"secret {j} was not recovered")
            if exp[0] == "not-recovered" and recovered:
                return CheckResult(False, f"secret {j} was recovered")
    return CheckResult(True)


def shares_confined(transcript: Transcript) -> bool:
    """No participant ever receives a genuine share of a group it is not in."""
    owner: dict[bytes, set[str]] = {}
    for state in transcript.states:
        for b, share in state.basis.items():
            members = state.group_assignment.groups.get(b, ())
            owner.setdefault(share, set()).update(members)
    for e in transcript.events:
        m = e.message
        if m is None or m.recipient == COMBINER:
            continue
        if m.kind == "ShareDelivery":
            share = share_from_hex(m.payload.decode())
        elif m.kind == "ShareSubmission":
            share = share_from_hex(m.payload.decode().split(" ")[1])
        else:
            continue
        if share in owner and m.recipient not in owner[share]:
            return False
    return True
