"""Command-line front end.

Every randomized command takes a mandatory ``--seed``; a run is a pure
function of (command line, input files, seed). Protocol commands run both
roles in-process by default. With ``--role prover`` or ``--role verifier``
and ``--transcript FILE`` a single party advances the shared transcript as
far as it can and exits; invoking the two roles alternately on the same file
reproduces the in-process transcript byte for byte.

Exit codes: 0 accept / invalidity established / success, 1 reject /
improper / aborted, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from functools import partial
from pathlib import Path
from typing import Callable

import numpy as np

from . import analysis, bdp, csp
from .braid import CanonicalForm, enumerate_braids, left_subgroup, right_subgroup
from .codec import Commitment, parse_braid
from .errors import BraidError, ParseError, ProtocolError
from .keys import (
    SCHEMES,
    dump_public,
    dump_secret,
    dump_signature,
    keygen,
    load_public,
    load_secret,
    load_signature,
)
from .transcript import Transcript

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2

_CAVEAT = (
    "Parameters here are for experiments only. The hardness assumptions behind "
    "these schemes are unvalidated and no setting is a security recommendation."
)


class UsageError(Exception):
    pass


def _rng(seed: int, stream: int) -> np.random.Generator:
    """Independent, reproducible streams per role (0 verifier, 1 prover, 2 scenario)."""
    return np.random.default_rng([seed, stream])


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="ascii")


def _message(args) -> bytes:
    if args.message is not None and args.message_file is not None:
        raise UsageError("give --message or --message-file, not both")
    if args.message is not None:
        return args.message.encode("utf-8")
    if args.message_file is not None:
        try:
            return Path(args.message_file).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {args.message_file}: {exc}") from None
    raise UsageError("a message is required (--message or --message-file)")


def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError(f"{args.command} is randomized and needs --seed")
    return args.seed


# ---------------------------------------------------------------------------
# transcript-driven protocol runs
# ---------------------------------------------------------------------------

Step = tuple[str, Callable[[tuple], None]]


def _commitment(value) -> Commitment:
    return value if isinstance(value, Commitment) else Commitment(value)


def _bind(holder: dict, session, fn) -> Callable[[tuple], None]:
    """Point the session at the live transcript, then run one of its steps."""
    def run(payload):
        session.transcript = holder["t"]
        fn(payload)
    return run


def _drive(schedule: list[Step], header: dict[str, str], role: str, path: str | None, holder: dict) -> Transcript:
    """Advance the schedule; the peer's messages come from the transcript file.

    Own steps already present in the file are recomputed and must match,
    which is what makes a resumed run replay bit-exactly from the seed.
    Each step consumes the payload of the message before it.
    """
    recorded: list = []
    if role != "both":
        if path is None:
            raise UsageError("single-role runs need --transcript")
        if Path(path).exists():
            old = Transcript.from_text(_read(path))
            if old.header != header:
                raise ParseError("transcript header does not match this run")
            recorded = old.messages
    live = Transcript(dict(header))
    holder["t"] = live
    payload: tuple = ()
    try:
        for i, (owner, action) in enumerate(schedule):
            have = recorded[i] if i < len(recorded) else None
            if have is not None and (have.step != i + 1 or have.role != owner[0].upper()):
                raise ParseError(f"transcript line {i + 1} is out of order")
            if role in ("both", owner):
                action(payload)
                msg = live.messages[-1]
                if have is not None and have.to_line() != msg.to_line():
                    raise ParseError(f"transcript step {i + 1} does not replay from this seed")
            elif have is not None:
                live.append(have)
                msg = have
            else:
                break
            payload = msg.payload
    finally:
        if path is not None:
            _emit(live.to_text(), path)
    return live


def _run_protocol(args, schedule: list[Step], header: dict[str, str], holder: dict, success: str) -> int:
    try:
        transcript = _drive(schedule, header, args.role, args.transcript, holder)
    except ProtocolError as exc:
        print(f"prover aborted: {type(exc).__name__}: {exc}")
        return EXIT_NO
    final = transcript.find(len(schedule))
    if final is None:
        last = transcript.messages[-1].step if transcript.messages else 0
        print(f"waiting for peer after step {last}")
        return EXIT_OK
    verdict = final.payload[0]
    print(f"verdict: {verdict}")
    return EXIT_OK if verdict == success else EXIT_NO


def _keys_for(args, role: str):
    text = _read(args.key)
    if role == "verifier":
        return load_public(text), None
    return load_secret(text)


def cmd_keygen(args) -> int:
    seed = _need_seed(args)
    pk, sk = keygen(args.n, args.l, _rng(seed, 2), args.scheme)
    if args.out is None:
        _emit(dump_secret(pk, sk), None)
    else:
        _emit(dump_secret(pk, sk), args.out + ".sec")
        _emit(dump_public(pk), args.out + ".pub")
        print(f"wrote {args.out}.sec and {args.out}.pub")
    return EXIT_OK


def cmd_sign(args) -> int:
    pk, sk = load_secret(_read(args.key))
    message = _message(args)
    if pk.scheme == "csp":
        if args.blinded:
            raise UsageError("blinded signing is only defined for scheme bdp")
        sig = csp.sign_csp(sk, pk, message)
    else:
        sig = bdp.sign_blinded(sk, pk, message) if args.blinded else bdp.sign(sk, pk, message)
    _emit(dump_signature(sig), args.out)
    return EXIT_OK


def cmd_confirm(args) -> int:
    seed = _need_seed(args)
    pk, sk = _keys_for(args, args.role)
    sig = load_signature(_read(args.sig))
    zk = args.mode == "zk"
    header = {"protocol": "confirm", "mode": args.mode, "form": args.challenge_form, "n": str(pk.n)}
    v = bdp.ConfirmationVerifier(pk, sig.message, sig.s, _rng(seed, 0), args.challenge_form)
    p = None
    if sk is not None:
        p = bdp.ConfirmationProver(pk, sk, sig.message, sig.s, _rng(seed, 1), args.challenge_form, sig.blinded)
    holder: dict[str, Transcript] = {}
    bind = partial(_bind, holder)

    if zk:
        schedule = [
            ("verifier", bind(v, lambda _: v.begin())),
            ("prover", bind(p, lambda q: p.respond(*q))),
            ("verifier", bind(v, lambda r: v.reveal(*r))),
            ("prover", bind(p, lambda sec: p.check_and_open(sec))),
            ("verifier", bind(v, lambda bc: v.verify(*bc))),
        ]
    else:
        schedule = [
            ("verifier", bind(v, lambda _: v.begin())),
            ("prover", bind(p, lambda q: p.respond_direct(*q))),
            ("verifier", bind(v, lambda r: v.verify_direct(*r))),
        ]
    return _run_protocol(args, schedule, header, holder, bdp.ACCEPT)


def cmd_deny(args) -> int:
    seed = _need_seed(args)
    pk, sk = _keys_for(args, args.role)
    sig = load_signature(_read(args.sig))
    holder: dict[str, Transcript] = {}
    bind = partial(_bind, holder)

    if pk.scheme == "bdp":
        header = {"protocol": "deny", "scheme": "bdp", "n": str(pk.n)}
        v = bdp.DenialVerifier(pk, sig.message, sig.s, _rng(seed, 0))
        p = bdp.DenialProver(pk, sk, sig.message, sig.s, sig.blinded) if sk is not None else None
        schedule = [
            ("verifier", bind(v, lambda _: v.begin())),
            ("prover", bind(p, lambda q: p.respond(*q))),
            ("verifier", bind(v, lambda r: v.verify(*r))),
        ]
    else:
        header = {"protocol": "deny", "scheme": "csp", "k": str(args.k), "n": str(pk.n)}
        v = csp.ZkDenialVerifier(pk, sig.message, sig.s, _rng(seed, 0), args.k)
        p = csp.ZkDenialProver(pk, sk, sig.message, sig.s, _rng(seed, 1), args.k) if sk is not None else None
        schedule = [
            ("verifier", bind(v, lambda _: v.begin())),
            ("prover", bind(p, lambda q: p.recover(*q))),
            ("verifier", bind(v, lambda c: v.reveal(_commitment(c[0])))),
            ("prover", bind(p, lambda a: p.check_and_open(*a))),
            ("verifier", bind(v, lambda r: v.conclude(*r))),
        ]
    return _run_protocol(args, schedule, header, holder, bdp.INVALID)


def cmd_blackmail(args) -> int:
    seed = _need_seed(args)
    rng = _rng(seed, 2)
    pk, sk = keygen(args.n, args.l, rng, "bdp")
    sig = bdp.sign(sk, pk, b"signed message")
    decoy = bdp.sign(sk, pk, b"decoy message")
    scenario = analysis.new_blackmail_scenario(pk, sig.message, sig.s, decoy.message, decoy.s, args.k)
    mode = "zk" if args.mode == "zk" else "nonzk"
    verdicts = analysis.blackmail_run(scenario, pk, sk, rng, mode)
    print(f"n={pk.n} l={pk.l} entities={scenario.k} prover={mode}")
    print("blocks=" + " ".join(f"[{b.lo},{b.hi}]" for b in scenario.blocks))
    if scenario.aborted:
        print("prover aborted at the step-4 challenge check")
    for i, ok in enumerate(verdicts, 1):
        print(f"entity {i}: {'convinced' if ok else 'not convinced'}")
    return EXIT_OK if all(verdicts) else EXIT_NO


def cmd_oracle(args) -> int:
    seed = _need_seed(args)
    rng = _rng(seed, 2)
    kind = args.problem
    r = args.r if kind.startswith("ms") else 1
    if kind in ("csp", "mscsp"):
        pairs, witness = analysis.plant_csp(args.n, args.l, rng, r)
        space = enumerate_braids(right_subgroup(args.n), args.l, args.budget)
        report = analysis.brute_force_mscsp(pairs, space, args.budget)
    else:
        pairs, witness = analysis.plant_bdp(args.n, args.l, rng, r)
        space = enumerate_braids(left_subgroup(args.n), args.l, args.budget)
        report = analysis.brute_force_msbdp(pairs, space, args.budget)
    found = witness in report.solutions
    print(f"{report.description}: {len(report.solutions)} solution(s), planted witness {'found' if found else 'missing'}")
    _emit(f"# seed={seed}\n" + report.to_text(), args.out)
    return EXIT_OK if found and report.recheck() else EXIT_NO


def cmd_assumption(args) -> int:
    seed = _need_seed(args)
    report = analysis.estimate_assumption31(args.n, args.l, args.sampling, args.trials, seed, args.budget)
    print(f"|E_a| {'count' if report.mode == 'exhaustive' else 'estimate'}: {report.estimate:g} "
          f"({report.hits} of {report.examined} examined, sampler {report.sampler})")
    _emit(report.to_text(), args.out)
    return EXIT_OK


def _describe(name: str, a: CanonicalForm) -> str:
    return f"{name}: n={a.n} inf={a.inf} sup={a.sup} len={a.length}"


def cmd_inspect(args) -> int:
    text = _read(args.file)
    first = text.lstrip().split("\n", 1)[0]
    if first.startswith("B "):
        print(_describe("braid", parse_braid(first)))
    elif "alpha=" in text:
        pk = load_public(text)
        print(f"scheme={pk.scheme} n={pk.n} l={pk.l} split={pk.split[0]},{pk.split[1]}")
        print(_describe("alpha", pk.alpha))
        print(_describe("x", pk.x))
        if "a1=" in text:
            _, sk = load_secret(text)
            print(_describe("a1", sk.a1))
            print(_describe("a2", sk.a2))
    elif "s=" in text:
        sig = load_signature(text)
        print(f"scheme={sig.scheme} blinded={int(sig.blinded)} message={sig.message.hex()}")
        print(_describe("s", sig.s))
    else:
        t = Transcript.from_text(text)
        print(" ".join(f"{k}={v}" for k, v in t.header.items()))
        for m in t.messages:
            braids = [p for p in m.payload if isinstance(p, CanonicalForm)]
            extra = ", ".join(f"inf={b.inf} sup={b.sup} len={b.length}" for b in braids)
            print(f"{m.step} {m.role} {m.name}" + (f" [{extra}]" if extra else ""))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, n: int = 8, l: int = 4) -> argparse.ArgumentParser:
    p.add_argument("--n", type=int, default=n, help=f"strand count (default {n})")
    p.add_argument("--l", "--l-param", dest="l", type=int, default=l, help=f"canonical length bound (default {l})")
    p.add_argument("--seed", type=int, help="seed; required by every randomized command")
    p.add_argument("--out", help="output path (default stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidsig", description="Braid-group undeniable signatures. " + _CAVEAT)
    sub = parser.add_subparsers(dest="command", required=True)

    p = _common(sub.add_parser("keygen", help="generate a key pair (writes OUT.sec and OUT.pub)"))
    p.add_argument("--scheme", choices=SCHEMES, default="bdp")
    p.set_defaults(func=cmd_keygen)

    p = _common(sub.add_parser("sign", help="sign a message with a secret key"))
    p.add_argument("--key", required=True)
    p.add_argument("--message")
    p.add_argument("--message-file")
    p.add_argument("--blinded", action="store_true")
    p.set_defaults(func=cmd_sign)

    for name, func, helptext in (("confirm", cmd_confirm, "run the confirmation protocol"),
                                 ("deny", cmd_deny, "run the denial protocol (bdp: two-challenge, csp: zero-knowledge)")):
        p = _common(sub.add_parser(name, help=helptext))
        p.add_argument("--key", required=True, help="secret key (public key suffices for --role verifier)")
        p.add_argument("--sig", required=True)
        p.add_argument("--role", choices=("both", "prover", "verifier"), default="both")
        p.add_argument("--transcript", help="transcript file (required for single-role runs)")
        if name == "confirm":
            p.add_argument("--mode", choices=("zk", "nonzk"), default="zk")
            p.add_argument("--challenge-form", choices=tuple(bdp.CHALLENGE_FORMS), default="std")
        else:
            p.add_argument("--k", type=int, default=csp.DEFAULT_K, help="exponent bound for zero-knowledge denial")
        p.set_defaults(func=func)

    p = _common(sub.add_parser("blackmail-demo", help="relay one confirmation to k entities"), n=16, l=2)
    p.add_argument("--k", type=int, default=3, help="number of entities")
    p.add_argument("--mode", choices=("zk", "nonzk"), default="nonzk")
    p.set_defaults(func=cmd_blackmail)

    p = _common(sub.add_parser("oracle", help="brute-force a planted search instance"), n=7, l=1)
    p.add_argument("problem", choices=("csp", "bdp", "mscsp", "msbdp"))
    p.add_argument("--r", type=int, default=3, help="pairs for the simultaneous variants")
    p.add_argument("--budget", type=int, default=analysis.DEFAULT_OPS)
    p.set_defaults(func=cmd_oracle)

    p = _common(sub.add_parser("assumption31", help="count or sample the set E_a(beta, gamma)"), n=6, l=1)
    p.add_argument("--sampling", choices=analysis.MODES, default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_assumption)

    p = sub.add_parser("inspect", help="summarize a key, signature, transcript or braid file")
    p.add_argument("file")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, BraidError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
