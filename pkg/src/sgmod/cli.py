"""Command line front end: load a session file, run its commands, emit reports.

Exit codes:
  0  every command succeeded and every verification passed
  1  a verification on hypothesis-satisfying inputs found a counterexample
     (an implementation-bug signal, since the statements are proven)
  2  input or validation error (parse, axioms, unresolved references,
     command preconditions, unwritable output)
  3  at least one verification was skipped for exceeding the budget
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .errors import SessionError
from .session import Session, execute, load_session
from .verify import DEFAULT_BUDGET

BUDGET_ENV_VAR = "SGMOD_BUDGET"


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def payload_hash(command: dict, payload: dict) -> str:
    blob = canonical_json({"command": command, "payload": payload})
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def finish_record(record: dict) -> dict:
    """Attach the deterministic hash and version stamp; elapsed stays outside."""
    record = dict(record)
    record["payload_hash"] = payload_hash(record["command"], record["payload"])
    record["version"] = __version__
    return record


def exit_code_for(records: list[dict]) -> int:
    has_counterexample = False
    has_error = False
    has_skipped = False
    for record in records:
        if record["status"] == "error":
            has_error = True
        payload = record.get("payload", {})
        if isinstance(payload, dict):
            if payload.get("outcome") == "counterexample":
                has_counterexample = True
            if payload.get("outcome") == "skipped":
                has_skipped = True
    if has_counterexample:
        return 1
    if has_error:
        return 2
    if has_skipped:
        return 3
    return 0


def emit_report(records: list[dict], fmt: str, stream) -> int:
    """Write all records plus a summary; returns the exit code."""
    code = exit_code_for(records)
    try:
        if fmt == "human":
            _emit_human(records, code, stream)
        else:
            for record in records:
                stream.write(json.dumps(record, sort_keys=True) + "\n")
            summary = {
                "summary": {
                    "commands": len(records),
                    "errors": sum(1 for r in records if r["status"] == "error"),
                    "counterexamples": sum(
                        1 for r in records
                        if isinstance(r.get("payload"), dict)
                        and r["payload"].get("outcome") == "counterexample"),
                    "skipped": sum(
                        1 for r in records
                        if isinstance(r.get("payload"), dict)
                        and r["payload"].get("outcome") == "skipped"),
                    "exit_code": code,
                    "version": __version__,
                }
            }
            stream.write(json.dumps(summary, sort_keys=True) + "\n")
        stream.flush()
    except OSError:
        return 2
    return code


def _emit_human(records: list[dict], code: int, stream) -> None:
    for i, record in enumerate(records, 1):
        cmd = record["command"]
        op = cmd.get("op", "?")
        stream.write(f"== command {i}: {op} ==\n")
        stream.write(f"   args: {canonical_json(cmd)}\n")
        stream.write(f"   status: {record['status']}\n")
        payload = record.get("payload", {})
        if isinstance(payload, dict) and "outcome" in payload:
            stream.write(f"   outcome: {payload['outcome']}"
                         f" ({payload.get('instances_checked', 0)} instances)\n")
        for line in json.dumps(payload, sort_keys=True, indent=2).splitlines():
            stream.write(f"   {line}\n")
        stream.write(f"   hash: {record['payload_hash']}\n")
        stream.write(f"   elapsed: {record['elapsed_ms']:.1f} ms\n")
    stream.write(f"exit code: {code}\n")


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BUDGET


def run_session(session: Session, budget: int | None) -> list[dict]:
    records = []
    for command in session.commands:
        record = execute(session, command, budget=budget)
        records.append(finish_record(record))
    return records


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgmod",
        description="Analyze zero-divisors of finite modules and their monoid algebras.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    run = sub.add_parser("run", help="execute the commands of a session file")
    run.add_argument("session_file")
    run.add_argument("--format", choices=["json-lines", "human"], default="json-lines")
    run.add_argument("--budget", type=int, default=None,
                     help=f"instance budget for verifiers (default from ${BUDGET_ENV_VAR} "
                          f"or {DEFAULT_BUDGET})")
    val = sub.add_parser("validate", help="parse and validate a session file")
    val.add_argument("session_file")
    return parser


def main(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    out = stream if stream is not None else sys.stdout
    try:
        session = load_session(args.session_file)
    except SessionError as exc:
        out.write(json.dumps({"error": {"type": type(exc).__name__,
                                        "message": str(exc)}}, sort_keys=True) + "\n")
        return 2

    if args.subcommand == "validate":
        out.write(json.dumps({
            "ok": True,
            "objects": {
                "rings": len(session.rings),
                "monoids": len(session.monoids),
                "modules": len(session.modules),
                "submodules": len(session.submodules),
                "series": len(session.series),
                "commands": len(session.commands),
            },
            "version": __version__,
        }, sort_keys=True) + "\n")
        return 0

    budget = args.budget
    if budget is None and "budget" not in session.settings:
        budget = _default_budget()
    records = run_session(session, budget)
    return emit_report(records, args.format, out)


if __name__ == "__main__":
    raise SystemExit(main())
