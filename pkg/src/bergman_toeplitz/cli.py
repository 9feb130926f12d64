"""JSON-in, JSON-out command line front end.

Exit codes: 0 success, 2 invalid input, 3 internal error. With ``--exit-verdict`` the
verdict commands exit 0 for Yes and 1 for No, and verify-examples exits 1 if any
fixture fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

import jsonschema

from .calculus import Truncation, action_coefficient, build_commutator, build_operator, build_semicommutator
from .core import DomainSpec, InputError, exponent_from_json, pair_from_json, symbol_from_json
from .decide import classify_trivial, decide_commute, decide_semicommute
from .fixtures import run_fixtures
from .oracle import DEFAULT_SAMPLES, McConfig, oracle_action_coefficient
from .search import (
    SearchSpace,
    commuting_record,
    enumerate_commuting,
    enumerate_semicommuting,
    semicommuting_record,
)

SCHEMA = "btc/1"
COMMANDS = ("decide-commute", "decide-semicommute", "matrix", "oracle", "search", "verify-examples")

_RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
        {"type": "integer"},
        {
            "type": "object",
            "properties": {"float": {"type": "number"}},
            "required": ["float"],
            "additionalProperties": False,
        },
    ]
}
_INDEX = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}
_M = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2}
_SYMBOL = {
    "type": "object",
    "properties": {"l": _RATIONAL, "p": _INDEX, "q": _INDEX},
    "required": ["l", "p", "q"],
    "additionalProperties": False,
}
_TRUNC = {"type": "string", "pattern": r"^[DN]=.+$"}
_SCHEMA_TAG = {"const": SCHEMA}


def _obj(props: dict, required: list) -> dict:
    return {
        "type": "object",
        "properties": {"schema": _SCHEMA_TAG, **props},
        "required": ["schema", *required],
        "additionalProperties": False,
    }


_PAIR = {"m": _M, "first": _SYMBOL, "second": _SYMBOL}

PAYLOAD_SCHEMAS = {
    "decide-commute": _obj(_PAIR, ["m", "first", "second"]),
    "decide-semicommute": _obj(_PAIR, ["m", "first", "second"]),
    "matrix": {
        "oneOf": [
            _obj({"m": _M, "symbol": _SYMBOL, "truncation": _TRUNC}, ["m", "symbol"]),
            _obj(
                {**_PAIR, "kind": {"enum": ["commutator", "semicommutator"]}, "truncation": _TRUNC},
                ["m", "first", "second", "kind"],
            ),
        ]
    },
    "oracle": _obj({"m": _M, "symbol": _SYMBOL, "beta": _INDEX}, ["m", "symbol", "beta"]),
    "search": _obj(
        {
            "kind": {"enum": ["commute", "semicommute"]},
            "m": _M,
            "max_entry": {"type": "integer", "minimum": 0},
            "max_den": {"type": "integer", "minimum": 1},
            "radial_cap": _RATIONAL,
            "non_trivial": {"type": "boolean"},
            "require_clauses": {"type": "array", "items": {"enum": ["c1", "c2", "c3", "c4", "c5"]}},
            "exclude_zero_p": {"type": "boolean"},
            "exclude_zero_t": {"type": "boolean"},
            "prune": {"type": "boolean"},
            "pins": {
                "type": "object",
                "properties": {
                    "first_l": _RATIONAL,
                    "second_l": _RATIONAL,
                    "first_p": _INDEX,
                    "first_q": _INDEX,
                    "second_p": _INDEX,
                    "second_q": _INDEX,
                },
                "additionalProperties": False,
            },
        },
        ["kind", "m", "max_entry", "radial_cap"],
    ),
    "verify-examples": _obj({}, []),
}


class ValidationFailure(Exception):
    pass


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _parse_seed(text: str | None) -> int | None:
    if text is None:
        return None
    try:
        seed = int(text, 16)
    except ValueError as exc:
        raise ValidationFailure(f"--seed must be hexadecimal, got {text!r}") from exc
    if not 0 <= seed < 2**64:
        raise ValidationFailure("--seed must fit in 64 bits")
    return seed


def _load_payload(command: str, source: str | None) -> dict:
    if source is None:
        if command == "verify-examples":
            return {"schema": SCHEMA}
        source = "-"
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        payload = json.loads(text)
    except OSError as exc:
        raise ValidationFailure(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"input is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(payload, PAYLOAD_SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ValidationFailure(f"schema violation at '{path}': {exc.message}") from exc
    return payload


def _truncation(payload: dict, flag: str | None) -> Truncation:
    text = flag if flag is not None else payload.get("truncation")
    if text is None:
        raise ValidationFailure("matrix needs a truncation (--truncation D=<rational> or N=<nat>)")
    return Truncation.parse(text)


def _space(payload: dict) -> SearchSpace:
    pins = {}
    for key, value in payload.get("pins", {}).items():
        pins[key] = exponent_from_json(value) if key.endswith("_l") else tuple(value)
    clauses = payload.get("require_clauses")
    return SearchSpace(
        domain=DomainSpec(tuple(payload["m"])),
        max_entry=payload["max_entry"],
        max_den=payload.get("max_den", 1),
        radial_cap=exponent_from_json(payload["radial_cap"]),
        non_trivial=payload.get("non_trivial", False),
        require_clauses=None if clauses is None else frozenset(clauses),
        exclude_zero_p=payload.get("exclude_zero_p", False),
        exclude_zero_t=payload.get("exclude_zero_t", False),
        pins=tuple(pins.items()),
        prune=payload.get("prune", True),
    )


def execute(command: str, payload: dict, args) -> tuple[list[str], int | None]:
    """Run one command; returns output lines and the verdict exit code (None if not a verdict)."""
    if command == "decide-commute":
        pair = pair_from_json(payload)
        verdict = decide_commute(pair)
        doc = {**verdict.to_json(), "triviality": classify_trivial(pair, verdict).to_json()}
        return [_dumps(doc)], 0 if verdict else 1
    if command == "decide-semicommute":
        verdict = decide_semicommute(pair_from_json(payload))
        return [_dumps(verdict.to_json())], 0 if verdict else 1
    if command == "matrix":
        trunc = _truncation(payload, args.truncation)
        domain = DomainSpec(tuple(payload["m"]))
        if "symbol" in payload:
            op = build_operator(domain, symbol_from_json(payload["symbol"]), trunc)
        else:
            pair = pair_from_json(payload)
            build = build_commutator if payload["kind"] == "commutator" else build_semicommutator
            op = build(domain, pair.first, pair.second, trunc)
        return [_dumps(op.to_json())], None
    if command == "oracle":
        seed = _parse_seed(args.seed)
        if seed is None:
            raise ValidationFailure("oracle is randomized and needs --seed HEX")
        domain = DomainSpec(tuple(payload["m"]))
        sym = symbol_from_json(payload["symbol"])
        beta = tuple(payload["beta"])
        cfg = McConfig(samples=args.samples or DEFAULT_SAMPLES, seed=seed, threads=args.threads)
        mc = oracle_action_coefficient(domain, sym, beta, cfg)
        exact = action_coefficient(domain, sym, beta)
        return [_dumps({"schema": SCHEMA, "oracle": mc.to_json(), "closed_form": exact.coefficient})], None
    if command == "search":
        space = _space(payload)
        print(_dumps({"schema": SCHEMA, "cardinality": space.cardinality()}), file=sys.stderr)
        if payload["kind"] == "commute":
            lines = [_dumps(commuting_record(p, r)) for p, r in enumerate_commuting(space, args.threads)]
        else:
            lines = [_dumps(semicommuting_record(p)) for p in enumerate_semicommuting(space, args.threads)]
        return lines, None
    if command == "verify-examples":
        records = run_fixtures()
        ok = all(r["pass"] for r in records)
        return [_dumps({"schema": SCHEMA, "all_pass": ok, "fixtures": records})], 0 if ok else 1
    raise ValidationFailure(f"unknown command {command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="btc", description="Commuting monomial-type Toeplitz operators.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="payload file, or - for standard input")
    parser.add_argument("--output", default="-", help="result file, or - for standard output")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", help="hexadecimal seed for randomized commands")
    parser.add_argument("--exit-verdict", action="store_true")
    parser.add_argument("--truncation", help="D=<rational> (weighted degree) or N=<nat> (box)")
    parser.add_argument("--samples", type=int)
    return parser


def _emit(lines: list[str], target: str):
    text = "".join(line + "\n" for line in lines)
    if target == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ValidationFailure("--threads must be >= 1")
        if args.samples is not None and args.samples < 1:
            raise ValidationFailure("--samples must be >= 1")
        payload = _load_payload(args.command, args.input)
        lines, verdict_code = execute(args.command, payload, args)
    except (ValidationFailure, InputError) as exc:
        _emit([_dumps({"schema": SCHEMA, "error": "validation", "message": str(exc)})], args.output)
        return 2
    except Exception as exc:  # noqa: BLE001 - anything else is a broken invariant
        _emit(
            [_dumps({"schema": SCHEMA, "error": "internal", "message": f"{type(exc).__name__}: {exc}"})],
            args.output,
        )
        traceback.print_exc(file=sys.stderr)
        return 3
    _emit(lines, args.output)
    if args.exit_verdict and verdict_code is not None:
        return verdict_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
