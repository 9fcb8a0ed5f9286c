"""JSON schema (version ``v1``) for ``solve`` output and ``bench`` records."""

import json

import jsonschema

SCHEMA_VERSION = "v1"

_reduce_stats = {
    "type": "object",
    "required": ["rows_in", "rows_out", "cols", "xor_word_ops"],
    "properties": {
        "rows_in": {"type": "integer", "minimum": 0},
        "rows_out": {"type": "integer", "minimum": 0},
        "cols": {"type": "integer", "minimum": 0},
        "xor_word_ops": {"type": "integer", "minimum": 0},
        "nanos": {"type": "integer", "minimum": 0},
    },
}

_run_stats = {
    "type": "object",
    "required": [
        "nodes", "max_table_rows", "max_slice_rows", "max_table_rows_after",
        "max_slice_rows_after", "reduce_calls", "rows_eliminated", "reduce",
        "peak_live_rows", "peak_memory_bytes_est",
    ],
    "properties": {
        "nodes": {"type": "integer", "minimum": 0},
        "max_table_rows": {"type": "integer", "minimum": 0},
        "max_slice_rows": {"type": "integer", "minimum": 0},
        "max_table_rows_after": {"type": "integer", "minimum": 0},
        "max_slice_rows_after": {"type": "integer", "minimum": 0},
        "reduce_calls": {"type": "integer", "minimum": 0},
        "rows_eliminated": {"type": "integer", "minimum": 0},
        "reduce": _reduce_stats,
        "peak_live_rows": {"type": "integer", "minimum": 0},
        "peak_memory_bytes_est": {"type": "integer", "minimum": 0},
        "wall_nanos": {"type": "integer", "minimum": 0},
        "per_node_rows": {"type": "array", "items": {"type": "integer"}},
    },
}

_answer = {
    "oneOf": [
        {"type": "integer", "minimum": 0},
        {"enum": ["yes", "no", "infeasible"]},
    ]
}

SOLVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "twreduce/solve/v1",
    "type": "object",
    "required": ["schema", "problem", "answer", "width", "policy", "stats"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "problem": {"enum": ["hamilton", "tsp", "steiner"]},
        "answer": _answer,
        "n": {"type": "integer", "minimum": 0},
        "m": {"type": "integer", "minimum": 0},
        "width": {"type": "integer", "minimum": -1},
        "policy": {"enum": ["never", "always", "threshold"]},
        "backend": {"enum": ["python", "cython"]},
        "stats": _run_stats,
    },
}

BENCH_RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "twreduce/bench-record/v1",
    "type": "object",
    "required": ["schema", "instance", "problem", "policy", "status"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "instance": {"type": "string"},
        "problem": {"enum": ["hamilton", "tsp", "steiner"]},
        "policy": {"enum": ["never", "always", "threshold"]},
        "status": {"enum": ["ok", "timeout", "error"]},
        "answer": _answer,
        "width": {"type": "integer"},
        "bell_ceiling": {"type": "integer"},
        "reduce_cap": {"type": "integer"},
        "stats": _run_stats,
    },
}

SCHEMAS = {"solve": SOLVE_SCHEMA, "bench-record": BENCH_RECORD_SCHEMA}


def schema_text() -> str:
    return json.dumps({"version": SCHEMA_VERSION, "schemas": SCHEMAS}, indent=2, sort_keys=True) + "\n"


def validate_solve(doc: dict) -> None:
    jsonschema.validate(doc, SOLVE_SCHEMA)


def validate_bench_record(doc: dict) -> None:
    jsonschema.validate(doc, BENCH_RECORD_SCHEMA)
