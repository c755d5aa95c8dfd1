"""File formats: schedule JSON, results JSON, and sweep CSV.

All frequencies in files are rad/s and carry a ``_rad_s`` suffix so the
angular-units convention travels with the data.  Floats serialize with
round-trip decimal precision (shortest representation that parses back
to the identical binary64), keeping schedule files bit-stable across
languages.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
from pathlib import Path

import jsonschema
import numpy as np

from .drive import PulseSchedule
from .errors import SchemaViolation
from .measure import ORIGIN_HARDWARE, ORIGIN_SIMULATED, RunRecord, ShotConfig

SCHEDULE_FORMAT_VERSION = 1
RESULTS_FORMAT_VERSION = 1

SCHEDULE_SCHEMA = {
    "type": "object",
    "required": [
        "format_version", "dt_s", "frequency_rad_s", "phase_rad",
        "amplitudes", "n_samples", "hardware_bound", "metadata",
    ],
    "properties": {
        "format_version": {"type": "integer"},
        "dt_s": {"type": "number", "exclusiveMinimum": 0},
        "frequency_rad_s": {"type": "number"},
        "phase_rad": {"type": "number"},
        "amplitudes": {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "maximum": 1},
            "minItems": 1,
        },
        "n_samples": {"type": "integer", "minimum": 1},
        "hardware_bound": {"type": "boolean"},
        "metadata": {"type": "object"},
    },
}

RESULTS_SCHEMA = {
    "type": "object",
    "required": ["format_version", "shot_config", "provenance", "runs"],
    "properties": {
        "format_version": {"type": "integer"},
        "shot_config": {
            "type": "object",
            "required": ["shots", "repeats"],
            "properties": {
                "shots": {"type": "integer", "minimum": 1},
                "repeats": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
            },
        },
        "provenance": {
            "type": "object",
            "required": ["origin", "source", "timestamp"],
            "properties": {
                "origin": {"enum": [ORIGIN_SIMULATED, ORIGIN_HARDWARE]},
                "source": {"type": "string"},
                "timestamp": {"type": "string"},
            },
        },
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "duration_samples", "detuning_rad_s", "per_repeat_p0",
                    "mean_p0", "label", "origin",
                ],
                "properties": {
                    "duration_samples": {"type": "integer", "minimum": 1},
                    "detuning_rad_s": {"type": "number"},
                    "per_repeat_p0": {
                        "type": "array",
                        "items": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                    "mean_p0": {"type": "number", "minimum": 0, "maximum": 1},
                    "label": {"type": "string"},
                    "origin": {"enum": [ORIGIN_SIMULATED, ORIGIN_HARDWARE]},
                    "seed": {"type": "integer"},
                },
            },
        },
    },
}


def _validate(instance: dict, schema: dict):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path)
        raise SchemaViolation(err.message, path=path)


def utc_timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()


def schedule_to_dict(s: PulseSchedule, metadata: dict | None = None) -> dict:
    meta = {"label": s.label, "created": utc_timestamp()}
    if metadata:
        meta.update(metadata)
    return {
        "format_version": SCHEDULE_FORMAT_VERSION,
        "dt_s": s.dt,
        "frequency_rad_s": s.frequency,
        "phase_rad": s.phase,
        "amplitudes": [float(a) for a in s.amplitudes],
        "n_samples": s.n_samples,
        "hardware_bound": s.hardware_bound,
        "metadata": meta,
    }


def schedule_from_dict(d: dict) -> tuple[PulseSchedule, dict]:
    _validate(d, SCHEDULE_SCHEMA)
    if d["n_samples"] != len(d["amplitudes"]):
        raise SchemaViolation(
            f"n_samples = {d['n_samples']} but {len(d['amplitudes'])} amplitudes",
            path="n_samples",
        )
    if d["hardware_bound"] and d["n_samples"] % 16 != 0:
        raise SchemaViolation(
            f"hardware-bound length {d['n_samples']} not a multiple of 16",
            path="n_samples",
        )
    meta = dict(d["metadata"])
    schedule = PulseSchedule(
        dt=d["dt_s"],
        amplitudes=np.array(d["amplitudes"], dtype=float),
        frequency=d["frequency_rad_s"],
        phase=d["phase_rad"],
        label=str(meta.get("label", "")),
        hardware_bound=d["hardware_bound"],
    )
    return schedule, meta


def write_schedule(path, s: PulseSchedule, metadata: dict | None = None):
    Path(path).write_text(json.dumps(schedule_to_dict(s, metadata), indent=2) + "\n")


def read_schedule(path) -> tuple[PulseSchedule, dict]:
    return schedule_from_dict(json.loads(Path(path).read_text()))


def record_to_dict(rec: RunRecord) -> dict:
    return {
        "duration_samples": rec.duration_samples,
        "detuning_rad_s": rec.detuning,
        "per_repeat_p0": list(rec.per_repeat_p0),
        "mean_p0": rec.mean_p0,
        "label": rec.label,
        "origin": rec.origin,
        "seed": rec.seed,
    }


def record_from_dict(d: dict, shots: int, seed: int = 0) -> RunRecord:
    return RunRecord(
        duration_samples=int(d["duration_samples"]),
        detuning=float(d["detuning_rad_s"]),
        per_repeat_p0=tuple(float(v) for v in d["per_repeat_p0"]),
        mean_p0=float(d["mean_p0"]),
        label=str(d["label"]),
        origin=str(d["origin"]),
        shots=shots,
        seed=int(d.get("seed", seed)),
    )


def results_to_dict(records, shot_cfg: ShotConfig, origin: str, source: str) -> dict:
    return {
        "format_version": RESULTS_FORMAT_VERSION,
        "shot_config": {
            "shots": shot_cfg.shots,
            "repeats": shot_cfg.repeats,
            "seed": shot_cfg.seed,
        },
        "provenance": {
            "origin": origin,
            "source": source,
            "timestamp": utc_timestamp(),
        },
        "runs": [record_to_dict(r) for r in records],
    }


def results_from_dict(d: dict) -> tuple[list[RunRecord], ShotConfig, dict]:
    _validate(d, RESULTS_SCHEMA)
    shots = int(d["shot_config"]["shots"])
    repeats = int(d["shot_config"]["repeats"])
    seed = int(d["shot_config"].get("seed", 0))
    records = []
    for i, run in enumerate(d["runs"]):
        if len(run["per_repeat_p0"]) != repeats:
            raise SchemaViolation(
                f"{len(run['per_repeat_p0'])} repeats recorded, shot_config declares {repeats}",
                path=f"runs[{i}].per_repeat_p0",
            )
        for j, p in enumerate(run["per_repeat_p0"]):
            if abs(p * shots - round(p * shots)) > 1e-9:
                raise SchemaViolation(
                    f"p0 = {p} is not a multiple of 1/{shots}",
                    path=f"runs[{i}].per_repeat_p0[{j}]",
                )
        mean = float(np.mean(run["per_repeat_p0"]))
        if abs(mean - run["mean_p0"]) > 1e-12:
            raise SchemaViolation(
                f"mean_p0 = {run['mean_p0']} but repeats average to {mean}",
                path=f"runs[{i}].mean_p0",
            )
        records.append(record_from_dict(run, shots=shots, seed=seed))
    return records, ShotConfig(shots=shots, repeats=repeats, seed=seed), d["provenance"]


def write_results(path, records, shot_cfg: ShotConfig, origin: str, source: str):
    Path(path).write_text(
        json.dumps(results_to_dict(records, shot_cfg, origin, source), indent=2) + "\n"
    )


def read_results(path) -> tuple[list[RunRecord], ShotConfig, dict]:
    return results_from_dict(json.loads(Path(path).read_text()))


SWEEP_COLUMNS = [
    "family",
    "tau_samples",
    "detuning_rad_s",
    "repeat",
    "p0",
    "p0_exact",
    "p0_adiabatic",
    "p0_discrimination",
    "origin",
]

SWEEP_HEADER_COMMENT = [
    "sweep output: one row per (duration, detuning, repeat)",
    "family            drive family (nobie | linear)",
    "tau_samples       drive duration in samples (dt each)",
    "detuning_rad_s    detuning Delta = qubit_freq - drive_freq, rad/s",
    "repeat            repeat index within the shot protocol",
    "p0                measured ground-state fraction for this repeat",
    "p0_exact          noise-free simulated probability for this point",
    "p0_adiabatic      ground-state weight of the instantaneous ground state",
    "                  at the ramp endpoint (duration-independent)",
    "p0_discrimination noise-free probability after a Hadamard",
    "origin            simulated | hardware",
]


def format_sweep_csv(rows, comment_lines=SWEEP_HEADER_COMMENT) -> str:
    buf = io.StringIO()
    for line in comment_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_sweep_csv(path, rows, comment_lines=SWEEP_HEADER_COMMENT):
    Path(path).write_text(format_sweep_csv(rows, comment_lines))


def read_sweep_csv(path) -> list[dict]:
    rows = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    for raw in reader:
        row = dict(raw)
        row["tau_samples"] = int(raw["tau_samples"])
        row["repeat"] = int(raw["repeat"])
        for key in ("detuning_rad_s", "p0", "p0_exact", "p0_adiabatic", "p0_discrimination"):
            row[key] = float(raw[key])
        rows.append(row)
    return rows
