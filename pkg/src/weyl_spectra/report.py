"""Serialization of probe verdicts, job results and sweep summaries.

JSON output keeps insertion order (every producer builds its dicts in a
fixed order) so identical runs give identical bytes. CSV output has one
row per sample for probes and one row per job for verification runs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path

from .linalg import JordanInvariants
from .probes import ProbeConfig, ProbeVerdict


def config_dict(cfg: ProbeConfig) -> dict:
    return asdict(cfg)


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _clusters(fp: JordanInvariants) -> str:
    return ";".join(f"{lam.real:.12g}{lam.imag:+.12g}j^{n}" for lam, n in fp.clusters)


def _chain(chain) -> str:
    return " ".join(str(r) for r in chain)


def _vec(v) -> str:
    return " ".join(repr(float(x)) for x in v)


def probe_rows(verdict: ProbeVerdict) -> list[list[str]]:
    header = ["point", "vector", "e1", "e2", "clusters", "overall_rank_chain"]
    rows = [header]
    for sample, fp in verdict.records:
        rows.append(
            [
                _vec(sample.get("point", [])),
                _vec(sample.get("vector", [])),
                _vec(sample.get("e1", [])),
                _vec(sample.get("e2", [])),
                _clusters(fp),
                _chain(fp.overall_rank_chain),
            ]
        )
    return rows


def job_rows(jobs: list[dict]) -> list[list[str]]:
    rows = [["job", "verdict", "samples", "paper_ref", "claim"]]
    for j in jobs:
        rows.append([j["job"], j["verdict"], str(j["samples"]), j["paper_ref"], j["claim"]])
    return rows


def explore_rows(doc: dict) -> list[list[str]]:
    rows = [["type", "trials", "weyl_zero", "ip_holds", "ip_nilpotent", "osserman_holds"]]
    for name, s in doc["by_type"].items():
        rows.append([name] + [str(s[k]) for k in ("trials", "weyl_zero", "ip_holds", "ip_nilpotent", "osserman_holds")])
    return rows


def to_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def write(text: str, out: str | None, stream) -> None:
    """Single writer for all command output: a file when ``out`` is given, else ``stream``."""
    if out:
        Path(out).write_text(text)
    else:
        stream.write(text)
