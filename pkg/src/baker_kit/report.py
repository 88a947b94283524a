"""Structured report documents shared by every CLI command."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

from .codec import decode_ball, is_encoded_ball

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class ReportDocument:
    command: str
    inputs: dict[str, Any]
    body: dict[str, Any]
    timings: dict[str, float] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "body": self.body,
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def body_json(self) -> str:
        """Canonical body serialization; identical runs give identical bytes."""
        return json.dumps(self.body, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ReportDocument":
        return cls(command=d["command"], inputs=d["inputs"], body=d["body"],
                   timings=d.get("timings", {}), schema_version=d["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))


@lru_cache(maxsize=None)
def report_schema() -> dict:
    text = resources.files("baker_kit.data").joinpath("report.schema.json").read_text("utf-8")
    return json.loads(text)


def iter_balls(node: Any, path: str = ""):
    """Yield (path, Ball) for every encoded enclosure inside a report body."""
    if is_encoded_ball(node):
        yield path, decode_ball(node)
    elif isinstance(node, dict):
        for k, v in node.items():
            yield from iter_balls(v, f"{path}/{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from iter_balls(v, f"{path}/{i}")


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _approx(node: Any, digits: int = 12) -> str:
    if is_encoded_ball(node):
        b = decode_ball(node)
        return f"{float(b.mid):.{digits}g} +/- {float(b.rad):.2g}"
    if isinstance(node, str):
        try:
            return f"{float(Fraction(node)):.{digits}g}"
        except ValueError:
            return node
    return str(node)


def _render_prove(body: dict) -> list[str]:
    lines = [f"status: {body['status']}", f"verdict: {body['verdict']}", f"precision: {body['precision']} bits"]
    if body["failed_stage"]:
        lines.append(f"failed stage: {body['failed_stage']} ({body['message']})")
    if body["bounds"]:
        lines.append("bounds (computed <= reference?):")
        for b in body["bounds"]:
            mark = "ok " if b["dominated"] else "NO "
            lines.append(f"  {mark}{b['name']:<28} {_approx(b['computed'], 8):<28} ref {_approx(b['reference'], 8)}")
    r1, r2 = body["reduction1"], body["reduction2"]
    if r1:
        res = r1["result"]
        lines.append(f"round 1: convergent {res['convergent_index']}, eps {_approx(res['epsilon'], 15)}, "
                     f"w < {_approx(res['w_bound'], 8)} => n <= {r1['n_bound']}")
    if r2:
        mn = r2["min_epsilon"]
        lines.append(f"round 2: min eps {_approx(mn['epsilon'], 15)} at n = {mn['n']} "
                     f"=> k <= {r2['k_bound']}, m <= {r2['m_bound']}")
    if body["search_ranges"]:
        lines.append("search ranges (m, n, k): " + ", ".join(map(str, body["search_ranges"])))
        lines.append(f"solutions ({len(body['solutions'])}): "
                     + " ".join("(" + ",".join(map(str, s)) + ")" for s in body["solutions"]))
        lines.append("distinct values: " + ", ".join(body["distinct_values"]))
        lines.append("squares: " + ", ".join(body["squares"]))
    return lines


def _render_search(body: dict) -> list[str]:
    lines = [f"solutions ({body['count']}):"]
    lines += [f"  N_{m} = F_{n} * F_{k} = {v}" for (m, n, k), v in zip(body["solutions"], body["values"])]
    lines.append("distinct values: " + ", ".join(body["distinct_values"]))
    return lines


def _render_cf(body: dict) -> list[str]:
    lines = [f"value: {body['value']}  ({body['precision']} bits)",
             "partial quotients: [" + ", ".join(body["partial_quotients"]) + "]"]
    lines += [f"  p_{c['index']}/q_{c['index']} = {c['p']}/{c['q']}" for c in body["convergents"]]
    return lines


def _render_reduce(body: dict) -> list[str]:
    res = body["result"]
    lines = [f"status: {res['status']}", f"M: {body['M']}", f"precision: {body['precision']} bits"]
    if res["status"] == "SUCCESS":
        lines += [f"convergent: {res['convergent_index']} (q = {res['q']})",
                  f"epsilon: {_approx(res['epsilon'], 15)}",
                  f"w < {_approx(res['w_bound'], 10)}, so w <= {res['w_max']}"]
    elif res["message"]:
        lines.append(res["message"])
    return lines


def _render_constants(body: dict) -> list[str]:
    lines = [f"precision: {body['precision']} bits"]
    lines += [f"  {name:<10} {_approx(ball, 20)}" for name, ball in sorted(body["constants"].items())]
    return lines


_RENDERERS = {
    "prove": _render_prove,
    "search": _render_search,
    "cf": _render_cf,
    "reduce": _render_reduce,
    "constants": _render_constants,
}


def render_text(doc: ReportDocument) -> str:
    lines = [f"== {doc.command} =="] + _RENDERERS[doc.command](doc.body)
    if doc.timings:
        total = sum(doc.timings.values())
        lines.append(f"time: {total:.3f} s")
    return "\n".join(lines) + "\n"
