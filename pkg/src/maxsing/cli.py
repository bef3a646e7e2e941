"""Command-line front end.

    maxsing <command> --in FILE [--out FILE] [--mode text|json] [--seed N]

Exit codes: 0 on success, 1 on malformed input, 2 when a precondition of
the requested computation fails (or an oracle sweep finds a counterexample).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012

from . import bound, cremona, exclusion, oracles, picard, valuation
from .errors import InfinitelyNearObstruction, MalformedInput, MaxsingError
from .serialize import dumps, parse_rational, to_jsonable

log = logging.getLogger("maxsing")

COMMANDS = ("factor", "valgraph", "bound", "untwist", "exclude", "oracle")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScenarioRequest:
    command: str
    payload: dict = field(default_factory=dict)
    output_mode: str = "json"
    seed: int = 0


@dataclass
class Report:
    command: str
    result: dict = field(default_factory=dict)
    assumptions: list = field(default_factory=list)
    status: str = "ok"
    error: str = ""
    exit_code: int = 0
    elapsed: float = 0.0

    def comparable(self):
        """Everything but the timing; this is what --mode json prints."""
        out = {"command": self.command, "schema_version": SCHEMA_VERSION, "status": self.status,
               "result": to_jsonable(self.result), "assumptions": list(self.assumptions)}
        if self.error:
            out["error"] = self.error
        return out


# -- schemas ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _schemas():
    root = resources.files("maxsing") / "schemas" / "v1"
    loaded = {p.name: json.loads(p.read_text()) for p in root.iterdir() if p.name.endswith(".json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc, default_specification=DRAFT202012))
        for name, doc in loaded.items())
    return loaded, registry


def validate_payload(command, payload):
    schemas, registry = _schemas()
    validator = jsonschema.Draft202012Validator(schemas[f"{command}.json"], registry=registry)
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise MalformedInput(f"{command} payload invalid at {where}: {e.message}")


# -- handlers -----------------------------------------------------------------

def _factor(payload, request):
    t = cremona.HomaloidalType.from_dict(payload)
    check = cremona.verify_noether_equations(t)
    result = {"type": t.to_dict(), "valid": check.ok,
              "residuals": [check.intersection_residual, check.genus_residual]}
    if not check.ok:
        raise MalformedInput(f"{t} violates the Noether equations (residuals "
                             f"{check.intersection_residual}, {check.genus_residual})")
    triple = cremona.noether_triple(t)
    result["noether_triple"] = list(triple) if triple else None
    try:
        steps = cremona.factorize(t)
    except InfinitelyNearObstruction as exc:
        result["steps"] = [s.to_dict() for s in exc.steps]
        result["obstruction"] = exc.obstruction.to_dict()
        exc.partial = result
        raise
    result["steps"] = [s.to_dict() for s in steps]
    result["length"] = len(steps)
    return result, []


def _graph_data(payload):
    data = dict(payload)
    data.pop("compatible", None)
    data.pop("system", None)
    graph = valuation.ResolutionGraph.from_dict(data)
    report = valuation.validate(graph)
    if not report.ok:
        raise MalformedInput(f"invalid resolution graph: {report.diagnostic}")
    return valuation.GradedSystemData(graph, tuple(data["nus"]), data["threshold"])


def _valgraph(payload, request):
    data = _graph_data(payload)
    g = data.graph
    K = g.K
    result = {
        "K": K, "L": g.L, "valid": True,
        "path_counts": [[valuation.path_count(g, i, j) for j in range(1, K + 1)] for i in range(1, K + 1)],
        "discrepancies": [valuation.discrepancy(g, j) for j in range(1, K + 1)],
        "multiplicities": [valuation.system_multiplicity(data, j) for j in range(1, K + 1)],
        "maximal_singularity": valuation.is_maximal_singularity(data),
        "canonical_compatible": [list(a) for a in valuation.canonical_compatible(g)],
    }
    if "compatible" in payload:
        a = [parse_rational(v) for v in payload["compatible"]]
        result["compatible"] = {"values": a, "ok": valuation.compatible_check(g, a)}
    return result, []


def _bound(payload, request):
    data = _graph_data(payload)
    verdict = bound.quartic_exclusion_verdict(data)
    record = verdict.to_dict()
    record.pop("assumptions")
    result = {"required_m_lower_bound": bound.required_m_lower_bound(data),
              "verdict": record,
              "theorem_bounds": list(bound.canonical_bounds(data))}
    if "compatible" in payload:
        a = [parse_rational(v) for v in payload["compatible"]]
        result["theorem_bound_for_compatible"] = bound.theorem_lower_bound(data, a)
    if "system" in payload:
        sysd = payload["system"]
        ms = bound.MultiplicitySystem(data, {(i, j): v for i, j, v in sysd["m"]}, tuple(sysd["d"]))
        rep = bound.check_system(ms)
        entry = {"ok": rep.ok, "violation": rep.violation}
        if rep.ok:
            entry["weighted"] = [bound.weighted_base_multiplicity(ms, a)
                                 for a in valuation.canonical_compatible(data.graph)]
        result["system"] = entry
    return result, list(verdict.assumptions)


def _untwist(payload, request):
    start = picard.MobileClass(payload["n"], payload["nu"])
    orbit = picard.untwist_loop(start)
    return {"orbit": [m.to_dict() for m in orbit], "steps": len(orbit) - 1,
            "projection_relations": picard.verify_projection_relations()}, []


def _exclude(payload, request):
    case = payload["case"]
    if case == "point":
        rec = exclusion.exclude_point_double_space(payload["n"], payload["nu"])
    elif case == "curve1":
        rec = exclusion.exclude_curve_case1(payload["n"], payload["nu"])
    elif case == "curve2":
        rec = exclusion.exclude_curve_case2(payload["n"], payload["nu"], payload["deg_r"])
    elif case == "curve3":
        rec = exclusion.exclude_curve_case3(parse_rational(payload["n"]), payload["m"],
                                            parse_rational(payload["nu"]), parse_rational(payload["nu_star"]))
    elif case == "double_cover_table":
        return {"case": case, "table": exclusion.build_double_cover_table(payload["d"], payload["m"]).to_dict()}, []
    elif case == "conic_bundle":
        rec = exclusion.conic_bundle_check(exclusion.ConicBundleDatum.from_dict(payload))
    else:
        raise MalformedInput(f"unknown case {case!r}")
    out = rec.to_dict()
    out.pop("assumptions")
    out["case"] = case
    return out, list(rec.assumptions)


def _oracle(payload, request):
    results = oracles.run_oracles(payload.get("oracles"), seed=request.seed)
    out = {"oracles": [r.to_dict() for r in results], "passed": all(r.passed for r in results)}
    return out, []


HANDLERS = {"factor": _factor, "valgraph": _valgraph, "bound": _bound,
            "untwist": _untwist, "exclude": _exclude, "oracle": _oracle}


def run(request: ScenarioRequest) -> Report:
    start = time.perf_counter()
    report = Report(request.command)
    try:
        if request.command not in HANDLERS:
            raise MalformedInput(f"unknown command {request.command!r}")
        if not isinstance(request.payload, dict):
            raise MalformedInput("payload must be a JSON object")
        validate_payload(request.command, request.payload)
        report.result, report.assumptions = HANDLERS[request.command](request.payload, request)
        if request.command == "oracle" and not report.result["passed"]:
            report.status, report.exit_code = "oracle_failed", 2
    except MaxsingError as exc:
        report.exit_code = exc.exit_code
        report.status = "malformed_input" if exc.exit_code == 1 else "precondition_failed"
        report.error = str(exc)
        if report.exit_code == 2 and not report.result:
            report.result = getattr(exc, "partial", None) or {"verdict": bound.Verdict.NO_VERDICT.value}
    report.elapsed = time.perf_counter() - start
    return report


def render_text(report: Report) -> str:
    lines = [f"{report.command}: {report.status}"]
    if report.error:
        lines.append(f"  error: {report.error}")

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str)) for x in v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {json.dumps(v)}")
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                lines.append(f"{pad}[{i}]")
                walk(v, indent + 1)
        else:
            lines.append(f"{pad}{json.dumps(obj)}")

    walk(to_jsonable(report.result), 1)
    for a in report.assumptions:
        lines.append(f"  assumes: {a}")
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="maxsing", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="infile", help="scenario file (JSON); '-' for stdin")
    parser.add_argument("--out", dest="outfile", help="write the report here instead of stdout")
    parser.add_argument("--mode", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0, help="seed for generated corpora (oracle)")
    return parser


def _read_payload(args):
    if args.infile is None:
        if args.command == "oracle":
            return {}
        raise MalformedInput("--in FILE is required")
    try:
        if args.infile == "-":
            return json.load(sys.stdin)
        with open(args.infile, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {args.infile}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{args.infile} is not valid JSON: {exc}") from exc


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        payload = _read_payload(args)
    except MalformedInput as exc:
        report = Report(args.command, status="malformed_input", error=str(exc), exit_code=1)
    else:
        report = run(ScenarioRequest(args.command, payload, args.mode, args.seed))
    text = dumps(report.comparable()) if args.mode == "json" else render_text(report)
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("elapsed %.3fs", report.elapsed)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
