"""Command-line front end: `bellscope <command> ...`."""
from __future__ import annotations

import argparse
import io
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import config
from .core import catalog, catalog_names, evaluate, no_signaling_residual, validate_behavior
from .core.io import dumps, expression_from_json, expression_to_json, load_behavior, read_json
from .quantum import model_from_json


@dataclass
class CommandResult:
    payload: dict = field(default_factory=dict)
    table: str = ""
    code: int = 0


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}\n{self.format_usage()}")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    if isinstance(v, (list, tuple)) and v and all(isinstance(t, (float, int, np.floating)) for t in v):
        return "[" + ", ".join(_fmt(t) for t in v) + "]"
    return str(v)


def _table(payload: dict) -> str:
    return "\n".join(f"{k}: {_fmt(v)}" for k, v in payload.items())


def _params(items) -> dict:
    out = {}
    for it in items or []:
        k, sep, v = it.partition("=")
        if not sep:
            raise InputError(f"parameter {it!r} is not key=value")
        try:
            out[k] = int(v)
        except ValueError:
            try:
                out[k] = float(v)
            except ValueError:
                out[k] = v
    return out


def _expression(spec: str, params=None):
    if os.path.exists(spec):
        return expression_from_json(read_json(spec))
    try:
        return catalog(spec, **_params(params))
    except KeyError as e:
        raise InputError(str(e.args[0])) from e


def _verdict_payload(v) -> dict:
    out = {"inside": v.inside, "visibility": v.visibility, "status": v.status}
    if v.certificate is not None:
        out.update({"certificate": expression_to_json(v.certificate), "bound": v.bound, "value": v.value})
    return out


# ----------------------------------------------------------------------------
# commands

def cmd_validate(a, tol):
    b = load_behavior(a.file)
    r = validate_behavior(b, tol)
    ns = no_signaling_residual(b)
    return {"valid": r.ok, "positivity_violation": r.positivity, "normalization_residual": r.normalization,
            "no_signaling_residual": ns, "no_signaling": ns <= tol.ns}


def cmd_membership(a, tol):
    from . import npa, polytopes
    b = load_behavior(a.file)
    if a.set == "local":
        return _verdict_payload(polytopes.local_membership(b, tol))
    if a.set == "ns":
        return _verdict_payload(polytopes.ns_membership(b, tol))
    if a.set == "svetlichny":
        return _verdict_payload(polytopes.svetlichny_membership(b, tol))
    if a.set == "q1":
        return {"inside": npa.q1_analytic_222(b)}
    r = npa.npa_membership(b, "1+AB" if a.set == "npa1ab" else "1", tol, verbose=True)
    out = {"inside": r.feasible, "slack": r.value, "status": r.status}
    if a.verbose:
        out.update(r.to_json())
    return out


def cmd_bound(a, tol):
    from . import npa, polytopes
    from .quantum import seesaw_lower_bound
    e = _expression(a.expr, a.param)
    out = {"expression": e.name, "set": a.set}
    if a.set == "local":
        out["value"] = polytopes.local_bound(e)
    elif a.set == "ns":
        out["value"] = polytopes.ns_bound(e, tol)
    elif a.set == "svetlichny":
        out["value"] = polytopes.svetlichny_bound(e)
    elif a.set == "quantum-upper":
        out["value"] = npa.npa_upper_bound(e, a.level, tol)
        out["level"] = a.level
    else:
        dims = [int(t) for t in a.dims.split(",")] if a.dims else [max(e.scenario.outputs)] * e.scenario.parties
        r = seesaw_lower_bound(e, dims, restarts=a.restarts, seed=a.seed, jobs=a.jobs)
        out.update({"value": r.value, "dims": dims, "restarts": a.restarts, "seed": a.seed,
                    "converged": r.converged})
    return out


def cmd_quantum_value(a, tol):
    from .quantum import bell_operator, born_behavior
    m = model_from_json(read_json(a.model))
    e = _expression(a.expr, a.param)
    S = bell_operator(e, [np.asarray(M) for M in m.measurements])
    return {"expression": e.name, "value": float(np.trace(m.state.rho @ S).real),
            "evaluate": evaluate(e, born_behavior(m)), "norm_bound": float(np.linalg.eigvalsh(S)[-1])}


def cmd_catalog(a, tol):
    if a.action == "list":
        return {"entries": catalog_names()}
    if not a.name:
        raise InputError("catalog show needs an entry name")
    params = _params(a.param)
    if "edges" in params:  # path to a JSON edge list
        params["edges"] = [tuple(e) for e in read_json(params["edges"])]
    try:
        return expression_to_json(catalog(a.name, **params))
    except KeyError as e:
        raise InputError(str(e.args[0])) from e


def cmd_simulate(a, tol):
    from . import simulate as sim
    if a.model == "werner":
        dirs = sim.direction_grid(12)
        if a.directions:
            dirs = [(np.array(p[0], float), np.array(p[1], float)) for p in read_json(a.directions)]
        return sim.werner_lhv_estimate(dirs, a.samples, a.seed).to_json()
    if a.model == "faking":
        r = sim.detection_faking_run(a.samples, a.seed, a.symmetrized)
        return {"chsh": r["chsh"], "click_rates": list(r["click_rates"]),
                "expected_rates": list(r["expected_rates"]), "rate_stderr": list(r["rate_stderr"]),
                "both_click": r["both_click"], "passed": r["report"].passed,
                "max_deviation": r["report"].max_deviation, "N": a.samples, "seed": a.seed}
    rng = np.random.default_rng(a.seed)
    if a.model == "prbox-ip":
        x = [int(c) for c in a.x]
        y = [int(c) for c in a.y]
        out, tr = sim.vandam_inner_product(x, y, rng)
        return {"output": out, "expected": sum(i * j for i, j in zip(x, y)) % 2, **tr}
    x0, x1, k = (int(c) for c in a.bits)
    out, tr = sim.info_causality_retrieval(x0, x1, k, rng)
    return {"guess": out, "expected": (x0, x1)[k], **tr}


def cmd_randomness(a, tol):
    from .diagnostics import randomness_bound
    return randomness_bound(a.chsh, a.model).to_json()


def cmd_threshold(a, tol):
    from .diagnostics import efficiency_threshold
    b = load_behavior(a.behavior)
    assign = tuple(int(t) for t in a.assign.split(","))
    lo, hi = efficiency_threshold(b, assign, a.eta_tol, tol)
    return {"bracket": [lo, hi], "assign": list(assign)}


def cmd_strength(a, tol):
    from .diagnostics import statistical_strength
    r = statistical_strength(load_behavior(a.behavior))
    return {"kl_bits": r.value, "gap": r.gap, "iterations": r.iterations}


def cmd_gill(a, tol):
    from .diagnostics import gill_bound
    return {"N": a.samples, "eps": a.eps, "bound": gill_bound(a.samples, a.eps)}


def cmd_graph_bell(a, tol):
    from .quantum import born_behavior
    from .quantum.graphs import Graph, graph_model, l_of_g, stabilizer_bell_expression
    G = Graph.from_edges([tuple(e) for e in read_json(a.edges)])
    e = stabilizer_bell_expression(G)
    q = evaluate(e, born_behavior(graph_model(G)))
    out = {"n": G.n, "edges": [list(t) for t in sorted(G.edges)], "quantum_value": q}
    if G.n <= 6:
        out["local_bound"] = l_of_g(G)
    if a.emit:
        out["expression"] = expression_to_json(e)
    return out


def cmd_scan(a, tol):
    buf = io.StringIO()
    if a.kind == "eberhard":
        from .diagnostics import eberhard_threshold
        thetas = [float(t) for t in a.thetas.split(",")]
        buf.write("theta,eta_lo,eta_hi\n")
        for th in thetas:
            p = eberhard_threshold(th, tol=a.eta_tol, restarts=a.restarts, seed=a.seed, cfg=tol)
            buf.write(f"{th:.6g},{p.bracket[0]:.6g},{p.bracket[1]:.6g}\n")
    else:
        from .core import chained
        from .quantum import born_behavior, seesaw_lower_bound
        from .simulate import epr2_local_content, epr2_upper_from_inequality
        buf.write("m,w_max,upper\n")
        for m in range(2, a.m_max + 1):
            e = chained(2, m)
            r = seesaw_lower_bound(e, (2, 2), restarts=a.restarts, seed=a.seed)
            b = born_behavior(r.model)
            buf.write(f"{m},{epr2_local_content(b, tol):.6g},{epr2_upper_from_inequality(b, e):.6g}\n")
    return {"csv": buf.getvalue()}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bellscope", description="Bell nonlocality toolkit")
    p.add_argument("--json", action="store_true", help="emit the JSON payload only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", default=None, help="tolerance override: a float or field=value,...")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("validate")
    s.add_argument("file")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("membership")
    s.add_argument("file")
    s.add_argument("--set", choices=["local", "ns", "svetlichny", "q1", "npa1", "npa1ab"], default="local")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(fn=cmd_membership)

    s = sub.add_parser("bound")
    s.add_argument("--expr", required=True)
    s.add_argument("--param", action="append", help="catalog parameter key=value")
    s.add_argument("--set", choices=["local", "ns", "quantum-lower", "quantum-upper", "svetlichny"],
                   default="local")
    s.add_argument("--level", default="1")
    s.add_argument("--dims", default=None)
    s.add_argument("--restarts", type=int, default=20)
    s.set_defaults(fn=cmd_bound)

    s = sub.add_parser("quantum-value")
    s.add_argument("--model", required=True)
    s.add_argument("--expr", required=True)
    s.add_argument("--param", action="append")
    s.set_defaults(fn=cmd_quantum_value)

    s = sub.add_parser("catalog")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("name", nargs="?")
    s.add_argument("--param", action="append")
    s.set_defaults(fn=cmd_catalog)

    s = sub.add_parser("simulate")
    s.add_argument("model", choices=["werner", "faking", "prbox-ip", "prbox-ic"])
    s.add_argument("--samples", type=int, default=10 ** 6)
    s.add_argument("--directions", default=None)
    s.add_argument("--symmetrized", action="store_true")
    s.add_argument("--x", default="111")
    s.add_argument("--y", default="111")
    s.add_argument("--bits", default="100", help="x0 x1 k for prbox-ic")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("randomness")
    s.add_argument("--chsh", type=float, required=True)
    s.add_argument("--model", choices=["quantum", "ns"], default="quantum")
    s.set_defaults(fn=cmd_randomness)

    s = sub.add_parser("threshold")
    s.add_argument("--behavior", required=True)
    s.add_argument("--assign", default="0,0")
    s.add_argument("--eta-tol", "--tol", dest="eta_tol", type=float, default=1e-6)
    s.set_defaults(fn=cmd_threshold)

    s = sub.add_parser("strength")
    s.add_argument("--behavior", required=True)
    s.set_defaults(fn=cmd_strength)

    s = sub.add_parser("gill")
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.set_defaults(fn=cmd_gill)

    s = sub.add_parser("graph-bell")
    s.add_argument("--edges", required=True, help="JSON list of [u, v] pairs")
    s.add_argument("--emit", action="store_true", help="include the expression JSON")
    s.set_defaults(fn=cmd_graph_bell)

    s = sub.add_parser("scan")
    s.add_argument("kind", choices=["eberhard", "epr2"])
    s.add_argument("--thetas", default="0.785398,0.5,0.3,0.15,0.05")
    s.add_argument("--eta-tol", type=float, default=1e-4)
    s.add_argument("--restarts", type=int, default=3)
    s.add_argument("--m-max", type=int, default=6)
    s.set_defaults(fn=cmd_scan)
    return p


def run(argv=None) -> CommandResult:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if not a.command:
            raise InputError(parser.format_usage())
        tol = config.resolve(a.tol)
        payload = a.fn(a, tol)
    except (InputError, ValueError, KeyError, FileNotFoundError, IsADirectoryError) as e:
        msg = e.args[0] if e.args else str(e)
        return CommandResult({"error": str(msg)}, str(msg), 1)
    except RuntimeError as e:
        return CommandResult({"error": str(e)}, str(e), 2)
    text = payload["csv"] if set(payload) == {"csv"} else _table(payload)
    return CommandResult(payload, text, 0)


def main(argv=None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    a_json = "--json" in (sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if res.code == 0 else sys.stderr
    if a_json:
        print(dumps(res.payload, indent=2), file=stream)
    else:
        print(res.table, file=stream)
    return res.code
