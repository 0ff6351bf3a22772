"""Command-line front end.

Query documents are INI files::

    [model]
    kind = pointfn
    points = p, q

    [elements]
    a = 1, 2
    b = 2, 2

    [query]
    op = rho
    args = a, b

Direct sums take their components from ``[model.left]`` and ``[model.right]``
(nesting continues with ``[model.left.right]`` and so on).  Further queries go
in sections named ``[query 2]``, ``[query tail]``, ... and run in file order.
Arguments are element names, bracketed literals such as ``[1, 2]``, or the
expressions ``sum(a, b)``, ``mul(n, a)``, ``inf(a)``, ``cutdown(a, eps)``,
``largest`` and ``zero``.

Every report ends with a fenced json block; only that block is stable.
"""

from __future__ import annotations

import argparse
import configparser
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import harness
from . import oscillation as osc
from .cucore import ArithmeticChain, CuModel, StableChain, capped_chain
from .errors import CuError, MalformedPayload, ParseError, UnknownPropertyName, ValidationError
from .models import DirectSumModel, IdempotentModel, PerforatedModel, PointFnModel, split_top
from .radius import (
    irc,
    rc_chain_limit,
    rc_exact,
    rc_multiple_limit,
    rc_range_sample,
    rc_search,
    rc_strict,
)
from .rankratio import rho, rho_chain_limits, rho_normalized, rho_sampled
from .scalar import ExtScalar, ext_mul, parse_ext
from .spectral import (
    CutdownChain,
    SpectralModel,
    SpectralProfile,
    cutdown,
    dimension_at,
    rank_function,
)

GOLDEN = Path(__file__).with_name("data") / "golden_examples.json"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- documents ------------------------------------------------------------------------


@dataclass
class Query:
    name: str
    op: str
    args: list[str]
    options: dict[str, str] = field(default_factory=dict)


@dataclass
class QueryDocument:
    model: CuModel
    elements: dict[str, Any]
    queries: list[Query]


def _model_from_section(cp: configparser.ConfigParser, section: str) -> CuModel:
    if not cp.has_section(section):
        raise ValidationError(section, "missing section")
    sec = cp[section]
    kind = sec.get("kind", "").strip().lower()
    try:
        if kind == "pointfn":
            points = tuple(p.strip() for p in sec.get("points", "").split(",") if p.strip())
            return PointFnModel(points)
        if kind == "perforated":
            raw = sec.get("k", sec.get("gap", "")).strip()
            try:
                k = int(raw)
            except ValueError:
                raise ValidationError(f"{section}.k", f"expected a positive integer, got {raw!r}")
            return PerforatedModel(k)
        if kind == "idempotent":
            return IdempotentModel()
        if kind == "spectral":
            return SpectralModel()
        if kind == "directsum":
            return DirectSumModel(
                _model_from_section(cp, f"{section}.left"),
                _model_from_section(cp, f"{section}.right"),
            )
    except MalformedPayload as exc:
        raise ValidationError(section, str(exc)) from exc
    raise ValidationError(f"{section}.kind", f"unknown model kind {kind!r}")


def _read_payload(S: CuModel, text: str, path: str):
    try:
        if isinstance(S, SpectralModel) and ":" in text:
            return SpectralProfile.parse(text)
        return S.make_element(text)
    except (MalformedPayload, ValueError) as exc:
        raise ValidationError(path, str(exc)) from exc


def parse_document(text: str) -> QueryDocument:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # element names are case-sensitive
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).splitlines()[0]) from exc
    S = _model_from_section(cp, "model")
    elements: dict[str, Any] = {}
    if cp.has_section("elements"):
        for name, payload in cp["elements"].items():
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValidationError(f"elements.{name}", "names must be identifiers")
            elements[name] = _read_payload(S, payload, f"elements.{name}")
    queries = []
    for sec in cp.sections():
        if sec != "query" and not sec.startswith("query "):
            continue
        body = dict(cp[sec])
        op = body.pop("op", "").strip()
        if not op:
            raise ValidationError(f"{sec}.op", "missing operation")
        raw = body.pop("args", "").strip()
        args = [a.strip() for a in split_top(raw, ",")] if raw else []
        queries.append(Query(sec, op, args, {k: v.strip() for k, v in body.items()}))
    doc = QueryDocument(S, elements, queries)
    for q in queries:
        if q.op not in OPS:
            raise ValidationError(f"{q.name}.op", f"unknown operation {q.op!r}")
        for i, a in enumerate(q.args):
            if OPS[q.op].element_args is None or i < OPS[q.op].element_args:
                resolve(doc, a, f"{q.name}.args[{i}]")
    return doc


def load_document(path: str) -> QueryDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_document(text)


# -- expressions ------------------------------------------------------------------------

_CALL = re.compile(r"^([a-z_]+)\((.*)\)$", re.S)


def resolve(doc: QueryDocument, expr: str, path: str = "expr"):
    """An element (or, on the spectral model, possibly a profile)."""
    S = doc.model
    e = expr.strip()
    if e in doc.elements:
        return doc.elements[e]
    if e == "largest":
        return S.largest()
    if e == "zero":
        return S.zero()
    m = _CALL.match(e)
    if m and m.group(1) in ("sum", "mul", "inf", "cutdown"):
        fn, inner = m.group(1), [p.strip() for p in split_top(m.group(2), ",")]
        if fn == "sum":
            _arity(inner, 2, path)
            return S.add(as_element(doc, resolve(doc, inner[0], path)), as_element(doc, resolve(doc, inner[1], path)))
        if fn == "mul":
            _arity(inner, 2, path)
            return S.multiple(_positive_int(inner[0], path), as_element(doc, resolve(doc, inner[1], path)))
        if fn == "inf":
            _arity(inner, 1, path)
            return S.infinity_times(as_element(doc, resolve(doc, inner[0], path)))
        _arity(inner, 2, path)
        return cutdown(as_profile(doc, resolve(doc, inner[0], path), path), _fraction(inner[1], path))
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", e) and e.lower() not in ("inf", "u"):
        raise ValidationError(path, f"unbound element name {e!r}")
    return _read_payload(S, e, path)


def _arity(parts: list, n: int, path: str) -> None:
    if len(parts) != n:
        raise ValidationError(path, f"expected {n} arguments, got {len(parts)}")


def _positive_int(text: str, path: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise ValidationError(path, f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise ValidationError(path, f"expected a positive integer, got {n}")
    return n


def _fraction(text: str, path: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(path, f"expected a rational, got {text!r}") from None


def as_element(doc: QueryDocument, v):
    if isinstance(v, SpectralProfile):
        return rank_function(v, 0)
    return v


def as_profile(doc: QueryDocument, v, path: str) -> SpectralProfile:
    if not isinstance(v, SpectralProfile):
        raise ValidationError(path, "a spectral profile is required here")
    return v


# -- operations -------------------------------------------------------------------------


@dataclass(frozen=True)
class Op:
    family: str
    fn: Callable[..., dict]
    # how many leading arguments are element expressions (None: all)
    element_args: int | None = None


def _fmt(S: CuModel, x) -> str:
    return S.format_element(x)


def _rho_result(res) -> dict:
    return {"value": str(res.value), "witness": str(res.witness), "method": res.method}


def _rc_result(S, res) -> dict:
    out = {"value": str(res.value), "method": res.method}
    if res.certificate is not None:
        c = res.certificate
        out["certificate"] = {"x": _fmt(S, c.x), "y": _fmt(S, c.y), "r": str(c.r)}
    if res.bound is not None:
        out["bound"] = res.bound
        out["clear_from"] = None if res.clear_from is None else str(res.clear_from)
    return out


def _elements(ctx, n):
    return [as_element(ctx.doc, v) for v in ctx.values[:n]]


@dataclass
class Context:
    doc: QueryDocument
    query: Query
    values: list
    options: dict

    @property
    def S(self) -> CuModel:
        return self.doc.model

    def need(self, n: int) -> None:
        if len(self.query.args) != n:
            raise ValidationError(f"{self.query.name}.args", f"{self.query.op} takes {n} arguments")

    def option(self, key: str, default):
        return self.options.get(key, default)


def op_rho(ctx):
    ctx.need(2)
    return _rho_result(rho(ctx.S, *_elements(ctx, 2)))


def op_rho_normalized(ctx):
    ctx.need(3)
    return _rho_result(rho_normalized(ctx.S, *_elements(ctx, 3)))


def op_rho_sampled(ctx):
    ctx.need(2)
    samples = int(ctx.option("samples", 64))
    seed = int(ctx.option("seed", 0))
    return _rho_result(rho_sampled(ctx.S, *_elements(ctx, 2), samples=samples, seed=seed))


def _limits(lim) -> dict:
    return {"terms_over_x": str(lim.terms_over_x), "x_over_terms": str(lim.x_over_terms)}


def op_cutdown_limits(ctx):
    """Limits of rho between a and its cutdowns (a - 1/m)_+."""
    ctx.need(1)
    a = as_profile(ctx.doc, ctx.values[0], f"{ctx.query.name}.args[0]")
    chain = CutdownChain(ctx.S, a)
    return _limits(rho_chain_limits(ctx.S, chain, chain.sup()))


def op_arithmetic_limits(ctx):
    ctx.need(3)
    base, step, target = _elements(ctx, 3)
    return _limits(rho_chain_limits(ctx.S, ArithmeticChain(ctx.S, base, step), target))


def op_capped_limits(ctx):
    ctx.need(3)
    base, step, cap = _elements(ctx, 3)
    chain = capped_chain(ctx.S, base, step, cap)
    lim = _limits(rho_chain_limits(ctx.S, chain, cap))
    lim["rc_limit"] = str(rc_chain_limit(ctx.S, chain))
    lim["rc_target"] = str(rc_exact(ctx.S, cap).value)
    return lim


def op_rc(ctx):
    ctx.need(1)
    return _rc_result(ctx.S, rc_exact(ctx.S, *_elements(ctx, 1)))


def op_rc_strict(ctx):
    ctx.need(1)
    return _rc_result(ctx.S, rc_strict(ctx.S, *_elements(ctx, 1)))


def parse_grid(text: str | None, bound: int) -> tuple[Fraction, ...] | None:
    """A single rational d means the grid d, 2d, ... up to ``bound``; a list is used as is."""
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        values = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ValidationError("grid", f"cannot read grid {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise ValidationError("grid", "grid values must be positive")
    if len(values) == 1:
        d = values[0]
        return tuple(j * d for j in range(1, int(bound / d) + 1)) or (d,)
    return tuple(values)


def op_rc_search(ctx):
    ctx.need(1)
    bound = int(ctx.option("bound", 12))
    grid = parse_grid(ctx.option("grid", None), bound)
    return _rc_result(ctx.S, rc_search(ctx.S, *_elements(ctx, 1), bound, grid))


def op_irc(ctx):
    ctx.need(1)
    return {"value": str(irc(ctx.S, *_elements(ctx, 1))), "method": "reciprocal"}


def op_rc_range(ctx):
    ctx.need(0)
    bound = int(ctx.option("bound", 4))
    values = sorted(rc_range_sample(ctx.S, bound))
    return {"value": [str(v) for v in values], "bound": bound}


def op_rc_multiple_limit(ctx):
    """lim rc(n*c) for a full c."""
    ctx.need(1)
    (c,) = _elements(ctx, 1)
    return {"value": str(rc_multiple_limit(ctx.S, StableChain(ctx.S, (c,))))}


def op_rc_bounds(ctx):
    """Bounds for rc(x) from rc(y): rc(y)/rho(x, y) and rho(y, x)*rc(y)."""
    ctx.need(2)
    x, y = _elements(ctx, 2)
    ry = rc_exact(ctx.S, y).value
    lower = ext_mul(rho(ctx.S, x, y).value.reciprocal(), ry)
    upper = ext_mul(rho(ctx.S, y, x).value, ry)
    return {"lower": str(lower), "value": str(rc_exact(ctx.S, x).value), "upper": str(upper)}


def _profile_arg(ctx) -> SpectralProfile:
    ctx.need(1)
    return as_profile(ctx.doc, ctx.values[0], f"{ctx.query.name}.args[0]")


def op_omega(ctx):
    d = osc.omega_defect(_profile_arg(ctx))
    return {"value": str(ExtScalar(d.value)), "where": d.where}


def op_limit_rho_cutdown(ctx):
    return {"value": str(osc.limit_rho_cutdown(_profile_arg(ctx)))}


def op_uniform_defect(ctx):
    d = osc.uniform_defect(_profile_arg(ctx))
    return {"value": str(ExtScalar(d.value)), "where": d.where}


def op_contrank(ctx):
    rep = osc.contrank_check(_profile_arg(ctx), strict=False)
    return {
        "omega": str(rep.omega),
        "limit_rho_cutdown": str(rep.limit_rho_cutdown),
        "uniform_defect": str(rep.uniform_defect),
        "conditions": rep.conditions,
        "agree": rep.agree,
        "witnesses": rep.witnesses,
    }


def op_dimension_at(ctx):
    ctx.need(2)
    a = as_profile(ctx.doc, ctx.values[0], f"{ctx.query.name}.args[0]")
    return {"value": str(dimension_at(a, _fraction(ctx.query.args[1], f"{ctx.query.name}.args[1]")))}


OPS: dict[str, Op] = {
    "rho": Op("rho", op_rho),
    "rho_normalized": Op("rho", op_rho_normalized),
    "rho_sampled": Op("rho", op_rho_sampled),
    "cutdown_limits": Op("rho", op_cutdown_limits),
    "arithmetic_limits": Op("rho", op_arithmetic_limits),
    "capped_limits": Op("rho", op_capped_limits),
    "rc": Op("rc", op_rc),
    "rc_strict": Op("rc", op_rc_strict),
    "rc_search": Op("rc", op_rc_search),
    "irc": Op("rc", op_irc),
    "rc_range": Op("rc", op_rc_range),
    "rc_multiple_limit": Op("rc", op_rc_multiple_limit),
    "rc_bounds": Op("rc", op_rc_bounds),
    "omega": Op("osc", op_omega),
    "limit_rho_cutdown": Op("osc", op_limit_rho_cutdown),
    "uniform_defect": Op("osc", op_uniform_defect),
    "contrank": Op("osc", op_contrank),
    "dimension_at": Op("osc", op_dimension_at, element_args=1),
}


def run_query(doc: QueryDocument, q: Query, overrides: dict | None = None) -> dict:
    op = OPS[q.op]
    n = len(q.args) if op.element_args is None else min(op.element_args, len(q.args))
    values = [resolve(doc, a, f"{q.name}.args[{i}]") for i, a in enumerate(q.args[:n])]
    options = dict(q.options)
    options.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        result = op.fn(Context(doc, q, values, options))
    except ValidationError:
        raise
    except CuError as exc:
        raise ValidationError(q.name, f"{type(exc).__name__}: {exc}") from exc
    return {"query": q.name, "op": q.op, "args": list(q.args), **result}


# -- reports ------------------------------------------------------------------------------


def machine_block(payload: dict) -> str:
    return "```json\n" + json.dumps(payload, indent=2, sort_keys=True) + "\n```"


def read_machine_block(text: str) -> dict:
    m = re.search(r"```json\n(.*?)\n```", text, re.S)
    if not m:
        raise ParseError("no machine-readable block found")
    return json.loads(m.group(1))


def _human_line(r: dict) -> str:
    head = f"[{r['query']}] {r['op']}({', '.join(r['args'])})"
    if "value" in r:
        v = r["value"]
        v = "{" + ", ".join(v) + "}" if isinstance(v, list) else v
        extra = [f"{k}: {r[k]}" for k in ("witness", "method", "where") if r.get(k)]
        if "certificate" in r:
            c = r["certificate"]
            extra.append(f"certificate: x={c['x']} y={c['y']} r={c['r']}")
        if "lower" in r:
            extra.append(f"bounds: {r['lower']} <= value <= {r['upper']}")
        return f"{head} = {v}" + (f"  ({'; '.join(extra)})" if extra else "")
    skip = {"query", "op", "args"}
    return head + ": " + ", ".join(f"{k}={r[k]}" for k in sorted(r) if k not in skip)


def cmd_query(family: str, args) -> int:
    doc = load_document(args.document)
    selected = [q for q in doc.queries if OPS[q.op].family == family]
    if not selected:
        raise ValidationError("query", f"no {family} queries in {args.document}")
    overrides = {
        "bound": getattr(args, "bound", None),
        "grid": getattr(args, "grid", None),
        "samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
    }
    results = [run_query(doc, q, overrides) for q in selected]
    print(f"model: {doc.model.describe()}")
    for r in results:
        print(_human_line(r))
    print(machine_block({"command": family, "model": doc.model.describe(), "results": results}))
    return EXIT_OK


# -- golden examples ----------------------------------------------------------------------


def _golden_document(entry: dict) -> QueryDocument:
    S = harness.parse_model_spec(entry["model"])
    return QueryDocument(S, {}, [])


def evaluate_entry(entry: dict) -> dict:
    doc = _golden_document(entry)
    q = Query(entry["id"], entry["op"], list(entry.get("args", [])), dict(entry.get("options", {})))
    if q.op not in OPS:
        raise ValidationError(f"{q.name}.op", f"unknown operation {q.op!r}")
    return run_query(doc, q)


def _matches(result: dict, expected) -> bool:
    if isinstance(expected, dict):
        return all(k in result and _same(result[k], v) for k, v in expected.items())
    return _same(result.get("value"), expected)


def _same(got, want) -> bool:
    if isinstance(want, str) and isinstance(got, str):
        try:
            return parse_ext(got) == parse_ext(want)
        except ValueError:
            return got == want
    if isinstance(want, dict) and isinstance(got, dict):
        return all(k in got and _same(got[k], v) for k, v in want.items())
    if isinstance(want, list) and isinstance(got, list):
        return len(got) == len(want) and all(_same(a, b) for a, b in zip(got, want))
    return got == want


def run_examples(path: Path = GOLDEN, only: list[str] | None = None) -> tuple[bool, list[dict]]:
    data = json.loads(Path(path).read_text())
    rows = []
    for entry in data["entries"]:
        if only and not any(f in (entry["family"], entry["id"]) for f in only):
            continue
        row = {"family": entry["family"], "id": entry["id"], "expected": entry["expected"]}
        try:
            result = evaluate_entry(entry)
            got = {k: v for k, v in result.items() if k not in ("query", "op", "args")}
            row["got"] = got if isinstance(entry["expected"], dict) else got.get("value")
            row["status"] = "match" if _matches(result, entry["expected"]) else "mismatch"
        except CuError as exc:
            row["got"] = f"error: {exc}"
            row["status"] = "mismatch"
        rows.append(row)
    return all(r["status"] == "match" for r in rows), rows


def cmd_examples(args) -> int:
    path = Path(args.expected) if args.expected else GOLDEN
    try:
        ok, rows = run_examples(path, args.filter)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ParseError(f"cannot read expectations from {path}: {exc}") from exc
    if not rows:
        raise ValidationError("filter", "no example matches the filter")
    for r in rows:
        print(f"{r['status']:<9} {r['family']}/{r['id']}: got {_short(r['got'])}, expected {_short(r['expected'])}")
    print(f"{sum(r['status'] == 'match' for r in rows)}/{len(rows)} examples match")
    print(machine_block({"command": "examples", "ok": ok, "entries": rows}))
    return EXIT_OK if ok else EXIT_FAIL


def _short(v) -> str:
    return json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else str(v)


# -- verify -------------------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = args.only or None
    start = time.perf_counter()
    report = harness.run_suite(names, cases=args.cases, seed=args.seed, floor=args.floor)
    print(report.to_text())
    print(f"{len(report.results)} properties, seed {args.seed}, {args.cases} cases each, "
          f"{time.perf_counter() - start:.1f}s")
    print(machine_block(json.loads(report.to_json())))
    return EXIT_OK if report.ok else EXIT_FAIL


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curank", description="Rank ratios, radius of comparison and oscillation on exact models.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rho", help="rank-ratio queries")
    r.add_argument("document")
    r.add_argument("--samples", type=int)
    r.add_argument("--seed", type=int)

    c = sub.add_parser("rc", help="radius-of-comparison queries")
    c.add_argument("document")
    c.add_argument("--bound", type=int, help="complexity bound for rc_search and rc_range")
    c.add_argument("--grid", help="grid step (e.g. 1/12) or explicit list (1/2,1,3/2)")

    o = sub.add_parser("osc", help="oscillation queries on spectral profiles")
    o.add_argument("document")

    e = sub.add_parser("examples", help="recompute the golden example table")
    e.add_argument("--filter", "--only", action="append", help="family or entry id (repeatable)")
    e.add_argument("--expected", help="alternative expectations file")

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("--only", "--filter", action="append", help="property name (repeatable)")
    v.add_argument("--cases", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--floor", type=int, default=50, help="minimum non-vacuous cases per property")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command in ("rho", "rc", "osc"):
            return cmd_query(args.command, args)
        if args.command == "examples":
            return cmd_examples(args)
        return cmd_verify(args)
    except UnknownPropertyName as exc:
        print(f"error: unknown property {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
