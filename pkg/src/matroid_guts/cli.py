"""Command-line front end.

Exit codes: 0 success or affirmative verdict, 1 negative verdict (blocked,
not a matroid, empty oracle), 2 usage, I/O or parse errors.
"""
from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import catalog
from .connectivity import enumerate_exact_3_separations, enumerate_exact_k_separations
from .errors import (
    MatroidError,
    NotAMatroid,
    NotExtendable,
    StepBlocked,
    SubmodularityFailure,
)
from .extension import (
    check_guts_extendability,
    enumerate_guts_extensions_oracle,
    guts_point_extension,
    tree_multi_extension,
)
from .io import digest, format_matroid_file, parse_matroid_file, parse_plan_file
from .matroid import Matroid, build_matroid, matroids_equal
from .strands import bunches, strand_graph, strands

OK, NEGATIVE, USAGE = 0, 1, 2
NEGATIVE_ERRORS = (NotAMatroid, NotExtendable, StepBlocked)
FLAG_NAMES = {"a_text": "A", "b_text": "B", "a0_text": "A0", "b0_text": "B0",
              "plan_path": "plan", "out": "o", "force_build": "force-build"}


class Run:
    """State for one command: the resolved input and the report being built."""

    def __init__(self, command: str, fmt: str, source: str, args: dict):
        self.command = command
        self.fmt = fmt
        self.source = source
        self.args = {FLAG_NAMES.get(k, k): v for k, v in args.items() if v not in (None, False)}
        self.spec = None
        self.text = None

    def load(self):
        if self.source.startswith("catalog:"):
            self.spec = catalog.get(self.source[len("catalog:"):])
        else:
            self.spec = parse_matroid_file(Path(self.source).read_text())
        self.text = format_matroid_file(self.spec)
        return self.spec

    def matroid(self) -> Matroid:
        return build_matroid(self.spec or self.load())

    def finish(self, result: dict, summary: str, code: int = OK, error=None):
        payload = {
            "command": self.command,
            "input": {"source": self.source, "args": self.args,
                      "digest": digest(self.text) if self.text else None},
            "result": result,
            "summary": summary,
        }
        if error is not None:
            payload["error"] = error
        if self.fmt == "machine":
            click.echo(json.dumps(payload, indent=2, sort_keys=True))
        else:
            click.echo(summary, err=error is not None)
        sys.exit(code)

    def fail(self, exc: Exception):
        code = NEGATIVE if isinstance(exc, NEGATIVE_ERRORS) else USAGE
        if isinstance(exc, click.ClickException):
            message = exc.format_message()
        elif isinstance(exc, KeyError):
            message = str(exc.args[0])
        else:
            message = str(exc)
        error = {"type": type(exc).__name__, "message": message}
        if getattr(exc, "witness", None) is not None:
            error["witness"] = exc.witness
        self.finish(None, f"error: {type(exc).__name__}: {message}", code, error)


def command(name, source=True, help=None):
    """Register a subcommand that receives a ``Run`` and reports any library error."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(fmt, **kwargs):
            src = kwargs.pop("source", "") if source else ""
            r = Run(name, fmt, src, kwargs)
            try:
                fn(r, **kwargs)
            except (MatroidError, click.ClickException, OSError, KeyError, ValueError) as exc:
                r.fail(exc)
        run = click.option("--format", "fmt", type=click.Choice(["text", "machine"]),
                           default="text", show_default=True)(run)
        if source:
            run = click.argument("source")(run)
        return main.command(name, help=help)(run)
    return wrap


def _subset(m: Matroid, text: str | None, flag: str) -> int | None:
    if text is None:
        return None
    labels = [s for s in text.split(",") if s]
    unknown = [s for s in labels if s not in m.labels]
    if unknown:
        raise click.BadParameter(f"unknown elements {unknown}", param_hint=flag)
    return m.mask(labels)


def _sides(m: Matroid, a_text, b_text, a0=None, b0=None):
    a, b = _subset(m, a_text, "--A"), _subset(m, b_text, "--B")
    if a is None:
        if a0 is None:
            raise click.UsageError("--A is required")
        a = _infer_side(m, a0, b0)
    if b is None:
        b = m.ground & ~a
    return a, b


def _infer_side(m: Matroid, a0: int, b0: int) -> int:
    # the pinned extension does not depend on which separation hosts the strands
    for sep in enumerate_exact_3_separations(m):
        for a, b in ((sep.A, sep.B), (sep.B, sep.A)):
            if a0 & ~a or b0 & ~b:
                continue
            if any(s.members == a0 for s in strands(m, a, b, "A")) and \
                    any(s.members == b0 for s in strands(m, a, b, "B")):
                return a
    raise click.UsageError("no exact 3-separation has A0 and B0 as strands; pass --A")


def _names(m, masks):
    return [m.labels_of(x) for x in masks]


def _fmt_set(labels):
    return "{" + ",".join(labels) + "}"


side_options = [
    click.option("--A", "a_text", help="comma-separated labels of side A"),
    click.option("--B", "b_text", help="side B (default: complement of A)"),
]
pin_options = side_options + [
    click.option("--A0", "a0_text", required=True, help="pinned A-strand"),
    click.option("--B0", "b0_text", required=True, help="pinned B-strand"),
]


def options(opts):
    def apply(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return apply


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Guts-point extensions of matroids across exact 3-separations."""


@options([])
@command("validate", help="Check that SOURCE satisfies the rank axioms.")
def validate(r: Run):
    m = r.matroid()
    r.finish({"valid": True, "n": m.n, "rank": m.rank()},
             f"{r.spec.name or r.source}: valid matroid, {m.n} elements, rank {m.rank()}")


@command("info", help="Print size, rank, loops, coloops and circuit/flat counts.")
def info(r: Run):
    m = r.matroid()
    loops = [m.labels[i] for i in range(m.n) if m.rank(1 << i) == 0]
    coloops = [m.labels[i] for i in range(m.n) if m.rank(m.ground & ~(1 << i)) < m.rank()]
    seps = len(enumerate_exact_3_separations(m)) if m.n <= 16 else None
    result = {"name": r.spec.name, "elements": list(m.labels), "n": m.n, "rank": m.rank(),
              "circuits": len(m.circuits()), "flats": len(m.flats()),
              "loops": loops, "coloops": coloops, "exact_3_separations": seps}
    lines = [f"{r.spec.name or r.source}: {m.n} elements, rank {m.rank()}",
             f"elements: {' '.join(m.labels)}",
             f"circuits: {result['circuits']}, flats: {result['flats']}",
             f"loops: {loops or '-'}, coloops: {coloops or '-'}",
             f"exact 3-separations: {seps if seps is not None else 'not scanned'}"]
    r.finish(result, "\n".join(lines))


@command("circuits", help="List the circuits of SOURCE.")
def circuits(r: Run):
    m = r.matroid()
    found = _names(m, m.circuits())
    r.finish({"circuits": found},
             "\n".join([f"{len(found)} circuits"] + [_fmt_set(c) for c in found]))


@options([click.option("--k", "k", type=click.IntRange(min=1), default=3, show_default=True)])
@command("separations", help="List exact k-separations (3 by default).")
def separations(r: Run, k):
    m = r.matroid()
    seps = [{"A": m.labels_of(s.A), "B": m.labels_of(s.B)}
            for s in enumerate_exact_k_separations(m, k)]
    lines = [f"{len(seps)} exact {k}-separations"]
    lines += [f"{_fmt_set(s['A'])} | {_fmt_set(s['B'])}" for s in seps]
    r.finish({"separations": seps}, "\n".join(lines))


@options(side_options)
@command("strands", help="List strands, the strand graph and bunches for a 3-separation.")
def strands_cmd(r: Run, a_text, b_text):
    m = r.matroid()
    a, b = _sides(m, a_text, b_text)
    g = strand_graph(m, a, b)
    groups = bunches(g)
    result = {
        "A": m.labels_of(a), "B": m.labels_of(b),
        "a_strands": _names(m, [s.members for s in g.a_strands]),
        "b_strands": _names(m, [s.members for s in g.b_strands]),
        "edges": [list(e) for e in g.edges],
        "bunches": [{"a": list(x.a_indices), "b": list(x.b_indices), "complete": x.complete}
                    for x in groups],
    }
    lines = [f"A-strands: {' '.join(_fmt_set(s) for s in result['a_strands'])}",
             f"B-strands: {' '.join(_fmt_set(s) for s in result['b_strands'])}",
             f"edges: {len(g.edges)}"]
    for x in groups:
        members = [_fmt_set(result["a_strands"][i]) for i in x.a_indices] + \
                  [_fmt_set(result["b_strands"][j]) for j in x.b_indices]
        lines.append(f"bunch ({'complete' if x.complete else 'incomplete'}): {' '.join(members)}")
    r.finish(result, "\n".join(lines))


def _pins(m, a_text, b_text, a0_text, b0_text):
    a0, b0 = _subset(m, a0_text, "--A0"), _subset(m, b0_text, "--B0")
    a, b = _sides(m, a_text, b_text, a0, b0)
    return a, b, a0, b0


def _verdict_payload(m, v):
    if v.extendable:
        return {"verdict": "extendable"}
    return {"verdict": "blocked",
            "witness": {"A1": m.labels_of(v.A1), "B1": m.labels_of(v.B1), "values": list(v.values)}}


def _verdict_summary(m, v):
    if v.extendable:
        return "extendable"
    return (f"blocked by A1={_fmt_set(m.labels_of(v.A1))}, B1={_fmt_set(m.labels_of(v.B1))}; "
            f"connectivities (A0,B1), (A1,B0), (A1,B1) = {v.values}")


@options(pin_options)
@command("check-extend", help="Report whether the guts-point extension for A0, B0 exists.")
def check_extend(r: Run, a_text, b_text, a0_text, b0_text):
    m = r.matroid()
    a, b, a0, b0 = _pins(m, a_text, b_text, a0_text, b0_text)
    v = check_guts_extendability(m, a, b, a0, b0)
    r.finish(_verdict_payload(m, v), _verdict_summary(m, v), OK if v.extendable else NEGATIVE)


def _write_output(out, spec):
    text = format_matroid_file(spec)
    if out:
        Path(out).write_text(text)
    return text


@options(pin_options + [
    click.option("--label", default="p", show_default=True, help="label of the new element"),
    click.option("-o", "out", type=click.Path(dir_okay=False), help="write the extension here"),
    click.option("--force-build", is_flag=True,
                 help="run the construction past a blocked verdict to expose the axiom failure"),
])
@command("extend", help="Build the guts-point extension and write or embed the result.")
def extend(r: Run, a_text, b_text, a0_text, b0_text, label, out, force_build):
    m = r.matroid()
    a, b, a0, b0 = _pins(m, a_text, b_text, a0_text, b0_text)
    try:
        res = guts_point_extension(m, a, b, a0, b0, label=label, force=force_build)
    except SubmodularityFailure as exc:
        v = check_guts_extendability(m, a, b, a0, b0)
        result = _verdict_payload(m, v)
        result["submodularity_violation"] = {"X": exc.witness[0], "Y": exc.witness[1],
                                             "ranks": exc.ranks}
        r.finish(result, f"{_verdict_summary(m, v)}\nforced construction fails: {exc} "
                         f"(ranks {exc.ranks})", NEGATIVE)
    except NotExtendable as exc:
        r.finish(_verdict_payload(m, exc.verdict), _verdict_summary(m, exc.verdict), NEGATIVE)
    mp = res.mp
    spec = mp.to_spec(name=f"{r.spec.name or 'matroid'}+{res.p}")
    text = _write_output(out, spec)
    pbit = 1 << (mp.n - 1)
    with_p = _names(mp, [c for c in mp.circuits() if c & pbit])
    result = {"p": res.p, "n": mp.n, "rank": mp.rank(), "output": out,
              "circuits_with_p": with_p}
    if not out:
        result["matroid_file"] = text
    summary = (f"extended by {res.p}: {mp.n} elements, rank {mp.rank()}; "
               f"{len(with_p)} circuits contain {res.p}")
    r.finish(result, summary if out else summary + "\n" + text.rstrip())


@options([
    click.option("--plan", "plan_path", required=True, type=click.Path(dir_okay=False)),
    click.option("-o", "out", type=click.Path(dir_okay=False)),
])
@command("tree-extend", help="Apply a plan of guts-point extensions in order.")
def tree_extend(r: Run, plan_path, out):
    m = r.matroid()
    plan = parse_plan_file(Path(plan_path).read_text(), m)
    final = tree_multi_extension(m, plan)
    added = list(final.labels[m.n:])
    spec = final.to_spec(name=f"{r.spec.name or 'matroid'}+{'+'.join(added)}")
    text = _write_output(out, spec)
    result = {"added": added, "n": final.n, "rank": final.rank(), "output": out}
    if not out:
        result["matroid_file"] = text
    summary = f"added {', '.join(added)}: {final.n} elements, rank {final.rank()}"
    r.finish(result, summary if out else summary + "\n" + text.rstrip())


@options(pin_options + [click.option("--label", default="p", show_default=True)])
@command("oracle", help="Search all single-element extensions with A0+p and B0+p as circuits.")
def oracle(r: Run, a_text, b_text, a0_text, b0_text, label):
    m = r.matroid()
    a, b, a0, b0 = _pins(m, a_text, b_text, a0_text, b0_text)
    found = enumerate_guts_extensions_oracle(m, a, b, a0, b0, label=label)
    result = {"count": len(found),
              "extensions": [_names(e, [c for c in e.circuits() if c >> m.n]) for e in found]}
    if found:
        try:
            built = guts_point_extension(m, a, b, a0, b0, label=label).mp
            result["matches_construction"] = all(matroids_equal(e, built) for e in found)
        except NotExtendable:
            result["matches_construction"] = False
    r.finish(result, f"{len(found)} extension(s) found by exhaustive search",
             OK if found else NEGATIVE)


@options([
    click.argument("name", required=False),
    click.option("-o", "out", type=click.Path(dir_okay=False)),
])
@command("catalog", source=False, help="List catalog matroids, or emit one as a matroid file.")
def catalog_cmd(r: Run, name, out):
    if not name:
        entries = catalog.names()
        r.finish({"entries": entries}, "\n".join(entries))
    r.source = f"catalog:{name}"
    spec = r.load()
    _write_output(out, spec)
    r.finish({"name": spec.name, "matroid_file": r.text, "output": out},
             r.text.rstrip() if not out else f"wrote {out}")


if __name__ == "__main__":
    main()
