"""Command-line front door.

A thin client over the engine: every value printed here is produced by
the same workspace calls the service exposes. All subcommands operate on
a snapshot path (``--snapshot``, default ``./workspace.snap``) so the CLI
works without a running service; mutations take an exclusive file lock
next to the snapshot.

Exit codes: 0 success, 1 usage error, 2 data/validation error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
from filelock import FileLock

from . import __version__, analysis
from .errors import EngineError
from .increments import split_boundary
from .workspace import Workspace

SNAPSHOT_DEFAULT = "./workspace.snap"

ROLE_ORDER = {"control": 0, "code": 1, "data": 2, "grouping": 3}


def snapshot_option(fn):
    return click.option("--snapshot", "snapshot_path", default=SNAPSHOT_DEFAULT,
                        envvar="INCR_SNAPSHOT", show_default=True,
                        help="Workspace snapshot file.")(fn)


def ontology_option(fn):
    return click.option("--ontology", "ontology_path", default=None,
                        envvar="INCR_ONTOLOGY",
                        help="Ontology document (defaults to the shipped one).")(fn)


def policy_option(fn):
    return click.option("--policy", "policy_path", default=None, envvar="INCR_POLICY",
                        help="Traversal policy document (defaults to the shipped one).")(fn)


def workspace_options(fn):
    return snapshot_option(ontology_option(policy_option(fn)))


def _open(snapshot_path, ontology_path, policy_path) -> Workspace:
    return Workspace.open(snapshot_path, ontology_path, policy_path)


def _lock(snapshot_path) -> FileLock:
    return FileLock(str(snapshot_path) + ".lock")


def _records_out(objs) -> None:
    for obj in objs:
        click.echo(json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False))


def _table_out(columns, rows) -> None:
    widths = [len(c) for c in columns]
    str_rows = [[str(v) for v in row] for row in rows]
    for row in str_rows:
        widths = [max(w, len(v)) for w, v in zip(widths, row)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    click.echo(fmt.format(*columns))
    for row in str_rows:
        click.echo(fmt.format(*row))


def member_summary(ontology, counts: dict) -> str:
    """"1 transaction, 13 programs, 6 tables" — control, then code, then data."""
    items = sorted(counts.items(),
                   key=lambda kv: (ROLE_ORDER.get(ontology.role_class(kv[0]), 9), kv[0]))
    return ", ".join(f"{n} {kind.lower()}{'s' if n != 1 else ''}" for kind, n in items)


@click.group()
@click.version_option(__version__, prog_name="inckg")
def cli():
    """Incremental knowledge-graph analysis of legacy applications."""


# ---------------------------------------------------------------------------
# fixture
# ---------------------------------------------------------------------------


@cli.group()
def fixture():
    """Generate fixture estates."""


@fixture.command("genapp")
@click.option("-o", "--out-dir", default="./fixtures", show_default=True,
              help="Output directory.")
def fixture_genapp(out_dir):
    """Write the GENAPP-like estate: genapp.facts + genapp.manifest."""
    from .fixture import write_genapp
    facts, manifest = write_genapp(out_dir)
    click.echo(f"wrote {facts}")
    click.echo(f"wrote {manifest}")


@fixture.command("synthetic")
@click.option("-o", "--out-dir", default="./fixtures", show_default=True)
@click.option("--nodes", default=100_000, show_default=True)
@click.option("--edges", default=400_000, show_default=True)
@click.option("--rng-seed", default=7, show_default=True)
def fixture_synthetic(out_dir, nodes, edges, rng_seed):
    """Write a synthetic desk-scale estate for performance runs."""
    from .fixture import write_synthetic
    facts, manifest = write_synthetic(out_dir, nodes, edges, rng_seed)
    click.echo(f"wrote {facts}")
    click.echo(f"wrote {manifest}")


# ---------------------------------------------------------------------------
# ingest / validate
# ---------------------------------------------------------------------------


@cli.command()
@click.argument("facts", type=click.Path(exists=True, dir_okay=False))
@workspace_options
def ingest(facts, snapshot_path, ontology_path, policy_path):
    """Ingest a facts file into the workspace snapshot."""
    with _lock(snapshot_path):
        ws = _open(snapshot_path, ontology_path, policy_path)
        with open(facts, "r", encoding="utf-8") as fh:
            report = ws.ingest_lines(fh)
        ws.save(snapshot_path)
    click.echo(f"nodes added:     {report.nodes_added}")
    click.echo(f"edges added:     {report.edges_added}")
    click.echo(f"groups added:    {report.groups_added}")
    click.echo(f"HAS edges added: {report.has_edges_added}")
    skipped = len(report.violations) + len(report.dangling_refs) + len(report.parse_errors)
    if report.parse_errors:
        click.echo(f"parse errors ({len(report.parse_errors)}):", err=True)
        for p in report.parse_errors:
            click.echo(f"  line {p.line}: {p.message}", err=True)
    if report.violations:
        click.echo(f"ontology violations ({len(report.violations)}):", err=True)
        for v in report.violations:
            click.echo(f"  {v.subject_id}: {v.message}", err=True)
    if report.dangling_refs:
        click.echo(f"dangling references ({len(report.dangling_refs)}):", err=True)
        for d in report.dangling_refs:
            click.echo(f"  line {d.ordinal}: missing {d.missing_id}", err=True)
    if skipped:
        click.echo(f"{skipped} record(s) skipped", err=True)
        raise SystemExit(2)
    click.echo("all records ingested")


@cli.command()
@workspace_options
def validate(snapshot_path, ontology_path, policy_path):
    """Check the graph against the ontology."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    violations = ws.validate()
    click.echo(f"{len(violations)} violations")
    for v in violations:
        click.echo(f"  {v.subject_type} {v.subject_id} [{v.category}]: {v.message}")
    if violations:
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# inc
# ---------------------------------------------------------------------------


@cli.group()
def inc():
    """Create, expand, edit, and inspect increments."""


def _show_increment(ws, increment, fmt):
    inside_out, outside_in = split_boundary(increment.boundary)
    if fmt == "records":
        from .increments import increment_to_doc
        doc = increment_to_doc(increment)
        doc["stale"] = ws.is_stale(increment)
        _records_out([doc])
        return
    metrics = increment.metrics
    click.echo(f"increment {increment.id} "
               f"(policy {increment.policy_ref}, graph v{increment.graph_version})")
    click.echo(f"seeds: {', '.join(sorted(increment.seeds))}")
    click.echo(f"members: {member_summary(ws.ontology, metrics.member_count_by_kind)}")
    click.echo(f"loc total: {metrics.total_loc}   "
               f"cyclomatic total: {metrics.total_cyclomatic}   "
               f"metrics missing: {metrics.metrics_missing}")
    click.echo(f"boundary: {len(inside_out)} inside-out, {len(outside_in)} outside-in")
    click.echo(f"stale: {'yes' if ws.is_stale(increment) else 'no'}")


@inc.command("create")
@click.argument("name")
@click.option("--seed", "seeds", multiple=True, required=True,
              help="Seed reference (id or kind:name); repeatable.")
@workspace_options
def inc_create(name, seeds, snapshot_path, ontology_path, policy_path):
    """Create an increment from seed artifacts (no expansion yet)."""
    with _lock(snapshot_path):
        ws = _open(snapshot_path, ontology_path, policy_path)
        increment = ws.create_increment(name, list(seeds))
        ws.save(snapshot_path)
    click.echo(f"created increment {increment.id} with {len(increment.seeds)} seed(s)")


@inc.command("expand")
@click.argument("name")
@workspace_options
def inc_expand(name, snapshot_path, ontology_path, policy_path):
    """Expand an increment to its policy fixpoint."""
    with _lock(snapshot_path):
        ws = _open(snapshot_path, ontology_path, policy_path)
        increment = ws.expand_increment(name)
        ws.save(snapshot_path)
    click.echo(f"expanded {increment.id}: "
               f"{member_summary(ws.ontology, increment.metrics.member_count_by_kind)}")


@inc.command("edit")
@click.argument("name")
@click.option("--add", "adds", multiple=True, help="Member to pin in; repeatable.")
@click.option("--remove", "removes", multiple=True, help="Member to pin out; repeatable.")
@workspace_options
def inc_edit(name, adds, removes, snapshot_path, ontology_path, policy_path):
    """Pin members into or out of an increment."""
    with _lock(snapshot_path):
        ws = _open(snapshot_path, ontology_path, policy_path)
        increment = ws.edit_increment(name, list(adds), list(removes))
        ws.save(snapshot_path)
    inside_out, outside_in = split_boundary(increment.boundary)
    click.echo(f"edited {increment.id}: "
               f"{member_summary(ws.ontology, increment.metrics.member_count_by_kind)}; "
               f"boundary {len(inside_out)} inside-out, {len(outside_in)} outside-in")


@inc.command("show")
@click.argument("name")
@click.option("--format", "fmt", type=click.Choice(["table", "records"]),
              default="table", show_default=True)
@workspace_options
def inc_show(name, fmt, snapshot_path, ontology_path, policy_path):
    """Show an increment's members, metrics, and boundary summary."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    _show_increment(ws, ws.get_increment(name), fmt)


@inc.command("list")
@workspace_options
def inc_list(snapshot_path, ontology_path, policy_path):
    """List increments in the workspace."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    rows = [(i.id, len(i.seeds), len(i.members), i.graph_version,
             "yes" if ws.is_stale(i) else "no")
            for i in ws.list_increments()]
    _table_out(("id", "seeds", "members", "graph_version", "stale"), rows)


@inc.command("impact")
@click.argument("name")
@click.argument("node_ref")
@click.option("--format", "fmt", type=click.Choice(["table", "records"]),
              default="table", show_default=True)
@workspace_options
def inc_impact(name, node_ref, fmt, snapshot_path, ontology_path, policy_path):
    """What-if: boundary delta if the node were moved in or out."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    report = ws.move_impact(name, node_ref)
    if fmt == "records":
        _records_out([{
            "node": report.node_id,
            "boundary_before": report.boundary_before,
            "boundary_after": report.boundary_after,
            "delta": report.delta,
            "affected_edges": [
                {"edge_id": a.edge.id, "src": a.edge.src, "dst": a.edge.dst,
                 "kind": a.edge.kind, "change": a.change}
                for a in report.affected_edges],
        }])
        return
    click.echo(f"boundary before: {report.boundary_before}")
    click.echo(f"boundary after:  {report.boundary_after}")
    click.echo(f"delta:           {report.delta:+d}")
    for a in report.affected_edges:
        click.echo(f"  {a.change}: {a.edge.kind} {a.edge.src} -> {a.edge.dst}")


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@cli.group()
def report():
    """Boundary-interface, retire-safety, and shared-artifact reports."""


def _emit_report(rows, columns, fmt, out_path):
    if fmt == "csv":
        text = analysis.rows_to_csv(rows, columns)
    elif fmt == "records":
        text = analysis.rows_to_records(rows, columns)
    else:
        text = None
    if out_path:
        Path(out_path).write_text(
            text if text is not None else analysis.rows_to_csv(rows, columns),
            encoding="utf-8")
        click.echo(f"wrote {out_path}")
        return
    if text is not None:
        click.echo(text, nl=False)
    else:
        _table_out(columns, [[getattr(r, c) for c in columns] for r in rows])


@report.command("interfaces")
@click.argument("name")
@click.option("--interface-type", type=click.Choice(["inside_out", "outside_in"]),
              default=None, help="Keep only one boundary direction.")
@click.option("--application", default=None, help="Interfacing application filter.")
@click.option("--query", default=None, help="Substring match on node names.")
@click.option("--format", "fmt", type=click.Choice(["table", "records", "csv"]),
              default="table", show_default=True)
@click.option("-o", "--out", "out_path", default=None, help="Write to a file instead of stdout.")
@workspace_options
def report_interfaces(name, interface_type, application, query, fmt, out_path,
                      snapshot_path, ontology_path, policy_path):
    """The filterable boundary-interface table of an increment."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    rows = ws.interfaces(name, interface_type, application, query)
    _emit_report(rows, analysis.INTERFACE_COLUMNS, fmt, out_path)


RETIRE_COLUMNS = ("severity", "reason", "edge_kind", "calling_node", "called_node",
                  "access_type")


@report.command("retire")
@click.argument("name")
@click.option("--format", "fmt", type=click.Choice(["table", "records", "csv"]),
              default="table", show_default=True)
@click.option("-o", "--out", "out_path", default=None)
@workspace_options
def report_retire(name, fmt, out_path, snapshot_path, ontology_path, policy_path):
    """Retire-safety verdict for an increment."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    verdict = ws.retire_check(name)

    from dataclasses import make_dataclass
    Row = make_dataclass("Row", [c for c in RETIRE_COLUMNS])

    def to_row(finding, severity):
        edge = finding.edge.edge
        return Row(severity=severity, reason=finding.reason, edge_kind=edge.kind,
                   calling_node=ws.graph.node(edge.src).name or edge.src,
                   called_node=ws.graph.node(edge.dst).name or edge.dst,
                   access_type=str(edge.attrs.get("access_type", "")))

    rows = [to_row(f, "blocker") for f in verdict.blockers]
    rows += [to_row(f, "note") for f in verdict.notes]
    if fmt == "table" and not out_path:
        click.echo("SAFE TO RETIRE" if verdict.safe else "NOT SAFE TO RETIRE")
        if verdict.blockers:
            click.echo(f"blockers ({len(verdict.blockers)}):")
            for f in verdict.blockers:
                e = f.edge.edge
                click.echo(f"  {f.reason}: {e.kind} "
                           f"{ws.graph.node(e.src).name} -> {ws.graph.node(e.dst).name}"
                           + (f" ({e.attrs['access_type']})" if "access_type" in e.attrs else ""))
        if verdict.notes:
            click.echo(f"notes ({len(verdict.notes)}):")
            for f in verdict.notes:
                e = f.edge.edge
                click.echo(f"  {f.reason}: {e.kind} "
                           f"{ws.graph.node(e.src).name} -> {ws.graph.node(e.dst).name}"
                           + (f" ({e.attrs['access_type']})" if "access_type" in e.attrs else ""))
        return
    _emit_report(rows, RETIRE_COLUMNS, fmt, out_path)


SHARED_COLUMNS = ("node_id", "name", "entry_count")


@report.command("shared")
@click.option("--entry", "entries", multiple=True, required=True,
              help="Control-node entry reference; repeatable.")
@click.option("--threshold", default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "records", "csv"]),
              default="table", show_default=True)
@click.option("-o", "--out", "out_path", default=None)
@workspace_options
def report_shared(entries, threshold, fmt, out_path, snapshot_path, ontology_path,
                  policy_path):
    """Code artifacts shared by several control entries (refactor candidates)."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    rows = ws.shared_report(list(entries), threshold)
    _emit_report(rows, SHARED_COLUMNS, fmt, out_path)


# ---------------------------------------------------------------------------
# export / serve
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--format", "fmt", type=click.Choice(["dot", "graphml"]), default="dot",
              show_default=True)
@click.option("--increment", "inc_id", default=None,
              help="Export one increment plus its boundary neighbors.")
@click.option("-o", "--out", "out_path", default=None)
@workspace_options
def export(fmt, inc_id, out_path, snapshot_path, ontology_path, policy_path):
    """Export the graph (or one increment) as DOT or GraphML."""
    ws = _open(snapshot_path, ontology_path, policy_path)
    text = ws.export(fmt, inc_id)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--bind", default="127.0.0.1:8765", envvar="INCR_BIND", show_default=True,
              help="host:port to listen on.")
@click.option("--ui-dir", default=None, envvar="INCR_UI_DIR",
              help="Directory of built workbench assets to serve under /ui.")
@workspace_options
def serve(bind, ui_dir, snapshot_path, ontology_path, policy_path):
    """Run the workbench service."""
    import uvicorn

    from .service import create_app

    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise click.UsageError(f"--bind must be host:port, got {bind!r}")
    ws = _open(snapshot_path, ontology_path, policy_path)
    app = create_app(ws, ui_dir=ui_dir, snapshot_path=snapshot_path)
    uvicorn.run(app, host=host, port=int(port))


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def run(argv=None) -> int:
    """Dispatch argv and map failures onto the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except EngineError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
