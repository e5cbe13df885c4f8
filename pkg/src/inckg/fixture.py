"""Fixture corpora: a GENAPP-like insurance estate and a synthetic
desk-scale graph for performance runs.

Both generators are fully deterministic. ``write_genapp`` emits
``genapp.facts`` (JSON Lines) plus ``genapp.manifest`` (JSON) recording
per-kind counts, per-group membership, and per-program loc/cyclomatic —
tests derive expected values from the manifest rather than hard-coding
generator internals.

Estate layout (five applications):

* Policy Management — transactions SSP1..SSP4 start per-policy front-end
  programs; a shared business/database program cluster of 13 programs
  reads and writes the six policy tables.
* Customer Management — customer menu transaction, its program chain, the
  CUSTOMER table, the customer KSDS dataset and the GENACNTL control
  queue (a log sink).
* Random Customer — transaction LGCF starting LGICVS01, which only reads
  the customer dataset and writes log messages to GENACNTL.
* Storage Queue Management — the queue-writer utility and its error queue.
* Miscellaneous — setup/web utilities, an install file, batch jobs.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

_APPS = {
    "App-PolicyManagement": "Policy Management",
    "App-CustomerManagement": "Customer Management",
    "App-RandomCustomer": "Random Customer",
    "App-StorageQueueManagement": "Storage Queue Management",
    "App-Miscellaneous": "Miscellaneous",
}

# (name, loc, cyclomatic)
_POLICY_PROGRAMS = [
    ("LGTESTP1", 425, 12), ("LGTESTP2", 438, 12), ("LGTESTP3", 441, 13),
    ("LGTESTP4", 417, 11),
    ("LGAPOL01", 512, 18), ("LGIPOL01", 389, 14), ("LGUPOL01", 468, 17),
    ("LGDPOL01", 301, 9),
    ("LGAPDB01", 674, 23), ("LGIPDB01", 598, 21), ("LGUPDB01", 633, 22),
    ("LGDPDB01", 287, 8), ("LGIPDB02", 214, 6),
]
_CUSTOMER_PROGRAMS = [
    ("LGTESTC1", 402, 11), ("LGACUS01", 455, 15), ("LGICUS01", 333, 10),
    ("LGUCUS01", 471, 16), ("LGACDB01", 512, 19), ("LGICDB01", 376, 12),
    ("LGUCDB01", 489, 17),
]
_OTHER_PROGRAMS = [
    ("LGICVS01", 148, 4),   # random customer inquiry
    ("LGSTSQ", 96, 3),      # storage queue writer
    ("LGSETUP", 221, 7),    # install/setup utility
    ("LGWEBST5", 310, 9),   # web front end
]

_POLICY_TABLES = ["Policy", "House", "Motor", "Endowment", "Commercial", "Claim"]

_READ = {"access_type": "SQL:SELECT", "crud": "R", "role": "reader"}
_INSERT = {"access_type": "SQL:INSERT", "crud": "C", "role": "writer"}
_UPDATE = {"access_type": "SQL:UPDATE", "crud": "RU", "role": "updater"}
_DELETE = {"access_type": "SQL:DELETE", "crud": "D", "role": "writer"}
_WRITEQ = {"access_type": "CICS:WRITEQ_TS", "crud": "C", "role": "writer"}


def _node(node_id, kind, name, attrs=None):
    return {"rec": "node", "id": node_id, "kind": kind, "name": name, "attrs": attrs or {}}


def _edge(src, dst, kind, attrs=None):
    return {"rec": "edge", "src": src, "dst": dst, "kind": kind, "attrs": attrs or {}}


def _group(group_id, name, members):
    return {"rec": "group", "group_id": group_id, "kind": "Application",
            "name": name, "members": members}


def _prog(name):
    return f"prog:{name}"


def _table(name):
    return f"table:{name.upper()}"


def genapp_records() -> list:
    """Facts records for the GENAPP-like estate, in emission order."""
    records = []
    membership = {app: [] for app in _APPS}

    def add_node(app, rec):
        records.append(rec)
        membership[app].append(rec["id"])

    # --- transactions ---------------------------------------------------
    for txn, policy in [("SSP1", "Motor"), ("SSP2", "Endowment"),
                        ("SSP3", "House"), ("SSP4", "Commercial")]:
        add_node("App-PolicyManagement",
                 _node(f"txn:{txn}", "Transaction", txn, {"description": f"{policy} policy menu"}))
    add_node("App-RandomCustomer", _node("txn:LGCF", "Transaction", "LGCF"))
    add_node("App-CustomerManagement", _node("txn:SSC1", "Transaction", "SSC1"))

    # --- programs ---------------------------------------------------------
    for name, loc, cyc in _POLICY_PROGRAMS:
        add_node("App-PolicyManagement",
                 _node(_prog(name), "Program", name,
                       {"language": "COBOL", "loc": loc, "cyclomatic": cyc}))
    for name, loc, cyc in _CUSTOMER_PROGRAMS:
        add_node("App-CustomerManagement",
                 _node(_prog(name), "Program", name,
                       {"language": "COBOL", "loc": loc, "cyclomatic": cyc}))
    app_for = {"LGICVS01": "App-RandomCustomer", "LGSTSQ": "App-StorageQueueManagement",
               "LGSETUP": "App-Miscellaneous", "LGWEBST5": "App-Miscellaneous"}
    for name, loc, cyc in _OTHER_PROGRAMS:
        add_node(app_for[name],
                 _node(_prog(name), "Program", name,
                       {"language": "COBOL", "loc": loc, "cyclomatic": cyc}))

    # --- data artifacts ---------------------------------------------------
    for table in _POLICY_TABLES:
        add_node("App-PolicyManagement", _node(_table(table), "Table", table))
    add_node("App-CustomerManagement", _node(_table("Customer"), "Table", "Customer"))
    add_node("App-CustomerManagement",
             _node("dataset:KSDSCUST", "Dataset", "GENAPP.GENAPP.KSDSCUST"))
    add_node("App-CustomerManagement",
             _node("queue:GENACNTL", "Queue", "GENACNTL", {"log_sink": True}))
    add_node("App-StorageQueueManagement",
             _node("queue:GENAERRS", "Queue", "GENAERRS", {"log_sink": True}))
    add_node("App-Miscellaneous",
             _node("file:INSTALL", "File", "GENAPP.INSTALL.SYSIN"))

    # --- jobs --------------------------------------------------------------
    add_node("App-StorageQueueManagement", _node("job:GENASTRT", "Job", "GENASTRT"))
    add_node("App-Miscellaneous", _node("job:GENAINST", "Job", "GENAINST"))

    # --- control flow -------------------------------------------------------
    for txn, front in [("SSP1", "LGTESTP1"), ("SSP2", "LGTESTP2"),
                       ("SSP3", "LGTESTP3"), ("SSP4", "LGTESTP4"),
                       ("LGCF", "LGICVS01"), ("SSC1", "LGTESTC1")]:
        records.append(_edge(f"txn:{txn}", _prog(front), "STARTS"))
    records.append(_edge("job:GENASTRT", _prog("LGSTSQ"), "SUBMITS"))
    records.append(_edge("job:GENAINST", _prog("LGSETUP"), "SUBMITS"))

    # --- policy call cluster -------------------------------------------------
    business = ["LGAPOL01", "LGIPOL01", "LGUPOL01", "LGDPOL01"]
    for front in ["LGTESTP1", "LGTESTP2", "LGTESTP3", "LGTESTP4"]:
        for callee in business:
            records.append(_edge(_prog(front), _prog(callee), "CALLS"))
    for caller, callee in [("LGAPOL01", "LGAPDB01"), ("LGIPOL01", "LGIPDB01"),
                           ("LGUPOL01", "LGUPDB01"), ("LGDPOL01", "LGDPDB01"),
                           ("LGIPDB01", "LGIPDB02")]:
        records.append(_edge(_prog(caller), _prog(callee), "CALLS"))

    # --- customer call chain ---------------------------------------------------
    for callee in ["LGACUS01", "LGICUS01", "LGUCUS01"]:
        records.append(_edge(_prog("LGTESTC1"), _prog(callee), "CALLS"))
    for caller, callee in [("LGACUS01", "LGACDB01"), ("LGICUS01", "LGICDB01"),
                           ("LGUCUS01", "LGUCDB01")]:
        records.append(_edge(_prog(caller), _prog(callee), "CALLS"))
    records.append(_edge(_prog("LGWEBST5"), _prog("LGICUS01"), "CALLS"))

    # --- data access: policy side ------------------------------------------------
    type_tables = ["House", "Motor", "Endowment", "Commercial"]
    for table in ["Policy"] + type_tables + ["Claim"]:
        records.append(_edge(_prog("LGAPDB01"), _table(table), "ACCESSES", dict(_INSERT)))
    records.append(_edge(_prog("LGAPDB01"), _table("Customer"), "ACCESSES", dict(_READ)))
    for table in ["Policy"] + type_tables:
        records.append(_edge(_prog("LGIPDB01"), _table(table), "ACCESSES", dict(_READ)))
        records.append(_edge(_prog("LGUPDB01"), _table(table), "ACCESSES", dict(_UPDATE)))
        records.append(_edge(_prog("LGDPDB01"), _table(table), "ACCESSES", dict(_DELETE)))
    for table in ["Policy", "Claim"]:
        records.append(_edge(_prog("LGIPDB02"), _table(table), "ACCESSES", dict(_READ)))
    for prog in business:
        records.append(_edge(_prog(prog), "queue:GENAERRS", "ACCESSES", dict(_WRITEQ)))

    # --- data access: customer / random customer / utilities ----------------------
    records.append(_edge(_prog("LGACDB01"), _table("Customer"), "ACCESSES", dict(_INSERT)))
    records.append(_edge(_prog("LGACDB01"), "dataset:KSDSCUST", "ACCESSES",
                         {"access_type": "CICS:WRITE", "crud": "CU", "role": "updater"}))
    records.append(_edge(_prog("LGICDB01"), _table("Customer"), "ACCESSES", dict(_READ)))
    records.append(_edge(_prog("LGUCDB01"), _table("Customer"), "ACCESSES", dict(_UPDATE)))
    records.append(_edge(_prog("LGUCDB01"), "dataset:KSDSCUST", "ACCESSES",
                         {"access_type": "CICS:WRITE", "crud": "U", "role": "updater"}))
    records.append(_edge(_prog("LGICVS01"), "dataset:KSDSCUST", "ACCESSES",
                         {"access_type": "CICS:READ", "role": "reader"}))
    records.append(_edge(_prog("LGICVS01"), "queue:GENACNTL", "ACCESSES",
                         {"access_type": "CICS:READ_QTS:CICS:WRITEQ_TS", "role": "updater"}))
    records.append(_edge(_prog("LGSTSQ"), "queue:GENAERRS", "ACCESSES", dict(_WRITEQ)))
    records.append(_edge(_prog("LGSETUP"), "file:INSTALL", "ACCESSES",
                         {"access_type": "READ", "crud": "R", "role": "reader"}))

    # --- application grouping -------------------------------------------------------
    for app_id, name in _APPS.items():
        records.append(_group(app_id, name, membership[app_id]))
    return records


def genapp_manifest(records) -> dict:
    node_counts: dict = {}
    edge_counts: dict = {}
    applications: dict = {}
    programs: dict = {}
    for rec in records:
        if rec["rec"] == "node":
            node_counts[rec["kind"]] = node_counts.get(rec["kind"], 0) + 1
            if rec["kind"] == "Program":
                programs[rec["id"]] = {
                    "name": rec["name"],
                    "loc": rec["attrs"]["loc"],
                    "cyclomatic": rec["attrs"]["cyclomatic"],
                }
        elif rec["rec"] == "edge":
            edge_counts[rec["kind"]] = edge_counts.get(rec["kind"], 0) + 1
        else:
            node_counts["Application"] = node_counts.get("Application", 0) + 1
            edge_counts["HAS"] = edge_counts.get("HAS", 0) + len(rec["members"])
            applications[rec["group_id"]] = {
                "name": rec["name"],
                "members": sorted(rec["members"]),
            }
    return {
        "node_counts": dict(sorted(node_counts.items())),
        "edge_counts": dict(sorted(edge_counts.items())),
        "applications": dict(sorted(applications.items())),
        "programs": dict(sorted(programs.items())),
        "total_nodes": sum(node_counts.values()),
        "total_edges": sum(edge_counts.values()),
    }


def records_to_lines(records) -> list:
    return [json.dumps(rec, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
            for rec in records]


def write_genapp(out_dir) -> tuple:
    """Write genapp.facts and genapp.manifest; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = genapp_records()
    facts_path = out_dir / "genapp.facts"
    manifest_path = out_dir / "genapp.manifest"
    header = "# GENAPP-like fixture estate. Generated; do not edit.\n"
    facts_path.write_text(header + "\n".join(records_to_lines(records)) + "\n",
                          encoding="utf-8")
    manifest_path.write_text(json.dumps(genapp_manifest(records), indent=2, sort_keys=True)
                             + "\n", encoding="utf-8")
    return facts_path, manifest_path


# ---------------------------------------------------------------------------
# Synthetic desk-scale estate
# ---------------------------------------------------------------------------


def synthetic_records(node_count: int = 100_000, edge_count: int = 400_000,
                      rng_seed: int = 7, cluster_size: int = 4500):
    """A deterministic synthetic estate of exactly node_count nodes and
    edge_count distinct edges (HAS included).

    Application A00 holds one transaction (txn:T0) that starts a CALLS
    cluster of ``cluster_size`` programs plus same-application tables, so
    expanding from txn:T0 under the default policy reaches well past the
    cluster size. Remaining nodes and edges are spread across the other
    applications with no cross-application calls into the cluster.
    """
    rng = random.Random(rng_seed)
    n_apps = 10
    apps = [f"app:A{i:02d}" for i in range(n_apps)]
    records = []
    membership = {app: [] for app in apps}

    def add_node(app, node_id, kind, name, attrs=None):
        records.append(_node(node_id, kind, name, attrs))
        membership[app].append(node_id)

    cluster_tables = max(200, cluster_size // 9)
    n_txns = 200
    n_jobs = 100
    fixed = n_apps + n_txns + n_jobs + cluster_size + cluster_tables
    remaining = node_count - fixed
    if remaining < 1000:
        raise ValueError("node_count too small for the synthetic layout")
    n_programs = int(remaining * 0.7)
    n_data = remaining - n_programs

    # Cluster app A00.
    add_node(apps[0], "txn:T0", "Transaction", "T0")
    for i in range(cluster_size):
        add_node(apps[0], f"prog:C{i}", "Program", f"C{i}",
                 {"loc": 100 + (i % 900), "cyclomatic": 1 + (i % 30)})
    for i in range(cluster_tables):
        add_node(apps[0], f"table:D{i}", "Table", f"D{i}")

    # Everything else spreads across A01..A09.
    other_apps = apps[1:]
    programs_by_app = {app: [] for app in other_apps}
    data_by_app = {app: [] for app in other_apps}
    for i in range(n_programs):
        app = other_apps[i % len(other_apps)]
        node_id = f"prog:P{i}"
        add_node(app, node_id, "Program", f"P{i}",
                 {"loc": 50 + (i % 1200), "cyclomatic": 1 + (i % 40)})
        programs_by_app[app].append(node_id)
    data_kinds = ["Table", "File", "Queue", "Dataset"]
    for i in range(n_data):
        app = other_apps[i % len(other_apps)]
        kind = data_kinds[i % len(data_kinds)]
        node_id = f"{kind.lower()}:X{i}"
        add_node(app, node_id, kind, f"X{i}")
        data_by_app[app].append(node_id)
    for i in range(n_txns - 1):
        app = other_apps[i % len(other_apps)]
        add_node(app, f"txn:T{i + 1}", "Transaction", f"T{i + 1}")
    for i in range(n_jobs):
        app = other_apps[i % len(other_apps)]
        add_node(app, f"job:J{i}", "Job", f"J{i}")

    # --- edges ---------------------------------------------------------
    has_edges = sum(len(v) for v in membership.values())
    budget = edge_count - has_edges
    if budget < cluster_size * 2:
        raise ValueError("edge_count too small for the synthetic layout")
    seen = set()
    plain_edges = []

    def add_edge(src, dst, kind, attrs=None):
        key = (src, dst, kind)
        if key in seen or src == dst:
            return False
        seen.add(key)
        plain_edges.append(_edge(src, dst, kind, attrs))
        return True

    # Cluster wiring: a spanning chain plus random intra-cluster calls and
    # same-application table accesses (absorbed on expansion).
    add_edge("txn:T0", "prog:C0", "STARTS")
    for i in range(1, cluster_size):
        add_edge(f"prog:C{rng.randrange(i)}", f"prog:C{i}", "CALLS")
    for i in range(cluster_size // 2):
        add_edge(f"prog:C{rng.randrange(cluster_size)}",
                 f"prog:C{rng.randrange(cluster_size)}", "CALLS")
    for i in range(cluster_tables):
        add_edge(f"prog:C{rng.randrange(cluster_size)}", f"table:D{i}", "ACCESSES",
                 dict(_READ))

    # Control entries for the other apps.
    for i in range(n_txns - 1):
        app = other_apps[i % len(other_apps)]
        progs = programs_by_app[app]
        if progs:
            add_edge(f"txn:T{i + 1}", rng.choice(progs), "STARTS")
    for i in range(n_jobs):
        app = other_apps[i % len(other_apps)]
        progs = programs_by_app[app]
        if progs:
            add_edge(f"job:J{i}", rng.choice(progs), "SUBMITS")

    # Fill the remaining budget with same-application CALLS and ACCESSES.
    attempts = 0
    max_attempts = budget * 30
    while len(plain_edges) < budget and attempts < max_attempts:
        attempts += 1
        app = other_apps[rng.randrange(len(other_apps))]
        progs = programs_by_app[app]
        data = data_by_app[app]
        if not progs:
            continue
        if rng.random() < 0.6 or not data:
            add_edge(rng.choice(progs), rng.choice(progs), "CALLS")
        else:
            add_edge(rng.choice(progs), rng.choice(data), "ACCESSES", dict(_READ))
    if len(plain_edges) != budget:
        raise RuntimeError("synthetic generator could not hit the edge budget")

    records.extend(plain_edges)
    chunk = 5000
    for app in apps:
        members = membership[app]
        for i in range(0, len(members), chunk):
            records.append(_group(app, app.split(":", 1)[1], members[i:i + chunk]))
    manifest = {
        "node_count": node_count,
        "edge_count": edge_count,
        "cluster_seed": "txn:T0",
        "cluster_size": cluster_size,
        "rng_seed": rng_seed,
    }
    return records, manifest


def write_synthetic(out_dir, node_count: int = 100_000, edge_count: int = 400_000,
                    rng_seed: int = 7) -> tuple:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records, manifest = synthetic_records(node_count, edge_count, rng_seed)
    facts_path = out_dir / "synthetic.facts"
    manifest_path = out_dir / "synthetic.manifest"
    with open(facts_path, "w", encoding="utf-8") as fh:
        fh.write("# synthetic desk-scale estate\n")
        for line in records_to_lines(records):
            fh.write(line + "\n")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    return facts_path, manifest_path
