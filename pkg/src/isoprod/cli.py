"""Command line interface.

Every subcommand reads one JSON document and runs over all the items the
command applies to, in sorted name order.  Exit codes: 0 when everything
computed and every verdict is positive, 2 when a certificate or constancy
check fails (the computation succeeded, the verdict is negative), 1 on
input or computation errors.  ``--json`` emits the machine block only; the
default prints both the human tables and the machine block.

The environment variable ISOPROD_GROUP_CAP overrides the group-order cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .actions import quotient_signatures, t1_equivariant
from .curves import arithmetic_genus, t1_dimension
from .document import Document, emit_document, parse_document
from .errors import DocumentError, IsoprodError
from .families import FamilyStratum, check_constancy, smoothing_chain
from .groups import DEFAULT_GROUP_CAP, format_perm
from .surfaces import certify_degeneration, kuranishi_dimension, surface_invariants

COMMANDS = (
    "validate",
    "genus",
    "t1",
    "t1-equivariant",
    "quotient",
    "surface-invariants",
    "kuranishi",
    "certify-degeneration",
    "check-family",
    "smooth",
)


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*["-" * w for w in widths])]
    lines.extend(fmt.format(*row) for row in rows)
    return lines


def _run_items(names, fn) -> tuple[dict, bool]:
    items: dict[str, dict] = {}
    had_error = False
    for name in sorted(names):
        try:
            items[name] = fn(name)
        except IsoprodError as exc:
            items[name] = {"error": str(exc)}
            had_error = True
    return items, had_error


def _rat(x: Fraction) -> int | str:
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _breakdown(t1) -> dict:
    return {
        "node_inv": t1.node_inv,
        "branch_inv": t1.branch_inv,
        "minus_chi_inv": t1.minus_chi_inv,
        "total": t1.total,
    }


def _cmd_validate(doc: Document):
    items = {
        "group": {
            "degree": doc.group.degree,
            "order": doc.group.order,
            "elements": [format_perm(p) for p in doc.group.elements],
        },
        "curves": sorted(doc.curves),
        "actions": sorted(doc.actions),
        "surfaces": sorted(doc.surfaces),
        "families": sorted(doc.families),
    }
    human = [
        f"group: degree {doc.group.degree}, order {doc.group.order}",
        "elements: "
        + ", ".join(f"{i}={format_perm(p)}" for i, p in enumerate(doc.group.elements)),
        f"curves: {', '.join(sorted(doc.curves)) or '(none)'}",
        f"actions: {', '.join(sorted(doc.actions)) or '(none)'}",
        f"surfaces: {', '.join(sorted(doc.surfaces)) or '(none)'}",
        f"families: {', '.join(sorted(doc.families)) or '(none)'}",
        "all items validated",
    ]
    return items, human, False, False


def _cmd_genus(doc: Document):
    items, had_error = _run_items(
        doc.curves, lambda n: {"arithmetic_genus": arithmetic_genus(doc.curves[n])}
    )
    rows = [
        [n, str(d.get("arithmetic_genus", d.get("error")))] for n, d in items.items()
    ]
    return items, _table(["curve", "genus"], rows), False, had_error


def _cmd_t1(doc: Document):
    def one(n):
        b = t1_dimension(doc.curves[n])
        return {
            "delta": b.delta,
            "branch_term": b.branch_term,
            "minus_chi": b.minus_chi,
            "total": b.total,
        }

    items, had_error = _run_items(doc.curves, one)
    rows = []
    for n, d in items.items():
        if "error" in d:
            rows.append([n, "-", "-", "-", d["error"]])
        else:
            rows.append(
                [n, str(d["delta"]), str(d["branch_term"]), str(d["minus_chi"]), str(d["total"])]
            )
    human = _table(["curve", "delta", "branch", "-chi", "total"], rows)
    return items, human, False, had_error


def _cmd_t1_equivariant(doc: Document):
    items, had_error = _run_items(
        doc.actions, lambda n: _breakdown(t1_equivariant(doc.actions[n]))
    )
    rows = []
    for n, d in items.items():
        if "error" in d:
            rows.append([n, "-", "-", "-", d["error"]])
        else:
            rows.append(
                [n, str(d["node_inv"]), str(d["branch_inv"]), str(d["minus_chi_inv"]), str(d["total"])]
            )
    human = _table(["action", "node", "branch", "quotient", "total"], rows)
    return items, human, False, had_error


def _cmd_quotient(doc: Document):
    def one(n):
        names = doc.names_for_action(n)
        return {
            "signatures": [
                {
                    "representative": names.vertices[s.representative],
                    "g_prime": s.g_prime,
                    "b": s.b,
                    "contribution": s.contribution,
                }
                for s in quotient_signatures(doc.actions[n])
            ]
        }

    items, had_error = _run_items(doc.actions, one)
    rows = []
    for n, d in items.items():
        if "error" in d:
            rows.append([n, "-", "-", "-", d["error"]])
        else:
            for s in d["signatures"]:
                rows.append(
                    [n, s["representative"], str(s["g_prime"]), str(s["b"]), str(s["contribution"])]
                )
    human = _table(["action", "component", "g'", "b", "3g'-3+b"], rows)
    return items, human, False, had_error


def _cmd_surface_invariants(doc: Document):
    def one(n):
        inv = surface_invariants(doc.surfaces[n])
        return {
            "chi": _rat(inv.chi),
            "k_squared": _rat(inv.k_squared),
            "euler": _rat(inv.euler),
            "q": inv.q,
            "p_g": _rat(inv.p_g) if inv.p_g is not None else None,
        }

    items, had_error = _run_items(doc.surfaces, one)
    rows = []
    for n, d in items.items():
        if "error" in d:
            rows.append([n, "-", "-", "-", "-", d["error"]])
        else:
            rows.append(
                [
                    n,
                    str(d["chi"]),
                    str(d["k_squared"]),
                    str(d["euler"]),
                    str(d["q"]) if d["q"] is not None else "not computed",
                    str(d["p_g"]) if d["p_g"] is not None else "not computed",
                ]
            )
    human = _table(["surface", "chi", "K^2", "e", "q", "p_g"], rows)
    return items, human, False, had_error


def _cmd_kuranishi(doc: Document):
    def one(n):
        k = kuranishi_dimension(doc.surfaces[n])
        return {
            "factor1": _breakdown(k.factor1),
            "factor2": _breakdown(k.factor2),
            "total": k.total,
        }

    items, had_error = _run_items(doc.surfaces, one)
    rows = []
    for n, d in items.items():
        if "error" in d:
            rows.append([n, "-", "-", "-", d["error"]])
        else:
            rows.append(
                [n, str(d["factor1"]["total"]), str(d["factor2"]["total"]), str(d["total"]), ""]
            )
    human = _table(["surface", "factor1", "factor2", "total", ""], rows)
    return items, human, False, had_error


def _cmd_certify(doc: Document):
    def one(n):
        cert = certify_degeneration(doc.surfaces[n])
        return {
            "passed": cert.passed,
            "first_failure": cert.first_failure,
            "conditions": [
                {
                    "key": c.key,
                    "description": c.description,
                    "citation": c.citation,
                    "passed": c.passed,
                    "detail": c.detail,
                }
                for c in cert.conditions
            ],
        }

    items, had_error = _run_items(doc.surfaces, one)
    negative = any("error" not in d and not d["passed"] for d in items.values())
    human = []
    for n, d in items.items():
        if "error" in d:
            human.append(f"{n}: error: {d['error']}")
            continue
        human.append(f"{n}: {'PASS' if d['passed'] else 'FAIL'}")
        for c in d["conditions"]:
            status = "pass" if c["passed"] else "FAIL"
            human.append(f"  [{status}] {c['key']}: {c['detail']}  ({c['citation']})")
    return items, human, negative, had_error


def _cmd_check_family(doc: Document):
    def one(n):
        strata = [
            FamilyStratum(label, doc.actions[label]) for label in doc.families[n]
        ]
        report = check_constancy(strata)
        return {
            "verdict": report.verdict,
            "constant_value": report.constant_value,
            "offending": list(report.offending) if report.offending else None,
            "bound_violations": [list(p) for p in report.bound_violations],
            "strata": [
                {
                    "label": v.label,
                    "delta": v.delta,
                    "genus": v.genus,
                    **(_breakdown(v.t1) if v.t1 else {"error": v.error}),
                }
                for v in report.strata
            ],
        }

    items, had_error = _run_items(doc.families, one)
    negative = False
    human = []
    for n, d in items.items():
        if "error" in d:
            human.append(f"{n}: error: {d['error']}")
            continue
        if d["verdict"] == "constant":
            human.append(f"{n}: constant at {d['constant_value']}")
        elif d["verdict"] == "violation":
            negative = True
            a, b = d["offending"]
            human.append(f"{n}: VIOLATION between strata {a!r} and {b!r}")
        else:
            had_error = True
            human.append(f"{n}: error in some stratum")
        rows = []
        for s in d["strata"]:
            if "error" in s:
                rows.append([s["label"], str(s["delta"]), str(s["genus"]), "-", "-", "-", s["error"]])
            else:
                rows.append(
                    [
                        s["label"],
                        str(s["delta"]),
                        str(s["genus"]),
                        str(s["node_inv"]),
                        str(s["branch_inv"]),
                        str(s["minus_chi_inv"]),
                        str(s["total"]),
                    ]
                )
        human.extend(
            "  " + line
            for line in _table(
                ["stratum", "delta", "genus", "node", "branch", "quotient", "total"], rows
            )
        )
    return items, human, negative, had_error


def _cmd_smooth(doc: Document):
    def one(n):
        chain = smoothing_chain(doc.actions[n])
        return {
            "strata": [
                {
                    "label": s.label,
                    "delta": s.action.graph.n_edges,
                    "genus": arithmetic_genus(s.action.graph),
                    "ramification_orbits": len(s.action.ramification_orbits),
                }
                for s in chain.strata
            ],
            "obstructions": list(chain.obstructions),
        }

    items, had_error = _run_items(doc.actions, one)
    human = []
    for n, d in items.items():
        if "error" in d:
            human.append(f"{n}: error: {d['error']}")
            continue
        steps = " -> ".join(
            f"{s['label']}(delta={s['delta']})" for s in d["strata"]
        )
        human.append(f"{n}: {steps}")
        for o in d["obstructions"]:
            human.append(f"  obstruction: {o}")
    return items, human, False, had_error


_DISPATCH = {
    "validate": (_cmd_validate, None),
    "genus": (_cmd_genus, "curves"),
    "t1": (_cmd_t1, "curves"),
    "t1-equivariant": (_cmd_t1_equivariant, "actions"),
    "quotient": (_cmd_quotient, "actions"),
    "surface-invariants": (_cmd_surface_invariants, "surfaces"),
    "kuranishi": (_cmd_kuranishi, "surfaces"),
    "certify-degeneration": (_cmd_certify, "surfaces"),
    "check-family": (_cmd_check_family, "families"),
    "smooth": (_cmd_smooth, "actions"),
}


@dataclass(frozen=True)
class Report:
    """Result of one subcommand run: a JSON-able machine block and a
    human-readable block derived from the same data."""

    machine: dict
    human: str


def run(command: str, doc: Document) -> tuple[Report, int]:
    """Run one subcommand over a parsed document; returns (report, exit code)."""
    fn, section = _DISPATCH[command]
    if section is not None and not getattr(doc, section):
        machine = {"command": command, "items": {}, "note": "nothing to do"}
        return Report(machine, f"nothing to do: document has no {section}"), 0
    items, human_lines, negative, had_error = fn(doc)
    machine = {"command": command, "items": items}
    code = 1 if had_error else (2 if negative else 0)
    return Report(machine, "\n".join(human_lines)), code


def _group_cap() -> int:
    raw = os.environ.get("ISOPROD_GROUP_CAP")
    if raw is None:
        return DEFAULT_GROUP_CAP
    try:
        cap = int(raw)
        if cap < 1:
            raise ValueError
        return cap
    except ValueError:
        raise DocumentError(
            [f"ISOPROD_GROUP_CAP: not a positive integer: {raw!r}"]
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoprod",
        description=(
            "Exact deformation-space dimensions for stable curves with finite "
            "group actions, and certification of stable degenerations of "
            "product-quotient surfaces."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run {name} over a document")
        p.add_argument("document", help="path to a JSON input document")
        p.add_argument(
            "--json", action="store_true", help="emit the machine block only"
        )
        if name == "validate":
            p.add_argument(
                "--emit",
                action="store_true",
                help="also echo the canonical form of the document",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.document, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        doc = parse_document(text, cap=_group_cap())
    except DocumentError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1

    report, code = run(args.command, doc)
    machine = dict(report.machine)
    if args.command == "validate" and getattr(args, "emit", False):
        machine["document"] = emit_document(doc)
    if args.json:
        print(json.dumps(machine, indent=2, sort_keys=True))
    else:
        print(report.human)
        print()
        print(json.dumps(machine, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
