"""Command-line surface.

Subcommands: registry (list | emit), validate, cohomology, admissible,
cotangent, prolong, normalize, ctg-report.  Every run produces a report
with the command echo, input digests and results, rendered as plain text
or JSON (--json) carrying identical data.

Exit codes: 0 success, 1 mathematical validation failure, 2
internal-consistency failure, 64 usage or document-format error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra, cotangent, validate
from gradedlie.admissible import (
    Involution,
    btheta_metric,
    check_admissible,
    cotangent_standard_metric,
)
from gradedlie.cochain import complex_cache
from gradedlie.ctg_cohomology import adunat_report
from gradedlie.docio import (
    emit_curvature,
    emit_document,
    emit_gauge,
    parse_curvature,
    parse_document,
)
from gradedlie.errors import (
    DocumentFormatError,
    GradedLieError,
    InternalInconsistencyError,
)
from gradedlie.hodge import identity_metric, metric_context
from gradedlie.normalization import max_curvature_degree, normalization_engine
from gradedlie.prolongation import prolong
from gradedlie.registry import registry_get, registry_names

EX_OK = 0
EX_MATH = 1
EX_INTERNAL = 2
EX_USAGE = 64


@dataclass
class RunReport:
    command: list[str]
    digests: dict[str, str] = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    status: int = EX_OK

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "input_digests": self.digests,
                "results": self.results,
                "exit_status": self.status,
            },
            indent=2,
        ) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}"]
        for name, digest in self.digests.items():
            lines.append(f"input {name}: sha256 {digest}")
        lines.extend(_render(self.results, indent=0))
        lines.append(f"exit status: {self.status}")
        return "\n".join(lines) + "\n"


def _render(obj, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                out.append(f"{pad}{k}:")
                out.extend(_render(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                out.extend(_render(v, indent + 1))
            else:
                out.append(f"{pad}- {v}")
    else:
        out.append(f"{pad}{obj}")
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EX_USAGE)


def _read_input(path: str) -> tuple[str, str]:
    """Returns (text, digest)."""
    if path == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.is_file():
            raise DocumentFormatError(f"no such file: {path}")
        text = p.read_text()
    return text, hashlib.sha256(text.encode()).hexdigest()


def _load_algebra(path: str, report: RunReport):
    text, digest = _read_input(path)
    report.digests[path] = digest
    return parse_document(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gradedlie", description="Graded Lie algebra workbench")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument("--output-dir", default=".", help="directory for output files")
    parser.add_argument(
        "--parallel",
        action="store_true",
        help="compute independent blocks in a thread pool (bit-identical output)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("registry", help="list or emit built-in algebras")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--identity-metric", action="store_true", help="embed the identity metric")

    p = sub.add_parser("validate", help="validate an algebra document")
    p.add_argument("path")
    p.add_argument(
        "--strict-exactness",
        action="store_true",
        help="also require the degree-0 action on h_-1 to be injective",
    )

    p = sub.add_parser("cohomology", help="dim H^k_l table, two computation paths")
    p.add_argument("path")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l-min", type=int, default=1)
    p.add_argument("--l-max", type=int, default=None)
    p.add_argument("--metric", choices=["embedded", "identity"], default="embedded")

    p = sub.add_parser("admissible", help="admissibility verdict for the embedded metric")
    p.add_argument("path")

    p = sub.add_parser("cotangent", help="emit t*(g), with the standard metric if g has one")
    p.add_argument("path")
    p.add_argument("--output", default=None, help="write the document here instead of stdout")

    p = sub.add_parser("prolong", help="prolongation space dimensions")
    p.add_argument("path")
    p.add_argument("--max-k", type=int, required=True)

    p = sub.add_parser("normalize", help="Hodge-normalize a curvature family")
    p.add_argument("path")
    p.add_argument("curvature")

    p = sub.add_parser("ctg-report", help="closed-form vs general H^1 dims on t*(g)")
    p.add_argument("path")
    return parser


def _cmd_registry(args, report: RunReport) -> int:
    if args.action == "list":
        report.results["algebras"] = registry_names()
        return EX_OK
    if not args.name:
        raise DocumentFormatError("registry emit needs a name")
    g = registry_get(args.name)
    metric = identity_metric(g) if args.identity_metric else None
    report.results["document"] = emit_document(g, metric)
    return EX_OK


def _cmd_validate(args, report: RunReport) -> int:
    g, _, _ = _load_algebra(args.path, report)
    rep = validate(
        g,
        require_fundamental=True,
        check_exact_action=True if args.strict_exactness else None,
    )
    report.results["algebra"] = g.name
    report.results["valid"] = rep.valid
    if not rep.valid:
        report.results["failures"] = [str(f) for f in rep.failures]
        return EX_MATH
    return EX_OK


def _pick_metric(g, metric, choice: str):
    if choice == "identity" or metric is None:
        return identity_metric(g)
    return metric


def _cmd_cohomology(args, report: RunReport, parallel: bool) -> int:
    g, metric, _ = _load_algebra(args.path, report)
    rep = validate(g, require_fundamental=True)
    if not rep.valid:
        report.results["failures"] = [str(f) for f in rep.failures]
        return EX_MATH
    metric = _pick_metric(g, metric, args.metric)
    ctx = metric_context(g, metric)
    l_max = args.l_max if args.l_max is not None else g.height + 2 * g.depth
    degrees = list(range(args.l_min, l_max + 1))

    def one(l: int):
        harm = ctx.hodge(args.k, l).harmonic.dim
        kerd = linalg.kernel_basis(ctx.cache.differential(args.k, l)).dim
        imd = linalg.rank(ctx.cache.differential(args.k - 1, l)) if args.k > 0 else 0
        return {"l": l, "harmonic": harm, "ker_im": kerd - imd}

    if parallel and degrees:
        with ThreadPoolExecutor(max_workers=4) as pool:
            rows = list(pool.map(one, degrees))
    else:
        rows = [one(l) for l in degrees]
    report.results["algebra"] = g.name
    report.results["k"] = args.k
    report.results["table"] = rows
    if any(r["harmonic"] != r["ker_im"] for r in rows):
        report.results["two_path_agreement"] = False
        return EX_INTERNAL
    report.results["two_path_agreement"] = True
    return EX_OK


def _cmd_admissible(args, report: RunReport) -> int:
    g, metric, invol = _load_algebra(args.path, report)
    rep = validate(g, require_fundamental=True)
    if not rep.valid:
        report.results["failures"] = [str(f) for f in rep.failures]
        return EX_MATH
    if metric is None and invol is not None:
        theta = Involution(invol)
        metric = btheta_metric(g, theta)
        report.results["metric_source"] = "killing-involution"
    elif metric is not None:
        report.results["metric_source"] = "embedded"
    else:
        raise DocumentFormatError("document carries neither a metric nor an involution")
    verdict = check_admissible(g, metric)
    report.results["algebra"] = g.name
    report.results["admissible"] = verdict.admissible
    if not verdict.admissible:
        tag, a, z, w, lhs, rhs = verdict.witness
        report.results["witness"] = {
            "identity": tag,
            "A": a,
            "Z": z,
            "W": w,
            "lhs": [str(x) for x in lhs],
            "rhs": [str(x) for x in rhs],
        }
    return EX_OK


def _cmd_cotangent(args, report: RunReport) -> int:
    g, metric, _ = _load_algebra(args.path, report)
    if metric is not None:
        h, hmetric, theta, _ = cotangent_standard_metric(g, metric)
        doc = emit_document(h, hmetric, theta.matrix)
    else:
        h = cotangent(g)
        doc = emit_document(h)
    report.results["algebra"] = h.name
    report.results["dim"] = h.dim
    if args.output:
        Path(args.output).write_text(doc)
        report.results["written"] = args.output
    else:
        report.results["document"] = doc
    return EX_OK


def _cmd_prolong(args, report: RunReport) -> int:
    g, _, _ = _load_algebra(args.path, report)
    levels, finite = prolong(g, args.max_k)
    report.results["algebra"] = g.name
    report.results["dims"] = [lv.dim for lv in levels]
    report.results["finite_type"] = finite
    return EX_OK


def _cmd_normalize(args, report: RunReport, output_dir: str) -> int:
    g, metric, _ = _load_algebra(args.path, report)
    rep = validate(g, require_fundamental=True)
    if not rep.valid:
        report.results["failures"] = [str(f) for f in rep.failures]
        return EX_MATH
    if metric is None:
        metric = identity_metric(g)
        report.results["metric_source"] = "identity"
    else:
        report.results["metric_source"] = "embedded"
    text, digest = _read_input(args.curvature)
    report.digests[args.curvature] = digest
    K = parse_curvature(text, g)
    engine = normalization_engine(g, metric)
    Kn, gauge, trace = engine.normalize(K)
    if not engine.is_normal(Kn):
        raise InternalInconsistencyError("normalize postcondition failed")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.curvature).stem if args.curvature != "-" else "curvature"
    normal_path = out / f"{stem}.normal.json"
    gauge_path = out / f"{stem}.gauge.json"
    normal_path.write_text(emit_curvature(Kn))
    gauge_path.write_text(emit_gauge(gauge))
    report.results["algebra"] = g.name
    report.results["degrees_processed"] = [t["degree"] for t in trace]
    report.results["trace"] = [
        {
            "degree": t["degree"],
            "harmonic": t["dims"][0],
            "coexact": t["dims"][1],
            "exact": t["dims"][2],
            "exact_removed": t["exact_removed"],
        }
        for t in trace
    ]
    report.results["normal_curvature"] = str(normal_path)
    report.results["gauge_correction"] = str(gauge_path)
    return EX_OK


def _cmd_ctg_report(args, report: RunReport) -> int:
    g, metric, _ = _load_algebra(args.path, report)
    rep = adunat_report(g, metric)
    report.results["base_algebra"] = g.name
    report.results["rows"] = [
        {
            "l": r.l,
            "dim_S": r.dim_s if r.dim_s is not None else "-",
            "dim_Z": r.dim_z,
            "dim_B": r.dim_b,
            "closed_form": r.closed_form,
            "general": r.general,
            "agree": r.agree,
        }
        for r in rep.rows
    ]
    report.results["all_agree"] = rep.all_agree
    return EX_OK if rep.all_agree else EX_INTERNAL


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EX_USAGE
    report = RunReport(command=["gradedlie"] + argv)
    try:
        if args.command == "registry":
            status = _cmd_registry(args, report)
        elif args.command == "validate":
            status = _cmd_validate(args, report)
        elif args.command == "cohomology":
            status = _cmd_cohomology(args, report, args.parallel)
        elif args.command == "admissible":
            status = _cmd_admissible(args, report)
        elif args.command == "cotangent":
            status = _cmd_cotangent(args, report)
        elif args.command == "prolong":
            status = _cmd_prolong(args, report)
        elif args.command == "normalize":
            status = _cmd_normalize(args, report, args.output_dir)
        elif args.command == "ctg-report":
            status = _cmd_ctg_report(args, report)
        else:  # pragma: no cover
            return EX_USAGE
    except DocumentFormatError as e:
        report.results["error"] = str(e)
        status = EX_USAGE
    except InternalInconsistencyError as e:
        report.results["error"] = f"internal consistency: {e}"
        status = EX_INTERNAL
    except GradedLieError as e:
        report.results["error"] = str(e)
        status = EX_MATH
    report.status = status
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return status


if __name__ == "__main__":
    raise SystemExit(main())
