"""Command-line front door.

Subcommands:
  verify-points   check every embedded table point against its curve equation
  verify-maps     map pairings, commuting square, Pell invariants, round trips
  verify-tower    cubic-tower residuals for one d (or all six)
  modular         product value, recovered pair, j, residual table for one d
  search          bounded searches (rational height on Ks, integral box on K1/K3)
  report          the full battery in one run

Exit codes: 0 all checks pass, 1 at least one failure, 2 bad usage, 3 I/O
error.  JSON output serializes every number as a string (exact "p/q"
rationals, decimals with an explicit error radius); the schema ships as
report_schema.json next to this module.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__
from .curves import (
    CurveId, coord_names, is_on_curve, is_singular_point, paper_points,
    rational_paper_points, serialize_coord, table_as_json,
)
from .fixedreal import FixedReal
from .maps import (
    MapDomainError, cover_k3_to_k6, euler_resolvent_check, k1_to_k3,
    k1_to_ks, k2_to_k6, k3_to_ks, ks_to_k3, pair_k1_to_k2, pell_params,
)
from .modular import (
    CLASS_NUMBER_ONE_DS, InvalidDiscriminantError, ModularContext, gamma2_of,
    j_invariant, paper_labels, recover_pair, schlafli_w, verify_tower,
    weber_product_selftest,
)
from .search import reconcile, search_integral, search_ks


@dataclass
class Check:
    id: str
    status: str  # pass | fail | skip
    details: str = ""
    values: Dict[str, str] = field(default_factory=dict)


@dataclass
class Report:
    command: str
    checks: List[Check] = field(default_factory=list)
    elapsed: float = 0.0

    def add(self, id: str, ok: bool, details: str = "", **values):
        self.checks.append(Check(
            id, "pass" if ok else "fail", details,
            {k: str(v) for k, v in values.items()},
        ))

    def failed(self) -> List[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> dict:
        return {
            "tool": "curveatlas",
            "version": __version__,
            "schema_version": 1,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "command": self.command,
            "elapsed_seconds": f"{self.elapsed:.3f}",
            "checks": [
                {
                    "id": c.id,
                    "status": c.status,
                    **({"details": c.details} if c.details else {}),
                    **({"values": c.values} if c.values else {}),
                }
                for c in self.checks
            ],
        }

    def to_text(self) -> str:
        lines = [f"curveatlas {__version__} :: {self.command}"]
        for c in self.checks:
            line = f"  [{c.status.upper():4s}] {c.id}"
            if c.details:
                line += f"  {c.details}"
            lines.append(line)
            for k, v in c.values.items():
                lines.append(f"          {k} = {v}")
        npass = sum(1 for c in self.checks if c.status == "pass")
        nfail = len(self.failed())
        lines.append(
            f"  {npass} pass, {nfail} fail, "
            f"{len(self.checks) - npass - nfail} skip  ({self.elapsed:.2f}s)"
        )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# check builders


def checks_verify_points(report: Report) -> None:
    for curve in (CurveId.K3, CurveId.K1, CurveId.KS):
        for rec in paper_points(curve):
            pid = f"{curve}:({serialize_coord(rec.pt[0])},{serialize_coord(rec.pt[1])})"
            ok = is_on_curve(curve, rec.pt)
            details = f"d={rec.d}" if rec.d is not None else ""
            report.add(f"point:{pid}", ok, details)


def checks_singularity(report: Report) -> None:
    """(1,2) is the unique double point among the rational K3 entries."""
    singular = [
        rec.pt for rec in rational_paper_points(CurveId.K3)
        if is_singular_point(CurveId.K3, rec.pt)
    ]
    report.add(
        "singular:K3", singular == [(Fraction(1), Fraction(2))],
        "unique double point (1,2)",
    )


_EXPECTED_KS_TO_K3 = {
    (Fraction(1), Fraction(4)): (Fraction(7), Fraction(26)),
    (Fraction(2), Fraction(14)): (Fraction(-17), Fraction(150)),
    (Fraction(2), Fraction(-14)): (Fraction(-9, 17), Fraction(6, 289)),
    (Fraction(1, 2), Fraction(-7, 4)): (Fraction(-155, 79), Fraction(42486, 6241)),
    (Fraction(1, 2), Fraction(7, 4)): (Fraction(3), Fraction(6)),
    (Fraction(0), Fraction(0)): (Fraction(3), Fraction(14)),
    (Fraction(1), Fraction(-4)): (Fraction(-1), Fraction(2)),
    (Fraction(-1), Fraction(4)): (Fraction(-3), Fraction(6)),
    (Fraction(-1), Fraction(-4)): (Fraction(1), Fraction(6)),
}

_PELL_EXPECTED = {
    3: (2, -3, 2), 11: (-2, -1, 0), 19: (-2, 3, -2),
    43: (-14, -3, -2), 67: (14, -17, 12), 163: (82, -99, 70),
}


def checks_verify_maps(report: Report, n_random: int = 500) -> None:
    # pairing of the 9 KS table points with the 9 non-exceptional K3 points
    for zw, xy in _EXPECTED_KS_TO_K3.items():
        img = ks_to_k3(zw)
        back = k3_to_ks(img)
        report.add(
            f"map:ks_to_k3:({serialize_coord(zw[0])},{serialize_coord(zw[1])})",
            img == xy and back == zw,
            f"-> ({serialize_coord(img[0])},{serialize_coord(img[1])}), round trip",
        )
    for pt in ((Fraction(1), Fraction(2)), (Fraction(-1), Fraction(-2))):
        try:
            k3_to_ks(pt)
            report.add(f"map:k3_to_ks:exceptional:{pt}", False, "no domain error")
        except MapDomainError as e:
            report.add(
                f"map:k3_to_ks:exceptional:({pt[0]},{pt[1]})", True,
                f"domain error, factors: {', '.join(e.factors)}",
            )
    # commuting square on the K1 table and on random rational pairs
    rng = random.Random(1715)
    pairs = [rec.pt for rec in paper_points(CurveId.K1)]
    for _ in range(n_random):
        pairs.append((
            Fraction(rng.randint(-50, 50), rng.randint(1, 50)),
            Fraction(rng.randint(-50, 50), rng.randint(1, 50)),
        ))
    square_ok = all(
        cover_k3_to_k6(k1_to_k3(p)) == k2_to_k6(pair_k1_to_k2(p)) for p in pairs
    )
    report.add(
        "map:commuting-square", square_ok,
        f"K3->K6 after K1->K3 vs K2->K6 after the pair map, {len(pairs)} inputs",
    )
    euler_ok = all(euler_resolvent_check(p) for p in pairs)
    report.add("map:euler-resolvent", euler_ok, f"{len(pairs)} inputs")
    # Pell invariant over the 11 rational K3 points
    for rec in rational_paper_points(CurveId.K3):
        a2b2 = cover_k3_to_k6(rec.pt)
        on_k6 = is_on_curve(CurveId.K6, a2b2)
        tri = pell_params(a2b2)
        pid = f"map:pell:({serialize_coord(rec.pt[0])},{serialize_coord(rec.pt[1])})"
        if tri is None:
            report.add(pid, on_k6, "a2 = 1, Pell parameter undefined")
            continue
        ok = on_k6 and tri.residual() == 0
        vals = {"k": tri.k, "u": tri.u, "v": tri.v}
        if rec.d is not None:
            expected = _PELL_EXPECTED[rec.d]
            ok = ok and (tri.k, tri.u, tri.v) == expected
            vals["d"] = rec.d
        report.add(pid, ok, "u^2 - 2v^2 = 1", **vals)
    # K1 -> KS images of the table points with al3 != 0
    for rec in paper_points(CurveId.K1):
        pid = f"map:k1_to_ks:({rec.pt[0]},{rec.pt[1]})"
        if rec.pt[0] == 0:
            try:
                k1_to_ks(rec.pt)
                report.add(pid, False, "expected domain error")
            except MapDomainError:
                report.add(pid, True, "outside map domain (al3 = 0)")
            continue
        img = k1_to_ks(rec.pt)
        report.add(pid, is_on_curve(CurveId.KS, img),
                   f"-> ({serialize_coord(img[0])},{serialize_coord(img[1])})")


def checks_tower(report: Report, d: int, bits: Optional[int]) -> None:
    ctx = ModularContext.create(d, prec=bits)
    a3b3, al3be3 = paper_labels(d)
    pair = recover_pair(ctx)
    report.add(
        f"tower:d={d}:recover", pair == a3b3,
        f"recovered (a3,b3)={pair}, table {a3b3}, P={ctx.prec}",
    )
    j = j_invariant(ctx)
    g2 = gamma2_of(j)
    report.add(f"tower:d={d}:j-cube", g2 is not None, f"j={j}, gamma2={g2}")
    rep = verify_tower(ctx, a3b3, al3be3)
    for eq, res in rep.residuals.items():
        ok = res.magnitude_below(rep.threshold_bits())
        report.add(
            f"tower:d={d}:{eq}", ok,
            f"|residual| < 2^-{rep.threshold_bits()}",
            residual=res.decimal(40),
        )


def checks_modular(report: Report, d: int, bits: Optional[int]) -> None:
    ctx = ModularContext.create(d, prec=bits)
    w = schlafli_w(ctx)
    report.add(f"modular:d={d}:W", True, f"P={ctx.prec}", W=w.decimal(40))
    pair = recover_pair(ctx, w=w)
    report.add(f"modular:d={d}:pair", True, "", a3=pair[0], b3=pair[1])
    j = j_invariant(ctx)
    report.add(f"modular:d={d}:j", True, "", j=j, gamma2=gamma2_of(j))
    checks_tower(report, d, bits)


def checks_search(report: Report, curve: CurveId, bound: int,
                  partitions: int, jobs: int) -> List:
    if curve is CurveId.KS:
        res = search_ks(bound, partitions=partitions, jobs=jobs)
        table = list(paper_points(CurveId.KS))
    else:
        res = search_integral(curve, bound, partitions=partitions, jobs=jobs)
        table = [
            r for r in rational_paper_points(curve)
            if r.pt[0].denominator == 1 and r.pt[1].denominator == 1
        ]
    rec = reconcile(res, table)
    report.add(
        f"search:{curve}:bound={bound}", not rec.search_only,
        f"found {len(res.found)} points, scanned {res.scanned}, "
        f"both={len(rec.both)}, paper_only={len(rec.paper_only)}, "
        f"search_only={len(rec.search_only)} in {res.elapsed:.2f}s",
    )
    for r in res.found:
        report.add(
            f"search:{curve}:point:({serialize_coord(r.pt[0])},{serialize_coord(r.pt[1])})",
            True,
        )
    return res.found


def checks_selftest(report: Report, bits_list=(64, 128, 256)) -> None:
    for p in bits_list:
        st = weber_product_selftest(p)
        # the defect itself is the measured quantity; the tracked radius is a
        # worst-case bound on that same defect, so it is not added here
        ok = abs(st.to_fraction()) < Fraction(1, 1 << (p - 8))
        report.add(
            f"selftest:product:P={p}", ok,
            f"|sigma*sigma1*sigma2 - sqrt2| < 2^-{p - 8}",
            defect=st.decimal(40),
        )


# ---------------------------------------------------------------------------
# output


def render_csv(records) -> str:
    buf = io.StringIO()
    wtr = csv.writer(buf)
    wtr.writerow(["curve", "coord1", "coord2", "provenance", "d"])
    for r in records:
        wtr.writerow([
            str(r.curve), serialize_coord(r.pt[0]), serialize_coord(r.pt[1]),
            str(r.provenance), r.d if r.d is not None else "",
        ])
    return buf.getvalue()


def emit(report: Report, fmt: str, out: Optional[str],
         csv_records=None) -> int:
    if fmt == "json":
        text = json.dumps(report.to_json(), indent=2)
    elif fmt == "csv":
        text = render_csv(csv_records or [])
    else:
        text = report.to_text()
    try:
        if out:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3
    return 1 if report.failed() else 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="curveatlas",
        description="exact verification atlas for the class-number-one curve family",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", help="write the report to this path")

    common(sub.add_parser("verify-points", help="check all embedded tables"))
    common(sub.add_parser("verify-maps", help="check coverings and birational maps"))

    p = sub.add_parser("verify-tower", help="cubic-tower residuals")
    p.add_argument("--d", type=int, help="one discriminant (default: all six)")
    p.add_argument("--bits", type=int, help="working precision")
    common(p)

    p = sub.add_parser("modular", help="product values, pair recovery, j")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bits", type=int)
    common(p)

    p = sub.add_parser("search", help="bounded exact point search")
    p.add_argument("--curve", choices=("ks", "k1", "k3"), required=True)
    p.add_argument("--height", type=int, help="z-height bound (ks)")
    p.add_argument("--box", type=int, help="|x| bound (k1/k3)")
    p.add_argument("--partitions", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    common(p)

    p = sub.add_parser("report", help="full battery")
    p.add_argument("--bits", type=int)
    p.add_argument("--height", type=int, default=200)
    p.add_argument("--box", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    report = Report(command=args.command)
    csv_records = None
    start = time.monotonic()
    try:
        if args.command == "verify-points":
            checks_verify_points(report)
            csv_records = [
                r for c in (CurveId.K3, CurveId.K1, CurveId.KS)
                for r in paper_points(c)
            ]
        elif args.command == "verify-maps":
            checks_verify_maps(report)
        elif args.command == "verify-tower":
            ds = (args.d,) if args.d is not None else CLASS_NUMBER_ONE_DS
            for d in ds:
                checks_tower(report, d, args.bits)
        elif args.command == "modular":
            checks_modular(report, args.d, args.bits)
        elif args.command == "search":
            curve = {"ks": CurveId.KS, "k1": CurveId.K1, "k3": CurveId.K3}[args.curve]
            if curve is CurveId.KS:
                if args.height is None or args.height < 1:
                    ap.error("--height must be >= 1 for the ks search")
                bound = args.height
            else:
                if args.box is None or args.box < 1:
                    ap.error("--box must be >= 1 for integral searches")
                bound = args.box
            csv_records = checks_search(
                report, curve, bound, args.partitions, args.jobs
            )
        elif args.command == "report":
            checks_verify_points(report)
            checks_singularity(report)
            checks_verify_maps(report)
            for d in CLASS_NUMBER_ONE_DS:
                checks_tower(report, d, args.bits)
            checks_selftest(report)
            checks_search(report, CurveId.KS, args.height, 4, args.jobs)
            checks_search(report, CurveId.K3, args.box, 4, args.jobs)
            checks_search(report, CurveId.K1, args.box, 4, args.jobs)
    except InvalidDiscriminantError as e:
        ap.error(str(e))
    report.elapsed = time.monotonic() - start
    return emit(report, args.format, args.out, csv_records)


if __name__ == "__main__":
    sys.exit(main())
