"""Command-line surface: bound evaluation, grid sweeps, geometry checks.

Exit codes: 0 success, 1 property failure, 2 invalid input, 3 capacity
exceeded.  Output formats: json (full structure), csv (height-aligned
magnitude columns), text.  The seed and configuration are recorded in every
output; BOUNDS_SEED serves as the seed fallback.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import constants as ct
from . import magnitude as mg
from . import parshin as ps
from . import verify as vf

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_CAPACITY = 3

_MIN_THRESHOLD_BITS = 1 << 10


@dataclass
class RunConfig:
    command: str
    g: list
    q: list
    s: list
    seed: int
    exact_threshold_bits: int
    precision_digits: int
    fmt: str
    inject: dict = field(default_factory=dict)
    k_factor: int = 1
    suites: Optional[list] = None
    trials: Optional[int] = None
    curves: Optional[tuple] = None

    def as_record(self) -> dict:
        rec = {"command": self.command, "g": self.g, "q": self.q, "s": self.s,
               "seed": self.seed, "exact_threshold_bits": self.exact_threshold_bits,
               "precision_digits": self.precision_digits, "format": self.fmt}
        if self.inject:
            rec["inject"] = self.inject
        if self.suites:
            rec["suites"] = self.suites
        if self.trials is not None:
            rec["trials"] = self.trials
        return rec


def _parse_range(text: str) -> list:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _parse_inject(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        out[key.strip()] = int(value)
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bounds",
        description="Certified effective bounds for curve families and "
                    "rational points, plus desk-scale geometry verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_params=True):
        if needs_params:
            p.add_argument("--g", required=True, help="fiber genus (int or a..b)")
            p.add_argument("--q", required=True, help="base genus (int or a..b)")
            p.add_argument("--s", default="0", help="degeneracy locus size (int or a..b)")
            p.add_argument("--grid", action="store_true",
                           help="force one record per parameter point")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--exact-threshold-bits", type=int, default=None)
        p.add_argument("--precision-digits", type=int, default=None)
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "text"),
                       default="text")
        p.add_argument("--inject", default="",
                       help="toy trace mode, e.g. S=1,P=1,cover_sum=36")

    p_shaf = sub.add_parser("shafarevich", help="family-count bound")
    common(p_shaf)
    p_shaf.add_argument("--k-factor", type=int, default=1,
                        help="sensitivity-only extra factor in D (default 1)")

    p_mord = sub.add_parser("mordell", help="rational-point bound")
    common(p_mord)

    p_geom = sub.add_parser("geom-verify", help="geometry property suites")
    common(p_geom, needs_params=False)
    p_geom.add_argument("--suite", action="append", dest="suites",
                        choices=sorted(vf.ALL_SUITES),
                        help="run one suite (repeatable); default: all")
    p_geom.add_argument("--trials", type=int, default=None)
    p_geom.add_argument("--degree", type=int, default=None,
                        help="max degree for the recovery suite")
    p_geom.add_argument("--curves", default=None,
                        help="named pair for the matching suite, e.g. twisted-cubic,line")
    return parser


def _config_from_args(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("BOUNDS_SEED", "0"))
    threshold = args.exact_threshold_bits
    if threshold is not None and threshold < _MIN_THRESHOLD_BITS:
        raise ct.InvalidParams(f"exact threshold must be >= {_MIN_THRESHOLD_BITS} bits")
    cfg = RunConfig(
        command=args.command,
        g=_parse_range(args.g) if hasattr(args, "g") and args.g else [],
        q=_parse_range(args.q) if hasattr(args, "q") and args.q else [],
        s=_parse_range(args.s) if hasattr(args, "s") and args.s else [0],
        seed=seed,
        exact_threshold_bits=threshold or mg.current_config().exact_threshold_bits,
        precision_digits=args.precision_digits or mg.current_config().precision_digits,
        fmt=args.fmt,
        inject=_parse_inject(args.inject) if getattr(args, "inject", "") else {},
        k_factor=getattr(args, "k_factor", 1),
        suites=getattr(args, "suites", None),
        trials=getattr(args, "trials", None),
        curves=tuple(args.curves.split(",")) if getattr(args, "curves", None) else None,
    )
    return cfg


def _grid(cfg: RunConfig):
    for g in cfg.g:
        for q in cfg.q:
            for s in cfg.s:
                yield g, q, s


def _trace_records(trace) -> list:
    return [entry.as_record() for entry in trace]


def _magnitude_csv_fields(m: mg.Magnitude) -> dict:
    if m.is_exact:
        return {"kind": "exact", "value": mg.render(m), "height": "", "lo": "", "hi": ""}
    return {"kind": "tower", "value": "", "height": m.height,
            "lo": str(m.body.lo), "hi": str(m.body.hi)}


def _emit(cfg: RunConfig, records: list, summary: Optional[dict], out) -> None:
    if cfg.fmt == "json":
        doc = {"config": cfg.as_record()}
        if len(records) == 1 and summary is None:
            doc.update(records[0])
        else:
            doc["records"] = records
            if summary:
                doc["summary"] = summary
        json.dump(doc, out, indent=2)
        out.write("\n")
        return
    if cfg.fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(["g", "q", "s", "name", "kind", "value", "height", "lo", "hi"])
        for rec in records:
            params = rec.get("params", {})
            rows = rec.get("trace", [])
            rows = rows + [{"name": "result", "citation": "",
                            "magnitude": rec["result"]}] if "result" in rec else rows
            for t in rows:
                m = mg.from_record(t["magnitude"])
                f = _magnitude_csv_fields(m)
                writer.writerow([params.get("g"), params.get("q"), params.get("s"),
                                 t["name"], f["kind"], f["value"], f["height"],
                                 f["lo"], f["hi"]])
        return
    # text
    for rec in records:
        params = rec.get("params")
        if params:
            out.write(f"(g, q, s) = ({params['g']}, {params['q']}, {params['s']})\n")
        for key, val in rec.get("constants", {}).items():
            out.write(f"  {key} = {val}\n")
        if "result" in rec:
            out.write(f"  result = {mg.render(mg.from_record(rec['result']))}\n")
        for note in rec.get("notes", []):
            out.write(f"  note: {note}\n")
    if summary:
        out.write(f"summary: {json.dumps(summary)}\n")


def _shafarevich_record(cfg: RunConfig, g: int, q: int, s: int) -> dict:
    if cfg.inject:
        inject = dict(cfg.inject)
        a = mg.Magnitude.exact(inject.pop("A", 1))
        qq = mg.Magnitude.exact(inject.pop("Q", 1))
        dd = mg.Magnitude.exact(inject.pop("D", 1))
        trace: list = []
        _, direct, _ = ct.assemble_shafarevich(q, a, qq, dd, trace=trace)
        return {"params": {"g": g, "q": q, "s": s},
                "constants": {}, "trace": _trace_records(trace),
                "result": mg.to_record(direct),
                "notes": ["toy injection mode"]}
    report = ct.shafarevich_report(ct.FamilyParams(g, q, s), cfg.k_factor)
    constants = {name: mg.render(value) for name, value in report.constants.named().items()}
    notes = []
    if report.rerouted_from is not None:
        notes.append(f"q replaced by 2 and s replaced by 2s: "
                     f"(q={q}, s={s}) -> (q=2, s={2 * s})")
    return {"params": {"g": g, "q": q, "s": s}, "constants": constants,
            "trace": _trace_records(report.trace),
            "result": mg.to_record(report.bound), "notes": notes}


def _mordell_record(cfg: RunConfig, g: int, q: int, s: int) -> dict:
    if cfg.inject:
        inject = dict(cfg.inject)
        s_factor = mg.Magnitude.exact(inject.pop("S", 1))
        inner = mg.Magnitude.exact(inject.pop("P", 1))
        gp = mg.Magnitude.exact(inject.pop("g_prime", ps.g_prime(g).value))
        cover = mg.Magnitude.exact(inject.pop("cover_sum", 1))
        trace: list = []
        bound = ps.assemble_mordell(s_factor, inner, gp, cover, trace=trace)
        return {"params": {"g": g, "q": q, "s": s},
                "constants": {"g_prime": mg.render(gp)},
                "trace": _trace_records(trace),
                "result": mg.to_record(bound),
                "notes": ["toy injection mode"]}
    report = ps.mordell_report(ct.FamilyParams(g, q, s))
    constants = {
        "g_prime": mg.render(report.g_prime),
        "S(g')": mg.render(report.s_factor),
        "cover_sum_bound": mg.render(report.cover_sum),
    }
    notes = []
    if report.nonpositive_genus:
        notes.append("NonpositiveGenus: C(g,q,s) = 0")
    return {"params": {"g": g, "q": q, "s": s}, "constants": constants,
            "trace": _trace_records(report.trace),
            "inner_trace": _trace_records(report.inner_trace),
            "result": mg.to_record(report.bound), "notes": notes}


def _monotone_summary(records: list) -> Optional[dict]:
    if len(records) < 2:
        return None
    orderings = []
    for prev, cur in zip(records, records[1:]):
        a = mg.from_record(prev["result"])
        b = mg.from_record(cur["result"])
        orderings.append({
            "from": prev["params"], "to": cur["params"],
            "ordering": mg.compare(a, b).value,
        })
    return {"pairwise": orderings}


def cmd_shafarevich(cfg: RunConfig, out) -> int:
    mg.configure(precision_digits=cfg.precision_digits,
                 exact_threshold_bits=cfg.exact_threshold_bits)
    records = [_shafarevich_record(cfg, g, q, s) for g, q, s in _grid(cfg)]
    summary = _monotone_summary(records) if len(records) > 1 else None
    _emit(cfg, records, summary, out)
    return EXIT_OK


def cmd_mordell(cfg: RunConfig, out) -> int:
    mg.configure(precision_digits=cfg.precision_digits,
                 exact_threshold_bits=cfg.exact_threshold_bits)
    records = [_mordell_record(cfg, g, q, s) for g, q, s in _grid(cfg)]
    summary = _monotone_summary(records) if len(records) > 1 else None
    _emit(cfg, records, summary, out)
    return EXIT_OK


def cmd_geom_verify(cfg: RunConfig, out, degree: Optional[int] = None) -> int:
    names = cfg.suites or list(vf.ALL_SUITES)
    results = []
    for name in names:
        fn = vf.ALL_SUITES[name]
        call_kwargs = {}
        if cfg.trials is not None and name != "nondegeneracy":
            call_kwargs["trials"] = cfg.trials
        if name == "recovery" and degree is not None:
            call_kwargs["max_degree"] = degree
        if name == "matching" and cfg.curves is not None:
            call_kwargs["curves"] = cfg.curves
        results.append(fn(cfg.seed, **call_kwargs))
    all_ok = all(r.ok for r in results)
    if cfg.fmt == "json":
        json.dump({"config": cfg.as_record(),
                   "suites": [r.as_record() for r in results],
                   "ok": all_ok}, out, indent=2)
        out.write("\n")
    else:
        for r in results:
            status = "pass" if r.ok else "FAIL"
            out.write(f"{r.name}: {status} {r.passed}/{r.trials} "
                      f"({r.elapsed:.2f}s, seed {r.seed})\n")
            for failure in r.failures[:10]:
                out.write(f"  failure: {failure}\n")
        out.write("all suites pass\n" if all_ok else "property failures present\n")
    return EXIT_OK if all_ok else EXIT_PROPERTY_FAILURE


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config_from_args(args)
        if args.command == "shafarevich":
            return cmd_shafarevich(cfg, out)
        if args.command == "mordell":
            return cmd_mordell(cfg, out)
        if args.command == "geom-verify":
            return cmd_geom_verify(cfg, out, degree=getattr(args, "degree", None))
        parser.error(f"unknown command {args.command!r}")
        return EXIT_INVALID_INPUT
    except (ct.InvalidParams, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except mg.CapacityExceeded as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
