"""Command-line front end.

    cylq enumerate {cyl,tight,dhk} ...
    cylq gf SOURCE ...
    cylq check SUITE ...
    cylq bijection {to-dhk,to-tight} --input JSON

Data goes to stdout (or ``--out``); diagnostics go to stderr.  Exit codes:
0 success, 1 a failed check, 2 bad parameters, 3 a non-tight bijection input.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import identities as ids
from .cylinder import CylindricPartition, Profile, cylindric_gf, enumerate_cylindric, enumerate_tight, tight_gf
from .dhk import DHKPartition, NotTightError, dhk_from_tight, enumerate_dhk, gf_dhk, tight_from_dhk
from .series import BivariateSeries, format_series, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_TIGHT = 0, 1, 2, 3

DEFAULT_QCAP = 12
DEFAULT_ZCAP = 12
DEFAULT_MAX_LEVEL = 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _profile(args) -> Profile:
    if args.profile is None:
        raise UsageError("--profile is required")
    try:
        return Profile(args.profile)
    except ValueError as exc:
        raise UsageError(str(exc))


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _level_ground(args):
    _need(args, "level", "ground")
    if args.level < 1 or not 0 <= args.ground <= args.level:
        raise UsageError(f"need level >= 1 and 0 <= ground <= level, got {args.level}, {args.ground}")
    return args.level, args.ground


# -- output -------------------------------------------------------------------


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _rows_text(rows) -> str:
    return "|".join(" ".join(map(str, r)) for r in rows)


def render_series(f: BivariateSeries, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(to_json(f))
    if fmt == "csv":
        return _csv(["n", "m", "coeff"], f.terms())
    if f.z_cap == 0:
        return ",".join(str(row[0]) for row in f.rows)
    return format_series(f)


# -- enumerate ------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.cap < 0:
        raise UsageError("--cap must be >= 0")
    if args.kind == "dhk":
        level, ground = _level_ground(args)
        items = enumerate_dhk(level, ground, args.cap)
        if args.format == "json":
            text = _dump_json([d.to_json() for d in items])
        elif args.format == "csv":
            text = _csv(
                ["weight", "num_parts", "colors", "parts"],
                ((d.weight, d.num_parts, " ".join(map(str, d.colors)), " ".join(map(str, d.parts))) for d in items),
            )
        else:
            text = "\n".join(str(d) for d in items)
    else:
        profile = _profile(args)
        items = (enumerate_tight if args.kind == "tight" else enumerate_cylindric)(profile, args.cap)
        if args.format == "json":
            text = _dump_json([p.to_json() for p in items])
        elif args.format == "csv":
            text = _csv(["weight", "max", "rows"], ((p.weight, p.max_part, _rows_text(p.rows)) for p in items))
        else:
            text = "\n".join(f"{p.weight}\t{p.max_part}\t{_rows_text(p.rows)}" for p in items)
    _emit(args, text)
    return EXIT_OK


# -- gf -------------------------------------------------------------------------


def compute_gf(args) -> BivariateSeries:
    q_cap, z_cap = args.qcap, args.zcap
    if q_cap < 0 or z_cap < 0:
        raise UsageError("caps must be >= 0")
    src = args.source
    try:
        if src == "enum-tight":
            return tight_gf(_profile(args), q_cap, z_cap)
        if src == "enum-cyl":
            return cylindric_gf(_profile(args), q_cap, z_cap)
        if src == "enum-dhk":
            level, ground = _level_ground(args)
            return gf_dhk(level, ground, q_cap, z_cap)
        if src in ("multisum-T", "multisum-C"):
            _need(args, "level", "b")
            fn = ids.eval_T_multisum if src == "multisum-T" else ids.eval_C_multisum
            return fn(args.level, args.b, q_cap, z_cap)
        if src == "level1":
            _need(args, "r")
            return ids.eval_level1(args.r, q_cap, z_cap)
        if src == "product":
            return ids.eval_product_univariate(_profile(args), q_cap)
        if src == "S":
            _need(args, "level", "v")
            return ids.eval_S(args.level, args.t or 0, args.v, q_cap, z_cap)
    except ValueError as exc:
        raise UsageError(str(exc))
    raise UsageError(f"unknown source {src!r}")


def cmd_gf(args) -> int:
    _emit(args, render_series(compute_gf(args), args.format))
    return EXIT_OK


# -- check ----------------------------------------------------------------------


def two_row_profiles(max_level):
    return [(ell - a, a) for ell in range(1, max_level + 1) for a in range(ell + 1)]


def three_row_profiles(max_level):
    return [c for c in itertools.product(range(max_level + 1), repeat=3) if 1 <= sum(c) <= max_level]


def suite_cw(q, z, mutate, profile=None, max_level=DEFAULT_MAX_LEVEL):
    profiles = [profile] if profile else two_row_profiles(max_level) + three_row_profiles(min(max_level, 2))
    return [ids.check_cw(p, q, z, mutate) for p in profiles]


def suite_diamond(q, z, mutate, level=None, mode=None, max_level=DEFAULT_MAX_LEVEL):
    levels = [level] if level else range(1, max_level + 1)
    modes = [mode] if mode else ids.DIAMOND_MODES
    return [r for ell in levels for m in modes for r in ids.check_diamond(ell, q, z, m, mutate)]


def suite_rec2(q, z, mutate, profile=None, max_level=DEFAULT_MAX_LEVEL):
    profiles = [profile] if profile else two_row_profiles(max_level)
    return [ids.check_tight_rec2(c1, c2, q, z, mutate) for c1, c2 in profiles]


def suite_dhkrec(q, z, mutate, level=None, ground=None, max_level=DEFAULT_MAX_LEVEL):
    if level:
        pairs = [(level, a) for a in ([ground] if ground is not None else range(level + 1))]
    else:
        pairs = [(ell, a) for ell in range(1, max_level + 1) for a in range(ell + 1)]
    return [ids.check_dhk_rec(ell, a, q, z, mutate) for ell, a in pairs]


def suite_fourterm(q, z, mutate, level=None, i=None, max_level=DEFAULT_MAX_LEVEL):
    levels = [level] if level else range(2, max_level + 1)
    out = []
    for ell in levels:
        for k in [i] if i else ids.four_term_indices(ell):
            out.append(ids.check_four_term(ell, k, q, z, mutate))
    return out


def rel_grid(max_level, t_max=2, lo=-2, hi=2):
    """(l, t, v) with l <= max_level, 0 <= t <= t_max and admissible v in [lo, hi]^l."""
    for ell in range(1, max_level + 1):
        for v in itertools.product(range(lo, hi + 1), repeat=ell):
            if ids.is_admissible(v):
                for t in range(t_max + 1):
                    yield ell, t, v


def suite_rel(q, z, mutate, level=None, j=None, t=None, v=None, max_level=3):
    if level and v is not None:
        js = [j] if j is not None else range(level + 1)
        return [ids.check_rel(level, jj, t or 0, v, q, z, mutate) for jj in js]
    grid = rel_grid(level or max_level)
    if level:
        grid = (g for g in grid if g[0] == level)
    return [ids.check_rel(ell, jj, tt, vv, q, z, mutate) for ell, tt, vv in grid for jj in range(ell + 1)]


def suite_closedforms(q, z, mutate, max_level=DEFAULT_MAX_LEVEL):
    out = []
    for ell in range(1, max_level + 1):
        for b in range(ell // 2 + 1):
            out += ids.check_T_multisum(ell, b, q, z)
            out += ids.check_C_multisum(ell, b, q, z)
    for r in (2, 3, 4):
        out += ids.check_level1(r, q, z)
    return out


def suite_products(q, z, mutate, profile=None, max_level=DEFAULT_MAX_LEVEL):
    profiles = [profile] if profile else two_row_profiles(max_level) + three_row_profiles(min(max_level, 2))
    return [r for p in profiles for r in ids.check_products(p, q)]


def suite_bijection(q, z, mutate, level=None, ground=None, cap=None, max_level=DEFAULT_MAX_LEVEL):
    cap = q if cap is None else cap
    if level:
        pairs = [(level, a) for a in ([ground] if ground is not None else range(level + 1))]
    else:
        pairs = [(ell, a) for ell in range(1, max_level + 1) for a in range(ell + 1)]
    return [r for ell, a in pairs for r in ids.check_bijection(ell, a, cap)]


def suite_unimodal(q, z, mutate, profile=None, max_level=DEFAULT_MAX_LEVEL):
    profiles = [profile] if profile else two_row_profiles(max_level)
    out = []
    for p in profiles:
        for label, f in (("tight", tight_gf(Profile(p), q, z)), ("cyl", cylindric_gf(Profile(p), q, z))):
            rows = ids.check_unimodal(f)
            # rows with q-degree above z_cap may be cut off in z
            bad = [row for row in rows if not row.conforms and row.n <= z]
            first = None if not bad else (bad[0].n, bad[0].violation_at, f.coeff(bad[0].n, bad[0].violation_at))
            name = f"unimodal {label} ({','.join(map(str, p))})"
            out.append(ids.CheckReport(name, q, z, not bad, first, asserted=False))
    return out


SUITES = {
    "cw": suite_cw,
    "diamond": suite_diamond,
    "rec2": suite_rec2,
    "dhkrec": suite_dhkrec,
    "fourterm": suite_fourterm,
    "rel": suite_rel,
    "closedforms": suite_closedforms,
    "bijection": suite_bijection,
    "products": suite_products,
    "unimodal": suite_unimodal,
}


def _run_task(task):
    name, q, z, mutate, kwargs = task
    return SUITES[name](q, z, mutate, **kwargs)


def _threads() -> int:
    raw = os.environ.get("CYLQ_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CYLQ_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise UsageError("CYLQ_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _suite_kwargs(args):
    s = args.suite
    kw = {}
    profile = tuple(args.profile) if args.profile else None
    if s in ("cw", "rec2", "products", "unimodal") and profile:
        if s == "rec2" and len(profile) != 2:
            raise UsageError("rec2 needs a 2-row profile")
        kw["profile"] = profile
    if s in ("diamond", "dhkrec", "fourterm", "rel", "bijection") and args.level is not None:
        if args.level < 1:
            raise UsageError("--level must be >= 1")
        kw["level"] = args.level
    if s in ("dhkrec", "bijection") and args.ground is not None:
        if args.level is None or not 0 <= args.ground <= args.level:
            raise UsageError("--ground needs --level and must lie in [0, level]")
        kw["ground"] = args.ground
    if s == "diamond" and args.mode:
        kw["mode"] = args.mode
    if s == "fourterm" and args.i is not None:
        if args.level is None or args.i not in ids.four_term_indices(args.level):
            raise UsageError("--i needs --level and must satisfy 1 <= i <= level/2")
        kw["i"] = args.i
    if s == "rel":
        if args.v is not None:
            if args.level is None or len(args.v) != args.level:
                raise UsageError("--v needs --level and must have that many entries")
            if not ids.is_admissible(args.v):
                raise UsageError(f"vector {args.v} is inadmissible")
            kw.update(v=args.v, t=args.t, j=args.j)
    if s == "bijection" and args.cap is not None:
        kw["cap"] = args.cap
    if args.max_level is not None and not kw.get("level") and not kw.get("profile"):
        if args.max_level < 1:
            raise UsageError("--max-level must be >= 1")
        kw["max_level"] = args.max_level
    return kw


def collect_reports(args) -> list:
    q, z = args.qcap, args.zcap
    if q < 0 or z < 0:
        raise UsageError("caps must be >= 0")
    if args.suite == "all":
        max_level = args.max_level or DEFAULT_MAX_LEVEL
        tasks = []
        for name in SUITES:
            kw = {"max_level": min(max_level, 3) if name == "rel" else max_level}
            tasks.append((name, q, z, args.mutate, kw))
    else:
        tasks = [(args.suite, q, z, args.mutate, _suite_kwargs(args))]
    threads = _threads()
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    return [r for chunk in results for r in chunk]


def render_reports(reports, fmt: str) -> str:
    if fmt == "json":
        rows = []
        for r in reports:
            d = r.to_json()
            if not r.asserted:
                d["report_only"] = True
            rows.append(d)
        return _dump_json(rows)
    if fmt == "csv":
        return _csv(
            ["name", "q_cap", "z_cap", "ok", "first_nonzero"],
            (
                (r.name, r.q_cap, r.z_cap, r.residual_zero, "" if r.first_nonzero_term is None else " ".join(map(str, r.first_nonzero_term)))
                for r in reports
            ),
        )
    lines = []
    for r in reports:
        status = "PASS" if r.residual_zero else ("NOTE" if not r.asserted else "FAIL")
        extra = "" if r.first_nonzero_term is None else f"  first nonzero (n, m, coeff) = {r.first_nonzero_term}"
        lines.append(f"{status}  {r.name}{extra}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    reports = collect_reports(args)
    _emit(args, render_reports(reports, args.format))
    failed = [r for r in reports if r.asserted and not r.residual_zero]
    print(f"{len(reports)} reports, {len(failed)} failed", file=sys.stderr)
    for r in failed[:10]:
        print(f"FAILED: {r.name} at {r.first_nonzero_term}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- bijection --------------------------------------------------------------------


def _read_input(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}")


def cmd_bijection(args) -> int:
    data = _read_input(args.input)
    try:
        if args.direction == "to-dhk":
            part = CylindricPartition.from_json(data)
            if part.profile.rank != 2 or part.profile.level < 1:
                raise UsageError("to-dhk needs a 2-row profile of level >= 1")
            try:
                lam = dhk_from_tight(part.rows, part.profile)
            except NotTightError:
                print(f"not tight: some positive part occurs in both rows of {_rows_text(part.rows)}", file=sys.stderr)
                return EXIT_NOT_TIGHT
            out = {"image": lam.to_json(), "text": str(lam), "weight": lam.weight, "num_parts": lam.num_parts,
                   "source_weight": part.weight, "source_max": part.max_part}
        else:
            lam = DHKPartition.from_json(data)
            rows, profile = tight_from_dhk(lam)
            image = CylindricPartition(rows, profile)
            out = {"image": image.to_json(), "weight": image.weight, "max_part": image.max_part,
                   "source_weight": lam.weight, "source_num_parts": lam.num_parts}
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad input: {exc}")
    _emit(args, _dump_json(out))
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cylq", description="Tight cylindric partitions and DHK partitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "plain"), default="json")
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("enumerate", help="list partitions in canonical order")
    p.add_argument("kind", choices=("cyl", "tight", "dhk"))
    p.add_argument("--profile", type=_int_list)
    p.add_argument("--level", type=int)
    p.add_argument("--ground", type=int)
    p.add_argument("--cap", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("gf", help="print a generating function")
    p.add_argument(
        "source", choices=("enum-tight", "enum-cyl", "enum-dhk", "multisum-T", "multisum-C", "level1", "product", "S")
    )
    p.add_argument("--profile", type=_int_list)
    p.add_argument("--level", type=int)
    p.add_argument("--ground", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--v", type=_int_list)
    p.add_argument("--qcap", type=int, default=DEFAULT_QCAP)
    p.add_argument("--zcap", type=int, default=DEFAULT_ZCAP)
    common(p)
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("check", help="run identity checks")
    p.add_argument("suite", choices=tuple(SUITES) + ("all",))
    p.add_argument("--profile", type=_int_list)
    p.add_argument("--level", type=int)
    p.add_argument("--ground", type=int)
    p.add_argument("--mode", choices=ids.DIAMOND_MODES)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--v", type=_int_list)
    p.add_argument("--cap", type=int)
    p.add_argument("--max-level", type=int)
    p.add_argument("--qcap", type=int, default=DEFAULT_QCAP)
    p.add_argument("--zcap", type=int, default=DEFAULT_ZCAP)
    p.add_argument("--mutate", action="store_true", help="perturb every identity; the run should then fail")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bijection", help="map between tight 2-row partitions and DHK partitions")
    p.add_argument("direction", choices=("to-dhk", "to-tight"))
    p.add_argument("--input", default="-", help="JSON text, a file path, or - for stdin")
    common(p)
    p.set_defaults(func=cmd_bijection)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cylq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
