"""Command-line verifier: batch runs over prime ranges with cached tables.

Commands: classes, chartable, decompose, verify, corollaries, papertable.
Exit codes: 0 all checks verified, 1 mathematical mismatch, 2 usage error.
Output is deterministic; the timestamp and timing fields are suppressed by
--no-timestamp so that identical configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chartable import SCHEMA, CharacterData, TableValidationError, validate_table
from .cuspform import (
    READINGS,
    RESIDUES,
    SET_LABELS,
    DecompositionResult,
    VerificationError,
    coefficient_line,
    corollary_all_appear,
    corollary_odd_multiplicity,
    decompose_dl,
    linearity_fit,
    remark_pipeline,
    verify_torus_placement,
    weinstein_character,
)
from .numtheory import is_prime, primes_in_range

EXIT_OK = 0
EXIT_MISMATCH = 1


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# -- cache ---------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get("DLCUSP_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dlcusp"


def cache_path(cache_dir: Path, p: int) -> Path:
    return cache_dir / f"sl2_p{p}.json"


def load_character_data(p: int, cache_dir: Path | None) -> tuple[CharacterData, bool]:
    """Build or load the per-prime tables; invalid cache entries are rebuilt."""
    if cache_dir is not None:
        path = cache_path(cache_dir, p)
        if path.is_file():
            try:
                doc = json.loads(path.read_text())
                if doc.get("schema") == SCHEMA and doc.get("p") == p:
                    return CharacterData.from_json_dict(doc), True
            except (ValueError, KeyError, OSError):
                pass
    data = CharacterData(p)
    if cache_dir is not None:
        _atomic_write(cache_path(cache_dir, p), _json_dump(data.to_json_dict()))
    return data, False


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- shared helpers --------------------------------------------------------------


def _require_prime(parser: argparse.ArgumentParser, p: int):
    if not is_prime(p) or p < 7:
        parser.error("p must be prime >= 7")


def _selected_primes(parser, args) -> list[int]:
    lo, hi = args.range
    if lo > hi:
        parser.error("range minimum exceeds maximum")
    primes = [p for p in primes_in_range(lo, hi) if p >= 7]
    if args.mod12 is not None:
        if args.mod12 % 12 not in (1, 5, 7, 11):
            parser.error("--mod12 must be 1, 5, 7, or 11")
        primes = [p for p in primes if p % 12 == args.mod12 % 12]
    if not primes:
        parser.error("no primes >= 7 in the selected range")
    return primes


def _cache_dir_from_args(args) -> Path | None:
    if getattr(args, "no_cache", False):
        return None
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    return default_cache_dir()


def _decomposition_rows(res: DecompositionResult) -> list[dict]:
    rows = []
    for (torus, k) in sorted(res.coefficients):
        rows.append(
            {
                "torus": torus,
                "k_orbit": k,
                "set_label": res.labels[(torus, k)].label,
                "c": str(res.coefficients[(torus, k)]),
            }
        )
    return rows


# -- classes / chartable -----------------------------------------------------------


def cmd_classes(parser, args) -> int:
    p = args.p
    _require_prime(parser, p)
    data, _ = load_character_data(p, _cache_dir_from_args(args))
    table = data.table
    doc = {
        "p": p,
        "group_order": table.group_order,
        "class_count": len(table),
        "classes": [
            {
                "index": i,
                "kind": r.kind,
                "trace": r.trace,
                "size": r.size,
                "centralizer_order": r.centralizer_order,
                "representative": list(r.rep.entries()),
                "inverse_class": r.inverse_class,
            }
            for i, r in enumerate(table.classes)
        ],
    }
    if args.format == "json":
        print(_json_dump(doc))
    else:
        print(f"SL2(F_{p}): order {table.group_order}, {len(table)} conjugacy classes")
        for c in doc["classes"]:
            a, b, cc, d = c["representative"]
            print(
                f"  [{c['index']:3d}] {c['kind']:<20} trace={c['trace']:<4} size={c['size']:<7} "
                f"centralizer={c['centralizer_order']:<7} rep=[[{a},{b}],[{cc},{d}]]"
            )
        print(f"  class equation: {' + '.join(str(c['size']) for c in doc['classes'])} = {table.group_order}")
    return EXIT_OK


def cmd_chartable(parser, args) -> int:
    p = args.p
    _require_prime(parser, p)
    data, _ = load_character_data(p, _cache_dir_from_args(args))
    if args.format == "json":
        print(_json_dump(data.to_json_dict()))
        return EXIT_OK
    print(f"irreducible characters of SL2(F_{p}): {len(data.irreducibles)}")
    for irr in data.irreducibles:
        print(f"  {irr.name:<28} degree {irr.degree}")
        print("    " + " | ".join(v.to_text() for v in irr.chi.values))
    return EXIT_OK


# -- decompose ----------------------------------------------------------------------


def _decompose_doc(data: CharacterData, reading: str) -> dict:
    res = decompose_dl(data, reading=reading)
    return {
        "p": data.p,
        "residue": data.p % 12,
        "reading": reading,
        "coefficients": _decomposition_rows(res),
        "exact": res.exact,
        "table_match": res.table_match,
        "mismatches": res.mismatches,
    }


def cmd_decompose(parser, args) -> int:
    p = args.p
    _require_prime(parser, p)
    data, _ = load_character_data(p, _cache_dir_from_args(args))
    readings = list(READINGS) if args.reading == "both" else [args.reading]
    docs = [_decompose_doc(data, r) for r in readings]
    if args.reading == "both":
        out = {
            "p": p,
            "residue": p % 12,
            "readings": {d["reading"]: d for d in docs},
            "matching_readings": [d["reading"] for d in docs if d["exact"] and d["table_match"]],
        }
    else:
        out = docs[0]
    if args.format == "json":
        print(_json_dump(out))
    elif args.format == "csv":
        print("p,residue,reading,torus,k_orbit,set_label,c,exact,table_match")
        for d in docs:
            for row in d["coefficients"]:
                print(
                    f"{p},{p % 12},{d['reading']},{row['torus']},{row['k_orbit']},"
                    f"{row['set_label']},{row['c']},{d['exact']},{d['table_match']}"
                )
    else:
        for d in docs:
            print(f"p={p} (residue {p % 12} mod 12), reading={d['reading']}")
            print(f"  exact reconstruction: {d['exact']}   coefficient table match: {d['table_match']}")
            for row in d["coefficients"]:
                star = "" if row["c"] == "0" else "  *"
                print(f"  {row['torus']:<9} k={row['k_orbit']:<3} set {row['set_label']}  c = {row['c']}{star}")
            for mm in d["mismatches"]:
                print(f"  MISMATCH {mm}")
    if args.reading == "both":
        ok = bool(out["matching_readings"]) and all(d["exact"] for d in docs)
    else:
        ok = docs[0]["exact"] and docs[0]["table_match"]
    return EXIT_OK if ok else EXIT_MISMATCH


# -- verify -------------------------------------------------------------------------


def _verify_one(p: int, cache_dir_str: str | None, reading: str) -> dict:
    """Per-prime end-to-end verification; worker for the process pool."""
    cache_dir = Path(cache_dir_str) if cache_dir_str else None
    t0 = time.monotonic()
    data, hit = load_character_data(p, cache_dir)
    checks: dict[str, bool] = {}
    try:
        checks["table_valid"] = bool(validate_table(data)["orthonormal"])
    except TableValidationError:
        checks["table_valid"] = False
    try:
        verify_torus_placement(data)
        checks["torus_placement"] = True
    except VerificationError:
        checks["torus_placement"] = False
    try:
        s = weinstein_character(data)
        checks["degree_identity"] = True
    except VerificationError:
        s = None
        checks["degree_identity"] = False
    res = None
    if s is not None:
        try:
            res = decompose_dl(data, s, reading=reading)
            checks["exact"] = res.exact
            checks["table_match"] = res.table_match
            checks["remark_oracle"] = remark_pipeline(data) == res.coefficients
        except VerificationError:
            res = None
        if res is not None and p >= 23:
            try:
                checks["corollary_2"] = corollary_all_appear(data, res).complete
            except VerificationError:
                checks["corollary_2"] = False
    if res is None:
        checks["exact"] = checks["table_match"] = checks["remark_oracle"] = False
    return {
        "p": p,
        "residue": p % 12,
        "cache_hit": hit,
        "checks": checks,
        "status": "pass" if all(checks.values()) else "fail",
        "mismatches": res.mismatches if res is not None else [],
        "seconds": round(time.monotonic() - t0, 3),
        "decomposition": {
            "coefficients": {f"{t}:{k}": str(c) for (t, k), c in res.coefficients.items()},
            "labels": {f"{t}:{k}": lab.label for (t, k), lab in res.labels.items()},
        }
        if res is not None
        else None,
    }


def _run_pool(primes: list[int], jobs: int, cache_dir: Path | None, reading: str) -> list[dict]:
    cd = str(cache_dir) if cache_dir else None
    if jobs <= 1 or len(primes) == 1:
        return [_verify_one(p, cd, reading) for p in primes]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(_verify_one, primes, [cd] * len(primes), [reading] * len(primes)))
    return sorted(rows, key=lambda r: r["p"])


def _rebuild_results(rows: list[dict]) -> list[DecompositionResult]:
    """Reassemble just enough of each decomposition for the linearity fit."""
    from .cuspform import ThetaSetLabel

    out = []
    for row in rows:
        dec = row["decomposition"]
        if dec is None:
            continue
        coeffs = {}
        labels = {}
        for key, c in dec["coefficients"].items():
            torus, k = key.split(":")
            coeffs[(torus, int(k))] = Fraction(c)
        for key, lab in dec["labels"].items():
            torus, k = key.split(":")
            labels[(torus, int(k))] = ThetaSetLabel(lab, torus, "primary")
        out.append(
            DecompositionResult(
                p=row["p"], reading="primary", coefficients=coeffs, labels=labels,
                exact=True, table_match=True, multiplicities={},
            )
        )
    return out


def cmd_verify(parser, args) -> int:
    primes = _selected_primes(parser, args)
    rows = _run_pool(primes, args.jobs, _cache_dir_from_args(args), args.reading)
    lin = linearity_fit(_rebuild_results(rows))
    aggregate = all(r["status"] == "pass" for r in rows) and lin.ok
    report = {
        "schema": "dlcusp-verify/1",
        "version": __version__,
        "range": list(args.range),
        "mod12": args.mod12,
        "reading": args.reading,
        "primes": rows,
        "linearity": {"ok": lin.ok, "cells": len(lin.fits), "points_checked": lin.checked, "failures": lin.failures},
        "aggregate": "pass" if aggregate else "fail",
        "cache_hits": sum(1 for r in rows if r["cache_hit"]),
    }
    if not args.no_timestamp:
        report["timestamp"] = _timestamp()
    else:
        for r in rows:
            r.pop("seconds", None)
    for r in rows:
        r.pop("decomposition", None)
    if args.format == "json":
        print(_json_dump(report))
    else:
        for r in rows:
            flags = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in sorted(r["checks"].items()))
            tm = f" ({r['seconds']}s)" if "seconds" in r else ""
            print(f"p={r['p']:3d} [{r['status']}] {flags}{tm}")
            for mm in r["mismatches"]:
                print(f"      diff: {mm}")
        print(f"linearity: {'ok' if lin.ok else 'FAIL'} ({len(lin.fits)} cells, {lin.checked} extra points)")
        print(f"aggregate: {report['aggregate']} ({report['cache_hits']} cache hits)")
    return EXIT_OK if aggregate else EXIT_MISMATCH


# -- corollaries ----------------------------------------------------------------------


def cmd_corollaries(parser, args) -> int:
    primes = _selected_primes(parser, args)
    cache_dir = _cache_dir_from_args(args)
    out_rows = []
    ok = True
    for p in primes:
        data, hit = load_character_data(p, cache_dir)
        res = decompose_dl(data)
        row: dict = {"p": p, "cache_hit": hit}
        if not (res.exact and res.table_match):
            row["decomposition"] = "fail"
            ok = False
        try:
            app = corollary_all_appear(data, res)
            row["all_nontrivial_appear"] = app.complete if p >= 23 else None
            row["missing"] = app.missing
            row["trivial_absent"] = app.trivial_absent
        except VerificationError as exc:
            row["all_nontrivial_appear"] = False
            row["error"] = str(exc)
            ok = False
        if p % 24 == 23:
            try:
                rep = corollary_odd_multiplicity(data, res)
                row["odd_multiplicities"] = [str(m) for m in rep.multiplicities]
            except VerificationError as exc:
                row["odd_multiplicities"] = None
                row["error"] = str(exc)
                ok = False
        out_rows.append(row)
    report = {"schema": "dlcusp-corollaries/1", "version": __version__, "primes": out_rows,
              "aggregate": "pass" if ok else "fail"}
    if not args.no_timestamp:
        report["timestamp"] = _timestamp()
    if args.format == "json":
        print(_json_dump(report))
    else:
        for row in out_rows:
            bits = []
            if row.get("all_nontrivial_appear") is not None:
                bits.append(f"all-appear={'ok' if row['all_nontrivial_appear'] else 'FAIL'}")
            if row.get("missing"):
                bits.append(f"missing={','.join(row['missing'])}")
            if "odd_multiplicities" in row:
                bits.append(f"odd-multiplicities={row['odd_multiplicities']}")
            bits.append(f"trivial-absent={'ok' if row.get('trivial_absent') else 'FAIL'}")
            print(f"p={row['p']:3d} " + "  ".join(bits))
        print(f"aggregate: {report['aggregate']}")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- papertable ------------------------------------------------------------------------


def render_cell(a: Fraction, b: Fraction) -> str:
    """Render c = a p + b as the canonical "(p-r)/12 + k" cell text."""
    sign = 1 if a > 0 else -1
    if abs(a) != Fraction(1, 12):
        return f"{a}*p + {b}"
    r = None
    for cand in RESIDUES:
        k = a * cand + b
        if k.denominator == 1:
            r = cand
            offset = int(k)
            break
    assert r is not None
    core = f"(p-{r})/12"
    if sign < 0:
        core = "-" + core
    if offset > 0:
        return f"{core} + {offset}"
    if offset < 0:
        return f"{core} - {-offset}"
    return core


def builtin_table_markdown() -> str:
    lines = ["| set | 1 mod 12 | 5 mod 12 | 7 mod 12 | 11 mod 12 |", "| --- | --- | --- | --- | --- |"]
    for torus in ("split", "nonsplit"):
        suffix = "s" if torus == "split" else "a"
        for label in SET_LABELS:
            cells = [render_cell(*coefficient_line(label, torus, r)) for r in RESIDUES]
            lines.append(f"| {label}_{suffix} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def computed_table_markdown(results: list[DecompositionResult]) -> str:
    """Regenerate the table from two-prime linear fits of computed coefficients.

    Cells whose set is empty at that residue inherit the A-row fit of the
    same torus (the computed coefficients collapse onto A there).
    """
    lin = linearity_fit(results)
    if not lin.ok:
        raise VerificationError(f"linearity failures: {lin.failures}")
    lines = ["| set | 1 mod 12 | 5 mod 12 | 7 mod 12 | 11 mod 12 |", "| --- | --- | --- | --- | --- |"]
    for torus in ("split", "nonsplit"):
        suffix = "s" if torus == "split" else "a"
        for label in SET_LABELS:
            cells = []
            for r in RESIDUES:
                fit = lin.fits.get((label, torus, r)) or lin.fits.get(("A", torus, r))
                if fit is None:
                    raise VerificationError(f"no data to fit cell ({label},{torus},{r})")
                cells.append(render_cell(*fit))
            lines.append(f"| {label}_{suffix} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def cmd_papertable(parser, args) -> int:
    primes = _selected_primes(parser, args)
    cache_dir = _cache_dir_from_args(args)
    results = []
    for p in primes:
        data, _ = load_character_data(p, cache_dir)
        res = decompose_dl(data)
        if not (res.exact and res.table_match):
            print(f"decomposition failed at p={p}", file=sys.stderr)
            return EXIT_MISMATCH
        results.append(res)
    computed = computed_table_markdown(results)
    builtin = builtin_table_markdown()
    print(computed)
    if computed != builtin:
        print("computed table differs from the built-in table", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlcusp",
        description="Exact verifier for the Deligne-Lusztig decomposition of the weight-2 cusp-form character of SL2(F_p).",
    )
    parser.add_argument("--version", action="version", version=f"dlcusp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_range: bool):
        if with_range:
            sp.add_argument("--range", nargs=2, type=int, default=(7, 101), metavar=("MIN", "MAX"))
            sp.add_argument("--mod12", type=int, default=None, help="restrict to primes with this residue mod 12")
        sp.add_argument("--cache-dir", default=None, help="character-table cache directory (env DLCUSP_CACHE)")
        sp.add_argument("--no-cache", action="store_true", help="disable the on-disk cache")
        sp.add_argument("--no-timestamp", action="store_true", help="suppress timestamp/timing for byte-stable output")

    sp = sub.add_parser("classes", help="list the conjugacy classes of SL2(F_p)")
    sp.add_argument("p", type=int)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    add_common(sp, with_range=False)

    sp = sub.add_parser("chartable", help="print or serialize the full character table")
    sp.add_argument("p", type=int)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    add_common(sp, with_range=False)

    sp = sub.add_parser("decompose", help="decompose the cusp-form character at one prime")
    sp.add_argument("p", type=int)
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--reading", choices=READINGS + ("both",), default="primary")
    add_common(sp, with_range=False)

    sp = sub.add_parser("verify", help="end-to-end verification over a prime range")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--reading", choices=READINGS, default="primary")
    sp.add_argument("--jobs", type=int, default=1)
    add_common(sp, with_range=True)

    sp = sub.add_parser("corollaries", help="appearance and odd-multiplicity checks over a range")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    add_common(sp, with_range=True)

    sp = sub.add_parser("papertable", help="regenerate the coefficient table from computation")
    sp.add_argument("--format", choices=("markdown",), default="markdown")
    add_common(sp, with_range=True)

    return parser


_COMMANDS = {
    "classes": cmd_classes,
    "chartable": cmd_chartable,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "corollaries": cmd_corollaries,
    "papertable": cmd_papertable,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except (TableValidationError, VerificationError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except SystemExit:
        raise
    except Exception as exc:  # internal failure still counts as a mismatch, never a new code
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
