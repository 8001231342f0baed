"""Command-line front end.

Subcommands: verify, search, classify, export-dot, complement, and
compactify.  Exit codes: 0 success/verified, 1 verification failed,
2 usage or parse error, 3 internal consistency abort.
"""

from __future__ import annotations

import argparse
import sys

from .border import BorderPattern, default_border
from .circulant import compactify as compactify_matrix
from .core import AdjacencyMatrix, DsrgParams, complement, \
    complement_params, verify_matrix_equations, verify_path_counts
from .errors import CertificateOracleDisagreement, DsrgError, ParseError
from .formats import (RunConfig, SolutionRecord, adjacency_strings,
                      load_matrix_file, parse_binary_matrix,
                      parse_matrix_text, read_records, render_matrix_text,
                      write_records)
from .iso import automorphism_count, classify
from .search import SearchConfig, stage1_enumerate, stage2_lift
from .skeleton import extract_skeleton_rigging, find_floor_structure

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _parse_params(text: str) -> DsrgParams:
    vals = [int(x) for x in text.replace(",", " ").split()]
    if len(vals) != 5:
        raise ParseError(f"--params needs 5 integers, got {len(vals)}")
    return DsrgParams(*vals)


def _build_parser():
    top = argparse.ArgumentParser(prog="dsrg")
    sub = top.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="check a matrix file against params")
    pv.add_argument("matrix")
    pv.add_argument("--params", required=True, metavar='"v k t l m"')

    ps = sub.add_parser("search", help="run the two-stage search")
    ps.add_argument("--config", help="key=value config file")
    ps.add_argument("--params", metavar='"v k t l m"')
    ps.add_argument("--block-size", type=int)
    ps.add_argument("--threads", type=int)
    ps.add_argument("--checkpoint")
    ps.add_argument("--resume", action="store_true", default=None)
    ps.add_argument("--limit", type=int)
    ps.add_argument("--subtree", metavar="PREFIX",
                    help="comma-separated row-major C(1) entries")
    ps.add_argument("--stage1-only", action="store_true", default=None)
    ps.add_argument("--out")

    pc = sub.add_parser("classify", help="classify stage2 records")
    pc.add_argument("records")
    pc.add_argument("--out")

    pd = sub.add_parser("export-dot", help="render skeleton or rigging")
    pd.add_argument("input", help="JSONL records or matrix text file")
    pd.add_argument("--index", type=int, default=0,
                    help="record index for JSONL input")
    grp = pd.add_mutually_exclusive_group(required=True)
    grp.add_argument("--skeleton", action="store_true")
    grp.add_argument("--rigging", action="store_true")
    pd.add_argument("--out")

    pm = sub.add_parser("complement", help="write J - I - A")
    pm.add_argument("matrix")
    pm.add_argument("--params", metavar='"v k t l m"')
    pm.add_argument("--out")

    pk = sub.add_parser("compactify",
                        help="print the polynomial matrix M(x)")
    pk.add_argument("matrix")
    pk.add_argument("--block-size", type=int, default=3)
    return top


def cmd_verify(args) -> int:
    p = _parse_params(args.params)
    a = load_matrix_file(args.matrix)
    rep1 = verify_matrix_equations(a, p)
    rep2 = verify_path_counts(a, p)
    if rep1.passed and rep2.passed:
        print(f"OK: matrix of order {a.v} verifies as {p}")
        return EXIT_OK
    for name, rep in (("matrix-equations", rep1), ("path-counts", rep2)):
        for viol in rep.violations:
            print(f"{name}: {viol.kind} at {viol.witness}: "
                  f"expected {viol.expected}, got {viol.actual}")
        for kind, extra in rep.suppressed.items():
            print(f"{name}: ... {extra} further {kind} violations")
    return EXIT_FAILED


def _search_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    flag_map = [
        ("params", args.params), ("block_size", args.block_size),
        ("threads", args.threads), ("checkpoint", args.checkpoint),
        ("limit", args.limit), ("subtree", args.subtree), ("out", args.out),
    ]
    for key, val in flag_map:
        if val is not None:
            cfg.apply(key, str(val))
    if args.resume is not None:
        cfg.resume = args.resume
    if args.stage1_only is not None:
        cfg.stage1_only = args.stage1_only
    if cfg.params is None:
        raise ParseError("search needs --params (or params= in the config)")
    return cfg


def cmd_search(args) -> int:
    cfg = _search_config(args)
    p = DsrgParams(*cfg.params)
    border = default_border(p, cfg.block_size)
    scfg = SearchConfig(threads=cfg.threads, checkpoint=cfg.checkpoint,
                        resume=cfg.resume, subtree=cfg.subtree)
    sink = open(cfg.out, "a" if cfg.resume else "w") if cfg.out \
        else sys.stdout
    n_stage1 = n_liftable = n_stage2 = written = 0
    truncated = False
    try:
        for s1 in stage1_enumerate(p, border, scfg):
            if cfg.limit is not None and written >= cfg.limit:
                truncated = True
                break
            n_stage1 += 1
            rec = SolutionRecord(kind="stage1", c1=s1.entries)
            sink.write(rec.to_json() + "\n")
            written += 1
            if cfg.stage1_only:
                continue
            lifted = 0
            for s2 in stage2_lift(s1, p, border):
                if cfg.limit is not None and written >= cfg.limit:
                    truncated = True
                    break
                lifted += 1
                rec = SolutionRecord(
                    kind="stage2", c1=s1.entries, masks=s2.masks,
                    adjacency=adjacency_strings(s2.a))
                sink.write(rec.to_json() + "\n")
                written += 1
            n_stage2 += lifted
            if lifted:
                n_liftable += 1
            if truncated:
                break
    finally:
        if sink is not sys.stdout:
            sink.close()
    summary = f"stage1 {n_stage1} liftable {n_liftable} stage2 {n_stage2}"
    if truncated:
        summary += " (truncated)"
    print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    records = [r for r in read_records(args.records)
               if r.adjacency is not None]
    if not records:
        raise ParseError(f"{args.records}: no records carry an adjacency")
    family = [rec.matrix() for rec in records]
    seen = {}
    for i, a in enumerate(family):
        seen.setdefault(a, []).append(i)
    for a, idxs in seen.items():
        if len(idxs) > 1:
            print(f"warning: records {idxs} are exact duplicates",
                  file=sys.stderr)
    classes = classify(family)
    out_records = []
    print("class  size  aut  reverse  representative")
    for cls in classes:
        rep = family[cls.representative]
        aut = automorphism_count(rep)
        rev = cls.reverse_class if cls.reverse_class is not None else "-"
        print(f"{cls.index:5d}  {cls.size:4d}  {aut:3d}  {rev!s:>7}  "
              f"{cls.representative:d}")
        out_records.append(SolutionRecord(
            kind="class", adjacency=adjacency_strings(rep),
            certificate=cls.certificate.hex() if cls.certificate else None,
            class_id=cls.index))
    if args.out:
        write_records(args.out, out_records)
    return EXIT_OK


def _load_input_matrix(path: str, index: int) -> AdjacencyMatrix:
    with open(path) as fh:
        text = fh.read()
    first = next((ln for ln in text.splitlines()
                  if ln.strip() and not ln.startswith("#")), "")
    if first.lstrip().startswith("{"):
        records = [SolutionRecord.from_json(ln)
                   for ln in text.splitlines() if ln.strip()]
        if not 0 <= index < len(records):
            raise ParseError(f"record index {index} out of range "
                             f"(file has {len(records)})")
        return records[index].matrix()
    return parse_matrix_text(text)


def cmd_export_dot(args) -> int:
    from .dot import rigging_dot, skeleton_dot
    a = _load_input_matrix(args.input, args.index)
    sr = extract_skeleton_rigging(a, find_floor_structure(a))
    text = skeleton_dot(sr) if args.skeleton else rigging_dot(sr)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_complement(args) -> int:
    a = load_matrix_file(args.matrix)
    comp = complement(a)
    text = render_matrix_text(comp)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.params:
        cp = complement_params(_parse_params(args.params))
        print(f"# complement parameters: {cp.v} {cp.k} {cp.t} "
              f"{cp.lam} {cp.mu}", file=sys.stderr)
    return EXIT_OK


def cmd_compactify(args) -> int:
    with open(args.matrix) as fh:
        dense = parse_binary_matrix(fh.read())
    cm = compactify_matrix(dense, args.block_size)
    width = max(len(str(cm.entries[i][j]))
                for i in range(cm.n) for j in range(cm.n))
    for i in range(cm.n):
        print(" | ".join(str(cm.entries[i][j]).ljust(width)
                         for j in range(cm.n)))
    return EXIT_OK


_COMMANDS = {
    "verify": cmd_verify,
    "search": cmd_search,
    "classify": cmd_classify,
    "export-dot": cmd_export_dot,
    "complement": cmd_complement,
    "compactify": cmd_compactify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateOracleDisagreement as exc:
        print(f"internal consistency abort: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DsrgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def run():  # console entry point
    raise SystemExit(main())


if __name__ == "__main__":
    run()
