"""Command-line driver: encode, decode, simulate, verify, sweep.

Configuration comes from JSON (--config) with every field overridable
by a flag.  Positions printed or accepted on the command line are
1-based (y_1 .. y_2N); file payloads (vectors, pattern JSON, report
JSON) are 0-based.  Output is deterministic for a fixed seed: rows are
merged in input order regardless of the worker-thread count, and no
timestamps are embedded.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import (burst_survey, corollary1_table, empirical_mse,
                       pair_loss_survey, recoverable, verify_theorem1,
                       verify_theorem2, verify_theorem3)
from .channel import (ErasurePattern, QuantizerSpec, paired_burst,
                      pattern_from_dict)
from .codec import (CodeSpec, build_code, decode_least_squares,
                    decode_projection, decode_youla, deserialize, encode,
                    serialize)
from .errors import BoundaryCase, NotReconstructible, RfturboError
from .filterbank import BoundaryMode, builtin_family, load_filter
from .interleaver import (cycle_type_str, half_shift, identity_perm,
                          random_perm)
from .numerics import gram_trace_inverse

SIM_COLUMNS = ["N", "M", "L", "perm", "seed", "start", "pairs", "recoverable",
               "trace_inv", "predicted_mse", "empirical_mse", "trials"]
SWEEP_COLUMNS = ["N", "M", "L", "perm", "perm_seed", "cycles", "pairs",
                 "patterns", "recoverable_frac", "trace_min", "trace_mean",
                 "trace_max"]

DEFAULTS = {
    "filter": "haar", "filter_file": None, "N": None, "M": None,
    "perm": "half_shift", "perm_seed": 0, "boundary": "circulant",
    "pattern_file": None, "burst_start": 1, "burst_pairs": None,
    "delta": 2.0 ** -8, "trials": 0, "seed": 0, "out": None, "format": "csv",
    "ordering": "row_order", "method": "least_squares", "theorem": None,
    "corollary1": False, "all_starts": False, "seeds": 100, "plot": False,
}


# ---- configuration ----

def resolve_config(args) -> dict:
    """defaults < --config file < explicit command-line flags."""
    cfg = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        with open(path) as fh:
            doc = json.load(fh)
        unknown = set(doc) - set(DEFAULTS)
        if unknown:
            raise ValueError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        cfg.update(doc)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    if cfg["delta"] is not None and not cfg["delta"] > 0:
        raise ValueError("delta must be positive")
    if cfg["trials"] < 0:
        raise ValueError("trials must be >= 0")
    return cfg


def make_filter(cfg):
    if cfg["filter_file"]:
        return load_filter(cfg["filter_file"])
    return builtin_family(cfg["filter"], cfg["M"])


def make_perm(cfg, N):
    kind = cfg["perm"]
    if kind == "half_shift":
        return half_shift(N)
    if kind == "identity":
        return identity_perm(N)
    if kind == "random":
        return random_perm(N, int(cfg["perm_seed"]))
    raise ValueError("unknown permutation kind %r" % kind)


def make_code(cfg):
    fspec = make_filter(cfg)
    N = cfg["N"]
    if N is None:
        raise ValueError("block size --N is required")
    N = int(N)
    spec = CodeSpec(filter=fspec, N=N, perm=make_perm(cfg, N),
                    mode=BoundaryMode(cfg["boundary"]))
    return spec, build_code(spec)


def _threads(n_tasks: int) -> int:
    cap = os.environ.get("RFTURBO_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n_tasks, cap))


# ---- value formatting (CSV cells; repr round-trips floats) ----

def _cell(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _config_line(cfg, keys) -> str:
    parts = []
    for k in keys:
        v = cfg.get(k)
        parts.append("%s=%s" % (k, "-" if v in (None, "") else v))
    return "# " + " ".join(parts)


def emit_rows(command, cfg, columns, rows, cfg_keys):
    """Render rows as CSV (with # provenance header) or JSON."""
    if cfg["format"] == "json":
        doc = {"command": command,
               "config": {k: cfg.get(k) for k in cfg_keys},
               "columns": columns,
               "rows": [{c: (None if r[c] == "" else r[c]) for c in columns}
                        for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    lines = ["# rfturbo " + command, _config_line(cfg, cfg_keys),
             ",".join(columns)]
    for r in rows:
        lines.append(",".join(_cell(r[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _write_out(text, cfg):
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _png_path(cfg):
    if not cfg["out"]:
        raise ValueError("--plot needs --out to place the figure next to")
    stem, _ = os.path.splitext(cfg["out"])
    return stem + ".png"


# ---- data files: one value per line, one-line # header ----

def write_vector(values, kind, fields, cfg):
    head = "# rfturbo %s %s" % (kind, " ".join(
        "%s=%s" % (k, v) for k, v in fields.items()))
    body = "\n".join(repr(float(v)) for v in values)
    _write_out(head + "\n" + body + "\n", cfg)


def _parse_header(line):
    meta = {}
    toks = line.lstrip("#").split()
    if len(toks) >= 2 and toks[0] == "rfturbo":
        meta["kind"] = toks[1]
        for tok in toks[2:]:
            if "=" in tok:
                k, v = tok.split("=", 1)
                meta[k] = v
    return meta


def read_data_file(path):
    """Returns (meta, payload lines).  Headerless files are plain vectors."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    meta = {"kind": "vector"}
    if lines and lines[0].startswith("#"):
        meta.update(_parse_header(lines[0]))
        lines = [ln for ln in lines[1:] if not ln.startswith("#")]
    return meta, lines


def read_vector(path):
    meta, lines = read_data_file(path)
    if meta.get("kind") not in ("vector", None):
        raise ValueError("%s is a %r file, expected a vector" % (path, meta.get("kind")))
    return np.array([float(ln) for ln in lines]), meta


def read_survivors(path):
    meta, lines = read_data_file(path)
    idx, vals = [], []
    for ln in lines:
        i, v = ln.split()
        idx.append(int(i))
        vals.append(float(v))
    return np.array(idx, dtype=int), np.array(vals), meta


# ---- erasure pattern from flags ----

def _empty_pattern(N):
    return ErasurePattern(N=N, lost=np.zeros(0, dtype=int), paired=True)


def load_pattern(cfg, N):
    """Single pattern from --pattern-file or the burst flags (1-based start)."""
    if cfg["pattern_file"]:
        with open(cfg["pattern_file"]) as fh:
            p = pattern_from_dict(json.load(fh))
        if p.N != N:
            raise ValueError("pattern N=%d does not match code N=%d" % (p.N, N))
        return p
    pairs = cfg["burst_pairs"]
    pairs = int(pairs) if pairs is not None else 0
    if pairs == 0:
        return _empty_pattern(N)
    return paired_burst(N, int(cfg["burst_start"]) - 1, pairs)


def _pairs_range(cfg):
    """--burst-pairs accepts '12' or an inclusive range '1:75'."""
    raw = cfg["burst_pairs"]
    if raw is None:
        return [0]
    raw = str(raw)
    if ":" in raw:
        a, b = raw.split(":", 1)
        return list(range(int(a), int(b) + 1))
    return [int(raw)]


# ---- subcommands ----

def cmd_simulate(cfg) -> int:
    spec, em = make_code(cfg)
    N, q = spec.N, QuantizerSpec(delta=float(cfg["delta"]))
    if cfg["pattern_file"]:
        tasks = [("", load_pattern(cfg, N))]
    else:
        start0 = int(cfg["burst_start"]) - 1
        tasks = []
        for p in _pairs_range(cfg):
            pat = paired_burst(N, start0, p) if p else _empty_pattern(N)
            tasks.append((p, pat))

    def row(item):
        i, (pairs, pat) = item
        rec = recoverable(em, pat)
        trace = pred = emp = ""
        if rec:
            trace = gram_trace_inverse(em.T[pat.survivors])
            pred = q.variance * trace
            if cfg["trials"] >= 1:
                rep = empirical_mse(spec, pat, q, int(cfg["trials"]),
                                    seed=(int(cfg["seed"]), i))
                emp = rep.empirical
        if pairs == "":
            pairs = pat.lost.size // 2 if pat.paired else ""
        return {"N": N, "M": spec.filter.M, "L": spec.filter.L,
                "perm": spec.perm.kind, "seed": cfg["seed"],
                "start": "" if cfg["pattern_file"] else cfg["burst_start"],
                "pairs": pairs,
                "recoverable": rec, "trace_inv": trace, "predicted_mse": pred,
                "empirical_mse": emp, "trials": cfg["trials"]}

    with ThreadPoolExecutor(max_workers=_threads(len(tasks))) as ex:
        rows = list(ex.map(row, enumerate(tasks)))
    keys = ["filter", "filter_file", "N", "M", "perm", "perm_seed", "boundary",
            "pattern_file", "burst_start", "burst_pairs", "delta", "trials", "seed"]
    _write_out(emit_rows("simulate", cfg, SIM_COLUMNS, rows, keys), cfg)
    if cfg["plot"]:
        from .plots import plot_simulate
        plot_simulate(rows, _png_path(cfg))
    return 0


def cmd_sweep(cfg) -> int:
    """Survey recoverability/trace across interleaver seeds.

    For each permutation (one per seed when --perm random), every burst
    of --burst-pairs pairs (default 1) at every start is checked; the
    row reports the recoverable fraction and trace statistics.
    """
    fspec = make_filter(cfg)
    if cfg["N"] is None:
        raise ValueError("block size --N is required")
    N = int(cfg["N"])
    pairs = int(cfg["burst_pairs"]) if cfg["burst_pairs"] is not None else 1
    if cfg["perm"] == "random":
        perms = [random_perm(N, s) for s in range(int(cfg["seeds"]))]
    else:
        perms = [make_perm(cfg, N)]

    def row(perm):
        spec = CodeSpec(filter=fspec, N=N, perm=perm,
                        mode=BoundaryMode(cfg["boundary"]))
        em = build_code(spec)
        if pairs == 1:
            rec, trace = pair_loss_survey(em)
        else:
            rec, trace = burst_survey(em, pairs)
            rec, trace = rec[:, -1], trace[:, -1]
        finite = trace[np.isfinite(trace)]
        stats = {"trace_min": "", "trace_mean": "", "trace_max": ""}
        if finite.size:
            stats = {"trace_min": float(finite.min()),
                     "trace_mean": float(finite.mean()),
                     "trace_max": float(finite.max())}
        return {"N": N, "M": fspec.M, "L": fspec.L, "perm": perm.kind,
                "perm_seed": "" if perm.seed is None else perm.seed,
                "cycles": cycle_type_str(perm), "pairs": pairs,
                "patterns": int(rec.size),
                "recoverable_frac": float(np.mean(rec)), **stats}

    with ThreadPoolExecutor(max_workers=_threads(len(perms))) as ex:
        rows = list(ex.map(row, perms))
    keys = ["filter", "filter_file", "N", "M", "perm", "boundary",
            "burst_pairs", "seeds", "seed"]
    _write_out(emit_rows("sweep", cfg, SWEEP_COLUMNS, rows, keys), cfg)
    if cfg["plot"]:
        from .plots import plot_sweep
        plot_sweep(rows, _png_path(cfg))
    return 0


def cmd_verify(cfg) -> int:
    keys = ["filter", "filter_file", "N", "M", "perm", "theorem", "corollary1",
            "all_starts"]
    config_echo = {k: cfg.get(k) for k in keys}
    if cfg["corollary1"]:
        table = corollary1_table(int(cfg["N"]) if cfg["N"] else 150)
        doc = {"command": "verify", "config": config_echo, "corollary1": table}
        _write_out(json.dumps(doc, indent=1) + "\n", cfg)
        for r in table:
            print("M=%-3d formula=%s oracle=%s (at N=%d) agree=%s"
                  % (r["M"], r["formula_symbols"], r["oracle_symbols"],
                     r["oracle_N"], r["agree"]), file=sys.stderr)
        return 0 if all(r["agree"] for r in table) else 1

    th = cfg["theorem"]
    if th is None:
        raise ValueError("verify needs --theorem {1,2,3} or --corollary1")
    if cfg["N"] is None:
        raise ValueError("block size --N is required")
    N = int(cfg["N"])
    try:
        if th == 1:
            perm = None if cfg["perm"] == "half_shift" else make_perm(cfg, N)
            report = verify_theorem1(make_filter(cfg), N, perm=perm)
        elif th == 2:
            report = verify_theorem2(_require_M(cfg), N,
                                     all_starts=cfg["all_starts"])
        elif th == 3:
            report = verify_theorem3(_require_M(cfg), N,
                                     all_starts=cfg["all_starts"])
        else:
            raise ValueError("theorem must be 1, 2, or 3")
    except BoundaryCase as exc:
        print("warning: %s" % exc, file=sys.stderr)
        doc = {"command": "verify", "config": config_echo,
               "boundary_case": str(exc)}
        _write_out(json.dumps(doc, indent=1) + "\n", cfg)
        return 0
    doc = {"command": "verify", "config": config_echo,
           "report": report.to_dict()}
    _write_out(json.dumps(doc, indent=1) + "\n", cfg)
    print("theorem %s: claimed %d pairs, oracle max %d, agree=%s"
          % (th, report.claimed_bound, report.max_pairs_recoverable,
             report.agree), file=sys.stderr)
    if cfg["plot"]:
        from .plots import plot_verify
        plot_verify(report.to_dict(), _png_path(cfg))
    return 0 if report.agree else 1


def _require_M(cfg):
    if cfg["M"] is None:
        raise ValueError("--M is required for this theorem")
    return int(cfg["M"])


def cmd_encode(cfg, input_path) -> int:
    x, _ = read_vector(input_path)
    if cfg["N"] is None:
        cfg = dict(cfg, N=len(x))
    spec, em = make_code(cfg)
    values = serialize(encode(em, x), cfg["ordering"])
    fields = {"n": len(values), "ordering": cfg["ordering"],
              "filter": spec.filter.name.replace(" ", ""), "N": spec.N,
              "perm": spec.perm.kind, "boundary": spec.mode.value}
    write_vector(values, "vector", fields, cfg)
    return 0


def cmd_decode(cfg, input_path) -> int:
    meta, _ = read_data_file(input_path)
    if meta.get("kind") == "survivors":
        idx, vals, meta = read_survivors(input_path)
        if cfg["N"] is None and "N" in meta:
            cfg = dict(cfg, N=int(meta["N"]))
        spec, em = make_code(cfg)
    else:
        values, meta = read_vector(input_path)
        if cfg["N"] is None:
            n = int(meta.get("N", len(values) // 2))
            cfg = dict(cfg, N=n)
        spec, em = make_code(cfg)
        if len(values) != 2 * spec.N:
            raise ValueError("codeword length %d, expected %d" % (len(values), 2 * spec.N))
        ordering = meta.get("ordering", cfg["ordering"])
        y = deserialize(values, ordering).y
        pattern = load_pattern(cfg, spec.N)
        keep = np.ones(2 * spec.N, dtype=bool)
        keep[pattern.lost] = False
        idx = np.flatnonzero(keep)
        vals = y[idx]

    decoder = {"least_squares": decode_least_squares,
               "projection": decode_projection,
               "youla": decode_youla}[cfg["method"]]
    try:
        res = decoder(em, (idx, vals))
    except NotReconstructible as exc:
        print("error: not reconstructible: %s" % exc, file=sys.stderr)
        return 1
    fields = {"n": spec.N, "ordering": "time", "method": res.method,
              "filter": spec.filter.name.replace(" ", ""), "N": spec.N,
              "perm": spec.perm.kind}
    write_vector(res.x_hat, "vector", fields, cfg)
    metadata = {"method": res.method, "residual": res.residual,
                "rank_used": res.rank_used, "rank_needed": spec.N,
                "reconstructible": res.reconstructible,
                "survivors": int(len(idx)), "iters": res.iters}
    print(json.dumps(metadata), file=sys.stderr)
    if not res.reconstructible:
        print("error: surviving rows have rank %d < %d; reconstruction "
              "is not unique" % (res.rank_used, spec.N), file=sys.stderr)
        return 1
    return 0


# ---- argument parsing ----

def _add_common(sp):
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--filter", help="builtin family: haar, block_dct, lapped "
                    "(parameterized forms like block_dct(4) work too)")
    sp.add_argument("--filter-file", dest="filter_file",
                    help="JSON filter description")
    sp.add_argument("--N", type=int, help="block / interleaver size")
    sp.add_argument("--M", type=int, help="channel count for block_dct/lapped")
    sp.add_argument("--perm", choices=["half_shift", "random", "identity"])
    sp.add_argument("--perm-seed", dest="perm_seed", type=int,
                    help="seed for --perm random")
    sp.add_argument("--boundary", choices=["circulant", "zero_tail"])
    sp.add_argument("--seed", type=int, help="experiment seed")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--plot", action="store_true",
                    help="also render a PNG next to --out")


def _add_pattern_flags(sp):
    sp.add_argument("--pattern-file", dest="pattern_file",
                    help="JSON erasure pattern (0-based indices)")
    sp.add_argument("--burst-start", dest="burst_start", type=int,
                    help="first erased pair, 1-based (default 1)")
    sp.add_argument("--burst-pairs", dest="burst_pairs",
                    help="pairs erased; simulate accepts a range like 1:75")


def build_parser():
    p = argparse.ArgumentParser(
        prog="rfturbo",
        description="Rate-1/2 real-field erasure codes from stacked filter "
                    "banks: encode/decode, burst-erasure experiments, and "
                    "recoverability verification.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("encode", help="encode a length-N vector file")
    sp.add_argument("input", help="vector file (one real per line)")
    sp.add_argument("--ordering", choices=["row_order", "paper_interleaved"])
    _add_common(sp)

    sp = sub.add_parser("decode", help="decode a codeword or survivor file")
    sp.add_argument("input", help="codeword vector file or survivor file")
    sp.add_argument("--ordering", choices=["row_order", "paper_interleaved"],
                    help="ordering of a headerless codeword file")
    sp.add_argument("--method",
                    choices=["least_squares", "projection", "youla"])
    _add_pattern_flags(sp)
    _add_common(sp)

    sp = sub.add_parser("simulate", help="per-pattern recoverability and MSE rows")
    sp.add_argument("--delta", type=float, help="quantizer step (default 2^-8)")
    sp.add_argument("--trials", type=int,
                    help="Monte-Carlo trials per pattern (0 skips empirical MSE)")
    _add_pattern_flags(sp)
    _add_common(sp)

    sp = sub.add_parser("verify", help="run the recoverability oracles")
    sp.add_argument("--theorem", type=int, choices=[1, 2, 3])
    sp.add_argument("--corollary1", action="store_true")
    sp.add_argument("--all-starts", dest="all_starts", action="store_true",
                    help="also record per-start maxima for theorems 2-3")
    _add_common(sp)

    sp = sub.add_parser("sweep", help="survey interleaver seeds")
    sp.add_argument("--seeds", type=int,
                    help="number of random-permutation seeds (default 100)")
    sp.add_argument("--burst-pairs", dest="burst_pairs",
                    help="burst size per pattern (default 1 pair)")
    _add_common(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "encode":
            return cmd_encode(cfg, args.input)
        if args.command == "decode":
            return cmd_decode(cfg, args.input)
        raise ValueError("unknown command %r" % args.command)
    except NotReconstructible as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (RfturboError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
