"""Command-line front end.

Machine output is a single JSON object (or one per line in table mode) on
stdout; human-readable progress goes to stderr.  Exit codes: 0 success,
2 parse error, 3 cap exceeded, 4 internal self-check failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
import time
from dataclasses import dataclass

from . import __version__
from .cohomology import sha2_omega
from .errors import CapExceeded, InternalCheckError, NormOneError, SpecParseError
from .perms import (
    PermGroup, Permutation, SUBGROUP_CLASS_CAP, alternating,
    are_conjugate_subgroups, cyclic, dihedral, product_of_cyclics,
    subgroup_classes, symmetric,
)
from .fpgroups import preimage_an, schur_cover_sn, todd_coxeter, verify_commutator_claim
from .resolutions import Verdict, _pipeline

DEFAULT_MAX_RANK = 4096


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple

    def __str__(self):
        if self.kind == "C*":
            return "x".join(f"C{p}" for p in self.params)
        return f"{self.kind}{self.params[0]}"


_SPEC_RE = re.compile(r"^([ASDC])(\d+)$")


def parse_group_spec(text) -> GroupSpec:
    """Grammar: kind digits | 'C' digits ('x' 'C' digits)*, kind in A,S,D,C."""
    text = text.strip()
    if "x" in text:
        parts = text.split("x")
        nums = []
        for k, part in enumerate(parts):
            m = _SPEC_RE.match(part.strip())
            if not m or m.group(1) != "C":
                pos = sum(len(p) + 1 for p in parts[:k])
                raise SpecParseError(
                    f"bad factor {part!r} at position {pos}: products may only "
                    "mix cyclic groups (e.g. C2xC2)")
            nums.append(int(m.group(2)))
        if any(p < 1 for p in nums):
            raise SpecParseError("cyclic orders must be positive")
        return GroupSpec("C*", tuple(nums))
    m = _SPEC_RE.match(text)
    if not m:
        raise SpecParseError(
            f"cannot parse group spec {text!r} (expected e.g. A6, S4, D4, C5, C2xC2)")
    n = int(m.group(2))
    if n < 1:
        raise SpecParseError("group parameter must be positive")
    return GroupSpec(m.group(1), (n,))


def build_group(spec: GroupSpec) -> PermGroup:
    if spec.kind == "A":
        return alternating(spec.params[0])
    if spec.kind == "S":
        return symmetric(spec.params[0])
    if spec.kind == "D":
        return dihedral(spec.params[0])
    if spec.kind == "C":
        return cyclic(spec.params[0])
    return product_of_cyclics(spec.params)


def parse_cycles(text, degree=None) -> Permutation:
    """Parse cycle notation: '()' or '(1 2 3)(4 5)'; separators are
    whitespace or commas; degree defaults to the largest point."""
    text = text.strip()
    if text == "()":
        return Permutation.identity(degree if degree is not None else 1)
    if not text.startswith("("):
        raise SpecParseError(f"expected '(' at position 0 in {text!r}")
    cycles = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise SpecParseError(f"expected '(' at position {i} in {text!r}")
        close = text.find(")", i)
        if close < 0:
            raise SpecParseError(f"unclosed cycle starting at position {i}")
        body = text[i + 1:close]
        points = [p for p in re.split(r"[\s,]+", body.strip()) if p]
        if len(points) < 1:
            raise SpecParseError(f"empty cycle at position {i}")
        try:
            nums = [int(p) for p in points]
        except ValueError as exc:
            raise SpecParseError(f"bad point in cycle at position {i}: {exc}")
        if any(p < 1 for p in nums):
            raise SpecParseError(f"points must be >= 1 in cycle at position {i}")
        if len(set(nums)) != len(nums):
            raise SpecParseError(f"repeated point in cycle at position {i}")
        cycles.append(tuple(nums))
        i = close + 1
    maxpt = max(max(c) for c in cycles)
    deg = degree if degree is not None else maxpt
    if maxpt > deg:
        raise SpecParseError(f"point {maxpt} exceeds degree {deg}")
    try:
        return Permutation.from_cycles(cycles, degree=deg)
    except ValueError as exc:
        raise SpecParseError(str(exc))


def _split_generators(text):
    """Split a --subgroup value on commas at parenthesis depth zero."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def resolve_subgroup(G, args):
    given = [x for x in (args.subgroup, args.point_stabilizer, args.klass) if x is not None]
    if len(given) != 1:
        raise SpecParseError(
            "exactly one of --subgroup / --point-stabilizer / --class is required")
    if args.point_stabilizer is not None:
        return G.point_stabilizer(args.point_stabilizer)
    if args.klass is not None:
        classes = subgroup_classes(G, cap=args.max_order or SUBGROUP_CLASS_CAP)
        if not 1 <= args.klass <= len(classes):
            raise SpecParseError(f"--class must be in 1..{len(classes)}")
        return classes[args.klass - 1]
    gens = [parse_cycles(part, degree=G.degree) for part in _split_generators(args.subgroup)]
    if not gens:
        raise SpecParseError("--subgroup lists no generators")
    return G.subgroup(gens)


def _subgroup_text(H):
    return H.describe()


def _record(spec_text, H, result, elapsed_ms, v: Verdict):
    return {
        "group": spec_text,
        "subgroup": _subgroup_text(H),
        "j_rank": result.j_rank,
        "flasque_rank": result.flasque_rank,
        "h1": [str(t) for t in result.invariants.torsion],
        "verdict": v.to_dict(),
        "ms": elapsed_ms,
        "version": __version__,
    }


def _cache_dir(args):
    if getattr(args, "cache_dir", None):
        return args.cache_dir
    return os.environ.get("NORMONE_CACHE")


def _cache_key(spec_text, H):
    payload = json.dumps(
        {"group": spec_text, "subgroup": _subgroup_text(H), "version": __version__},
        sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_read(directory, key):
    path = os.path.join(directory, key + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            blob = json.load(fh)
        return blob["record"]
    except (OSError, ValueError, KeyError) as exc:
        print(f"warning: unreadable cache entry {path} ({exc}); recomputing",
              file=sys.stderr)
        return None


def _cache_write(directory, key, record, resolution):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, key + ".json")
    blob = {"record": record, "resolution": resolution.to_dict()}
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(blob, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _compute_record(spec_text, G, H, args):
    directory = _cache_dir(args)
    key = _cache_key(spec_text, H)
    if directory:
        cached = _cache_read(directory, key)
        if cached is not None:
            print(f"cache hit for {spec_text} / {_subgroup_text(H)}", file=sys.stderr)
            return cached
    t0 = time.monotonic()
    result = _pipeline(G, H, max_rank=getattr(args, "max_rank", None) or DEFAULT_MAX_RANK,
                       class_cap=getattr(args, "max_order", None) or SUBGROUP_CLASS_CAP)
    ms = int((time.monotonic() - t0) * 1000)
    inv = result.invariants
    v = (Verdict(inv, "holds", "holds") if inv.is_trivial()
         else Verdict(inv, "undetermined", "undetermined"))
    record = _record(spec_text, H, result, ms, v)
    if directory:
        _cache_write(directory, key, record, result.resolution)
    return record


def cmd_compute(args):
    spec = parse_group_spec(args.spec)
    G = build_group(spec)
    H = resolve_subgroup(G, args)
    record = _compute_record(str(spec), G, H, args)
    print(json.dumps(record, sort_keys=True))
    inv = record["h1"]
    human = "trivial" if not inv else " x ".join(f"Z/{t}" for t in inv)
    print(f"{record['group']} / {record['subgroup']}: H1 = {human} "
          f"({record['ms']} ms)", file=sys.stderr)
    return 0


_PAPER_TABLE = (
    ("A4", "--point-stabilizer", 4, ["2"]),
    ("A5", "--point-stabilizer", 5, []),
    ("A6", "--subgroup", "(1 2 3 4 5),(1 2 3)", []),
    ("A6", "--subgroup", "(1 2 3 4 5),(1 4)(5 6)", []),
    ("A7", "--point-stabilizer", 7, []),
)


def cmd_verify_paper(args):
    failures = 0
    for spec_text, flag, value, expected in _PAPER_TABLE:
        n = int(spec_text[1:])
        if n > args.max_n:
            continue
        ns = argparse.Namespace(
            subgroup=value if flag == "--subgroup" else None,
            point_stabilizer=value if flag == "--point-stabilizer" else None,
            klass=None, cache_dir=getattr(args, "cache_dir", None),
            max_order=args.max_order, max_rank=args.max_rank,
        )
        G = build_group(parse_group_spec(spec_text))
        H = resolve_subgroup(G, ns)
        t0 = time.monotonic()
        try:
            record = _compute_record(spec_text, G, H, ns)
        except CapExceeded as exc:
            # best-effort entries are reported, never failed, when a cap stops them
            print(f"SKIPPED {spec_text} ({exc})", file=sys.stderr)
            continue
        elapsed = time.monotonic() - t0
        ok = record["h1"] == expected
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(json.dumps(record, sort_keys=True))
        print(f"{status} {spec_text} / {record['subgroup']}: h1={record['h1']} "
              f"expected={expected} ({elapsed:.1f}s)", file=sys.stderr)
    if args.max_n >= 6:
        G = build_group(parse_group_spec("A6"))
        H1 = G.subgroup([parse_cycles("(1 2 3 4 5)", 6), parse_cycles("(1 2 3)", 6)])
        H2 = G.subgroup([parse_cycles("(1 2 3 4 5)", 6), parse_cycles("(1 4)(5 6)", 6)])
        distinct = not are_conjugate_subgroups(G, H1, H2)
        status = "PASS" if distinct else "FAIL"
        if not distinct:
            failures += 1
        print(f"{status} A6: the two A5 classes are non-conjugate", file=sys.stderr)
    return 1 if failures else 0


def cmd_classes(args):
    spec = parse_group_spec(args.spec)
    G = build_group(spec)
    classes = subgroup_classes(G, cap=args.max_order or SUBGROUP_CLASS_CAP)
    out = [{"index": i + 1, "order": c.order(), "generators": c.describe()}
           for i, c in enumerate(classes)]
    print(json.dumps({"group": str(spec), "classes": out}, sort_keys=True))
    print(f"{len(out)} subgroup classes of {spec}", file=sys.stderr)
    return 0


def cmd_verify_schur(args):
    n = args.n
    import math
    expected_u = 2 * math.factorial(n)
    cover = schur_cover_sn(n)
    table = todd_coxeter(cover, (), max_cosets=args.max_cosets)
    data = preimage_an(n, max_cosets=args.max_cosets)
    claim = verify_commutator_claim(n)
    record = {
        "n": n,
        "cover_order": table.coset_count,
        "cover_order_expected": expected_u,
        "even_preimage_order": data.v_order,
        "even_preimage_index": data.index_table.coset_count,
        "commutator_claim": claim,
    }
    print(json.dumps(record, sort_keys=True))
    ok = (table.coset_count == expected_u and data.v_order == math.factorial(n)
          and data.index_table.coset_count == 2 and claim)
    print(("PASS" if ok else "FAIL") + f" schur checks for n={n}", file=sys.stderr)
    return 0 if ok else 1


def cmd_sha_oracle(args):
    spec = parse_group_spec(args.spec)
    G = build_group(spec)
    H = resolve_subgroup(G, args)
    t0 = time.monotonic()
    inv = sha2_omega(G, H)
    ms = int((time.monotonic() - t0) * 1000)
    record = {
        "group": str(spec),
        "subgroup": _subgroup_text(H),
        "sha2_omega": [str(t) for t in inv.torsion],
        "ms": ms,
        "version": __version__,
    }
    print(json.dumps(record, sort_keys=True))
    return 0


def _add_subgroup_flags(p):
    p.add_argument("--subgroup", help="generators in cycle notation, comma separated")
    p.add_argument("--point-stabilizer", type=int, dest="point_stabilizer",
                   help="use the stabilizer of this point")
    p.add_argument("--class", type=int, dest="klass",
                   help="1-based index into the subgroup class list")


def _add_cap_flags(p):
    p.add_argument("--max-order", type=int, default=None,
                   help=f"subgroup-enumeration order cap (default {SUBGROUP_CLASS_CAP})")
    p.add_argument("--max-cosets", type=int, default=100_000,
                   help="Todd-Coxeter coset cap (default 100000)")
    p.add_argument("--max-rank", type=int, default=None,
                   help=f"middle-term rank cap (default {DEFAULT_MAX_RANK})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="normone",
        description="Hasse-norm-principle / weak-approximation obstructions "
                    "for norm-one tori, from exact group cohomology.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="run the pipeline for one (G, H)")
    p.add_argument("spec", help="group spec: A6, S4, D4, C5, C2xC2, ...")
    _add_subgroup_flags(p)
    _add_cap_flags(p)
    p.add_argument("--cache-dir", default=None,
                   help="result cache directory (or env NORMONE_CACHE)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify-paper", help="reproduce the published A_n table")
    p.add_argument("--max-n", type=int, default=7, choices=range(4, 8),
                   help="largest n to run (default 7)")
    _add_cap_flags(p)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("classes", help="list subgroup conjugacy classes")
    p.add_argument("spec")
    _add_cap_flags(p)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("verify-schur", help="coset-enumeration checks on the "
                                            "extended symmetric-group presentation")
    p.add_argument("n", type=int)
    _add_cap_flags(p)
    p.set_defaults(func=cmd_verify_schur)

    p = sub.add_parser("sha-oracle", help="independent sha^2_omega computation "
                                          "(small groups)")
    p.add_argument("spec")
    _add_subgroup_flags(p)
    _add_cap_flags(p)
    p.set_defaults(func=cmd_sha_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InternalCheckError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except (NormOneError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
