"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
Errors go to stderr as a single line starting with ``error:``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .core import (
    FieldSpec,
    SpecError,
    brauer_descriptor,
    greatest_admissible_pair,
    is_strictly_quasilocal,
    unit_quotient_shape,
)
from .lattice import (
    FiniteExtension,
    SigmaClass,
    degree,
    embeds,
    enumerate_extensions,
    galois_group,
    galois_shape,
    is_normal,
    normal_closure,
    odd_part,
    sigma_class,
)
from .norms import (
    NormSubgroup,
    class_field_of,
    cl_of,
    correspondence,
    norm_group,
    norm_groups_of_index,
    norm_groups_up_to,
    quotient_shape,
)
from .oracle import THEOREMS, Bounds, BoundsRefused, verify

FILTERS = ("all", "class-fields")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(value: str, what: str):
    if value == "-":
        text = sys.stdin.read()
    elif value.lstrip().startswith(("{", "[")):
        text = value
    else:
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {what} {value!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what}: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


def _input(args, spec: FieldSpec):
    if args.input is None:
        raise UsageError("--in is required")
    data = _load_json(args.input, "--in")
    if isinstance(data, dict) and "two_part" in data:
        return NormSubgroup.from_json(spec, data)
    if isinstance(data, dict) and "real" in data:
        return FiniteExtension.from_json(spec, data)
    raise UsageError("--in must be an extension or a norm subgroup")


def _extension(args, spec: FieldSpec) -> FiniteExtension:
    x = _input(args, spec)
    if not isinstance(x, FiniteExtension):
        raise UsageError("--in must be an extension")
    return x


def _norm(args, spec: FieldSpec) -> NormSubgroup:
    x = _input(args, spec)
    return x if isinstance(x, NormSubgroup) else norm_group(spec, x)


def _describe(args, spec):
    if args.n is not None:
        ne, ne1 = greatest_admissible_pair(spec, args.n)
        return {"nE": ne, "nE1": ne1, "shape": unit_quotient_shape(spec, args.n).to_json(),
                "sql": is_strictly_quasilocal(spec)}
    return {
        "pi": sorted(spec.primes),
        "pi1": sorted(spec.pi1),
        "pi2": sorted(spec.pi2),
        "level": {str(p): k for p, k in spec.level.items()},
        "sql": is_strictly_quasilocal(spec),
        "brauer_nonreal": brauer_descriptor(spec, FiniteExtension.base(spec, real=False)).to_json(),
        "brauer_real": brauer_descriptor(spec, FiniteExtension.base(spec)).to_json(),
    }


def _ext(args, spec):
    x = _extension(args, spec)
    op = args.op
    if op == "degree":
        return {"degree": degree(x), "sigma": sigma_class(spec, x)}
    if op == "normal":
        return {"normal": is_normal(x)}
    if op == "closure":
        return normal_closure(x)
    if op == "odd-part":
        return odd_part(x)
    g = galois_group(x)
    return {"shape": galois_shape(x).to_json(), "normal": g is not None, "inversion": bool(g and g.inversion)}


def _norm_cmd(args, spec):
    op = args.op
    if op == "compute":
        return correspondence(spec, _extension(args, spec))
    if op == "cl":
        return cl_of(spec, _extension(args, spec))
    u = _norm(args, spec)
    if op == "index":
        return {"index": u.index}
    if op == "quotient":
        return {"quotient_shape": quotient_shape(spec, u).to_json()}
    return class_field_of(spec, u)


def _enumerate(args, spec):
    if args.what == "extensions":
        exts = enumerate_extensions(spec, _max_degree(args, 100))
        return {"count": len(exts), "extensions": [e.to_json() for e in exts]}
    if args.n is not None:
        groups = norm_groups_of_index(spec, args.n)
        out = {"index": args.n, "count": len(groups), "norm_groups": [u.to_json() for u in groups]}
        if groups.reason:
            out["reason"] = groups.reason
        return out
    groups = norm_groups_up_to(spec, _max_degree(args, 100))
    return {"count": len(groups), "norm_groups": [u.to_json() for u in groups]}


def _max_degree(args, default: int) -> int:
    n = args.max_degree if args.max_degree is not None else default
    if n < 1:
        raise UsageError("--max-degree must be >= 1")
    return n


def _verify(args, spec):
    bounds = Bounds(max_degree=_max_degree(args, 100), n_modulus=args.n)
    theorems = THEOREMS if args.theorem == "all" else (args.theorem,)
    if args.theorem != "all" and args.theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {args.theorem!r}; expected one of {', '.join(THEOREMS)} or all")
    reports = [verify(spec, t, bounds) for t in theorems]
    ok = all(r.passed for r in reports)
    if args.theorem != "all":
        return reports[0].to_json(), ok
    return {"pass": ok, "reports": [r.to_json() for r in reports]}, ok


def emit_lattice(spec: FieldSpec, max_degree: int, filter: str = "all") -> str:
    """Graphviz digraph of extension classes; edges are covering embeddings."""
    if filter not in FILTERS:
        raise UsageError(f"invalid filter {filter!r}; expected one of {', '.join(FILTERS)}")
    cf = filter == "class-fields"
    nodes = enumerate_extensions(spec, max_degree, class_fields_only=cf)
    if cf:
        nodes = [e for e in nodes if sigma_class(spec, e) != SigmaClass.NEITHER]
    up = {i: {j for j, y in enumerate(nodes) if i != j and embeds(x, y)} for i, x in enumerate(nodes)}
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i, x in enumerate(nodes):
        label = f"{degree(x)}/{'REAL' if x.real else 'NONREAL'}\\n{sigma_class(spec, x)}"
        if cf:
            label += f"\\nindex {norm_group(spec, x).index}"
        lines.append(f'  n{i} [label="{label}", tooltip="{_escape(json.dumps(x.to_json(), sort_keys=True))}"];')
    for i in range(len(nodes)):
        for j in sorted(up[i]):
            if not any(j in up[k] for k in up[i]):
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", help="field spec: path or inline JSON")
    common.add_argument("--in", dest="input", help="extension or norm subgroup: path, inline JSON or -")
    common.add_argument("--max-degree", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--out", help="write output to this path")
    common.add_argument("--format", choices=("json", "text", "dot"), default=None)

    ap = _Parser(prog="quasilocal", description="Class field theory of formally real quasilocal fields.")
    ap.add_argument("--version", action="version", version=f"quasilocal {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("describe", parents=[common], help="field invariants; with --n, E*/E*^n")
    p = sub.add_parser("ext", parents=[common], help="operations on one extension")
    p.add_argument("op", choices=("degree", "normal", "closure", "odd-part", "galois-shape"))
    p = sub.add_parser("norm", parents=[common], help="norm groups and class fields")
    p.add_argument("op", choices=("compute", "index", "quotient", "class-field", "cl"))
    p = sub.add_parser("enumerate", parents=[common], help="list extensions or norm groups")
    p.add_argument("what", choices=("extensions", "norm-groups"))
    p = sub.add_parser("verify", parents=[common], help="run an exhaustive verification sweep")
    p.add_argument("--theorem", default="all")
    p = sub.add_parser("lattice", parents=[common], help="DOT diagram of the extension lattice")
    p.add_argument("--filter", default="all")
    return ap


def _render(result, fmt: str) -> str:
    if fmt == "text":
        if isinstance(result, dict):
            return "\n".join(f"{k}: {json.dumps(v, ensure_ascii=False)}" for k, v in result.items()) + "\n"
        return f"{result}\n"
    if hasattr(result, "to_json"):
        result = result.to_json()
    return json.dumps(result, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.spec is None:
            raise UsageError("--spec is required")
        spec = FieldSpec.from_json(_load_json(args.spec, "--spec"))
        ok = True
        if args.command == "lattice":
            if args.format not in (None, "dot"):
                raise UsageError("lattice output is DOT only")
            text = emit_lattice(spec, _max_degree(args, 10), args.filter)
        else:
            if args.format == "dot":
                raise UsageError("--format dot is only valid for the lattice command")
            if args.command == "verify":
                result, ok = _verify(args, spec)
            else:
                result = {
                    "describe": _describe,
                    "ext": _ext,
                    "norm": _norm_cmd,
                    "enumerate": _enumerate,
                }[args.command](args, spec)
            text = _render(result, args.format or "json")
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0 if ok else 1
    except (UsageError, SpecError, BoundsRefused) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
