"""Command-line front end.

Targets are either `@name` (catalog entry) or a path to a structure-equation
file.  Reports go to stdout as key-sorted JSON (default) or flattened
`key.path = value` tables; exit codes: 0 success, 1 negative verdict or
failed validation, 2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys

from . import __version__, catalog, cohomology, dsl, frolicher, symplectic
from .algebra import DEFAULT_SAMPLES
from .deform import DeformationError, frame_change, sweep
from .dsl import DslError, parse_gauss
from .linalg import OperatorCache
from .scalar import ScalarEvalError
from .stability import StabilityInputError, check_stability_hypotheses

THEORY_KEYS = {
    "dr": "de_rham",
    "dolbeault": "dolbeault",
    "del": "del",
    "bc": "bott_chern",
    "aeppli": "aeppli",
}


class UsageError(ValueError):
    pass


# -- target loading ----------------------------------------------------------


def _load_target(target):
    """Returns (display_name, entry_or_None, parametric_spec)."""
    if target.startswith("@"):
        try:
            entry = catalog.get(target[1:])
        except catalog.CatalogError as e:
            # KeyError str() would re-quote the message
            raise UsageError(e.args[0]) from None
        return target, entry, entry.spec
    try:
        with open(target, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {target}: {e}") from None
    try:
        spec = dsl.parse(text)
    except DslError as e:
        raise UsageError(f"{target}: {e}") from None
    return target, None, spec


def _parse_assign(pairs):
    assign = {}
    for raw in pairs or ():
        name, sep, value = raw.partition("=")
        if not sep or not name:
            raise UsageError(f"--assign wants name=value, got {raw!r}")
        try:
            assign[name] = parse_gauss(value)
        except DslError as e:
            raise UsageError(f"--assign {raw!r}: {e}") from None
    return assign


def _concretize(entry, spec, assign):
    """Resolve --assign against the family (frame change) or the spec params.

    Returns a parameter-free AlgebraSpec.  Raises UsageError for key/parameter
    mismatches and DeformationError for singular frames.
    """
    family = entry.family if entry is not None else None
    if family is not None and not spec.params and set(family.params) <= set(assign):
        extra = set(assign) - set(family.params)
        if extra:
            raise UsageError(f"unknown assignment keys: {', '.join(sorted(extra))}")
        return frame_change(family, assign)
    if spec.params:
        missing = [p for p in spec.params if p not in assign]
        if missing:
            raise UsageError(
                f"the structure has parameters {', '.join(spec.params)}; "
                "pass --assign for each"
            )
        extra = set(assign) - set(spec.params)
        if extra:
            raise UsageError(f"unknown assignment keys: {', '.join(sorted(extra))}")
        try:
            return spec.evaluate(assign)
        except ScalarEvalError as e:
            raise DeformationError(str(e)) from None
    if assign:
        if family is not None:
            missing = [p for p in family.params if p not in assign]
            raise UsageError(
                f"the deformation family has parameters {', '.join(family.params)}; "
                f"missing: {', '.join(missing)}"
            )
        raise UsageError("the structure has no parameters; drop --assign")
    return spec


def _digest(entry, spec, assign):
    h = hashlib.sha256()
    h.update(dsl.pretty(spec).encode())
    family = entry.family if entry is not None else None
    if family is not None:
        h.update(b"family\n")
        for row in family.A + family.B:
            for x in row:
                h.update(str(x).encode())
                h.update(b";")
        if family.omega is not None:
            h.update(str(family.omega).encode())
    for k in sorted(assign):
        h.update(f"{k}={assign[k]}\n".encode())
    return h.hexdigest()


# -- output ------------------------------------------------------------------


def _flatten(value, path, out):
    if isinstance(value, dict):
        for k in value:
            _flatten(value[k], f"{path}.{k}" if path else str(k), out)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(v, f"{path}[{i}]", out)
    else:
        out.append(f"{path} = {value}")


def _emit(report, fmt):
    if fmt == "table":
        lines = []
        _flatten(report, "", lines)
        sys.stdout.write("\n".join(sorted(lines)) + "\n")
    else:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _report(command, name, digest, assign, results):
    return {
        "command": command,
        "input": {
            "name": name,
            "digest": digest,
            "assignment": {k: str(v) for k, v in sorted(assign.items())},
        },
        "results": results,
        "version": __version__,
    }


def _pq_str(p, q):
    return f"{p},{q}"


# -- sample-list parsing -----------------------------------------------------


def _parse_samples(text):
    """"t=0; t=1/2" -> [{"t": 0}, {"t": 1/2}] (values Gaussian rationals)."""
    samples = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        assign = {}
        for pair in chunk.split(","):
            name, sep, value = pair.partition("=")
            if not sep or not name.strip():
                raise UsageError(f"--samples wants name=value pairs, got {pair!r}")
            try:
                assign[name.strip()] = parse_gauss(value.strip())
            except DslError as e:
                raise UsageError(f"--samples {pair!r}: {e}") from None
        samples.append(assign)
    if not samples:
        raise UsageError("--samples is empty")
    return samples


def _parse_grid(text):
    """"t11=0|1/2; t22=0|1/2" -> cartesian product, first key outermost."""
    axes = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, values = chunk.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--grid wants name=v1|v2|..., got {chunk!r}")
        try:
            vals = [parse_gauss(v.strip()) for v in values.split("|")]
        except DslError as e:
            raise UsageError(f"--grid {chunk!r}: {e}") from None
        axes.append((name.strip(), vals))
    if not axes:
        raise UsageError("--grid is empty")
    names = [n for n, _ in axes]
    return [
        dict(zip(names, combo))
        for combo in itertools.product(*(vals for _, vals in axes))
    ]


def _default_family_samples(family):
    return [{p: v for p in family.params} for v in DEFAULT_SAMPLES]


# -- commands ----------------------------------------------------------------


def _cmd_validate(args):
    name, entry, spec = _load_target(args.target)
    assign = _parse_assign(args.assign)
    digest = _digest(entry, spec, assign)
    if assign:
        try:
            concrete = _concretize(entry, spec, assign)
        except (DeformationError, ScalarEvalError) as e:
            results = {"ok": False, "error": str(e)}
            _emit(_report("validate", name, digest, assign, results), args.format)
            return 1
        report = concrete.validate()
    else:
        report = spec.validate()
    results = report.as_dict()
    _emit(_report("validate", name, digest, assign, results), args.format)
    return 0 if report.ok else 1


def _parse_degree(text, theory):
    if text is None:
        return None
    parts = text.split(",")
    try:
        nums = [int(x) for x in parts]
    except ValueError:
        raise UsageError(f"--degree wants k or p,q, got {text!r}") from None
    if theory == "de_rham":
        if len(nums) != 1:
            raise UsageError("de Rham degree is a single total degree k")
        return nums[0]
    if len(nums) != 2:
        raise UsageError(f"{theory} degree is a bidegree p,q")
    return (nums[0], nums[1])


def _cmd_cohomology(args):
    name, entry, spec = _load_target(args.target)
    assign = _parse_assign(args.assign)
    concrete = _concretize(entry, spec, assign)
    ops = OperatorCache(concrete)
    results = {"scope": cohomology.invariant_level_banner(concrete)}
    n = concrete.n
    if args.theory == "all":
        if args.degree is not None:
            raise UsageError("--degree needs a single --theory")
        results["de_rham"] = {str(k): cohomology.betti(ops, k) for k in range(2 * n + 1)}
        for theory in THEORY_KEYS.values():
            if theory == "de_rham":
                continue
            table = cohomology.hodge_table(ops, theory)
            results[theory] = {_pq_str(p, q): d for (p, q), d in sorted(table.items())}
        _emit(_report("cohomology", name, _digest(entry, spec, assign), assign,
                      results), args.format)
        return 0
    theory = THEORY_KEYS[args.theory]
    degree = _parse_degree(args.degree, theory)
    if degree is None:
        if theory == "de_rham":
            groups = [cohomology.de_rham(ops, k) for k in range(2 * n + 1)]
        else:
            groups = [
                cohomology.group(ops, theory, (p, q))
                for p in range(n + 1)
                for q in range(n + 1)
            ]
    else:
        groups = [cohomology.group(ops, theory, degree)]
    results["groups"] = [g.as_dict() for g in groups]
    _emit(_report("cohomology", name, _digest(entry, spec, assign), assign, results),
          args.format)
    return 0


def _cmd_frolicher(args):
    name, entry, spec = _load_target(args.target)
    assign = _parse_assign(args.assign)
    concrete = _concretize(entry, spec, assign)
    ops = OperatorCache(concrete)
    page, certificate = frolicher.degeneration_page(ops)
    last = max(page, args.max_page or page)
    pages = {}
    for r in range(1, last + 1):
        pages[str(r)] = frolicher.spectral_page(ops, r).as_dict()["dims"]
    results = {
        "scope": cohomology.invariant_level_banner(concrete),
        "pages": pages,
        "degeneration_page": page,
        "betti": {str(k): v for k, v in certificate["betti"].items()},
        "e_infinity": {
            f"({p},{q})": d
            for (p, q), d in sorted(certificate["e_infinity"].items())
        },
    }
    _emit(_report("frolicher", name, _digest(entry, spec, assign), assign, results),
          args.format)
    return 0


def _cmd_symplectic(args):
    name, entry, spec = _load_target(args.target)
    assign = _parse_assign(args.assign)
    concrete = _concretize(entry, spec, assign)
    ops = OperatorCache(concrete)
    rep = symplectic.find_symplectic(ops)
    results = {"symplectic": rep.as_dict()}
    if args.suite61:
        if rep.verdict == "exists":
            results["wedge_class_suite"] = symplectic.theorem61_suite(ops, rep.witness)
        else:
            results["wedge_class_suite"] = {
                "skipped": f"no witness available (verdict {rep.verdict})"
            }
    if args.betti_bounds:
        try:
            results["betti_bounds"] = symplectic.betti_bounds(ops)
        except symplectic.SymplecticError as e:
            results["betti_bounds"] = {"error": str(e)}
    _emit(_report("symplectic", name, _digest(entry, spec, assign), assign, results),
          args.format)
    return 0 if rep.verdict == "exists" else 1


TASK_TOKENS = ("validate", "cohomology", "symplectic", "purefull", "hypotheses")


def _parse_tasks(text):
    """"symplectic; cohomology=bc:2,0; purefull=2" -> list of task specs."""
    tasks = []
    for chunk in (text or "validate; symplectic").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        head, sep, rest = chunk.partition("=")
        head = head.strip()
        if head not in TASK_TOKENS:
            raise UsageError(
                f"unknown task {head!r}; tasks: {', '.join(TASK_TOKENS)}"
            )
        if head == "cohomology":
            if not sep:
                raise UsageError("cohomology task wants cohomology=<theory>:<degree>")
            tkey, tsep, deg = rest.partition(":")
            tkey = tkey.strip()
            if tkey not in THEORY_KEYS or not tsep:
                raise UsageError(
                    f"cohomology task wants <theory>:<degree> with theory in "
                    f"{', '.join(THEORY_KEYS)}; got {rest!r}"
                )
            theory = THEORY_KEYS[tkey]
            tasks.append(("cohomology", theory, _parse_degree(deg.strip(), theory)))
        elif head == "purefull":
            if not sep:
                raise UsageError("purefull task wants purefull=<stage>")
            try:
                tasks.append(("purefull", int(rest.strip())))
            except ValueError:
                raise UsageError(f"purefull stage must be an integer, got {rest!r}")
        else:
            if sep:
                raise UsageError(f"task {head} takes no argument")
            tasks.append((head,))
    if not tasks:
        raise UsageError("--tasks is empty")
    return tasks


def _run_tasks(tasks, spec):
    ops = None
    out = {}
    for task in tasks:
        kind = task[0]
        if kind == "validate":
            out["validate"] = spec.validate().as_dict()
            continue
        if ops is None:
            ops = OperatorCache(spec)
        if kind == "cohomology":
            _, theory, degree = task
            g = cohomology.group(ops, theory, degree)
            out.setdefault("cohomology", []).append(g.as_dict())
        elif kind == "symplectic":
            out["symplectic"] = symplectic.find_symplectic(ops).as_dict()
        elif kind == "purefull":
            out.setdefault("purefull", []).append(
                cohomology.pure_full(ops, task[1]).as_dict()
            )
    return out


def _cmd_deform(args):
    name, entry, spec = _load_target(args.target)
    family = entry.family if entry is not None else None
    # A deformation family sweeps by frame change; a parametric structure by
    # direct substitution; a parameter-free structure repeats the base row.
    target = family if family is not None else spec
    params = family.params if family is not None else spec.params
    if args.samples and args.grid:
        raise UsageError("pass --samples or --grid, not both")
    if args.samples:
        samples = _parse_samples(args.samples)
    elif args.grid:
        samples = _parse_grid(args.grid)
    elif params:
        samples = [{p: v for p in params} for v in DEFAULT_SAMPLES]
    else:
        samples = [{}]
    for s in samples:
        missing = [p for p in params if p not in s]
        if missing:
            raise UsageError(
                f"sample {{{', '.join(f'{k}={v}' for k, v in sorted(s.items()))}}} "
                f"misses parameters: {', '.join(missing)}"
            )
    tasks = _parse_tasks(args.tasks)
    per_sample = [t for t in tasks if t[0] != "hypotheses"]
    rows = sweep(target, samples, lambda s: _run_tasks(per_sample, s))
    results = {"samples": rows}
    if any(t[0] == "hypotheses" for t in tasks):
        if family is None:
            raise UsageError(
                "the hypotheses task needs a catalog entry with a deformation family"
            )
        try:
            results["hypotheses"] = check_stability_hypotheses(family, samples).as_dict()
        except StabilityInputError as e:
            raise UsageError(str(e)) from None
    _emit(_report("deform", name, _digest(entry, spec, {}), {}, results), args.format)
    return 0


def _cmd_purefull(args):
    name, entry, spec = _load_target(args.target)
    assign = _parse_assign(args.assign)
    concrete = _concretize(entry, spec, assign)
    ops = OperatorCache(concrete)
    results = {
        "scope": cohomology.invariant_level_banner(concrete),
        "stages": [cohomology.pure_full(ops, k).as_dict() for k in args.stage],
    }
    _emit(_report("purefull", name, _digest(entry, spec, assign), assign, results),
          args.format)
    return 0


def _cmd_hypotheses(args):
    name, entry, spec = _load_target(args.target)
    if entry is None or entry.family is None:
        raise UsageError("hypotheses needs a catalog entry with a deformation family")
    family = entry.family
    samples = _parse_samples(args.samples) if args.samples else _default_family_samples(family)
    try:
        rep = check_stability_hypotheses(family, samples)
    except StabilityInputError as e:
        raise UsageError(str(e)) from None
    _emit(_report("hypotheses", name, _digest(entry, spec, {}), {}, rep.as_dict()),
          args.format)
    return 0


def _cmd_catalog(args):
    results = {"entries": [e.as_dict() for e in catalog.catalog()]}
    _emit(
        {"command": "catalog", "results": results, "version": __version__},
        args.format,
    )
    return 0


# -- wiring ------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nilcoh",
        description="exact invariant complex geometry on nilmanifolds and "
                    "solvmanifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, target=True):
        if target:
            p.add_argument("target", help="@catalog-name or structure-equation file")
            p.add_argument("--assign", action="append", metavar="NAME=VALUE",
                           help="exact parameter value, e.g. t=1/2 or t=i/2")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("validate", help="integrability and d^2 = 0")
    common(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("cohomology", help="cohomology groups of one or all theories")
    common(p)
    p.add_argument("--theory", choices=tuple(THEORY_KEYS) + ("all",), default="all")
    p.add_argument("--degree", help="total degree k (dr) or bidegree p,q")
    p.set_defaults(fn=_cmd_cohomology)

    p = sub.add_parser("frolicher", help="spectral sequence pages and degeneration")
    common(p)
    p.add_argument("--max-page", type=int, default=None,
                   help="tabulate pages 1..N (default: through degeneration)")
    p.set_defaults(fn=_cmd_frolicher)

    p = sub.add_parser("symplectic",
                       help="decide existence of a complex symplectic structure")
    common(p)
    p.add_argument("--suite61", action="store_true",
                   help="check the witness wedge-power classes in all theories")
    p.add_argument("--betti-bounds", action="store_true",
                   help="check the even-degree Betti lower bounds")
    p.set_defaults(fn=_cmd_symplectic)

    p = sub.add_parser("deform", help="sweep a deformation family over samples")
    p.add_argument("target", help="@catalog-name with a deformation family")
    p.add_argument("--samples", help='e.g. "t=0; t=1/2; t=i/2"')
    p.add_argument("--grid", help='e.g. "t11=0|1/2; t22=0|1/2"')
    p.add_argument("--tasks",
                   help='e.g. "validate; symplectic; cohomology=bc:2,0; purefull=2"')
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=_cmd_deform)

    p = sub.add_parser("purefull", help="pure-and-full decomposition at a stage")
    common(p)
    p.add_argument("--stage", type=int, action="append", required=True,
                   help="total degree k (repeatable)")
    p.set_defaults(fn=_cmd_purefull)

    p = sub.add_parser("hypotheses",
                       help="stability hypotheses of a deformation family")
    p.add_argument("target", help="@catalog-name with a deformation family")
    p.add_argument("--samples", help='e.g. "t=0; t=1/2; t=-1/2"')
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=_cmd_hypotheses)

    p = sub.add_parser("catalog", help="list built-in structures")
    p.add_argument("--list", action="store_true", help="accepted for symmetry")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=_cmd_catalog)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"nilcoh: {e}", file=sys.stderr)
        return 2
    except (DeformationError, ScalarEvalError) as e:
        print(f"nilcoh: {e}", file=sys.stderr)
        return 1
    except DslError as e:
        print(f"nilcoh: {e}", file=sys.stderr)
        return 2
    except AssertionError as e:
        print(f"nilcoh: internal inconsistency: {e}", file=sys.stderr)
        return 3
    except Exception as e:  # noqa: BLE001 -- the contract maps surprises to 3
        print(f"nilcoh: unexpected error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
