import argparse
import logging
import sys
import time
from dataclasses import asdict
from os.path import join
from typing import Optional

import chevron

from src import services
from src.dp import enumerate_feasible_boundary, solve_dp, solve_with_modulator
from src.document import Certificates, parse_instance, read_edge_list, serialize_instance, write_pace_td
from src.errors import IlpError, ResourceCapError
from src.gaifman import (
    build_gaifman,
    nice_decomposition,
    treewidth_exact,
    treewidth_heuristic,
    validate_nice,
    validate_tree_decomposition,
)
from src.generators import gen_hitting_set, gen_or_composition, gen_random_protrusion, gen_subset_sum
from src.ilp import BoundariedIlp, FeasibilityResult, Ilp, domain_size, is_normalized, normalize
from src.oracle import brute_boundary_set, brute_feasible
from src.protrusion import kernelize as kernelize_instance
from src.protrusion import reduce_instance, replace_boundaried_tw, validate_protrusion_decomposition
from src.tu import IntMatrix, certify_tu, replace_boundaried_tu, solve_tu_plus_entries

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1


def _setting(key: str, default):
    app_config = services.get("app_config")
    return app_config.get(key, default) if app_config is not None else default


def _threads(args: argparse.Namespace) -> int:
    threads = args.threads if args.threads is not None else int(_setting("threads", 1))
    if threads < 1:
        raise IlpError(f"--threads must be at least 1, got {threads}")
    return threads


def _load(args: argparse.Namespace) -> tuple[Ilp, Certificates]:
    return parse_instance(args.instance.read())


def _write(args: argparse.Namespace, data: bytes) -> None:
    if args.output is not None:
        args.output.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _dp(ilp: Ilp, exact: bool = False) -> FeasibilityResult:
    ilp = normalize(ilp)
    if not ilp.n:
        return brute_feasible(ilp)
    return solve_dp(ilp, nice_decomposition(ilp, exact=exact))


def _print_result(ilp: Ilp, result: FeasibilityResult) -> int:
    if not result.feasible:
        print("infeasible")
        return EXIT_INFEASIBLE

    print("feasible")
    for index in sorted(result.witness):
        print(f"{ilp.names[index]}={result.witness[index]}")
    return EXIT_OK


def _indices(ilp: Ilp, names: str) -> list[int]:
    return [ilp.index_of(name.strip()) for name in names.split(",") if name.strip()]


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise IlpError(f"{what} must be a comma-separated list of integers, got {text!r}") from err


def solve(args: argparse.Namespace) -> int:
    ilp, certificates = _load(args)

    if args.modulator:
        result = solve_with_modulator(ilp, _indices(ilp, args.modulator))
    elif args.tu:
        if certificates.tu_modified_entries is None:
            raise IlpError("solve --tu needs a tu_modified_entries certificate")
        result = solve_tu_plus_entries(ilp, certificates.tu_modified_entries)
    elif certificates.nice_decomposition is not None and is_normalized(ilp):
        result = solve_dp(ilp, certificates.nice_decomposition)
    else:
        result = _dp(ilp, args.exact)

    logger.info("Solved %(n)d variables: %(verdict)s", {"n": ilp.n, "verdict": "feasible" if result else "infeasible"})

    return _print_result(ilp, result)


def _render_report(context: dict) -> str:
    template_name = join(services.get("template_dir", "etc"), _setting("report_template", "kernelize_report.mustache"))

    with open(template_name, "r") as template:
        return chevron.render(template, context)


def kernelize(args: argparse.Namespace) -> int:
    ilp, certificates = _load(args)
    threads = _threads(args)
    parts = []
    started = time.perf_counter()

    if args.mode == "tw" and certificates.protrusion_decomposition is not None:
        kernel = kernelize_instance(ilp, certificates.protrusion_decomposition, threads=threads)
        reduced, out = kernel.ilp, Certificates()
        parts = [asdict(part) for part in kernel.parts]
    elif certificates.boundary is not None:
        bilp = BoundariedIlp(normalize(ilp), certificates.boundary)
        if args.mode == "tw":
            gadget = replace_boundaried_tw(bilp, nice_decomposition(bilp.ilp), threads=threads)
        else:
            gadget = replace_boundaried_tu(bilp, threads=threads)

        reduced, out = gadget.ilp, Certificates(boundary=gadget.boundary)
        blocked = (gadget.ilp.n - gadget.r) // (2 * gadget.r)
        parts = [
            {
                "part": 1,
                "boundary": gadget.r,
                "blocked": blocked,
                "gadget_variables": gadget.ilp.n - gadget.r,
                "gadget_rows": gadget.ilp.m,
            }
        ]
    elif args.mode == "tw":
        raise IlpError("kernelize --mode tw needs a protrusion_decomposition or boundary certificate")
    else:
        raise IlpError("kernelize --mode tu needs a boundary certificate")

    seconds = time.perf_counter() - started
    _write(args, serialize_instance(reduced, out))

    sys.stderr.write(
        _render_report(
            {
                "mode": args.mode,
                "before_variables": ilp.n,
                "before_constraints": ilp.m,
                "after_variables": reduced.n,
                "after_constraints": reduced.m,
                "gadgets": sum(1 for part in parts if part["boundary"]),
                "seconds": f"{seconds:.3f}",
                "parts": parts,
            }
        )
    )

    return EXIT_OK


def generate(args: argparse.Namespace) -> int:
    if args.kind == "subset-sum":
        ilp, td = gen_subset_sum(_ints(args.items, "--items"), args.target)
        certificates = Certificates(tree_decomposition=td)
    elif args.kind == "hitting-set":
        sets = [_ints(members, "--sets") for members in args.sets.split(";")]
        ilp, entries = gen_hitting_set(args.universe, sets, args.k)
        certificates = Certificates(tu_modified_entries=tuple(entries))
    elif args.kind == "or-composition":
        graphs = [read_edge_list(graph.read()) for graph in args.graph]
        ilp, pd = gen_or_composition(graphs, args.k)
        certificates = Certificates(protrusion_decomposition=pd)
    else:
        ilp, pd = gen_random_protrusion(args.k, args.r, args.d, args.parts, args.seed)
        certificates = Certificates(protrusion_decomposition=pd)

    logger.info("Generated %(kind)s instance: %(n)d variables, %(m)d rows", {"kind": args.kind, "n": ilp.n, "m": ilp.m})

    _write(args, serialize_instance(ilp, certificates))

    return EXIT_OK


def _check(checks: list, name: str, ok: bool, detail: str = "") -> None:
    checks.append((name, ok, detail))
    if not ok:
        logger.warning("Check %(name)s failed: %(detail)s", {"name": name, "detail": detail})


def verify(args: argparse.Namespace) -> int:
    ilp, certificates = _load(args)
    normalized = normalize(ilp)
    checks = []

    oracle = brute_feasible(ilp)
    dp = _dp(ilp)
    _check(checks, "oracle", oracle.feasible == dp.feasible, f"oracle {oracle.feasible}, dp {dp.feasible}")

    if certificates.tree_decomposition is not None:
        report = validate_tree_decomposition(build_gaifman(ilp), certificates.tree_decomposition)
        _check(checks, "tree_decomposition", report.ok, "; ".join(detail for _, detail in report.violations))

    if certificates.nice_decomposition is not None:
        report = validate_nice(ilp, certificates.nice_decomposition)
        _check(checks, "nice_decomposition", report.ok, "; ".join(detail for _, detail in report.violations))

    pd = certificates.protrusion_decomposition
    if pd is not None:
        report = validate_protrusion_decomposition(normalized, pd)
        _check(checks, "protrusion_decomposition", report.ok, "; ".join(detail for _, detail in report.violations))

        if report.ok:
            kernel = _dp(reduce_instance(normalized, pd, threads=_threads(args)))
            _check(checks, "kernel", kernel.feasible == oracle.feasible, f"kernel {kernel.feasible}, oracle {oracle.feasible}")

    if certificates.boundary is not None:
        bilp = BoundariedIlp(normalized, certificates.boundary)
        expected = brute_boundary_set(bilp)
        found = enumerate_feasible_boundary(bilp, nice_decomposition(normalized), threads=_threads(args))
        _check(checks, "boundary", expected == found, f"oracle {len(expected)} tuples, dp {len(found)}")

    if certificates.tu_modified_entries is not None:
        matrix = IntMatrix.from_ilp(normalized).with_zeroed(certificates.tu_modified_entries)
        _check(checks, "tu_modified_entries", certify_tu(matrix), "zeroed matrix is not totally unimodular")

    for name, ok, detail in checks:
        print(f"{name}: ok" if ok else f"{name}: FAILED ({detail})")

    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_INFEASIBLE


def analyze(args: argparse.Namespace) -> int:
    ilp, _ = _load(args)
    g = build_gaifman(ilp)
    width, td = treewidth_heuristic(g)

    exact: Optional[int] = None
    try:
        exact, exact_td = treewidth_exact(g)
    except ResourceCapError as err:
        logger.warning("Exact treewidth skipped: %(reason)s", {"reason": str(err)})

    print(f"variables: {ilp.n}")
    print(f"constraints: {ilp.m}")
    print(f"domain size: {domain_size(ilp)}")
    print(f"edges: {len(g.edges())}")
    print(f"max degree: {g.max_degree()}")
    print(f"max row support: {max((len(constraint.coeffs) for constraint in ilp.constraints), default=0)}")
    print(f"heuristic treewidth: {width}")
    print(f"exact treewidth: {'skipped' if exact is None else exact}")

    if args.export_td is not None:
        args.export_td.write(write_pace_td(td if exact is None else exact_td, ilp.n))

    return EXIT_OK
