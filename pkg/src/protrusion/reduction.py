import logging
from dataclasses import dataclass

from src.caps import Caps
from src.dp import solve_dp
from src.errors import DecompositionError
from src.gaifman import GaifmanGraph, build_gaifman, nice_decomposition
from src.ilp import LE, BoundariedIlp, Constraint, Ilp, Variable, domain_rows, extract_subsystem, normalize

from .gadget import replace_boundaried_tw
from .protrusion import ProtrusionDecomposition, validate_protrusion_decomposition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartReport:
    part: int
    boundary: int
    blocked: int
    gadget_variables: int
    gadget_rows: int


@dataclass(frozen=True)
class Kernel:
    ilp: Ilp
    parts: tuple[PartReport, ...]


def extract_part(ilp: Ilp, g: GaifmanGraph, part: frozenset[int]) -> tuple[BoundariedIlp, dict[int, int]]:
    """
    The rows touching `part`, plus bound rows for its neighbours, as a
    boundaried system whose boundary is the neighbourhood in ascending order.
    """
    neighbours = sorted(g.neighbourhood(part))
    touching = [row for row, constraint in enumerate(ilp.constraints) if constraint.support & part]

    sub, mapping = extract_subsystem(ilp, set(part) | set(neighbours), touching + list(domain_rows(ilp, neighbours)))

    return BoundariedIlp(sub, tuple(mapping[index] for index in neighbours)), mapping


def kernelize(ilp: Ilp, pd: ProtrusionDecomposition, caps: Caps = None, threads: int = 1) -> Kernel:
    ilp = normalize(ilp)

    report = validate_protrusion_decomposition(ilp, pd, caps)
    if not report.ok:
        raise DecompositionError("invalid protrusion decomposition", report)
    for note in report.notes:
        logger.warning("Protrusion decomposition: %(note)s", {"note": note})

    g = build_gaifman(ilp)
    y0 = sorted(pd.y0)
    position = {index: new for new, index in enumerate(y0)}

    variables = [ilp.variables[index] for index in y0]
    rows = [
        Constraint(tuple((position[index], coeff) for index, coeff in constraint.coeffs), LE, constraint.rhs)
        for constraint in ilp.constraints
        if constraint.support <= pd.y0
    ]
    parts = []

    for number, part in enumerate(pd.parts, start=1):
        bilp, mapping = extract_part(ilp, g, part)

        if not bilp.r:
            feasible = solve_dp(bilp.ilp, nice_decomposition(bilp.ilp, caps=caps), caps).feasible
            if not feasible:
                rows.append(Constraint((), LE, -1))
            parts.append(PartReport(number, 0, 0 if feasible else 1, 0, 0 if feasible else 1))

            logger.info(
                "Part %(part)d has no boundary and is %(verdict)s",
                {"part": number, "verdict": "dropped" if feasible else "infeasible"},
            )
            continue

        gadget = replace_boundaried_tw(bilp, nice_decomposition(bilp.ilp, caps=caps), caps, threads)
        inverse = {local: index for index, local in mapping.items()}

        spliced = {i: position[inverse[local]] for i, local in enumerate(bilp.boundary)}
        for local in range(gadget.r, gadget.ilp.n):
            spliced[local] = len(variables)
            variable = gadget.ilp.variables[local]
            variables.append(Variable(f"part{number}_{variable.name}", variable.domain))

        for constraint in gadget.ilp.constraints:
            rows.append(
                Constraint(
                    tuple(sorted((spliced[index], coeff) for index, coeff in constraint.coeffs)),
                    LE,
                    constraint.rhs,
                )
            )

        blocked = (gadget.ilp.n - gadget.r) // (2 * gadget.r)
        parts.append(PartReport(number, bilp.r, blocked, gadget.ilp.n - gadget.r, gadget.ilp.m))

        logger.info(
            "Part %(part)d: boundary %(boundary)d, %(blocked)d blocked tuples",
            {"part": number, "boundary": bilp.r, "blocked": blocked},
        )

    return Kernel(Ilp(tuple(variables), tuple(rows)), tuple(parts))


def reduce_instance(ilp: Ilp, pd: ProtrusionDecomposition, caps: Caps = None, threads: int = 1) -> Ilp:
    return kernelize(ilp, pd, caps, threads).ilp
