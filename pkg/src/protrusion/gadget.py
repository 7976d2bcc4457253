import logging
from typing import Optional, Sequence

from src.caps import Caps
from src.dp import enumerate_feasible_boundary
from src.errors import IlpError
from src.gaifman import NiceGaifmanDecomposition
from src.ilp import LE, BoundariedIlp, BoundarySet, Constraint, DomainInterval, Ilp, Variable

logger = logging.getLogger(__name__)


def build_blocking_gadget(
    boundary_domains: Sequence[DomainInterval],
    blocked: BoundarySet,
    names: Optional[Sequence[str]] = None,
) -> BoundariedIlp:
    """
    A boundaried system whose feasible boundary tuples are exactly the
    domain box minus `blocked`.

    Every blocked tuple a gets u_i in {0..d_i-1} and v_i in {0, 1} per
    boundary variable with x_i = a_i + u_i - d_i * v_i and sum(u) >= 1, where
    d_i is the size of boundary variable i's own domain. The sum can only be
    zero when x equals a.

    Coefficients stay within d_i. Right-hand sides hold the values of a, so
    they stay within d_i only on domains starting at 0.
    """
    r = len(boundary_domains)
    if r < 1:
        raise IlpError("a blocking gadget needs at least one boundary variable")

    if blocked.r != r:
        raise IlpError(f"blocked tuples have arity {blocked.r}, boundary has {r}")

    if names is None:
        names = [f"b{i}" for i in range(r)]

    for values in blocked.tuples:
        if any(value not in domain for value, domain in zip(values, boundary_domains)):
            raise IlpError(f"blocked tuple {values} lies outside the boundary domains")

    variables = [Variable(name, domain) for name, domain in zip(names, boundary_domains)]
    rows = []

    for i, domain in enumerate(boundary_domains):
        rows.append(Constraint(((i, 1),), LE, domain.hi))
        rows.append(Constraint(((i, -1),), LE, -domain.lo))

    for j, values in enumerate(blocked.sorted()):
        u = [len(variables) + i for i in range(r)]
        v = [len(variables) + r + i for i in range(r)]

        for i, domain in enumerate(boundary_domains):
            variables.append(Variable(f"u{j}_{i}", DomainInterval(0, domain.size - 1)))
        for i in range(r):
            variables.append(Variable(f"v{j}_{i}", DomainInterval(0, 1)))

        for i, (value, domain) in enumerate(zip(values, boundary_domains)):
            d = domain.size
            rows.append(Constraint(((u[i], 1),), LE, d - 1))
            rows.append(Constraint(((u[i], -1),), LE, 0))
            rows.append(Constraint(((v[i], 1),), LE, 1))
            rows.append(Constraint(((v[i], -1),), LE, 0))
            rows.append(Constraint(((i, 1), (u[i], -1), (v[i], d)), LE, value))
            rows.append(Constraint(((i, -1), (u[i], 1), (v[i], -d)), LE, -value))

        rows.append(Constraint(tuple((index, -1) for index in u), LE, -1))

    return BoundariedIlp(Ilp(tuple(variables), tuple(rows)), tuple(range(r)))


def replace_boundaried_tw(
    bilp: BoundariedIlp,
    ngd: NiceGaifmanDecomposition,
    caps: Caps = None,
    threads: int = 1,
) -> BoundariedIlp:
    feasible = enumerate_feasible_boundary(bilp, ngd, caps, threads)
    blocked = feasible.complement(bilp.boundary_domains)
    gadget = build_blocking_gadget(bilp.boundary_domains, blocked, [bilp.ilp.names[index] for index in bilp.boundary])

    logger.debug(
        "Blocking %(blocked)d of %(total)d boundary tuples",
        {"blocked": len(blocked), "total": len(blocked) + len(feasible)},
    )

    return gadget
