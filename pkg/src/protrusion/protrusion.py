import logging
from dataclasses import dataclass

from src.caps import Caps, get_caps
from src.gaifman import ValidationReport, build_gaifman, treewidth_exact, treewidth_heuristic
from src.ilp import Ilp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProtrusionDecomposition:
    """
    A partition of the variables into a shared part `y0` and parts that only
    neighbour `y0`, each part plus its neighbourhood having small boundary
    and treewidth.
    """

    y0: frozenset[int]
    parts: tuple[frozenset[int], ...]
    r: int
    alpha: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "y0", frozenset(self.y0))
        object.__setattr__(self, "parts", tuple(frozenset(part) for part in self.parts))


def validate_protrusion_decomposition(ilp: Ilp, pd: ProtrusionDecomposition, caps: Caps = None) -> ValidationReport:
    caps = get_caps(caps)
    report = ValidationReport()
    g = build_gaifman(ilp)

    seen = set(pd.y0)
    for index in sorted(pd.y0):
        if index < 0 or index >= ilp.n:
            report.add("partition", f"Y0 holds unknown variable {index}")

    for number, part in enumerate(pd.parts, start=1):
        if not part:
            report.add("partition", f"part {number} is empty")
        stray = sorted(index for index in part if index < 0 or index >= ilp.n)
        if stray:
            report.add("partition", f"part {number} holds unknown variables {stray}")
        overlap = sorted(part & seen)
        if overlap:
            report.add("partition", f"part {number} overlaps earlier sets on {overlap}")
        seen |= part

    missing = sorted(set(range(ilp.n)) - seen)
    if missing:
        report.add("partition", f"variables {missing} are in no set")

    if max(len(pd.parts), len(pd.y0)) > pd.alpha:
        report.add("alpha", f"max(parts, |Y0|) = {max(len(pd.parts), len(pd.y0))} exceeds alpha = {pd.alpha}")

    if not report.ok:
        return report

    for number, part in enumerate(pd.parts, start=1):
        neighbours = g.neighbourhood(part)
        outside = sorted(neighbours - pd.y0)
        if outside:
            report.add("neighbourhood", f"part {number} neighbours {outside} outside Y0")
            continue

        closed = part | neighbours
        border = g.boundary(closed)
        if len(border) > pd.r:
            report.add("protrusion", f"part {number} has boundary {sorted(border)} larger than r = {pd.r}")

        sub, _ = g.subgraph(closed)
        width, _ = treewidth_heuristic(sub)
        if width <= pd.r - 1:
            continue

        if any(len(component) > caps.treewidth_vertices for component in sub.components()):
            report.notes.append(f"treewidth unchecked for part {number}")
            continue

        width, _ = treewidth_exact(sub, caps)
        if width > pd.r - 1:
            report.add("protrusion", f"part {number} has treewidth {width} above r - 1 = {pd.r - 1}")

    return report
