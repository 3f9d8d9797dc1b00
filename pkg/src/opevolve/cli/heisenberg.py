"""Text rendering of Heisenberg series for the ``heisenberg`` command."""
from __future__ import annotations

from ..errata import ERRATA
from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec
from ..opalgebra.heisenberg import heisenberg_series
from ..opalgebra.polynomial import DEFAULT_MAX_DEGREE, OperatorPolynomial


def heisenberg_print(H: HamiltonianSpec, operator: str, order: int,
                     max_degree: int = DEFAULT_MAX_DEGREE) -> str:
    """Canonical text for the Taylor series of q̂(t) or p̂(t).

    The first line is ``<op>(t) = <series>``. Further lines start with
    ``#``: one noting where the series terminates (if it does within
    ``order``) and one per erratum the result exercises.
    """
    if operator not in ("q", "p"):
        raise ValueError("operator must be 'q' or 'p'")
    A = OperatorPolynomial.q() if operator == "q" else OperatorPolynomial.p()
    series = heisenberg_series(A, H, order, max_degree=max_degree)
    lines = [f"{operator}(t) = {series.render()}"]
    last = series.terminates_at()
    if last < order:
        if last + 1 == order:
            lines.append(f"# coefficient of t^{order} is identically zero")
        else:
            lines.append(f"# coefficients of t^{last + 1} through t^{order} are identically zero")
    if H.kind is HamiltonianKind.CONSTANT_FORCE and operator == "p" and order >= 1:
        e = ERRATA["constant_force_momentum_rate"]
        lines.append(f"# {e.name}: {e.implemented} (printed variant: {e.printed})")
    return "\n".join(lines) + "\n"
