"""Security survey across adversary strengths, with delimited and figure output.

`survey` sweeps every adversary size ell from 1 to k-1, finds the best
protected group size for each, and records the structural ceiling and the
message-capacity bound alongside.  The survey renders three ways: a
TOPFIELD summary line plus a tab-separated table for machine consumption,
and two PNG figures for humans.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coset import CosetCode
from .security import is_weakly_secure
from .storage import StorageCode, bounds_from_params, verify_structure

__all__ = ["ReportRow", "SecuritySurvey", "format_table", "render_figures", "survey"]


@dataclass(frozen=True)
class ReportRow:
    ell: int
    mu: int
    ceiling: int
    max_g: int
    bs_bound: int


@dataclass(frozen=True)
class SecuritySurvey:
    rows: tuple[ReportRow, ...]
    grid: dict
    q: int
    qr: int
    m: int
    top_order: int


def survey(outer: CosetCode, inner: StorageCode, threads: int = 1) -> SecuritySurvey:
    """Best protected group size for every adversary strength 1..k-1."""
    rep = verify_structure(inner)
    if not rep.ok:
        raise ValueError(f"inner code fails structural checks: {rep.failures!r}")
    spec = inner.spec
    beta = spec.beta
    rows = []
    grid: dict = {}
    for ell in range(1, spec.k):
        ceiling = spec.B - ell * spec.alpha
        best = 0
        failed = False
        for g in range(1, ceiling + 1):
            if failed:
                grid[(ell, g)] = False
                continue
            ok = is_weakly_secure(outer, inner, ell, g, threads=threads,
                                  check_structure=False).secure
            grid[(ell, g)] = ok
            if ok:
                best = g
            else:
                failed = True
        _, bs_bound = bounds_from_params(spec.k, spec.d, spec.alpha, beta, ell)
        rows.append(ReportRow(ell, ell * spec.alpha, ceiling, best, bs_bound))
    return SecuritySurvey(tuple(rows), grid, outer.q, outer.qr, outer.m,
                          outer.tower.order)


def format_table(sv: SecuritySurvey, comment_topfield: bool = False) -> str:
    """TOPFIELD line plus a tab-separated table, one row per adversary size."""
    top = f"TOPFIELD q={sv.q} qr={sv.qr} m={sv.m} order={sv.top_order}"
    if comment_topfield:
        top = "# " + top
    lines = [top, "l\tmu\tceiling\tmax_g\tbs_bound"]
    for r in sv.rows:
        lines.append(f"{r.ell}\t{r.mu}\t{r.ceiling}\t{r.max_g}\t{r.bs_bound}")
    return "\n".join(lines) + "\n"


def render_figures(sv: SecuritySurvey, prefix: str) -> list[str]:
    """Write two PNG figures next to the delimited output; returns the paths.

    The first compares the achieved group size per adversary strength with
    the structural ceiling and the capacity bound.  The second maps the
    secure/insecure outcome for every (ell, g) cell that was tried.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    meta = {"Software": None}
    paths = []

    ells = [r.ell for r in sv.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(ells, [r.max_g for r in sv.rows], width=0.6, color="#4878a8",
           label="achieved group size")
    ax.plot(ells, [r.ceiling for r in sv.rows], "k--", marker="o",
            label="structural ceiling")
    ax.plot(ells, [r.bs_bound for r in sv.rows], "r:", marker="s",
            label="capacity bound")
    ax.set_xlabel("nodes observed")
    ax.set_ylabel("protected group size")
    ax.set_xticks(ells)
    ax.legend()
    fig.tight_layout()
    path = f"{prefix}-maxg.png"
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    paths.append(path)

    max_ceiling = max((r.ceiling for r in sv.rows), default=0)
    fig, ax = plt.subplots(figsize=(6, 4))
    if sv.rows and max_ceiling > 0:
        data = []
        for r in sv.rows:
            row = []
            for g in range(1, max_ceiling + 1):
                if (r.ell, g) in sv.grid:
                    row.append(1.0 if sv.grid[(r.ell, g)] else 0.0)
                else:
                    row.append(0.5)
            data.append(row)
        ax.imshow(data, cmap="RdYlGn", vmin=0.0, vmax=1.0, aspect="auto",
                  origin="lower",
                  extent=(0.5, max_ceiling + 0.5, ells[0] - 0.5, ells[-1] + 0.5))
        ax.set_xticks(range(1, max_ceiling + 1))
        ax.set_yticks(ells)
    ax.set_xlabel("group size")
    ax.set_ylabel("nodes observed")
    fig.tight_layout()
    path = f"{prefix}-grid.png"
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    paths.append(path)
    return paths
