"""Weak-security verification for an outer coset code over an inner storage code.

The verifier decides, for an adversary reading every symbol of ell nodes,
whether any group of g files stays information-theoretically hidden.  Two
independent routes are provided and must agree:

* `leakage` computes I(S_G; observations) in field-symbol units from three
  ranks: rank(H_G) + rank(G') - rank of the stacked matrix;
* `mi_oracle` enumerates every possible message on tiny instances and
  tabulates the joint distribution, computing the mutual information exactly
  from counts, with no rank computation anywhere.

`is_weakly_secure` sweeps adversary positions and file groups exhaustively
(or by seeded sampling, which is explicitly non-certifying), `max_g` finds
the best protected group size, and `equivalence_check` confirms on one
instance that the group form of security coincides with the conditional
per-file form.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .coset import CosetCode, format_coset, parse_coset
from .errors import WsecError
from .linalg import FMatrix, take_rows, vstack
from .storage import StorageCode, eavesdrop_view, format_storage, parse_storage, verify_structure

DEFAULT_ORACLE_CAP = 1 << 20
DEFAULT_SAMPLE_BUDGET = 1000
_ORACLE_FIELD_LIMIT = 1024  # the oracle tabulates a full QxQ addition table
_PARALLEL_THRESHOLD = 64

__all__ = [
    "DEFAULT_ORACLE_CAP", "DEFAULT_SAMPLE_BUDGET", "EquivalenceReport",
    "SecurityReport", "adversary_matrix", "equivalence_check",
    "equivalence_matrices", "format_report", "group_rows", "is_weakly_secure",
    "leakage", "max_g", "mi_oracle",
]


def leakage(h_g: FMatrix, gprime: FMatrix) -> int:
    """Symbols the observed rows reveal about the selected message rows.

    Zero means the row spaces intersect trivially, i.e. the group is hidden.
    """
    if h_g.cols != gprime.cols:
        raise ValueError("row sets must share the column count")
    if h_g.tower.signature != gprime.tower.signature:
        raise ValueError("row sets must live over the same field")
    return h_g.rank() + gprime.rank() - vstack(h_g, gprime).rank()


def adversary_matrix(outer: CosetCode, inner: StorageCode, nodes) -> FMatrix:
    """Stacked generator rows of the observed nodes, over the outer top field."""
    return eavesdrop_view(inner, nodes).gprime.embed_into(outer.tower)


def group_rows(outer: CosetCode, group) -> FMatrix:
    """Rows of H for a 1-based file group."""
    for i in group:
        if not 1 <= i <= outer.Bs:
            raise ValueError(f"file {i} out of range 1..{outer.Bs}")
    return take_rows(outer.h, [i - 1 for i in group])


@dataclass(frozen=True)
class SecurityReport:
    ell: int
    g: int
    secure: bool
    witness: tuple | None
    checked: int
    mode: str
    seed: int = 0
    max_g: int | None = None

    @property
    def verdict(self) -> str:
        return "secure" if self.secure else "insecure"

    @property
    def certified(self) -> bool:
        return self.mode == "exhaustive"


def format_report(report: SecurityReport) -> str:
    lines = [f"VERDICT {report.verdict}"]
    if report.max_g is not None:
        lines.append(f"MAXG {report.max_g}")
    if report.witness is not None:
        nodes = ",".join(str(i) for i in report.witness[0])
        group = ",".join(str(i) for i in report.witness[1])
        lines.append(f"WITNESS L={nodes} G={group}")
    lines.append(f"CHECKED {report.checked} MODE {report.mode} seed={report.seed}")
    return "\n".join(lines) + "\n"


def _check_pair(outer: CosetCode, inner: StorageCode) -> None:
    s = inner.spec
    if (outer.k, outer.alpha, outer.q) != (s.k, s.alpha, s.q):
        raise ValueError("outer and inner codes disagree on (k, alpha, q)")
    if outer.B != s.B:
        raise ValueError("outer and inner codes disagree on the codeword length")


def _require_structure(inner: StorageCode) -> None:
    rep = verify_structure(inner)
    if not rep.ok:
        raise ValueError(f"inner code fails structural checks: {rep.failures!r}")


def _combo_unrank(rank: int, n: int, r: int) -> tuple[int, ...]:
    """rank-th r-subset of 1..n in lexicographic order."""
    out = []
    x = 1
    for slot in range(r, 0, -1):
        while comb(n - x, slot - 1) <= rank:
            rank -= comb(n - x, slot - 1)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def _pair_leaks(outer, inner, nodes, group, gp_cache, rank_cache) -> bool:
    gp, rank_gp = gp_cache.get(nodes, (None, None))
    if gp is None:
        gp = adversary_matrix(outer, inner, nodes)
        rank_gp = gp.rank()
        gp_cache[nodes] = (gp, rank_gp)
    rank_hg = rank_cache.get(group)
    if rank_hg is None:
        rank_hg = group_rows(outer, group).rank()
        rank_cache[group] = rank_hg
    stacked = vstack(group_rows(outer, group), gp)
    return rank_hg + rank_gp != stacked.rank()


def is_weakly_secure(outer: CosetCode, inner: StorageCode, ell: int, g: int,
                     mode: str = "exhaustive", seed: int = 0,
                     budget: int = DEFAULT_SAMPLE_BUDGET,
                     all_sizes: bool = False, threads: int = 1,
                     check_structure: bool = True) -> SecurityReport:
    """Decide whether every g-file group is hidden from every ell-node view.

    The default exhaustive mode checks all maximal pairs |L| = ell, |G| = g,
    which certifies the verdict (hiding larger sets hides their subsets).
    `all_sizes` additionally sweeps every smaller size as a self-test.
    Sampled mode checks a seeded without-replacement sample and is not a
    certificate; a found witness is still a real witness.
    """
    _check_pair(outer, inner)
    spec = inner.spec
    if not 0 <= ell < spec.k:
        raise ValueError(f"need 0 <= ell < k={spec.k}")
    ceiling = spec.B - ell * spec.alpha
    if not 0 <= g <= ceiling:
        raise ValueError(f"group size g={g} exceeds the structural ceiling "
                         f"B - ell*alpha = {ceiling}")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if check_structure:
        _require_structure(inner)

    n, b_files = spec.n, outer.Bs
    gp_cache: dict = {}
    rank_cache: dict = {}

    if mode == "sampled":
        total = comb(n, ell) * comb(b_files, g)
        width = comb(b_files, g)
        rng = random.Random(seed)
        picks = rng.sample(range(total), min(budget, total))
        checked = 0
        for t in picks:
            nodes = _combo_unrank(t // width, n, ell)
            group = _combo_unrank(t % width, b_files, g)
            checked += 1
            if _pair_leaks(outer, inner, nodes, group, gp_cache, rank_cache):
                return SecurityReport(ell, g, False, (nodes, group), checked,
                                      "sampled", seed)
        return SecurityReport(ell, g, True, None, checked, "sampled", seed)

    if threads > 1 and not all_sizes:
        total = comb(n, ell) * comb(b_files, g)
        if total >= _PARALLEL_THRESHOLD:
            first_fail = _parallel_first_failure(outer, inner, ell, g, threads)
            if first_fail is None:
                return SecurityReport(ell, g, True, None, total, "exhaustive", seed)
            width = comb(b_files, g)
            nodes = _combo_unrank(first_fail // width, n, ell)
            group = _combo_unrank(first_fail % width, b_files, g)
            return SecurityReport(ell, g, False, (nodes, group), first_fail + 1,
                                  "exhaustive", seed)

    def node_sets():
        if all_sizes:
            for t in range(ell + 1):
                yield from itertools.combinations(range(1, n + 1), t)
        else:
            yield from itertools.combinations(range(1, n + 1), ell)

    def groups():
        if all_sizes:
            for t in range(g + 1):
                yield from itertools.combinations(range(1, b_files + 1), t)
        else:
            yield from itertools.combinations(range(1, b_files + 1), g)

    checked = 0
    for nodes in node_sets():
        for group in groups():
            checked += 1
            if _pair_leaks(outer, inner, nodes, group, gp_cache, rank_cache):
                return SecurityReport(ell, g, False, (nodes, group), checked,
                                      "exhaustive", seed)
    return SecurityReport(ell, g, True, None, checked, "exhaustive", seed)


def max_g(outer: CosetCode, inner: StorageCode, ell: int, threads: int = 1) -> int:
    """Largest g for which the pair is g-weakly secure against ell nodes.

    Security is monotone in g (revealing nothing about a group reveals
    nothing about its subsets), so an ascending sweep stops at the first
    failure.  The result never exceeds the structural ceiling B - ell*alpha.
    """
    _check_pair(outer, inner)
    _require_structure(inner)
    ceiling = inner.spec.B - ell * inner.spec.alpha
    best = 0
    for g in range(1, ceiling + 1):
        rep = is_weakly_secure(outer, inner, ell, g, threads=threads,
                               check_structure=False)
        if not rep.secure:
            break
        best = g
    return best


# -- parallel sweep -----------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(outer_text, inner_text, ell, g):
    outer = parse_coset(outer_text)
    inner = parse_storage(inner_text)
    _WORKER_STATE.update(outer=outer, inner=inner, ell=ell, g=g,
                         gp_cache={}, rank_cache={})


def _scan_range(bounds) -> int | None:
    start, stop = bounds
    outer, inner = _WORKER_STATE["outer"], _WORKER_STATE["inner"]
    ell, g = _WORKER_STATE["ell"], _WORKER_STATE["g"]
    width = comb(outer.Bs, g)
    for t in range(start, stop):
        nodes = _combo_unrank(t // width, inner.spec.n, ell)
        group = _combo_unrank(t % width, outer.Bs, g)
        if _pair_leaks(outer, inner, nodes, group,
                       _WORKER_STATE["gp_cache"], _WORKER_STATE["rank_cache"]):
            return t
    return None


def _parallel_first_failure(outer, inner, ell, g, threads) -> int | None:
    import multiprocessing

    total = comb(inner.spec.n, ell) * comb(outer.Bs, g)
    chunk = max(1, -(-total // (threads * 4)))
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    args = (format_coset(outer), format_storage(inner), ell, g)
    with multiprocessing.Pool(threads, initializer=_init_worker, initargs=args) as pool:
        hits = [t for t in pool.map(_scan_range, ranges) if t is not None]
    return min(hits) if hits else None


# -- exhaustive mutual-information oracle -------------------------------------


def _int_log(count: int, base: int) -> int:
    t = 0
    while count > 1 and count % base == 0:
        count //= base
        t += 1
    if count != 1:
        raise WsecError("distribution is not uniform over cosets; "
                        "exact symbol entropy does not exist")
    return t


def _entropy(counter: Counter, total: int, base: int) -> Fraction:
    acc = 0
    for c in counter.values():
        acc += c * _int_log(c, base)
    return Fraction(_int_log(total, base)) - Fraction(acc, total)


def _enumerate_pairs(h_full, gprime, cap):
    """Yield (message tuple, observation tuple) over every stored word.

    Values are canonical element indices.  The stored word ranges over the
    whole space, which makes the message uniform whenever H is invertible.
    """
    tower = gprime.tower
    b_total = gprime.cols
    q = tower.order
    if q ** b_total > cap:
        raise ValueError(f"instance too large for the oracle: {q}^{b_total} "
                         f"exceeds the cap {cap}")
    if q > _ORACLE_FIELD_LIMIT:
        raise ValueError(f"oracle supports fields up to {_ORACLE_FIELD_LIMIT} elements")
    elems = tower.elements(q)
    index_of = {x.coords: i for i, x in enumerate(elems)}

    def mult_table(a):
        return [index_of[(a * x).coords] for x in elems]

    def row_tables(matrix):
        out = []
        for row in matrix.data:
            out.append([(j, mult_table(a)) for j, a in enumerate(row) if not a.is_zero])
        return out

    add = [[index_of[(x + y).coords] for y in elems] for x in elems]

    def apply(rows, vec):
        out = []
        for terms in rows:
            s = 0
            for j, table in terms:
                s = add[s][table[vec[j]]]
            out.append(s)
        return tuple(out)

    h_rows = row_tables(h_full) if h_full is not None else None
    g_rows = row_tables(gprime)
    for vec in itertools.product(range(q), repeat=b_total):
        message = vec if h_rows is None else apply(h_rows, vec)
        yield message, apply(g_rows, vec)


def _check_oracle_outer(h_full, gprime):
    if h_full is None:
        return
    if h_full.tower.signature != gprime.tower.signature:
        raise ValueError("outer matrix and observation rows live over different fields")
    if h_full.rows != h_full.cols or h_full.cols != gprime.cols:
        raise ValueError("oracle needs a square full outer matrix (or None for identity)")
    if h_full.rank() != h_full.rows:
        raise ValueError("oracle needs an invertible outer matrix")


def mi_oracle(h_full: FMatrix | None, gprime: FMatrix, group,
              cap: int = DEFAULT_ORACLE_CAP) -> Fraction:
    """Exact I(S_G; observations) in field-symbol units by full enumeration.

    `h_full` of None means the identity outer code.  The result is an exact
    rational; for linear maps it is a nonnegative integer.
    """
    _check_oracle_outer(h_full, gprime)
    group = tuple(group)
    b_total = gprime.cols
    for i in group:
        if not 1 <= i <= b_total:
            raise ValueError(f"file {i} out of range 1..{b_total}")
    q = gprime.tower.order
    joint: Counter = Counter()
    marg_s: Counter = Counter()
    marg_e: Counter = Counter()
    total = 0
    for message, obs in _enumerate_pairs(h_full, gprime, cap):
        sel = tuple(message[i - 1] for i in group)
        joint[(sel, obs)] += 1
        marg_s[sel] += 1
        marg_e[obs] += 1
        total += 1
    return (_entropy(marg_s, total, q) + _entropy(marg_e, total, q)
            - _entropy(joint, total, q))


@dataclass(frozen=True)
class EquivalenceReport:
    """Instance-level comparison of the two security formulations."""

    rank_side_secure: bool
    conditional_secure: bool
    rank_witness: tuple | None = None
    conditional_witness: tuple | None = None

    @property
    def agree(self) -> bool:
        return self.rank_side_secure == self.conditional_secure


def equivalence_matrices(h_full: FMatrix, gprime: FMatrix, group,
                         cap: int = DEFAULT_ORACLE_CAP) -> EquivalenceReport:
    """Compare group security with conditional per-file security on one instance.

    Rank side: every subset of `group` leaks zero by the rank formula.
    Conditional side: for every proper subset G'' of `group` and every other
    file i in the group, the observation distribution is the same for all
    values of S_i once S_G'' is fixed (checked by exhaustive tabulation).
    The two must agree; a disagreement would falsify the rank criterion.
    """
    _check_oracle_outer(h_full, gprime)
    group = tuple(group)
    rank_secure, rank_witness = True, None
    for size in range(len(group) + 1):
        for sub in itertools.combinations(group, size):
            if leakage(group_rows_of(h_full, sub), gprime) != 0:
                rank_secure, rank_witness = False, sub
                break
        if not rank_secure:
            break

    samples = list(_enumerate_pairs(h_full, gprime, cap))
    cond_secure, cond_witness = True, None
    for size in range(len(group)):
        for sub in itertools.combinations(group, size):
            rest = [i for i in group if i not in sub]
            for i in rest:
                buckets: dict = {}
                for message, obs in samples:
                    fixed = tuple(message[j - 1] for j in sub)
                    per_value = buckets.setdefault(fixed, {})
                    per_value.setdefault(message[i - 1], Counter())[obs] += 1
                for per_value in buckets.values():
                    dists = list(per_value.values())
                    if any(d != dists[0] for d in dists[1:]):
                        cond_secure, cond_witness = False, (i, sub)
                        break
                if not cond_secure:
                    break
            if not cond_secure:
                break
        if not cond_secure:
            break
    return EquivalenceReport(rank_secure, cond_secure, rank_witness, cond_witness)


def group_rows_of(h_full: FMatrix, group) -> FMatrix:
    return take_rows(h_full, [i - 1 for i in group])


def equivalence_check(outer: CosetCode, inner: StorageCode, nodes, group,
                      cap: int = DEFAULT_ORACLE_CAP) -> EquivalenceReport:
    _check_pair(outer, inner)
    gp = adversary_matrix(outer, inner, nodes)
    return equivalence_matrices(outer.h, gp, tuple(group), cap=cap)
