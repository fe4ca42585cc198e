"""Sparse parity-check code model.

Loads codes from alist files or quasi-cyclic base matrices, validates the
Tanner-graph adjacency, and builds the fixed natural-order variable-node
partition used by group-shuffled schedules.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


class CodeFormatError(ValueError):
    """Malformed alist / base-matrix input. Message carries the line number."""


@dataclass(eq=False)
class ParityCheckCode:
    """An M x N binary parity-check matrix stored as adjacency lists.

    check_adj[m] lists the variable nodes of check m (ascending), var_adj[n]
    the check nodes of variable n. Instances are immutable by convention and
    safe to share across concurrently running decoders.
    """

    n_vars: int
    n_checks: int
    check_adj: list[np.ndarray]
    var_adj: list[np.ndarray]
    check_deg: np.ndarray
    var_deg: np.ndarray
    max_var_deg: int
    rate: float
    _flat: "FlatGraph | None" = field(default=None, repr=False)

    @property
    def n_edges(self) -> int:
        return int(self.check_deg.sum())

    def flat(self) -> "FlatGraph":
        """CSR-style arrays for the numeric kernels (built once, cached)."""
        if self._flat is None:
            self._flat = _build_flat(self)
        return self._flat


class FlatGraph(NamedTuple):
    """Check-side CSR plus the variable-side view into the same edge ids.

    Edge e in [chk_ptr[m], chk_ptr[m+1]) is the edge (m, chk_var[e]);
    var_edge[var_ptr[n]:var_ptr[n+1]] are the edge ids incident to n, and
    edge_check[e] recovers the check of edge e. scale_flat/scale_ptr hold the
    per-variable lookup of floor(x * dv_max / deg(n)) for x in 0..deg(n).
    """

    chk_ptr: np.ndarray   # int64 [M+1]
    chk_var: np.ndarray   # int32 [E]
    var_ptr: np.ndarray   # int64 [N+1]
    var_edge: np.ndarray  # int64 [E]
    edge_check: np.ndarray  # int32 [E]
    check_deg: np.ndarray   # int32 [M]
    var_deg: np.ndarray     # int32 [N]
    dv_max: int
    scale_ptr: np.ndarray   # int64 [N+1]
    scale_flat: np.ndarray  # int64 [sum(deg+1)]


@dataclass
class GroupPartition:
    """Ordered, pairwise-disjoint variable-node groups covering 0..N-1."""

    groups: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


def _build_flat(code: ParityCheckCode) -> FlatGraph:
    m, n = code.n_checks, code.n_vars
    chk_ptr = np.zeros(m + 1, dtype=np.int64)
    chk_ptr[1:] = np.cumsum(code.check_deg)
    n_edges = int(chk_ptr[-1])
    chk_var = np.empty(n_edges, dtype=np.int32)
    edge_check = np.empty(n_edges, dtype=np.int32)
    for mm in range(m):
        lo, hi = chk_ptr[mm], chk_ptr[mm + 1]
        chk_var[lo:hi] = code.check_adj[mm]
        edge_check[lo:hi] = mm
    var_ptr = np.zeros(n + 1, dtype=np.int64)
    var_ptr[1:] = np.cumsum(code.var_deg)
    var_edge = np.empty(n_edges, dtype=np.int64)
    fill = var_ptr[:-1].copy()
    for e in range(n_edges):
        v = chk_var[e]
        var_edge[fill[v]] = e
        fill[v] += 1
    scale_ptr = np.zeros(n + 1, dtype=np.int64)
    scale_ptr[1:] = np.cumsum(code.var_deg.astype(np.int64) + 1)
    scale_flat = np.empty(int(scale_ptr[-1]), dtype=np.int64)
    for v in range(n):
        d = int(code.var_deg[v])
        base = scale_ptr[v]
        for x in range(d + 1):
            scale_flat[base + x] = (x * code.max_var_deg) // d if d else 0
    return FlatGraph(
        chk_ptr=chk_ptr,
        chk_var=chk_var,
        var_ptr=var_ptr,
        var_edge=var_edge,
        edge_check=edge_check,
        check_deg=code.check_deg.astype(np.int32),
        var_deg=code.var_deg.astype(np.int32),
        dv_max=code.max_var_deg,
        scale_ptr=scale_ptr,
        scale_flat=scale_flat,
    )


def from_check_adjacency(check_adj: list[np.ndarray], n_vars: int) -> ParityCheckCode:
    """Build a code from per-check variable lists (0-based, duplicate-free)."""
    n_checks = len(check_adj)
    check_adj = [np.asarray(sorted(a), dtype=np.int32) for a in check_adj]
    var_lists: list[list[int]] = [[] for _ in range(n_vars)]
    for m, adj in enumerate(check_adj):
        for v in adj:
            if not 0 <= v < n_vars:
                raise ValueError(f"variable index {v} out of range in check {m}")
            var_lists[int(v)].append(m)
    var_adj = [np.asarray(l, dtype=np.int32) for l in var_lists]
    check_deg = np.asarray([len(a) for a in check_adj], dtype=np.int32)
    var_deg = np.asarray([len(a) for a in var_adj], dtype=np.int32)
    max_var_deg = int(var_deg.max()) if n_vars else 0
    return ParityCheckCode(
        n_vars=n_vars,
        n_checks=n_checks,
        check_adj=check_adj,
        var_adj=var_adj,
        check_deg=check_deg,
        var_deg=var_deg,
        max_var_deg=max_var_deg,
        rate=(n_vars - n_checks) / n_vars,
    )


# ---------------------------------------------------------------------------
# alist ingestion


class _LineReader:
    def __init__(self, text: str):
        self._lines = text.splitlines()
        self._pos = 0

    def next_tokens(self) -> tuple[int, list[str]]:
        """Next non-blank line as (1-based line number, tokens)."""
        while self._pos < len(self._lines):
            self._pos += 1
            toks = self._lines[self._pos - 1].split()
            if toks:
                return self._pos, toks
        raise CodeFormatError("unexpected end of file")

    def rest_is_blank(self) -> bool:
        return all(not l.split() for l in self._lines[self._pos:])


def _ints(lineno: int, toks: list[str], what: str) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise CodeFormatError(f"line {lineno}: non-integer token in {what}") from None


def parse_alist(text: str) -> ParityCheckCode:
    """Parse the standard alist format.

    Layout: `N M`, `max_dv max_dc`, the N per-column degrees, the M per-row
    degrees, then one line per column and one per row with 1-based indices
    (zero padding entries are dropped). Row and column lists must describe
    the same matrix.
    """
    rd = _LineReader(text)

    lineno, toks = rd.next_tokens()
    hdr = _ints(lineno, toks, "header")
    if len(hdr) != 2 or hdr[0] <= 0 or hdr[1] <= 0:
        raise CodeFormatError(f"line {lineno}: header must be two positive integers 'N M'")
    n_vars, n_checks = hdr

    lineno, toks = rd.next_tokens()
    maxdeg = _ints(lineno, toks, "max degrees")
    if len(maxdeg) != 2 or min(maxdeg) <= 0:
        raise CodeFormatError(f"line {lineno}: expected 'max_dv max_dc'")
    max_dv, max_dc = maxdeg

    def read_degrees(count: int, bound: int, what: str) -> list[int]:
        vals: list[int] = []
        while len(vals) < count:
            ln, tk = rd.next_tokens()
            vals.extend(_ints(ln, tk, what))
            if len(vals) > count:
                raise CodeFormatError(f"line {ln}: too many entries in {what}")
            for d in vals:
                if not 0 < d <= bound:
                    raise CodeFormatError(f"line {ln}: degree {d} outside [1, {bound}] in {what}")
        return vals

    var_deg = read_degrees(n_vars, max_dv, "column degree list")
    chk_deg = read_degrees(n_checks, max_dc, "row degree list")

    def read_adj(count: int, degs: list[int], maxd: int, idx_bound: int,
                 what: str) -> list[tuple[int, np.ndarray]]:
        out = []
        for i in range(count):
            ln, tk = rd.next_tokens()
            vals = _ints(ln, tk, what)
            if len(vals) not in (degs[i], maxd):
                raise CodeFormatError(
                    f"line {ln}: {what} {i} has {len(vals)} entries, expected "
                    f"{degs[i]} (or {maxd} zero-padded)")
            nz = [v for v in vals if v != 0]
            if len(nz) != degs[i]:
                raise CodeFormatError(
                    f"line {ln}: {what} {i} has {len(nz)} nonzero entries, "
                    f"declared degree is {degs[i]}")
            for v in nz:
                if not 1 <= v <= idx_bound:
                    raise CodeFormatError(f"line {ln}: index {v} out of range in {what} {i}")
            if len(set(nz)) != len(nz):
                raise CodeFormatError(f"line {ln}: duplicate index in {what} {i}")
            out.append((ln, np.asarray(sorted(v - 1 for v in nz), dtype=np.int32)))
        return out

    col_lists = read_adj(n_vars, var_deg, max_dv, n_checks, "column list")
    row_lists = read_adj(n_checks, chk_deg, max_dc, n_vars, "row list")
    if not rd.rest_is_blank():
        ln, _ = rd.next_tokens()
        raise CodeFormatError(f"line {ln}: trailing data after adjacency lists")

    # cross-check: rebuild the row view from the column lists
    from_cols: list[list[int]] = [[] for _ in range(n_checks)]
    for n, (_, checks) in enumerate(col_lists):
        for m in checks:
            from_cols[int(m)].append(n)
    for m, (ln, vars_) in enumerate(row_lists):
        if sorted(from_cols[m]) != list(vars_):
            raise CodeFormatError(
                f"line {ln}: row list {m} disagrees with the column lists "
                f"(adjacency asymmetry)")

    code = from_check_adjacency([vars_ for _, vars_ in row_lists], n_vars)
    if int(code.max_var_deg) > max_dv:
        raise CodeFormatError("declared max column degree smaller than actual")
    return code


def dump_alist(code: ParityCheckCode) -> str:
    """Serialize to alist text (unpadded adjacency lines)."""
    max_dc = int(code.check_deg.max())
    lines = [
        f"{code.n_vars} {code.n_checks}",
        f"{code.max_var_deg} {max_dc}",
        " ".join(str(int(d)) for d in code.var_deg),
        " ".join(str(int(d)) for d in code.check_deg),
    ]
    for n in range(code.n_vars):
        lines.append(" ".join(str(int(m) + 1) for m in code.var_adj[n]))
    for m in range(code.n_checks):
        lines.append(" ".join(str(int(v) + 1) for v in code.check_adj[m]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# quasi-cyclic expansion


def parse_qc_base(text: str) -> tuple[np.ndarray, int]:
    """Parse a base-matrix file: first line `M_b N_b Z`, then M_b rows of
    N_b shift integers (-1 marks the all-zero block)."""
    rd = _LineReader(text)
    lineno, toks = rd.next_tokens()
    hdr = _ints(lineno, toks, "header")
    if len(hdr) != 3 or hdr[0] <= 0 or hdr[1] <= 0 or hdr[2] <= 0:
        raise CodeFormatError(f"line {lineno}: header must be 'M_b N_b Z'")
    mb, nb, z = hdr
    rows = []
    for i in range(mb):
        ln, tk = rd.next_tokens()
        vals = _ints(ln, tk, "base row")
        if len(vals) != nb:
            raise CodeFormatError(f"line {ln}: base row {i} has {len(vals)} entries, expected {nb}")
        rows.append(vals)
    if not rd.rest_is_blank():
        ln, _ = rd.next_tokens()
        raise CodeFormatError(f"line {ln}: trailing data after base matrix")
    return np.asarray(rows, dtype=np.int64), z


def expand_qc(base: np.ndarray, z: int) -> ParityCheckCode:
    """Expand a shift matrix into the full code.

    Entry s >= 0 at block (i, j) places the identity cyclically right-shifted
    by s: edges (i*z + k, j*z + (k + s) mod z) for k in [0, z).
    """
    base = np.asarray(base)
    if base.ndim != 2:
        raise ValueError("base matrix must be rectangular (2-D)")
    if z < 1:
        raise ValueError("lifting size must be >= 1")
    mb, nb = base.shape
    if base.max(initial=-1) >= z or base.min(initial=0) < -1:
        bad = int(base.max()) if base.max() >= z else int(base.min())
        raise ValueError(f"shift {bad} outside [-1, {z})")
    check_adj: list[np.ndarray] = []
    for i in range(mb):
        js = np.flatnonzero(base[i] >= 0)
        shifts = base[i, js]
        for k in range(z):
            cols = js * z + (k + shifts) % z
            check_adj.append(np.sort(cols).astype(np.int32))
    return from_check_adjacency(check_adj, nb * z)


# ---------------------------------------------------------------------------
# grouping and validation


def conventional_groups(code: ParityCheckCode, g: int) -> GroupPartition:
    """Natural-order split into g index-contiguous groups.

    When g does not divide N the last group absorbs the remainder, keeping
    group lookup a plain integer division.
    """
    n = code.n_vars
    if g <= 0 or g > n:
        raise ValueError(f"group count {g} outside [1, {n}]")
    chunk = n // g
    bounds = [i * chunk for i in range(g)] + [n]
    groups = [np.arange(bounds[i], bounds[i + 1], dtype=np.int64) for i in range(g)]
    return GroupPartition(groups=groups)


def validate(code: ParityCheckCode) -> list[str]:
    """Check structural invariants; returns violation descriptions (empty = valid)."""
    out: list[str] = []
    if len(code.check_adj) != code.n_checks:
        out.append(f"check_adj has {len(code.check_adj)} rows, expected {code.n_checks}")
    if len(code.var_adj) != code.n_vars:
        out.append(f"var_adj has {len(code.var_adj)} columns, expected {code.n_vars}")
    for m, adj in enumerate(code.check_adj):
        if len(np.unique(adj)) != len(adj):
            out.append(f"check {m}: duplicate adjacency entry")
        if len(adj) and (adj.min() < 0 or adj.max() >= code.n_vars):
            out.append(f"check {m}: variable index out of range")
        if len(adj) != code.check_deg[m]:
            out.append(f"check {m}: degree {len(adj)} != recorded {code.check_deg[m]}")
    for n, adj in enumerate(code.var_adj):
        if len(np.unique(adj)) != len(adj):
            out.append(f"variable {n}: duplicate adjacency entry")
        if len(adj) and (adj.min() < 0 or adj.max() >= code.n_checks):
            out.append(f"variable {n}: check index out of range")
        if len(adj) != code.var_deg[n]:
            out.append(f"variable {n}: degree {len(adj)} != recorded {code.var_deg[n]}")
    if int(code.check_deg.sum()) != int(code.var_deg.sum()):
        out.append(
            f"edge count mismatch: sum of check degrees {int(code.check_deg.sum())} "
            f"!= sum of variable degrees {int(code.var_deg.sum())}")
    # adjacency symmetry
    var_sets = [set(int(m) for m in adj) for adj in code.var_adj]
    for m, adj in enumerate(code.check_adj):
        for v in adj:
            if m not in var_sets[int(v)]:
                out.append(f"check {m}: edge to variable {int(v)} missing from var_adj")
    if code.n_vars and code.max_var_deg != int(code.var_deg.max()):
        out.append(f"max_var_deg {code.max_var_deg} != actual {int(code.var_deg.max())}")
    return out


# ---------------------------------------------------------------------------
# seeded construction of regular test codes


def random_regular_code(n_vars: int, n_checks: int, var_deg: int, seed: int,
                        forbid_4cycles: bool = True,
                        max_passes: int = 400) -> ParityCheckCode:
    """Seeded random (var_deg, check_deg)-regular code without parallel edges.

    Uses a socket permutation, then local edge swaps to remove duplicate
    edges and (optionally) length-4 cycles. Deterministic given the seed.
    """
    if (n_vars * var_deg) % n_checks:
        raise ValueError("n_vars * var_deg must be divisible by n_checks")
    chk_deg = n_vars * var_deg // n_checks
    rng = np.random.default_rng(seed)

    edge_var = np.repeat(np.arange(n_vars), var_deg)
    edge_chk = np.repeat(np.arange(n_checks), chk_deg)[rng.permutation(n_vars * var_deg)]
    n_edges = n_vars * var_deg
    # multiplicity maps handle transient parallel edges during repair
    chk_mult: list[dict[int, int]] = [dict() for _ in range(n_checks)]
    for e in range(n_edges):
        d = chk_mult[edge_chk[e]]
        v = int(edge_var[e])
        d[v] = d.get(v, 0) + 1

    def swap_ok(e1: int, e2: int) -> bool:
        v1, m1 = int(edge_var[e1]), int(edge_chk[e1])
        v2, m2 = int(edge_var[e2]), int(edge_chk[e2])
        return (v1 != v2 and m1 != m2
                and chk_mult[m1].get(v2, 0) == 0 and chk_mult[m2].get(v1, 0) == 0)

    def do_swap(e1: int, e2: int):
        for e in (e1, e2):
            d = chk_mult[edge_chk[e]]
            v = int(edge_var[e])
            d[v] -= 1
            if not d[v]:
                del d[v]
        edge_chk[e1], edge_chk[e2] = edge_chk[e2], edge_chk[e1]
        for e in (e1, e2):
            d = chk_mult[edge_chk[e]]
            v = int(edge_var[e])
            d[v] = d.get(v, 0) + 1

    # remove parallel edges (duplicate (var, check) pairs)
    for _ in range(max_passes):
        dups = [e for e in range(n_edges)
                if chk_mult[edge_chk[e]][int(edge_var[e])] > 1]
        if not dups:
            break
        for e in dups:
            if chk_mult[edge_chk[e]][int(edge_var[e])] == 1:
                continue
            for e2 in rng.integers(0, n_edges, size=128):
                if swap_ok(e, int(e2)):
                    do_swap(e, int(e2))
                    break
    else:
        raise RuntimeError("could not remove parallel edges; try another seed")

    if forbid_4cycles:
        var_sets = [set() for _ in range(n_vars)]
        chk_sets = [set(d) for d in chk_mult]
        for e in range(n_edges):
            var_sets[edge_var[e]].add(int(edge_chk[e]))
        for _ in range(max_passes):
            bad_edge = _find_4cycle_edge(chk_sets, var_sets)
            if bad_edge is None:
                break
            v, m = bad_edge
            e = next(e for e in range(n_edges)
                     if edge_var[e] == v and edge_chk[e] == m)
            for e2 in rng.integers(0, n_edges, size=256):
                e2 = int(e2)
                if swap_ok(e, e2):
                    v2, m2 = int(edge_var[e2]), int(edge_chk[e2])
                    do_swap(e, e2)
                    chk_sets[m].discard(v)
                    chk_sets[m].add(v2)
                    chk_sets[m2].discard(v2)
                    chk_sets[m2].add(v)
                    var_sets[v].discard(m)
                    var_sets[v].add(m2)
                    var_sets[v2].discard(m2)
                    var_sets[v2].add(m)
                    break
        else:
            raise RuntimeError("could not reach girth 6; try another seed")

    check_adj = [np.asarray(sorted(d), dtype=np.int32) for d in chk_mult]
    return from_check_adjacency(check_adj, n_vars)


def _find_4cycle_edge(chk_sets: list[set[int]],
                      var_sets: list[set[int]]) -> tuple[int, int] | None:
    """An edge (var, check) lying on a 4-cycle, or None if girth >= 6."""
    for m1, vars_ in enumerate(chk_sets):
        counts: dict[int, int] = {}
        for v in vars_:
            for m2 in var_sets[v]:
                if m2 > m1:
                    counts[m2] = counts.get(m2, 0) + 1
        for m2, c in counts.items():
            if c >= 2:
                shared = [v for v in chk_sets[m2] if v in vars_]
                return shared[0], m1
    return None


# ---------------------------------------------------------------------------
# bundled codes

BUNDLED = {
    "regular-1008-504": "reg_n1008_m504_dv3.alist",
    "regular-816-272": "reg_n816_m544_dv4.alist",
    "wifi-1944-972": "wifi_rate12_z81.qcb",
}


def bundled_code(name: str) -> ParityCheckCode:
    """Load one of the codes shipped with the package.

    regular-1008-504 and regular-816-272 are seeded girth-6 regular codes
    with the same length, rate, and degrees as the classic benchmark codes
    of those sizes; wifi-1944-972 expands the IEEE 802.11n rate-1/2 Z=81
    base matrix.
    """
    try:
        fname = BUNDLED[name]
    except KeyError:
        raise KeyError(f"unknown bundled code {name!r}; have {sorted(BUNDLED)}") from None
    text = importlib.resources.files("gsldpc.data").joinpath(fname).read_text()
    if fname.endswith(".qcb"):
        base, z = parse_qc_base(text)
        return expand_qc(base, z)
    return parse_alist(text)
