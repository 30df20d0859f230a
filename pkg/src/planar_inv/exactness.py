"""Finite-window checks of the exact sequence J -> X -> Y.

The model space E has basis E_i (i in Z) and the set
D = {E_-i + E_i} U {E_-i + E_(1+i)}, i >= 0. Ordering the E_i as
0, 1, -1, 2, -2, ... and D as 2E_0, E_0+E_1, E_-1+E_1, E_-1+E_2, ... makes the
change of basis triangular, so truncating both lists at the same depth gives
honest finite sub-statements.

An isomorphism phi from E (or E + E') onto X^n_{k,l} carries D onto the
images of J+/J^A symbols, which is what the checks below exploit.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import random

from .exceptions import WindowMisaligned
from .linalg import echelon, nullspace, rank, solve_combination, to_rows
from .symbols import JSymbol, XSymbol, XVector, f1, psi, serialize, x_term


@dataclass(frozen=True)
class TruncationWindow:
    n: int
    k: int
    l: int
    depth: int = 30

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.k % 2 == 0 or self.l % 2 == 0:
            raise ValueError("k and l must be odd")
        if self.k > self.l:
            raise ValueError("window requires k <= l")

    @property
    def m(self):
        return self.n // 2  # floor, so n = 2m or 2m + 1

    @property
    def even(self):
        return self.n % 2 == 0

    def to_json(self):
        return {"n": self.n, "k": self.k, "l": self.l, "depth": self.depth}


@dataclass
class RankCertificate:
    rows: int
    cols: int
    rank: int
    pivots: list
    claimed_rank: int
    claimed_codim: int
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "rank": self.rank,
            "pivots": self.pivots,
            "claimed_rank": self.claimed_rank,
            "claimed_codim": self.claimed_codim,
            "pass": self.passed,
            "details": self.details,
        }


# --- model space -------------------------------------------------------------


def e_order(count):
    """Indices of the first ``count`` E symbols: 0, 1, -1, 2, -2, ..."""
    out = [0]
    i = 1
    while len(out) < count:
        out.append(i)
        if len(out) < count:
            out.append(-i)
        i += 1
    return out[:count]


def d_order(count):
    """First ``count`` elements of D as ``{index: coefficient}`` dicts."""
    out = []
    j = 0
    while len(out) < count:
        if j == 0:
            out.append({0: 2})
        elif j % 2:
            i = (j - 1) // 2
            out.append({-i: 1, 1 + i: 1})
        else:
            i = j // 2
            out.append({-i: 1, i: 1})
        j += 1
    return out


def model_basis_check(N):
    """For every m <= N the first m elements of D span the first m E symbols."""
    if N < 1:
        raise ValueError("N must be >= 1")
    cols = e_order(N)
    index = {e: c for c, e in enumerate(cols)}
    D = d_order(N)
    rows = []
    failures = []
    for m, d in enumerate(D, start=1):
        if any(e not in index or index[e] >= m for e in d):
            failures.append(m)
        row = [Fraction(0)] * N
        for e, c in d.items():
            if e in index:
                row[index[e]] = Fraction(c)
        rows.append(row)
        if rank([r[:m] for r in rows]) != m:
            failures.append(m)
    _, pivots = echelon(rows)
    return RankCertificate(
        N, N, len(pivots), pivots, N, 0, not failures and len(pivots) == N,
        {"failed_prefixes": sorted(set(failures)),
         "first": ["2E_0" if d == {0: 2} else " + ".join(f"E_{e}" for e in d) for d in D[:3]]},
    )


# --- phi and the generating sets ---------------------------------------------


def _phi_symbol(w, i, primed):
    """phi(E_i) (or phi(E'_i)) as an XSymbol in X^n_{k,l}."""
    m, k, l = w.m, w.k, w.l
    if w.even:
        a, b = m - i, m + i
    else:
        a, b = m + i, m + 1 - i
    if k == l:
        return XSymbol(a, b, k, k)
    low = i <= 0
    if primed:
        low = not low
    return XSymbol(a, b, k, l) if low else XSymbol(a, b, l, k)


def _phi(w, d, primed=False):
    return XVector({_phi_symbol(w, i, primed): c for i, c in d.items()})


def _a_symbol(w, j, primed):
    """The J symbol whose F1-image is phi of the j-th D element (j >= 1 for k < l)."""
    m, k, l = w.m, w.k, w.l
    if j == 0:
        kind = "J+" if w.even else "JA"
        return JSymbol(kind, (m, k), (m, l))
    if j % 2 == 0:  # E_-i + E_i, i >= 1
        i = j // 2
        if w.even:
            pair = ((m - i, k), (m + i, l)) if primed else ((m + i, k), (m - i, l))
            return JSymbol("J+", *pair)
        pair = ((m + i, k), (m - i, l)) if primed else ((m - i, k), (m + i, l))
        return JSymbol("JA", *pair)
    i = (j - 1) // 2  # E_-i + E_(1+i), i >= 0
    if w.even:
        pair = ((m - 1 - i, k), (m + i, l)) if primed else ((m + i, k), (m - 1 - i, l))
        return JSymbol("JA", *pair)
    pair = ((m + 1 + i, k), (m - i, l)) if primed else ((m - i, k), (m + 1 + i, l))
    return JSymbol("J+", *pair)


def _ordered_entries(w):
    """(D element, primed, A-position) in the interleaved order used for truncation."""
    N = w.depth
    if w.k == w.l:
        return [(d, False, j) for j, d in enumerate(d_order(N))], [(e, False) for e in e_order(N)]
    # one merged element first, then alternate D and D'
    entries = [(None, None, 0)]
    D = d_order(N + 1)
    j = 1
    while len(entries) < N:
        entries.append((D[j], False, j))
        if len(entries) < N:
            entries.append((D[j], True, j))
        j += 1
    monos = []
    for e in e_order(N + 1):
        monos.append((e, False))
        monos.append((e, True))
    return entries, monos[: N + 1]


def build_B(window):
    """First ``depth`` elements of B^n_{k,l} and the aligned monomial window.

    Returns ``(elements, monomials, symbols)``: the XVectors, the XSymbols
    spanning the window (``depth`` of them for k = l, ``depth + 1`` for
    k < l) and the J symbols whose F1-images the elements are.

    Raises :class:`WindowMisaligned` if an element falls outside the window
    or disagrees with the image of its J symbol.
    """
    w = window
    entries, monos = _ordered_entries(w)
    monomials = [_phi_symbol(w, e, p) for e, p in monos]
    allowed = set(monomials)
    elements, symbols = [], []
    for d, primed, j in entries:
        sym = _a_symbol(w, j, bool(primed))
        if d is None:
            # 2 phi(E_0) and 2 phi(E'_0) collapse to this single element
            vec = XVector({_phi_symbol(w, 0, False): 1, _phi_symbol(w, 0, True): 1})
        else:
            vec = _phi(w, d, primed)
        if vec != f1(sym):
            raise WindowMisaligned(f"phi image {serialize(vec)} differs from F1({sym}) = {serialize(f1(sym))}")
        outside = [s for s in vec if s not in allowed]
        if outside:
            raise WindowMisaligned(f"element {serialize(vec)} leaves the window at {outside[0]}")
        elements.append(vec)
        symbols.append(sym)
    return elements, monomials, symbols


def _in_block(w, sym):
    return sym.a + sym.b == w.n and {sym.k, sym.l} == {w.k, w.l} and (w.k != w.l or sym.k == sym.l)


def verify_prop_ankl(window):
    """Independence and codimension of the truncated B^n_{k,l}."""
    w = window
    elements, monomials, symbols = build_B(w)
    rows = to_rows(elements, monomials)
    _, pivots = echelon(rows)
    r = len(pivots)
    codim = len(monomials) - r
    claimed_codim = 0 if w.k == w.l else 1
    block_ok = all(_in_block(w, s) for v in elements for s in v)
    details = {"window": w.to_json(), "block_keys_ok": block_ok}
    if w.k != w.l:
        # span B is invisible to psi, while psi is onto the one-dimensional Y piece
        details["psi_span_B_zero"] = all(psi(v) == 0 for v in elements)
        details["psi_nonzero_on_window"] = any(psi(x_term(*mono)) != 0 for mono in monomials)
    passed = (
        r == len(elements) == w.depth
        and codim == claimed_codim
        and block_ok
        and details.get("psi_span_B_zero", True)
        and details.get("psi_nonzero_on_window", True)
    )
    return RankCertificate(len(elements), len(monomials), r, pivots, w.depth, claimed_codim, passed, details)


def verify_exactness(window, seed=0):
    """Exactness of 0 -> J^n_{k,l} -> X^n_{k,l} -> Y^n_{k,l} -> 0 inside the window."""
    w = window
    elements, monomials, symbols = build_B(w)
    report = {"window": w.to_json()}
    # (i) injectivity: images of distinct A symbols are independent
    images = [f1(s) for s in symbols]
    rows = to_rows(images, monomials)
    report["distinct_symbols"] = len(set(symbols)) == len(symbols)
    report["injective"] = rank(rows) == len(symbols) and report["distinct_symbols"]
    # (ii) psi o F1 = 0
    report["psi_f1_zero"] = all(psi(v) == 0 for v in images)
    # (iii) ker psi on the window equals span B
    ys = sorted({ys for mono in monomials for ys in psi(x_term(*mono))})
    psi_rows = [[psi(x_term(*mono))[y] for mono in monomials] for y in ys]
    psi_rank = rank(psi_rows) if psi_rows else 0
    kernel = nullspace(psi_rows, len(monomials)) if psi_rows else [
        [Fraction(int(i == j)) for j in range(len(monomials))] for i in range(len(monomials))
    ]
    report["psi_rank"] = psi_rank
    report["expected_psi_rank"] = 0 if w.k == w.l else 1
    report["kernel_dim"] = len(kernel)
    report["span_B_dim"] = rank(rows)
    report["codim_matches"] = (
        psi_rank == report["expected_psi_rank"]
        and len(monomials) - report["span_B_dim"] == psi_rank
        and len(kernel) == report["span_B_dim"]
    )
    # a random kernel element is an exact combination of B
    rng = random.Random(seed)
    combo = [Fraction(0)] * len(monomials)
    for vec in kernel:
        c = rng.randint(-5, 5)
        combo = [a + c * b for a, b in zip(combo, vec)]
    coef = solve_combination(rows, combo)
    report["random_kernel_element_in_span_B"] = coef is not None
    report["pass"] = all(
        report[key]
        for key in ("injective", "psi_f1_zero", "codim_matches", "random_kernel_element_in_span_B")
    )
    return report


def standard_windows(depth=30):
    """The windows used by the acceptance run."""
    pairs = [(1, 1), (-1, -1), (-1, 1), (1, 3), (-3, 1)]
    return [TruncationWindow(n, k, l, depth) for n in range(-3, 4) for k, l in pairs]

