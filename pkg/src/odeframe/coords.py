"""Standard symbol atlas.

All coordinate, jet and group-jet symbols used by the pipeline are interned
here in one fixed sequence at import time, so the global monomial order (and
with it every canonical form) is identical from run to run no matter which
code path touches a symbol first.

Naming:
  x, u, p, q, r      third-order jet coordinates (u' = p, u'' = q, u''' = r)
  Fx..u..p..q..      partial of the right-hand side F, one letter per
                     differentiation (e.g. Fxq = d2F/dxdq)
  xi<i>              i-th x-derivative of the base transformation xi(x)
  phi<i><j>          d^(i+j) phi / dx^i du^j of phi(x, u)
  alpha<i>, beta<i><j>   formal jets of an infinitesimal generator
"""

from __future__ import annotations

from typing import Dict, Tuple

from .expr import Expr, Symbol, as_expr, symbol

MultiIndex = Tuple[int, int, int, int]  # (a, b, c, d): x, u, p, q counts

MAX_FJET_ORDER = 6
MAX_GJET_ORDER = 8

# Reverse lookup tables, filled by the constructors below.
FJET_INDEX: Dict[Symbol, MultiIndex] = {}
XI_ORDER: Dict[Symbol, int] = {}
PHI_ORDER: Dict[Symbol, Tuple[int, int]] = {}
ALPHA_ORDER: Dict[Symbol, int] = {}
BETA_ORDER: Dict[Symbol, Tuple[int, int]] = {}

x = symbol("x", "coord")
u = symbol("u", "coord")
p = symbol("p", "coord")
q = symbol("q", "coord")
r = symbol("r", "coord")

BASE = (x, u, p, q, r)
BASE4 = (x, u, p, q)


def fjet_name(idx: MultiIndex) -> str:
    a, b, c, d = idx
    return "F" + "x" * a + "u" * b + "p" * c + "q" * d


def fjet(idx: MultiIndex) -> Symbol:
    if any(k < 0 for k in idx):
        raise ValueError(f"bad F-jet index {idx}")
    sym = symbol(fjet_name(idx), "fjet")
    FJET_INDEX.setdefault(sym, idx)
    return sym


def fjet_order(idx: MultiIndex) -> int:
    return sum(idx)


def bump(idx: MultiIndex, slot: int) -> MultiIndex:
    out = list(idx)
    out[slot] += 1
    return tuple(out)  # type: ignore[return-value]


def fjet_indices(order: int):
    """All multi-indices with total order <= order, graded lexicographically."""
    for total in range(order + 1):
        for a in range(total, -1, -1):
            for b in range(total - a, -1, -1):
                for c in range(total - a - b, -1, -1):
                    d = total - a - b - c
                    yield (a, b, c, d)


def xi_jet(i: int) -> Symbol:
    if i < 0 or i > 9:
        raise ValueError(f"xi jet order {i} out of range")
    sym = symbol(f"xi{i}", "gjet")
    XI_ORDER.setdefault(sym, i)
    return sym


def phi_jet(i: int, j: int) -> Symbol:
    if i < 0 or j < 0 or i > 9 or j > 9:
        raise ValueError(f"phi jet order ({i},{j}) out of range")
    sym = symbol(f"phi{i}{j}", "gjet")
    PHI_ORDER.setdefault(sym, (i, j))
    return sym


def gjet_symbols(order: int):
    """All group-jet symbols up to the given order, in atlas order."""
    out = []
    for i in range(order + 1):
        out.append(xi_jet(i))
    for total in range(order + 1):
        for i in range(total, -1, -1):
            out.append(phi_jet(i, total - i))
    return out


def alpha_jet(i: int) -> Symbol:
    sym = symbol(f"alpha{i}", "formal")
    ALPHA_ORDER.setdefault(sym, i)
    return sym


def beta_jet(i: int, j: int) -> Symbol:
    sym = symbol(f"beta{i}{j}", "formal")
    BETA_ORDER.setdefault(sym, (i, j))
    return sym


# Fixed interning sequence.  Everything standard is created right here.
for _idx in fjet_indices(MAX_FJET_ORDER):
    fjet(_idx)
for _i in range(MAX_GJET_ORDER + 1):
    xi_jet(_i)
for _total in range(MAX_GJET_ORDER + 1):
    for _i in range(_total, -1, -1):
        phi_jet(_i, _total - _i)
for _i in range(5):
    alpha_jet(_i)
for _total in range(5):
    for _i in range(_total, -1, -1):
        beta_jet(_i, _total - _i)

t_param = symbol("t_param", "formal")  # deformation parameter for flow tests


def base_expr(sym: Symbol) -> Expr:
    return as_expr(sym)


E_x = as_expr(x)
E_u = as_expr(u)
E_p = as_expr(p)
E_q = as_expr(q)
E_r = as_expr(r)


def word_to_fjet_index(word: str) -> MultiIndex:
    """Map a derivative word over {X,U,P,Q} to an F-jet multi-index."""
    counts: Dict[str, int] = {"X": 0, "U": 0, "P": 0, "Q": 0}
    for ch in word:
        if ch not in counts:
            raise ValueError(f"bad invariant word {word!r}")
        counts[ch] += 1
    return (counts["X"], counts["U"], counts["P"], counts["Q"])
