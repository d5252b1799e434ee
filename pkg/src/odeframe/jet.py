"""Jet-space bookkeeping for the equation manifold r = F(x, u, p, q).

Holds the table of F-partials, the total derivative along solutions
restricted to the equation manifold, and deterministic sampling of rational
base points that dodge a list of forbidden zero loci.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from . import coords
from .coords import MultiIndex
from .expr import (
    EvaluationError,
    Expr,
    KernelError,
    Symbol,
    as_expr,
)


class JetError(KernelError):
    pass


class SamplingError(JetError):
    pass


@dataclass(frozen=True)
class FJet:
    """All partials of a right-hand side F up to a fixed order.

    Entry (a,b,c,d) is d^(a+b+c+d) F / dx^a du^b dp^c dq^d, canonical.
    Entries are derived one differentiation at a time from a single parent,
    which makes the cross-derivative consistency checkable (and checked, in
    the test suite) rather than assumed.
    """

    rhs: Expr
    order: int
    partials: Mapping[MultiIndex, Expr]

    def partial(self, idx: MultiIndex) -> Expr:
        got = self.partials.get(idx)
        if got is None:
            raise JetError(
                f"required F-jet order not available: {idx} exceeds order {self.order}"
            )
        return got


def build_fjet(F: Expr, order: int) -> FJet:
    """Differentiate F through all multi-indices up to `order`."""
    if order < 0:
        raise JetError("order must be non-negative")
    allowed = set(coords.BASE4)
    bad = [s.name for s in F.symbols() if s not in allowed]
    if bad:
        raise JetError("F must be an expression in x,u,p,q; found " + ", ".join(bad))
    slots = (coords.x, coords.u, coords.p, coords.q)
    table: Dict[MultiIndex, Expr] = {(0, 0, 0, 0): F}
    for idx in coords.fjet_indices(order):
        if idx == (0, 0, 0, 0):
            continue
        k = next(i for i, v in enumerate(idx) if v > 0)
        parent = list(idx)
        parent[k] -= 1
        table[idx] = table[tuple(parent)].diff(slots[k])
    return FJet(rhs=F, order=order, partials=MappingProxyType(table))


def _classify(sym: Symbol):
    if sym in coords.FJET_INDEX:
        return "fjet", coords.FJET_INDEX[sym]
    if sym in coords.XI_ORDER:
        return "xi", coords.XI_ORDER[sym]
    if sym in coords.PHI_ORDER:
        return "phi", coords.PHI_ORDER[sym]
    return None, None


_SLOT_OF = {"x": 0, "u": 1, "p": 2, "q": 3}
_BASE_SYM = {"x": coords.x, "u": coords.u, "p": coords.p, "q": coords.q}


def hyper_total(e: Expr, slot: str) -> Expr:
    """Total derivative on the lifted equation manifold.

    `slot` is one of x,u,p,q.  Base coordinates differentiate as usual,
    F-jet symbols advance one step in the slot direction, and group jets
    advance with their own variable dependence (xi jets only in x, phi jets
    in x and u).
    """
    k = _SLOT_OF[slot]
    out = e.diff(_BASE_SYM[slot])
    for sym in e.symbols():
        kind, info = _classify(sym)
        if kind == "fjet":
            out = out + coords.fjet(coords.bump(info, k)) * e.diff(sym)
        elif kind == "xi" and slot == "x":
            out = out + coords.xi_jet(info + 1) * e.diff(sym)
        elif kind == "phi" and slot in ("x", "u"):
            i, j = info
            adv = coords.phi_jet(i + 1, j) if slot == "x" else coords.phi_jet(i, j + 1)
            out = out + adv * e.diff(sym)
    return out


def total_derivative_on_equation(e: Expr, fjet: FJet) -> Expr:
    """D_x along solutions on the equation manifold r = F.

    D_x = d/dx + p d/du + q d/dp + F d/dq, with every F-jet symbol F_s
    advancing by the same rule: D_x F_s = F_(s+x) + p F_(s+u) + q F_(s+p)
    + F * F_(s+q).
    """
    F0 = as_expr(coords.fjet((0, 0, 0, 0)))
    out = (
        e.diff(coords.x)
        + as_expr(coords.p) * e.diff(coords.u)
        + as_expr(coords.q) * e.diff(coords.p)
        + F0 * e.diff(coords.q)
    )
    for sym in e.symbols():
        if sym is coords.r:
            raise JetError("expression involves r; it must live on the equation manifold")
        kind, idx = _classify(sym)
        if kind in ("xi", "phi"):
            raise JetError(f"group jet {sym.name} has no equation-manifold derivative")
        if kind != "fjet":
            continue
        if coords.fjet_order(idx) + 1 > fjet.order:
            raise JetError(
                f"required F-jet order not available: need order "
                f"{coords.fjet_order(idx) + 1} > {fjet.order}"
            )
        adv = (
            as_expr(coords.fjet(coords.bump(idx, 0)))
            + as_expr(coords.p) * coords.fjet(coords.bump(idx, 1))
            + as_expr(coords.q) * coords.fjet(coords.bump(idx, 2))
            + F0 * coords.fjet(coords.bump(idx, 3))
        )
        out = out + adv * e.diff(sym)
    return out


@dataclass(frozen=True)
class JetPoint:
    """Rational values of (x,u,p,q) plus the evaluated F-jet there."""

    base: Tuple[Fraction, Fraction, Fraction, Fraction]
    fjet_values: Mapping[MultiIndex, Fraction]
    seed: Optional[int] = None

    def base_binding(self) -> Dict[Symbol, Fraction]:
        bx, bu, bp, bq = self.base
        return {coords.x: bx, coords.u: bu, coords.p: bp, coords.q: bq}

    def binding(self) -> Dict[Symbol, Fraction]:
        out = self.base_binding()
        for idx, val in self.fjet_values.items():
            out[coords.fjet(idx)] = val
        return out


def jet_point_at(
    fjet: FJet,
    base: Sequence[Fraction | int],
    seed: Optional[int] = None,
) -> JetPoint:
    """Evaluate the F-jet at explicit coordinates (raises off the domain)."""
    vals = tuple(Fraction(v) for v in base)
    if len(vals) != 4:
        raise JetError("a base point is (x, u, p, q)")
    binding = {
        coords.x: vals[0],
        coords.u: vals[1],
        coords.p: vals[2],
        coords.q: vals[3],
    }
    table = {idx: e.eval_at(binding) for idx, e in fjet.partials.items()}
    return JetPoint(base=vals, fjet_values=MappingProxyType(table), seed=seed)


def sample_point(
    fjet: FJet,
    avoid: Iterable[Expr] = (),
    seed: int = 0,
    box: int = 7,
    max_tries: int = 256,
) -> JetPoint:
    """Deterministically sample a rational point where every `avoid`
    expression is nonzero and every stored F-partial is finite.

    Coordinates are fractions with numerator in [-box, box] and denominator
    in [1, box].  The draw sequence is fully determined by the seed.
    """
    avoid = list(avoid)
    for a in avoid:
        if a.is_zero():
            raise SamplingError(
                "constraint unsatisfiable: an avoid-expression is identically zero"
            )
    rng = random.Random(seed)
    last_violation = "no candidate drawn"
    for _ in range(max_tries):
        vals = tuple(
            Fraction(rng.randint(-box, box), rng.randint(1, box)) for _ in range(4)
        )
        binding = {
            coords.x: vals[0],
            coords.u: vals[1],
            coords.p: vals[2],
            coords.q: vals[3],
        }
        try:
            table = {idx: e.eval_at(binding) for idx, e in fjet.partials.items()}
        except EvaluationError:
            last_violation = "a stored F-partial has a pole at the candidate"
            continue
        full = dict(binding)
        for idx, val in table.items():
            full[coords.fjet(idx)] = val
        ok = True
        for a in avoid:
            try:
                v = a.eval_at(full)
            except EvaluationError:
                ok = False
                last_violation = f"avoid-expression {a!r} undefined at candidate"
                break
            if v == 0:
                ok = False
                last_violation = f"avoid-expression {a!r} vanished"
                break
        if ok:
            return JetPoint(base=vals, fjet_values=MappingProxyType(table), seed=seed)
    raise SamplingError(
        f"exhausted retry budget ({max_tries}); last violation: {last_violation}"
    )
