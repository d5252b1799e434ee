"""Infinitesimal generators a(x) d/dx + b(x,u) d/du and their prolongation.

The third-order prolongation is computed by the recursion

    c_(k+1) = D_x c_k - (D_x a) * (next jet coordinate)

with D_x the total derivative along solution curves.  That recursion is the
normative definition here; the closed-form coefficient tables it produces
are exposed separately as a cross-check (deviations between the recursion
and commonly transcribed displays of those tables are recorded in the
arbitration ledger).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from . import coords
from .expr import Expr, KernelError, as_expr


class VFieldError(KernelError):
    pass


@dataclass(frozen=True)
class VectorField:
    """Generator of a fiber-preserving flow: alpha(x) d/dx + beta(x,u) d/du."""

    alpha: Expr
    beta: Expr

    def __post_init__(self) -> None:
        bad_a = [
            s.name for s in self.alpha.symbols() if s is not coords.x
        ]
        if bad_a:
            raise VFieldError(
                "alpha must depend on x only; found " + ", ".join(bad_a)
            )
        bad_b = [
            s.name
            for s in self.beta.symbols()
            if s not in (coords.x, coords.u)
        ]
        if bad_b:
            raise VFieldError(
                "beta must depend on (x, u) only; found " + ", ".join(bad_b)
            )


@dataclass(frozen=True)
class ProlongedField:
    """Coefficients on (x, u, p, q, r) of the prolonged generator."""

    alpha: Expr
    beta: Expr
    gamma: Expr
    tau: Expr
    varsigma: Expr

    def as_tuple(self) -> Tuple[Expr, Expr, Expr, Expr, Expr]:
        return (self.alpha, self.beta, self.gamma, self.tau, self.varsigma)


def _curve_total(e: Expr) -> Expr:
    """D_x along solution curves, advancing any formal alpha/beta jets."""
    out = (
        e.diff(coords.x)
        + as_expr(coords.p) * e.diff(coords.u)
        + as_expr(coords.q) * e.diff(coords.p)
        + as_expr(coords.r) * e.diff(coords.q)
    )
    for sym in e.symbols():
        if sym in coords.ALPHA_ORDER:
            out = out + as_expr(coords.alpha_jet(coords.ALPHA_ORDER[sym] + 1)) * e.diff(sym)
        elif sym in coords.BETA_ORDER:
            i, j = coords.BETA_ORDER[sym]
            adv = as_expr(coords.beta_jet(i + 1, j)) + as_expr(coords.p) * coords.beta_jet(i, j + 1)
            out = out + adv * e.diff(sym)
    return out


def _prolong_exprs(alpha: Expr, beta: Expr) -> Tuple[Expr, Expr, Expr]:
    dxa = _curve_total(alpha)
    gamma = _curve_total(beta) - dxa * coords.p
    tau = _curve_total(gamma) - dxa * coords.q
    varsigma = _curve_total(tau) - dxa * coords.r
    return gamma, tau, varsigma


def prolong(v: VectorField) -> ProlongedField:
    """Third-order prolongation by the recursion (off the equation manifold,
    so r stays free)."""
    gamma, tau, varsigma = _prolong_exprs(v.alpha, v.beta)
    return ProlongedField(v.alpha, v.beta, gamma, tau, varsigma)


def determining_forms(alpha: Expr, beta: Expr) -> Tuple[Expr, Expr, Expr]:
    """Closed forms of the prolonged coefficients, re-derived.

    gamma = (b_u - a_x) p + b_x
    tau   = b_uu p^2 + (2 b_xu - a_xx) p + (b_u - 2 a_x) q + b_xx
    sigma = b_uuu p^3 + 3 b_xuu p^2 + (3 b_xxu - a_xxx) p
            + 3 (b_xu - a_xx) q + (b_u - 3 a_x) r + 3 b_uu p q + b_xxx

    alpha/beta may be concrete expressions or the formal 0-jets; derivatives
    are taken with the matching rule either way.
    """

    def dx(e: Expr) -> Expr:
        out = e.diff(coords.x)
        for sym in e.symbols():
            if sym in coords.ALPHA_ORDER:
                out = out + as_expr(coords.alpha_jet(coords.ALPHA_ORDER[sym] + 1)) * e.diff(sym)
            elif sym in coords.BETA_ORDER:
                i, j = coords.BETA_ORDER[sym]
                out = out + as_expr(coords.beta_jet(i + 1, j)) * e.diff(sym)
        return out

    def du(e: Expr) -> Expr:
        out = e.diff(coords.u)
        for sym in e.symbols():
            if sym in coords.BETA_ORDER:
                i, j = coords.BETA_ORDER[sym]
                out = out + as_expr(coords.beta_jet(i, j + 1)) * e.diff(sym)
        return out

    p = as_expr(coords.p)
    q = as_expr(coords.q)
    r = as_expr(coords.r)
    a_x, b_x, b_u = dx(alpha), dx(beta), du(beta)
    a_xx, b_xx, b_xu, b_uu = dx(a_x), dx(b_x), du(b_x), du(b_u)
    a_xxx, b_xxx, b_xxu, b_xuu, b_uuu = (
        dx(a_xx),
        dx(b_xx),
        du(b_xx),
        du(b_xu),
        du(b_uu),
    )
    gamma = (b_u - a_x) * p + b_x
    tau = b_uu * p**2 + (2 * b_xu - a_xx) * p + (b_u - 2 * a_x) * q + b_xx
    varsigma = (
        b_uuu * p**3
        + 3 * b_xuu * p**2
        + (3 * b_xxu - a_xxx) * p
        + 3 * (b_xu - a_xx) * q
        + (b_u - 3 * a_x) * r
        + 3 * b_uu * p * q
        + b_xxx
    )
    return gamma, tau, varsigma


def check_determining(pv: ProlongedField) -> Tuple[bool, Dict[str, Expr]]:
    """Compare a prolonged field against the re-derived closed forms.

    Returns (all-zero?, residuals keyed gamma/tau/varsigma).
    """
    gamma, tau, varsigma = determining_forms(pv.alpha, pv.beta)
    residuals = {
        "gamma": pv.gamma - gamma,
        "tau": pv.tau - tau,
        "varsigma": pv.varsigma - varsigma,
    }
    ok = all(res.is_zero() for res in residuals.values())
    return ok, residuals


def symbolic_prolong_generic() -> ProlongedField:
    """Prolong the fully formal generator (alpha, beta kept as jet symbols)."""
    alpha = as_expr(coords.alpha_jet(0))
    beta = as_expr(coords.beta_jet(0, 0))
    gamma, tau, varsigma = _prolong_exprs(alpha, beta)
    return ProlongedField(alpha, beta, gamma, tau, varsigma)


def commutator(v1: VectorField, v2: VectorField) -> VectorField:
    """Lie bracket; stays in the fiber-preserving class."""
    a = v1.alpha * v2.alpha.diff(coords.x) - v2.alpha * v1.alpha.diff(coords.x)
    b = (
        v1.alpha * v2.beta.diff(coords.x)
        + v1.beta * v2.beta.diff(coords.u)
        - v2.alpha * v1.beta.diff(coords.x)
        - v2.beta * v1.beta.diff(coords.u)
    )
    return VectorField(alpha=a, beta=b)
