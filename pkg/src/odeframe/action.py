"""Finite pseudo-group side: prolonged action and lifted invariants.

A transformation X = xi(x), U = phi(x, u) prolongs to third order by the
chain rule:

    P = D_x U / D_x X,   Q = D_x P / D_x X,   R = D_x Q / D_x X.

Clearing denominators gives the helper functions delta, epsilon, psi, chi
so that P = delta/xi_x, Q = psi/xi_x^3 and R = -chi/xi_x^5.  The closed
forms wired in below were re-derived from the chain rule (the derivation is
itself replayed in the test suite); arbitration notes for rejected variant
transcriptions live in the ledger shipped under data/.

On the equation manifold r = F(x,u,p,q) the transformed right-hand side
and all of its derivatives become functions of the source jet and the group
jet: applying the dual derivations D_X, D_U, D_P, D_Q (obtained by inverting
the 4x4 total Jacobian of (X,U,P,Q)) to R produces the lifted differential
invariants, indexed here by words over {X,U,P,Q} with the leftmost letter
applied last.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import coords, jet
from .coords import MultiIndex
from .expr import Expr, KernelError, Symbol, as_expr

MAX_WORD_LENGTH = 4

_X, _U, _P, _Q, _R = coords.E_x, coords.E_u, coords.E_p, coords.E_q, coords.E_r


class ActionError(KernelError):
    pass


@dataclass(frozen=True)
class GroupJet:
    """Jets of a fiber-preserving transformation at a (possibly formal) point.

    xi[i] is the i-th x-derivative of xi, phi[(i,j)] the mixed derivative of
    phi.  Entries are expressions: group-jet symbols in formal mode, solved
    or numeric expressions otherwise.  xi[1] and phi[(0,1)] must be nonzero
    (local invertibility).
    """

    xi: Mapping[int, Expr]
    phi: Mapping[Tuple[int, int], Expr]
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ActionError("group jet order must be at least 1")
        if 1 not in self.xi or (0, 1) not in self.phi:
            raise ActionError("group jet must store xi_x and phi_u")
        if self.xi[1].is_zero():
            raise ActionError("xi_x must be nonzero")
        if self.phi[(0, 1)].is_zero():
            raise ActionError("phi_u must be nonzero")

    def binding(self) -> Dict[Symbol, Expr]:
        out: Dict[Symbol, Expr] = {}
        for i, e in self.xi.items():
            out[coords.xi_jet(i)] = e
        for (i, j), e in self.phi.items():
            out[coords.phi_jet(i, j)] = e
        return out

    @staticmethod
    def formal(order: int) -> "GroupJet":
        xi = {i: as_expr(coords.xi_jet(i)) for i in range(order + 1)}
        phi = {
            (i, j): as_expr(coords.phi_jet(i, j))
            for total in range(order + 1)
            for i in range(total, -1, -1)
            for j in (total - i,)
        }
        return GroupJet(xi=xi, phi=phi, order=order)

    @staticmethod
    def from_maps(xi_map: Expr, phi_map: Expr, order: int = 3) -> "GroupJet":
        """Jets of explicit maps xi(x), phi(x,u), as expressions in (x, u)."""
        bad = [s.name for s in xi_map.symbols() if s is not coords.x]
        if bad:
            raise ActionError("xi must depend on x only; found " + ", ".join(bad))
        bad = [
            s.name for s in phi_map.symbols() if s not in (coords.x, coords.u)
        ]
        if bad:
            raise ActionError("phi must depend on (x,u) only; found " + ", ".join(bad))
        xi: Dict[int, Expr] = {0: xi_map}
        for i in range(1, order + 1):
            xi[i] = xi[i - 1].diff(coords.x)
        phi: Dict[Tuple[int, int], Expr] = {(0, 0): phi_map}
        for total in range(1, order + 1):
            for i in range(total, -1, -1):
                j = total - i
                if i > 0:
                    phi[(i, j)] = phi[(i - 1, j)].diff(coords.x)
                else:
                    phi[(i, j)] = phi[(i, j - 1)].diff(coords.u)
        return GroupJet(xi=xi, phi=phi, order=order)

    @staticmethod
    def identity(order: int = 3) -> "GroupJet":
        return GroupJet.from_maps(_X, _U, order)

    def at_point(self, binding: Mapping[Symbol, Fraction]) -> "GroupJet":
        """Evaluate every entry at a base point (entries become constants)."""
        xi = {i: as_expr(e.eval_at(binding)) for i, e in self.xi.items()}
        phi = {ij: as_expr(e.eval_at(binding)) for ij, e in self.phi.items()}
        return GroupJet(xi=xi, phi=phi, order=self.order)


@dataclass(frozen=True)
class LiftedExpr:
    """A lifted invariant: its value and the derivative word it realizes."""

    value: Expr
    word: str


# ---------------------------------------------------------------------------
# helper functions and the prolonged action

def helpers(g: GroupJet) -> Tuple[Expr, Expr, Expr, Expr]:
    """The denominator-cleared pieces (delta, epsilon, psi, chi)."""
    if g.order < 3:
        raise ActionError("helpers need group jets to order 3")
    x1 = g.xi[1]
    x2 = g.xi[2]
    x3 = g.xi[3]
    f_x, f_u = g.phi[(1, 0)], g.phi[(0, 1)]
    f_xx, f_xu, f_uu = g.phi[(2, 0)], g.phi[(1, 1)], g.phi[(0, 2)]
    f_xxx, f_xxu, f_xuu, f_uuu = (
        g.phi[(3, 0)],
        g.phi[(2, 1)],
        g.phi[(1, 2)],
        g.phi[(0, 3)],
    )
    delta = _P * f_u + f_x
    epsilon = x2 / x1
    psi = (
        x1 * f_uu * _P**2
        - (x2 * f_u - 2 * x1 * f_xu) * _P
        + f_u * x1 * _Q
        - x2 * f_x
        + x1 * f_xx
    )
    chi = (
        -(x1**2) * f_uuu * _P**3
        + 3 * x1 * (x2 * f_uu - x1 * f_xuu) * _P**2
        + (6 * x2 * x1 * f_xu + x3 * x1 * f_u - 3 * x2**2 * f_u - 3 * x1**2 * f_xxu) * _P
        + 3 * x1 * (f_u * x2 - f_xu * x1) * _Q
        - 3 * x1**2 * f_uu * _P * _Q
        - f_u * x1**2 * _R
        + 3 * x2 * x1 * f_xx
        + x3 * x1 * f_x
        - x1**2 * f_xxx
        - 3 * x2**2 * f_x
    )
    return delta, epsilon, psi, chi


def prolonged_action(
    g: GroupJet,
    point: Optional[Mapping[Symbol, Fraction]] = None,
) -> Tuple[LiftedExpr, ...]:
    """Third-order prolonged action (X, U, P, Q, R).

    With `point` given (values for x,u,p,q,r and any symbols inside g's
    entries), returns the same tuple with rational-constant values.
    """
    delta, _eps, psi, chi = helpers(g)
    x1 = g.xi[1]
    comps = (
        LiftedExpr(g.xi[0], "X"),
        LiftedExpr(g.phi[(0, 0)], "U"),
        LiftedExpr(delta / x1, "P"),
        LiftedExpr(psi / x1**3, "Q"),
        LiftedExpr(-chi / x1**5, "R"),
    )
    if point is None:
        return comps
    return tuple(
        LiftedExpr(as_expr(c.value.eval_at(point)), c.word) for c in comps
    )


def curve_total_groupoid(e: Expr) -> Expr:
    """D_x along solution curves on the groupoid (r free, group jets advance)."""
    out = (
        e.diff(coords.x)
        + _P * e.diff(coords.u)
        + _Q * e.diff(coords.p)
        + _R * e.diff(coords.q)
    )
    for sym in e.symbols():
        if sym in coords.XI_ORDER:
            out = out + as_expr(coords.xi_jet(coords.XI_ORDER[sym] + 1)) * e.diff(sym)
        elif sym in coords.PHI_ORDER:
            i, j = coords.PHI_ORDER[sym]
            adv = as_expr(coords.phi_jet(i + 1, j)) + _P * coords.phi_jet(i, j + 1)
            out = out + adv * e.diff(sym)
    return out


def chain_rule_action() -> Tuple[Expr, Expr, Expr, Expr, Expr]:
    """Independent re-derivation of the action at formal jets.

    P = D_x U / D_x X iterated; this is the cross-check the closed forms in
    helpers() must match exactly.
    """
    X = as_expr(coords.xi_jet(0))
    U = as_expr(coords.phi_jet(0, 0))
    dX = curve_total_groupoid(X)
    P = curve_total_groupoid(U) / dX
    Q = curve_total_groupoid(P) / dX
    R = curve_total_groupoid(Q) / dX
    return X, U, P, Q, R


def compose_maps(
    xi1: Expr, phi1: Expr, xi2: Expr, phi2: Expr
) -> Tuple[Expr, Expr]:
    """Composite of two explicit maps, applying (xi1, phi1) first."""
    xi = xi2.subst({coords.x: xi1})
    phi = phi2.subst({coords.x: xi1, coords.u: phi1})
    return xi, phi


# ---------------------------------------------------------------------------
# lifted derivations on the equation manifold

_LETTERS = "XUPQ"
_SLOTS = ("x", "u", "p", "q")


def _invert_lower_triangular(L: List[List[Expr]]) -> List[List[Expr]]:
    n = len(L)
    inv: List[List[Expr]] = [[as_expr(0)] * n for _ in range(n)]
    for j in range(n):
        for i in range(j, n):
            if i == j:
                if L[i][i].is_zero():
                    raise ActionError("total Jacobian is singular (non-transversal)")
                inv[i][j] = 1 / L[i][i]
            else:
                acc = as_expr(0)
                for k in range(j, i):
                    acc = acc + L[i][k] * inv[k][j]
                inv[i][j] = -acc / L[i][i]
    return inv


class LiftedOperators:
    """The four derivations dual to (X, U, P, Q) on r = F.

    Constructed by inverting the lower-triangular total Jacobian
    J[a][b] = D_(z_b) Z_a; then D_(Z_a) f = sum_b Jinv[b][a] D_(z_b) f.
    They annihilate constants, satisfy Leibniz, and are dual to the lifted
    coordinates (D_(Z_a) Z_b = delta_ab) -- all verified in tests.
    """

    def __init__(self, g: GroupJet, fjet: Optional[jet.FJet] = None):
        self.g = g
        self.fjet = fjet
        delta, _eps, psi, chi = helpers(g)
        x1 = g.xi[1]
        Z = [g.xi[0], g.phi[(0, 0)], delta / x1, psi / x1**3]
        J = [[jet.hyper_total(z, s) for s in _SLOTS] for z in Z]
        for a in range(4):
            for b in range(a + 1, 4):
                if not J[a][b].is_zero():
                    raise ActionError("total Jacobian lost triangularity")
        self._winv = _invert_lower_triangular(J)

    def apply(self, letter: str, e: Expr) -> Expr:
        a = _LETTERS.index(letter)
        out = as_expr(0)
        for b in range(4):
            w = self._winv[b][a]
            if w.is_zero():
                continue
            out = out + w * jet.hyper_total(e, _SLOTS[b])
        return out

    def duality_matrix(self) -> List[List[Expr]]:
        delta, _eps, psi, _chi = helpers(self.g)
        x1 = self.g.xi[1]
        Z = [self.g.xi[0], self.g.phi[(0, 0)], delta / x1, psi / x1**3]
        return [[self.apply(a, z) for z in Z] for a in _LETTERS]


def lifted_operators(g: GroupJet, fjet: Optional[jet.FJet] = None) -> LiftedOperators:
    return LiftedOperators(g, fjet)


# Formal lifted invariants are computed once per word and cached; every mode
# (pointwise frame, symbolic frame, concrete test jets) substitutes into the
# same cached expressions.
_word_cache: Dict[str, Expr] = {}
_word_lock = threading.RLock()
_formal_ops: Optional[LiftedOperators] = None


def _ops() -> LiftedOperators:
    global _formal_ops
    if _formal_ops is None:
        with _word_lock:
            if _formal_ops is None:
                _formal_ops = LiftedOperators(GroupJet.formal(3))
    return _formal_ops


def lifted_word_expr(word: str) -> Expr:
    """Fully formal lifted invariant R_word (free group jets and F-jets)."""
    for ch in word:
        if ch not in _LETTERS:
            raise ActionError(f"bad invariant word {word!r}")
    got = _word_cache.get(word)
    if got is not None:
        return got
    with _word_lock:
        got = _word_cache.get(word)
        if got is not None:
            return got
        if word == "":
            g = GroupJet.formal(3)
            *_rest, chi = helpers(g)
            F0 = as_expr(coords.fjet((0, 0, 0, 0)))
            value = (-chi / g.xi[1] ** 5).subst({coords.r: F0})
        else:
            tail = lifted_word_expr(word[1:])
            value = _ops().apply(word[0], tail)
        _word_cache[word] = value
        return value


def required_gjet_order(word: str) -> int:
    return 3 + sum(1 for ch in word if ch in ("X", "U"))


def lifted_invariant(
    g: GroupJet,
    fjet: jet.FJet,
    word: str = "",
    max_word: int = MAX_WORD_LENGTH,
) -> LiftedExpr:
    """R_word with g's entries substituted (subscripts accumulate on the
    left: word "XPQ" means D_X applied to D_P applied to D_Q of R)."""
    if len(word) > max_word:
        raise ActionError(
            f"word {word!r} exceeds the configured maximum order {max_word}"
        )
    if fjet.order < len(word):
        raise jet.JetError(
            f"F-jet order {fjet.order} too small for word {word!r}"
        )
    need = required_gjet_order(word)
    if g.order < need:
        raise ActionError(
            f"group jet order {g.order} too small for word {word!r} (need {need})"
        )
    formal = lifted_word_expr(word)
    value = formal.subst(g.binding())
    return LiftedExpr(value=value, word=word)


def transformed_fjet_values(
    g: GroupJet,
    point_binding: Mapping[Symbol, Fraction],
    up_to: int,
) -> Dict[MultiIndex, Fraction]:
    """Jets of the transformed right-hand side at the image point.

    The lifted invariant for a word is exactly the corresponding partial of
    the transformed F at the image of the point, so no global inverse of the
    map is ever needed.  Words here may mix letters; the operators commute
    (checked in tests), so the multi-index determines the value.
    """
    out: Dict[MultiIndex, Fraction] = {}
    for idx in coords.fjet_indices(up_to):
        a, b, c, d = idx
        word = "X" * a + "U" * b + "P" * c + "Q" * d
        formal = lifted_word_expr(word)
        out[idx] = formal.subst(g.binding()).eval_at(point_binding)
    return out
