"""Exact multivariate rational expressions.

An Expr is a fraction of two canonical multivariate polynomials with
arbitrary-precision rational coefficients.  Canonical form means:

  * the denominator is never the zero polynomial,
  * numerator and denominator share no non-unit polynomial factor,
  * the denominator's leading coefficient (in the global monomial order)
    is 1,
  * monomials are kept sorted under one fixed graded-lexicographic order
    taken over symbol-creation order.

Two expression trees denoting the same rational function therefore build
the exact same Expr, and an expression is zero iff its numerator is the
empty polynomial.  Floats never appear; every coefficient is a Fraction.

Polynomials are sparse dicts mapping monomials to coefficients, where a
monomial is a tuple of (symbol id, exponent) pairs sorted by symbol id.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

Monomial = Tuple[Tuple[int, int], ...]
Poly = Dict[Monomial, Fraction]
RatLike = Union[int, Fraction]

_ONE_MONO: Monomial = ()


class KernelError(Exception):
    """Base class for kernel failures."""


class BudgetError(KernelError):
    """A polynomial exceeded the configured term limit."""


class ExprDivisionError(KernelError):
    """Division by an expression whose canonical form is zero."""


class EvaluationError(KernelError):
    """Evaluation failed (unbound symbol or vanishing denominator)."""


SYMBOL_KINDS = ("coord", "fjet", "gjet", "formal")


@dataclass(frozen=True)
class Symbol:
    """An interned variable.  sid fixes its place in the monomial order."""

    sid: int
    name: str
    kind: str

    def __repr__(self) -> str:
        return self.name


class Workspace:
    """Symbol interning table.

    Creation order is load-bearing: it defines the global monomial order, so
    canonical forms are reproducible across runs as long as symbols are
    created in the same sequence.  Reads need no lock (dict reads are atomic);
    creation is serialized.
    """

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._by_name: Dict[str, Symbol] = {}
        self._symbols: list[Symbol] = []

    def symbol(self, name: str, kind: str = "formal") -> Symbol:
        if kind not in SYMBOL_KINDS:
            raise KernelError(f"unknown symbol kind {kind!r}")
        got = self._by_name.get(name)
        if got is not None:
            if got.kind != kind:
                raise KernelError(
                    f"symbol {name!r} already exists with kind {got.kind!r}"
                )
            return got
        with self._lock:
            got = self._by_name.get(name)
            if got is not None:
                if got.kind != kind:
                    raise KernelError(
                        f"symbol {name!r} already exists with kind {got.kind!r}"
                    )
                return got
            sym = Symbol(len(self._symbols), name, kind)
            self._symbols.append(sym)
            self._by_name[name] = sym
            return sym

    def lookup(self, name: str) -> Optional[Symbol]:
        return self._by_name.get(name)

    def by_sid(self, sid: int) -> Symbol:
        return self._symbols[sid]


_WORKSPACE = Workspace()


def workspace() -> Workspace:
    return _WORKSPACE


def symbol(name: str, kind: str = "formal") -> Symbol:
    """Intern a symbol in the global workspace."""
    return _WORKSPACE.symbol(name, kind)


# ---------------------------------------------------------------------------
# term budget

_term_limit = 400_000
_limit_lock = threading.Lock()


def set_term_limit(n: int) -> int:
    """Set the polynomial size cap; returns the previous value."""
    global _term_limit
    with _limit_lock:
        old = _term_limit
        _term_limit = int(n)
    return old


def term_limit() -> int:
    return _term_limit


def _check_size(p: Poly) -> Poly:
    if len(p) > _term_limit:
        raise BudgetError(
            f"polynomial with {len(p)} terms exceeds the term limit {_term_limit}"
        )
    return p


# ---------------------------------------------------------------------------
# monomial order: graded lex over symbol-creation order

def _mdeg(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mkey(m: Monomial):
    # Graded first; ties broken lexicographically with earlier-created
    # symbols dominating (encoded by negating the sid).
    return (_mdeg(m), tuple((-s, e) for s, e in m))


def _mmul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out: list[Tuple[int, int]] = []
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa == sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mdivides(a: Monomial, b: Monomial) -> bool:
    """True when monomial a divides b."""
    db = dict(b)
    for s, e in a:
        if db.get(s, 0) < e:
            return False
    return True


def _mdiv(b: Monomial, a: Monomial) -> Monomial:
    """b / a, assuming divisibility."""
    da = dict(a)
    out = []
    for s, e in b:
        r = e - da.get(s, 0)
        if r < 0:
            raise KernelError("monomial division underflow")
        if r:
            out.append((s, r))
    return tuple(out)


# ---------------------------------------------------------------------------
# sparse polynomial arithmetic

_ZERO = Fraction(0)


def _pzero() -> Poly:
    return {}


def _pconst(c: RatLike) -> Poly:
    c = Fraction(c)
    return {} if c == 0 else {_ONE_MONO: c}


def _psym(s: Symbol) -> Poly:
    return {((s.sid, 1),): Fraction(1)}


def _padd(a: Poly, b: Poly) -> Poly:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, _ZERO) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return _check_size(out)


def _pneg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def _psub(a: Poly, b: Poly) -> Poly:
    return _padd(a, _pneg(b))


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mmul(ma, mb)
            v = out.get(m, _ZERO) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return _check_size(out)


def _pscale(a: Poly, c: Fraction) -> Poly:
    if not c:
        return {}
    return {m: cc * c for m, cc in a.items()}


def _ppow(a: Poly, n: int) -> Poly:
    if n < 0:
        raise KernelError("negative polynomial power")
    out = _pconst(1)
    base = dict(a)
    while n:
        if n & 1:
            out = _pmul(out, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return out


def _plead(a: Poly) -> Tuple[Monomial, Fraction]:
    m = max(a, key=_mkey)
    return m, a[m]


def _pis_const(a: Poly) -> bool:
    return not a or (len(a) == 1 and _ONE_MONO in a)


def _pvars(a: Poly) -> set[int]:
    out: set[int] = set()
    for m in a:
        for s, _ in m:
            out.add(s)
    return out


def _pdiv_exact(a: Poly, b: Poly) -> Poly:
    """Exact multivariate division; raises KernelError on a remainder."""
    if not b:
        raise KernelError("exact division by zero polynomial")
    if not a:
        return {}
    if _pis_const(b):
        inv = 1 / b[_ONE_MONO]
        return _pscale(a, inv)
    rem = dict(a)
    mb, cb = _plead(b)
    quot: Poly = {}
    while rem:
        mr, cr = _plead(rem)
        if not _mdivides(mb, mr):
            raise KernelError("inexact polynomial division")
        qm = _mdiv(mr, mb)
        qc = cr / cb
        quot[qm] = quot.get(qm, _ZERO) + qc
        # rem -= (qc * qm) * b
        for m, c in b.items():
            mm = _mmul(qm, m)
            v = rem.get(mm, _ZERO) - qc * c
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return {m: c for m, c in quot.items() if c}


def _pmonic(a: Poly) -> Poly:
    if not a:
        return {}
    _, lc = _plead(a)
    if lc == 1:
        return dict(a)
    return _pscale(a, 1 / lc)


def _pmono_content(a: Poly) -> Monomial:
    """Largest monomial dividing every term."""
    it = iter(a)
    first = next(it)
    common = dict(first)
    for m in it:
        dm = dict(m)
        for s in list(common):
            e = min(common[s], dm.get(s, 0))
            if e:
                common[s] = e
            else:
                del common[s]
        if not common:
            break
    return tuple(sorted(common.items()))


def _puni(a: Poly, v: int) -> Dict[int, Poly]:
    """View a as univariate in symbol v with polynomial coefficients."""
    out: Dict[int, Poly] = {}
    for m, c in a.items():
        e = 0
        rest = []
        for s, ee in m:
            if s == v:
                e = ee
            else:
                rest.append((s, ee))
        coeff = out.setdefault(e, {})
        rm = tuple(rest)
        val = coeff.get(rm, _ZERO) + c
        if val:
            coeff[rm] = val
        else:
            coeff.pop(rm, None)
    return {e: c for e, c in out.items() if c}


def _pfromuni(u: Dict[int, Poly], v: int) -> Poly:
    out: Poly = {}
    for e, coeff in u.items():
        vm: Monomial = ((v, e),) if e else ()
        for m, c in coeff.items():
            mm = _mmul(m, vm)
            val = out.get(mm, _ZERO) + c
            if val:
                out[mm] = val
            else:
                out.pop(mm, None)
    return out


def _uni_lead(u: Dict[int, Poly]) -> Tuple[int, Poly]:
    d = max(u)
    return d, u[d]


def _prem(f: Dict[int, Poly], g: Dict[int, Poly]) -> Dict[int, Poly]:
    """Pseudo-remainder of univariate-with-poly-coefficient views."""
    df, _ = _uni_lead(f)
    dg, lg = _uni_lead(g)
    r = {e: dict(c) for e, c in f.items()}
    while r:
        dr = max(r)
        if dr < dg:
            break
        lr = r[dr]
        # r = lg * r - lr * x^(dr-dg) * g
        new: Dict[int, Poly] = {}
        for e, c in r.items():
            new[e] = _pmul(lg, c)
        for e, c in g.items():
            ee = e + dr - dg
            term = _pmul(lr, c)
            new[ee] = _psub(new.get(ee, {}), term)
        r = {e: c for e, c in new.items() if c}
    return r


def _pcontent_wrt(u: Dict[int, Poly]) -> Poly:
    cont: Poly = {}
    for c in u.values():
        cont = _pgcd(cont, c)
        if _pis_const(cont) and cont:
            return _pconst(1)
    return cont if cont else _pconst(1)


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the rationals.  gcd with 0 returns the monic other."""
    if not a:
        return _pmonic(b)
    if not b:
        return _pmonic(a)
    if _pis_const(a) or _pis_const(b):
        return _pconst(1)
    ma = _pmono_content(a)
    mb = _pmono_content(b)
    mg = []
    db = dict(mb)
    for s, e in ma:
        ee = min(e, db.get(s, 0))
        if ee:
            mg.append((s, ee))
    mono: Monomial = tuple(mg)
    if ma:
        a = {_mdiv(m, ma): c for m, c in a.items()}
    if mb:
        b = {_mdiv(m, mb): c for m, c in b.items()}
    core = _pgcd_core(a, b)
    if mono:
        core = {_mmul(m, mono): c for m, c in core.items()}
    return _pmonic(core)


def _pgcd_core(a: Poly, b: Poly) -> Poly:
    if _pis_const(a) or _pis_const(b):
        return _pconst(1)
    if a == b:
        return dict(a)
    shared = sorted(_pvars(a) & _pvars(b))
    if not shared:
        return _pconst(1)
    v = shared[0]
    ua = _puni(a, v)
    ub = _puni(b, v)
    conta = _pcontent_wrt(ua)
    contb = _pcontent_wrt(ub)
    cont = _pgcd(conta, contb)
    prima = {e: _pdiv_exact(c, conta) for e, c in ua.items()}
    primb = {e: _pdiv_exact(c, contb) for e, c in ub.items()}
    if _uni_lead(prima)[0] < _uni_lead(primb)[0]:
        prima, primb = primb, prima
    # primitive pseudo-remainder sequence
    while True:
        r = _prem(prima, primb)
        if not r:
            g = _pfromuni(primb, v)
            break
        if max(r) == 0:
            g = _pconst(1)
            break
        rc = _pcontent_wrt(r)
        r = {e: _pdiv_exact(c, rc) for e, c in r.items()}
        prima, primb = primb, r
    return _pmul(cont, g)


def _pdiff(a: Poly, sid: int) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        for i, (s, e) in enumerate(m):
            if s == sid:
                if e == 1:
                    mm = m[:i] + m[i + 1 :]
                else:
                    mm = m[:i] + ((s, e - 1),) + m[i + 1 :]
                v = out.get(mm, _ZERO) + c * e
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
                break
    return out


# ---------------------------------------------------------------------------
# Expr

ExprLike = Union["Expr", Symbol, int, Fraction]


def _coerce(x: ExprLike) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, Symbol):
        return Expr._raw(_psym(x), _pconst(1))
    if isinstance(x, (int, Fraction)):
        return Expr._raw(_pconst(x), _pconst(1))
    raise KernelError(f"cannot interpret {x!r} as an expression")


class Expr:
    """Immutable canonical rational expression."""

    __slots__ = ("_num", "_den", "_hash")

    _num: Tuple[Tuple[Monomial, Fraction], ...]
    _den: Tuple[Tuple[Monomial, Fraction], ...]

    @staticmethod
    def _freeze(p: Poly) -> Tuple[Tuple[Monomial, Fraction], ...]:
        return tuple(sorted(p.items(), key=lambda kv: _mkey(kv[0]), reverse=True))

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "Expr":
        """Build from polynomials, performing the canonical reduction."""
        if not den:
            raise ExprDivisionError("zero denominator")
        if not num:
            obj = object.__new__(cls)
            object.__setattr__(obj, "_num", ())
            object.__setattr__(obj, "_den", ((_ONE_MONO, Fraction(1)),))
            object.__setattr__(obj, "_hash", None)
            return obj
        if not _pis_const(den):
            g = _pgcd(num, den)
            if not (_pis_const(g)):
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
        _, lc = _plead(den)
        if lc != 1:
            inv = 1 / lc
            num = _pscale(num, inv)
            den = _pscale(den, inv)
        obj = object.__new__(cls)
        object.__setattr__(obj, "_num", cls._freeze(num))
        object.__setattr__(obj, "_den", cls._freeze(den))
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Expr is immutable")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def is_one(self) -> bool:
        return self._num == ((_ONE_MONO, Fraction(1)),) and self._den == (
            (_ONE_MONO, Fraction(1)),
        )

    def is_rational(self) -> bool:
        return (not self._num or self._num == ((_ONE_MONO, self._num[0][1]),)) and (
            self._den == ((_ONE_MONO, Fraction(1)),)
        ) and (not self._num or self._num[0][0] == _ONE_MONO)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise KernelError("expression is not a constant")
        if not self._num:
            return Fraction(0)
        return self._num[0][1]

    # -- views --------------------------------------------------------------

    def num_terms(self) -> int:
        return len(self._num) + len(self._den)

    def num_poly(self) -> Poly:
        return dict(self._num)

    def den_poly(self) -> Poly:
        return dict(self._den)

    def symbols(self) -> Tuple[Symbol, ...]:
        sids: set[int] = set()
        for part in (self._num, self._den):
            for m, _ in part:
                for s, _e in m:
                    sids.add(s)
        return tuple(_WORKSPACE.by_sid(s) for s in sorted(sids))

    def has_symbol(self, sym: Symbol) -> bool:
        for part in (self._num, self._den):
            for m, _ in part:
                for s, _e in m:
                    if s == sym.sid:
                        return True
        return False

    def degree_in(self, sym: Symbol) -> int:
        d = 0
        for part in (self._num, self._den):
            for m, _ in part:
                for s, e in m:
                    if s == sym.sid:
                        d = max(d, e)
        return d

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: ExprLike) -> "Expr":
        o = _coerce(other)
        a, b = dict(self._num), dict(self._den)
        c, d = dict(o._num), dict(o._den)
        if b == d:
            return Expr._raw(_padd(a, c), b)
        return Expr._raw(_padd(_pmul(a, d), _pmul(c, b)), _pmul(b, d))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr._raw(_pneg(dict(self._num)), dict(self._den))

    def __sub__(self, other: ExprLike) -> "Expr":
        return self + (-_coerce(other))

    def __rsub__(self, other: ExprLike) -> "Expr":
        return _coerce(other) + (-self)

    def __mul__(self, other: ExprLike) -> "Expr":
        o = _coerce(other)
        return Expr._raw(
            _pmul(dict(self._num), dict(o._num)),
            _pmul(dict(self._den), dict(o._den)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ExprLike) -> "Expr":
        o = _coerce(other)
        if o.is_zero():
            raise ExprDivisionError("division by zero expression")
        return Expr._raw(
            _pmul(dict(self._num), dict(o._den)),
            _pmul(dict(self._den), dict(o._num)),
        )

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int):
            raise KernelError("only integer powers are supported")
        if n == 0:
            return ONE
        if n < 0:
            if self.is_zero():
                raise ExprDivisionError("zero to a negative power")
            return Expr._raw(
                _ppow(dict(self._den), -n), _ppow(dict(self._num), -n)
            )
        return Expr._raw(_ppow(dict(self._num), n), _ppow(dict(self._den), n))

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Symbol)):
            other = _coerce(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self._num, self._den))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ------------------------------------------------------------

    def diff(self, sym: Symbol) -> "Expr":
        num, den = dict(self._num), dict(self._den)
        dnum = _pdiff(num, sym.sid)
        if _pis_const(den):
            return Expr._raw(dnum, den)
        dden = _pdiff(den, sym.sid)
        if not dden:
            return Expr._raw(dnum, den)
        top = _psub(_pmul(dnum, den), _pmul(num, dden))
        return Expr._raw(top, _pmul(den, den))

    def subst(self, bindings: Mapping[Symbol, ExprLike]) -> "Expr":
        """Simultaneous substitution; unknown symbols are untouched."""
        live = {s.sid: _coerce(v) for s, v in bindings.items()}
        sids = {s for part in (self._num, self._den) for m, _ in part for s, _e in m}
        if not (sids & live.keys()):
            return self
        num = _apply_poly(dict(self._num), live)
        den = _apply_poly(dict(self._den), live)
        if den.is_zero():
            raise ExprDivisionError("substitution produced a zero denominator")
        return num / den

    def eval_at(self, point: Mapping[Symbol, RatLike]) -> Fraction:
        """Exact rational value; every occurring symbol must be bound."""
        vals = {s.sid: Fraction(v) for s, v in point.items()}
        missing = [
            _WORKSPACE.by_sid(s).name
            for part in (self._num, self._den)
            for m, _ in part
            for s, _e in m
            if s not in vals
        ]
        if missing:
            raise EvaluationError(
                "unbound symbols: " + ", ".join(sorted(set(missing)))
            )
        nv = _eval_poly(self._num, vals)
        dv = _eval_poly(self._den, vals)
        if dv == 0:
            shown = {
                _WORKSPACE.by_sid(s).name: str(v) for s, v in sorted(vals.items())
            }
            raise EvaluationError(f"denominator vanishes at {shown}")
        return nv / dv

    # -- display -------------------------------------------------------------

    def __repr__(self) -> str:
        from . import parse  # local import: parse depends on expr

        return parse.render(self, "text")


def _eval_poly(
    terms: Iterable[Tuple[Monomial, Fraction]], vals: Dict[int, Fraction]
) -> Fraction:
    total = Fraction(0)
    for m, c in terms:
        acc = c
        for s, e in m:
            acc *= vals[s] ** e
        total += acc
    return total


def _apply_poly(p: Poly, live: Dict[int, Expr]) -> Expr:
    """Evaluate a polynomial with Expr values for some symbols.

    Works over one common denominator so that the whole substitution costs
    a single gcd cancellation at the end instead of one per term.
    """
    if not p:
        return ZERO
    max_exp: Dict[int, int] = {}
    for m in p:
        for s, e in m:
            if s in live and e > max_exp.get(s, 0):
                max_exp[s] = e
    # power tables for substituted numerators and denominators
    num_pows: Dict[int, list[Poly]] = {}
    den_pows: Dict[int, list[Poly]] = {}
    for s, me in max_exp.items():
        rep = live[s]
        npows = [_pconst(1)]
        dpows = [_pconst(1)]
        for _ in range(me):
            npows.append(_pmul(npows[-1], dict(rep._num)))
            dpows.append(_pmul(dpows[-1], dict(rep._den)))
        num_pows[s] = npows
        den_pows[s] = dpows
    common_den = _pconst(1)
    for s, me in max_exp.items():
        common_den = _pmul(common_den, den_pows[s][me])
    total: Poly = {}
    for m, c in p.items():
        keep: list[Tuple[int, int]] = []
        term = _pconst(c)
        for s, e in m:
            if s in live:
                term = _pmul(term, num_pows[s][e])
                deficit = max_exp[s] - e
                if deficit:
                    term = _pmul(term, den_pows[s][deficit])
            else:
                keep.append((s, e))
        # denominators of the substituted symbols absent from this term
        missing = _pconst(1)
        present = {s for s, _ in m if s in live}
        for s, me in max_exp.items():
            if s not in present:
                missing = _pmul(missing, den_pows[s][me])
        term = _pmul(term, missing)
        if keep:
            km: Monomial = tuple(sorted(keep))
            term = {(_mmul(mm, km)): cc for mm, cc in term.items()}
        for mm, cc in term.items():
            v = total.get(mm, _ZERO) + cc
            if v:
                total[mm] = v
            else:
                total.pop(mm, None)
        _check_size(total)
    return Expr._raw(total, common_den)


ZERO = Expr._raw(_pzero(), _pconst(1))
ONE = Expr._raw(_pconst(1), _pconst(1))


def as_expr(x: ExprLike) -> Expr:
    return _coerce(x)


def canonicalize(x: ExprLike) -> Expr:
    """Canonical form of a value built from Exprs, Symbols and rationals.

    Arithmetic on Expr canonicalizes eagerly, so this is the identity on
    Expr; it exists so callers can normalize mixed inputs in one place.
    """
    return _coerce(x)


def differentiate(e: ExprLike, s: Symbol) -> Expr:
    """Formal partial derivative; all other symbols are constants."""
    return _coerce(e).diff(s)


def substitute(e: ExprLike, bindings: Mapping[Symbol, ExprLike]) -> Expr:
    return _coerce(e).subst(bindings)


def evaluate(e: ExprLike, point: Mapping[Symbol, RatLike]) -> Fraction:
    return _coerce(e).eval_at(point)


def solve_affine(eq: Expr, target: Symbol, rhs: ExprLike = 0) -> Expr:
    """Solve eq == rhs for a symbol in which eq is affine.

    The denominator of eq must not contain the target.  Raises KernelError
    when eq is not affine in the target or the leading coefficient is the
    zero expression.
    """
    rhs_e = _coerce(rhs)
    den = Expr._raw(dict(eq._den), _pconst(1))
    if den.has_symbol(target):
        raise KernelError(f"denominator involves the unknown {target.name}")
    if eq.degree_in(target) > 1:
        raise KernelError(f"equation is not affine in {target.name}")
    num = Expr._raw(dict(eq._num), _pconst(1))
    coeff = num.diff(target)
    if coeff.has_symbol(target):
        raise KernelError(f"equation is not affine in {target.name}")
    if coeff.is_zero():
        raise KernelError(f"no occurrence of {target.name} to solve for")
    const = num.subst({target: ZERO})
    # num = coeff*target + const, eq = num/den = rhs
    return (rhs_e * den - const) / coeff
