"""Development exploration: discover the cross-section elimination order.

Solves the normalization equations sequentially at a concrete generic point
with symbolic group jets, maintaining fully back-substituted solutions,
then checks which residual parameters the fundamental invariants and the
generic-branch extras still contain, and how the generic pinning behaves.
"""

import sys
import time
from fractions import Fraction

from odeframe import coords, jet, action, parse
from odeframe.expr import as_expr, solve_affine

x, u, p, q = coords.E_x, coords.E_u, coords.E_p, coords.E_q

t0 = time.time()

F = q**2 + p**3 + u * x + 1
fj = jet.build_fjet(F, 6)
pt = jet.sample_point(fj, seed=3)
binding = pt.binding()
print("point:", [str(v) for v in pt.base])

stage_eqs = [
    ("X", 0), ("U", 0), ("P", 0), ("Q", 0), ("R", 0),
    ("R_Q", 1), ("R_P", 0), ("R_U", 0), ("R_X", 0),
    ("R_UQ", 0), ("R_UP", 0), ("R_PP", 0), ("R_XP", 0), ("R_PQ", 1), ("R_XQ", 1),
    ("R_XX", 0), ("R_XU", 0), ("R_UU", 0), ("R_XXP", 0),
]

KEEP_FREE = {coords.xi_jet(1), coords.phi_jet(0, 1), coords.phi_jet(1, 1)}


def word_expr(tag):
    if tag in ("X", "U", "P", "Q", "R"):
        g = action.GroupJet.formal(3)
        comp = {c.word: c.value for c in action.prolonged_action(g)}
        return comp[tag]
    return action.lifted_word_expr(tag[2:])


solved = {}
order_of = {}
for s, i in coords.XI_ORDER.items():
    order_of[s] = (i, 0, s.name)
for s, (i, j) in coords.PHI_ORDER.items():
    order_of[s] = (i + j, 1, s.name)


def note_solution(target, sol):
    # back-substitute into existing stored values, then store
    for k in list(solved):
        if solved[k].has_symbol(target):
            solved[k] = solved[k].subst({target: sol})
    solved[target] = sol


for tag, target_val in stage_eqs:
    t1 = time.time()
    e = word_expr(tag)
    e = e.subst(binding).subst(solved)
    assert not any(s in solved for s in e.symbols())
    gsyms = [s for s in e.symbols() if s.kind == "gjet" and s not in solved]
    cands = []
    for s in gsyms:
        if s in KEEP_FREE:
            continue
        deg = e.degree_in(s)
        num = as_expr(0) + e  # copy
        lead = e.diff(s) if deg == 1 else None
        cands.append((order_of[s], s, deg, lead))
    cands.sort(key=lambda c: (-c[0][0], c[0][1], c[0][2]))
    print(f"eq {tag}={target_val}:")
    for key, s, deg, lead in cands:
        if deg == 1 and lead is not None:
            lsy = sorted(t.name for t in lead.symbols())
            print(f"    cand {s.name} deg {deg} leadcoef syms {lsy}")
        else:
            print(f"    cand {s.name} deg {deg}")
    if not cands:
        print("   !! nothing to solve")
        continue
    aff = [c for c in cands if c[2] == 1]
    key, target, deg, lead = aff[0]
    sol = solve_affine(e, target, target_val)
    note_solution(target, sol)
    gs = sorted({s.name for s in sol.symbols() if s.kind == "gjet"})
    print(f"   -> solved {target.name} ({time.time()-t1:.2f}s), residual deps {gs}, terms {sol.num_terms()}")

print("\nsolved params:", sorted(s.name for s in solved))
for k, v in solved.items():
    rem = [s.name for s in v.symbols() if s.kind == "gjet" and s not in KEEP_FREE]
    assert not rem, (k.name, rem)

fund = {}
for w in ["QQ", "XPQ", "XXQ"]:
    t1 = time.time()
    e = action.lifted_word_expr(w).subst(binding).subst(solved)
    rem = sorted(s.name for s in e.symbols() if s.kind == "gjet")
    fund[w] = e
    print(f"R_{w}: residual gjets {rem} terms {e.num_terms()} ({time.time()-t1:.2f}s)")
    for sym in sorted(KEEP_FREE, key=lambda s: s.name):
        print(f"    degree in {sym.name}: {e.degree_in(sym)}")
    print("    expr:", parse.render(e))

# generic stage: pin residual parameters with R_XPQ = 1, R_XXQ = 1
xi1s, phi01s, phi11s = coords.xi_jet(1), coords.phi_jet(0, 1), coords.phi_jet(1, 1)
exq = fund["XXQ"]
print("\nsolve R_XXQ=1 for phi11:")
sol11 = solve_affine(exq, phi11s, 1)
print("   phi11 =", parse.render(sol11))
expq = fund["XPQ"].subst({phi11s: sol11})
print("R_XPQ after phi11 pin:", parse.render(expq))
print("   degrees: xi1", expq.degree_in(xi1s), "phi01", expq.degree_in(phi01s))

# extras
for w in ["XXXQ", "XXUQ", "XXPQ", "XXQQ"]:
    t1 = time.time()
    e = action.lifted_word_expr(w)
    print(f"R_{w} formal terms {e.num_terms()} ({time.time()-t1:.2f}s)")
    t1 = time.time()
    e = e.subst(binding).subst(solved).subst({phi11s: sol11})
    rem = sorted(s.name for s in e.symbols() if s.kind == "gjet")
    print(f"   reduced: residual gjets {rem} terms {e.num_terms()} ({time.time()-t1:.2f}s)")
    print(f"   degrees: xi1 {e.degree_in(xi1s)} phi01 {e.degree_in(phi01s)}")

print(f"\ntotal {time.time()-t0:.2f}s")
