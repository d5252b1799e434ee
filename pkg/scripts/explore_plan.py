"""Verify an elimination plan adaptively: per-equation preference lists,
reporting post-substitution content, then residual checks on invariants."""

import time
from fractions import Fraction

from odeframe import coords, jet, action, parse
from odeframe.expr import as_expr, solve_affine

t0 = time.time()


def xi(i):
    return coords.xi_jet(i)


def phi(i, j):
    return coords.phi_jet(i, j)


PLAN = [
    ("X", 0, [xi(0)]), ("U", 0, [phi(0, 0)]), ("P", 0, [phi(1, 0)]),
    ("Q", 0, [phi(2, 0)]), ("R", 0, [phi(3, 0)]),
    ("R_Q", 1, [xi(2)]), ("R_P", 0, [xi(3)]),
    ("R_U", 0, [phi(3, 1), phi(2, 1)]), ("R_X", 0, [phi(4, 0)]),
    ("R_UQ", 0, [phi(0, 3), phi(2, 1), phi(1, 2)]),
    ("R_UP", 0, [phi(2, 2), phi(1, 3), phi(0, 4)]),
    ("R_PP", 0, [phi(1, 2), phi(0, 3), phi(2, 1)]),
    ("R_XP", 0, [xi(4)]),
    ("R_PQ", 1, [phi(0, 2), phi(1, 1)]),
    ("R_XQ", 1, [phi(2, 1), phi(1, 2), phi(0, 3), xi(3)]),
    ("R_XU", 0, [phi(1, 3), phi(2, 2), phi(1, 4), phi(2, 3), phi(3, 2), phi(4, 1)]),
    ("R_UU", 0, [phi(0, 4), phi(1, 3), phi(0, 5), phi(1, 4), phi(2, 3), phi(3, 2)]),
    ("R_XX", 0, [xi(5), phi(5, 0), phi(4, 1)]),
]


def word_expr(tag):
    if tag in ("X", "U", "P", "Q", "R"):
        g = action.GroupJet.formal(3)
        comp = {c.word: c.value for c in action.prolonged_action(g)}
        return comp[tag]
    return action.lifted_word_expr(tag[2:])


xi1s, phi01s, phi11s = xi(1), phi(0, 1), phi(1, 1)
FREE = {xi1s, phi01s, phi11s}


def run_plan(binding, verbose=True):
    solved = {}
    assignment = []
    for tag, val, prefs in PLAN:
        e = word_expr(tag).subst(binding).subst(solved)
        present = {s for s in e.symbols() if s.kind == "gjet" and s not in solved}
        if verbose:
            names = sorted(s.name for s in present if s not in FREE)
            print(f"  {tag}={val}: unsolved non-free {names}")
        target = None
        for cand in prefs:
            if cand in present and e.degree_in(cand) == 1:
                target = cand
                break
        if target is None:
            print(f"    !! no preferred candidate available; present affine: "
                  f"{sorted(s.name for s in present if e.degree_in(s) == 1 and s not in FREE)}")
            raise SystemExit(1)
        sol = solve_affine(e, target, val)
        for k in list(solved):
            if solved[k].has_symbol(target):
                solved[k] = solved[k].subst({target: sol})
        solved[target] = sol
        assignment.append((tag, target.name))
        if verbose:
            lsy = sorted(s.name for s in e.diff(target).symbols())
            print(f"     -> {target.name} (leadcoef syms {lsy})")
    return solved, assignment


F = coords.E_q**2 + coords.E_p**3 + coords.E_u * coords.E_x + 1
fj = jet.build_fjet(F, 6)
pt = jet.sample_point(fj, seed=3)
binding = pt.binding()
print("point:", [str(v) for v in pt.base])
solved, assignment = run_plan(binding)
print("\nassignment:", assignment)

fund = {}
print("\nfundamentals:")
for w in ["QQ", "XPQ", "XXQ"]:
    e = action.lifted_word_expr(w).subst(binding).subst(solved)
    rem = sorted(s.name for s in e.symbols() if s.kind == "gjet" and s not in FREE)
    fund[w] = e
    print(f"  R_{w}: stray {rem}; free degrees "
          f"xi1 {e.degree_in(xi1s)}, phi01 {e.degree_in(phi01s)}, phi11 {e.degree_in(phi11s)}")
    print(f"    = {parse.render(e)}")

print("\ngeneric pinning:")
sol11 = solve_affine(fund["XXQ"], phi11s, 1)
print("  phi11 <- R_XXQ=1:", parse.render(sol11))
expq = fund["XPQ"].subst({phi11s: sol11})
print("  R_XPQ then:", parse.render(expq))

print("\nextras after frame + phi11 pin:")
for w in ["XXXQ", "XXUQ", "XXPQ", "XXQQ"]:
    t1 = time.time()
    e = action.lifted_word_expr(w).subst(binding).subst(solved).subst({phi11s: sol11})
    rem = sorted(s.name for s in e.symbols() if s.kind == "gjet" and s not in FREE)
    print(f"  R_{w}: stray {rem}; degrees xi1 {e.degree_in(xi1s)}, phi01 {e.degree_in(phi01s)} ({time.time()-t1:.1f}s)")

print(f"\ntotal {time.time()-t0:.1f}s")
