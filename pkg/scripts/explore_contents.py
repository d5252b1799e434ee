"""Print the formal group-jet content of every stage equation and target."""

import time
from odeframe import coords, jet, action

t0 = time.time()

g = action.GroupJet.formal(3)
comp = {c.word: c.value for c in action.prolonged_action(g)}

rows = [
    ("X", comp["X"]), ("U", comp["U"]), ("P", comp["P"]),
    ("Q", comp["Q"]), ("R", comp["R"]),
]
words = ["Q", "P", "U", "X",
         "UQ", "UP", "PP", "XP", "PQ", "XQ",
         "XX", "XU", "UU", "XXP", "XXU", "XUU", "UUU", "XXX",
         "QQ", "XPQ", "XXQ",
         "XXXQ", "XXUQ", "XXPQ", "XXQQ"]
for w in words:
    t1 = time.time()
    e = action.lifted_word_expr(w)
    rows.append(("R_" + w, e))
    if time.time() - t1 > 1:
        print(f"  [built R_{w} in {time.time()-t1:.1f}s, {e.num_terms()} terms]")

print(f"build time {time.time()-t0:.1f}s\n")
for name, e in rows:
    gs = sorted(
        (s.name for s in e.symbols() if s.kind == "gjet"),
        key=lambda n: (len(n), n),
    )
    print(f"{name:8s}: {' '.join(gs)}")
