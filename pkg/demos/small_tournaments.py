"""Walk through the small cases: censuses, the four 3-chromatic 7-vertex
tournaments, Paley tournaments and the TT5-free tournament X13.

Run with ``python demos/small_tournaments.py``; takes well under a minute.
"""
from dichromatic.coloring import dichromatic_number, optimal_coloring
from dichromatic.figures import FIGURE1, X13_TT4_SETS
from dichromatic.isomorphism import automorphisms, canonical_form, enumerate_tournaments
from dichromatic.tournament import format_tournament, induced, members, paley, vset, x13
from dichromatic.transitive import contains_tt

# isomorphism classes grow fast
for n in range(1, 8):
    print(f"n={n}: {sum(1 for _ in enumerate_tournaments(n))} tournaments")

# every 6-vertex tournament splits into two transitive sets, four on 7 vertices do not
seven = [t for t in enumerate_tournaments(7) if dichromatic_number(t) == 3]
names = {canonical_form(t): name for name, t in FIGURE1.items()}
for t in seven:
    print(names[canonical_form(t)], format_tournament(t))

for n in (3, 7, 11, 19):
    t = paley(n)
    part = optimal_coloring(t)
    print(f"Pal{n}: chi={len(part)}  classes={[members(c) for c in part.classes]}")

t = x13()
print("X13 has TT5:", contains_tt(t, 5) is not None)
print("X13 automorphisms:", len(automorphisms(t)))
for s in X13_TT4_SETS:
    rest = induced(t, t.vertices & ~vset(s))
    print(f"X13 - {set(s)}: chi={dichromatic_number(rest)}, automorphisms={len(automorphisms(rest))}")
