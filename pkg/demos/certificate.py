"""The 19-vertex blow-up of Pal7: each vertex except 0 becomes a directed
triangle.  It needs five transitive classes, and losing any arc or vertex
brings it back to four.

Run with ``python demos/certificate.py``.
"""
import time

from dichromatic.coloring import k_colorable
from dichromatic.tournament import blowup_pal7, format_tournament, members

t = blowup_pal7()
print(format_tournament(t))

start = time.perf_counter()
print("4-colourable:", k_colorable(t, 4) is not None)
five = k_colorable(t, 5)
print("a 5-colouring:", [members(c) for c in five.classes])

# critical: every single change drops it to 4
reversals = sum(k_colorable(t.reverse_arc(a, b), 4) is not None for a, b in t.arcs())
deletions = sum(k_colorable(t.delete(v), 4) is not None for v in range(t.n))
print(f"{reversals}/171 reversals and {deletions}/19 deletions are 4-colourable")
print(f"{time.perf_counter() - start:.1f}s")
