"""The branch-and-prune search on its first real instance: gluing TT5 to a
directed triangle in every 3-chromatic way.

Shows the node/cut counters, the two backends, and that a search stopped
half way resumes from its saved frontier to the same answer.
"""
import json

from dichromatic import accel
from dichromatic.completions import (
    CompletionSearch,
    Pruner,
    SearchStats,
    completions,
    eight_completion_root,
    eight_completions,
    identify_eight,
    make_search,
)
from dichromatic.tournament import format_tournament

root = eight_completion_root()
print("root:", format_tournament(root), f"({len(root.undecided)} open pairs)")

stats = SearchStats()
raw = list(completions(root, Pruner.chi(2), stats=stats))
print(f"{len(raw)} 3-chromatic completions, {stats.nodes} nodes, {stats.cuts} cut")
print(len(eight_completions()), "up to rotating the triangle")

# stop after 5000 nodes, serialise, pick up again
search = CompletionSearch(root, Pruner.chi(2))
first = list(search.run(max_nodes=5000))
state = json.dumps(search.to_state())
print(f"stopped with {len(search.frontier())} open branches, {len(first)} found so far")
rest = list(CompletionSearch.from_state(json.loads(state)).run())
print("after resume:", len(first) + len(rest))

backend = "numba" if accel.available() else "python"
eight = eight_completions(backend=backend)
s = make_search(identify_eight(eight[10], eight[20], 0), Pruner.chi(3), backend=backend)
found = list(s.run())
print(f"13-completions of pair (10, 20, r=0): {len(found)}  [{backend}, {s.stats.nodes} nodes]")
