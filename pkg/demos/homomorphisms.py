"""
Homomorphism search on small graphs
===================================

"""

from finitecsp import SearchOptions, enumerate_homs, find_hom, finitely_solvable_up_to
from finitecsp.homs import BudgetExhausted
from finitecsp.structures import builtin, complete_graph

C5, K2, K3 = builtin("C5"), builtin("K2"), builtin("K3")

# A 5-cycle is 3-colorable; the search returns the least coloring in vertex order
h = find_hom(C5, K3)
print("C5 -> K3:", h.mapping)

# ...but not 2-colorable
print("C5 -> K2:", find_hom(C5, K2))

# K3 has exactly its six automorphisms as endomorphisms
print("homs K3 -> K3:", len(enumerate_homs(K3, K3)))

# Every proper piece of an odd cycle is bipartite; only the whole cycle fails
print("C5 solvable up to 4 elements:", finitely_solvable_up_to(C5, K2, 4).ok)
print("C5 solvable up to 5 elements:", finitely_solvable_up_to(C5, K2, 5))

# A node budget turns a long search into an explicit "unknown" instead of "no"
try:
    find_hom(complete_graph(7), complete_graph(6), SearchOptions(budget=100))
except BudgetExhausted as exc:
    print("K7 -> K6 with a budget of 100 nodes:", exc)
