"""
Averaging a solution along a group action
=========================================

"""

import itertools

from finitecsp.homs import Homomorphism, find_hom
from finitecsp.polymorphisms import Polymorphism
from finitecsp.structures import Structure, builtin
from finitecsp.symmetry import GeneratedAction, Permutation, invariant_hom_exists, is_invariant, schreier_instance, symmetrize

LIN, K3 = builtin("3LIN2"), builtin("K3")
xor3 = Polymorphism(LIN, 3, {t: str(sum(map(int, t)) % 2) for t in itertools.product("01", repeat=3)})

# Three equations x+y+z = 1 closed under rotating the variables
V = ["a", "b", "c"]
X = Structure(LIN.signature, V, {"S1": [("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]})
rotation = Permutation.cycle(V, V)

h0 = Homomorphism(X, LIN, {"a": "1", "b": "0", "c": "0"})
h = symmetrize(h0, rotation, xor3)
print("h0 =", h0.as_tuple(), "-> h =", h.as_tuple(), "invariant:", is_invariant(h, rotation))

# Without a cyclic polymorphism of the right arity nothing forces an invariant solution to exist:
# odd cycles are 3-colorable, but never rotation-invariantly
graph, action = schreier_instance([3, 5, 7])
print("Schreier graph 3-colorable:", find_hom(graph, K3) is not None)
print("invariant 3-coloring exists:", invariant_hom_exists(graph, action, K3))
