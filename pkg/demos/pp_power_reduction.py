"""
Compiling instances of a pp-power and moving solutions across
=============================================================

"""

from finitecsp.homs import find_hom
from finitecsp.reduction import Atom, PPPower, PPPowerReduction, PPRelationDef, VarRef, finite_cover
from finitecsp.structures import Structure, complete_graph

z, w = VarRef.z, VarRef.w
K2 = complete_graph(2)

# R(a, b) holds when a and b are joined by a walk of length 2 in K2,
# i.e. when a = b; the midpoint is an existential witness
path = PPPower(K2, 1, [("R", 2)], {"R": PPRelationDef(1, (Atom("E", (z(1, 1), w(1))), Atom("E", (w(1), z(2, 1)))))})
red = PPPowerReduction(path)
print("defined relation:", sorted(red.source.relation("R")))

# An R-instance: a directed triangle
X = Structure([("R", 2)], ["x", "y", "u"], {"R": [("x", "y"), ("y", "u"), ("u", "x")]})
out = red.compile(X)
print("compiled universe:", out.compiled.universe)
print("compiled edges:", sorted(out.compiled.relation("E")))

# Solutions travel both ways, and the round trip is the identity
f = find_hom(X, red.source)
g = red.phi(f, X)
print("solution of X:", f.mapping)
print("transferred:", g.mapping)
print("and back:", red.psi(g, X).mapping)

# Any small piece of the compiled instance already lives inside the compilation of a
# small piece of X
F, theta = finite_cover(out, ["[x#1]", "R(x,y)#w1"])
print("piece covered by", F, "via", theta.mapping)
