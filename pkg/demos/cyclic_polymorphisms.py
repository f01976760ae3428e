"""
Cyclic polymorphisms and the orbit-collapsed search
===================================================

"""

from finitecsp import cyclic_orbits, decide_star, essential_coordinates, find_cyclic_polymorphism, is_wnu
from finitecsp.polymorphisms import star_prime
from finitecsp.structures import builtin

# Cyclic maps of arity p are determined by one value per rotation orbit of D^p
for d, p in [(3, 2), (3, 5)]:
    print(f"orbits of {d}^{p} under rotation:", len(cyclic_orbits(d, p)), "=", (d**p + (p - 1) * d) // p)

# K2 has majority as a cyclic polymorphism of arity 3
f = find_cyclic_polymorphism(builtin("K2"), 3)
print("K2, arity 3:", {",".join(k): v for k, v in f.table.items()})
print("  WNU:", is_wnu(f), " essential coordinates:", sorted(essential_coordinates(f)))

# Linear equations mod 2 admit x+y+z
g = find_cyclic_polymorphism(builtin("3LIN2"), 3)
print("3LIN2, arity 3 is x+y+z mod 2:", all(v == str(sum(map(int, k)) % 2) for k, v in g.table.items()))

# The condition is decided at the smallest prime above |D|
for name in ["K2", "3LIN2", "K3", "Cn:4"]:
    D = builtin(name)
    print(f"{name}: prime {star_prime(D)}, cyclic polymorphism exists: {decide_star(D)}")
