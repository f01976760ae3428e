"""Finite constraint satisfaction: homomorphism search, cyclic polymorphisms,
pp-power reductions, symmetrization of solutions and ultrafilter extraction."""

from .homs import (
    BudgetExhausted,
    Homomorphism,
    InvalidHomomorphism,
    SearchOptions,
    SignatureMismatch,
    enumerate_homs,
    find_hom,
    finitely_solvable_up_to,
    hom_equivalent,
)
from .polymorphisms import (
    Polymorphism,
    cyclic_orbits,
    decide_star,
    essential_coordinates,
    find_cyclic_polymorphism,
    is_wnu,
)
from .structures import (
    Signature,
    Structure,
    StructureError,
    builtin,
    induced_substructure,
    power,
    quotient,
)

__version__ = "0.1.0"
