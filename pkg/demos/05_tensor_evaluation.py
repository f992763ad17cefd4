"""Evaluating elements in matrix algebras over exact rationals: the
evaluation respects both compositions and detects intertwiners."""

from fractions import Fraction

from propcalc.freeprop import (Signature, corolla, pelem_hcompose,
                               pelem_vcompose)
from propcalc.tensor import (AlgebraAssignment, RatTensor,
                             conjugate_assignment, evaluate, kron_power,
                             morphism_prop_membership, rt_dot, rt_kron)

sig = Signature([("a", 1, 1), ("b", 2, 1)])
half = Fraction(1, 2)

# assign a d x d matrix to each (1, 1) generator and a d x d^2 matrix
# to the (2, 1) generator; rows index outputs, columns index inputs
A = AlgebraAssignment.build(2, {
    "a": RatTensor([[1, half], [0, 1]]),
    "b": RatTensor([[1, 0, 0, 1], [0, 1, 1, 0]]),
}, sig)

a = corolla(sig, "a")
b = corolla(sig, "b")
print("a evaluates to:", evaluate(a, A).rows())

# stacking is matrix product (bottom times top), side by side is the
# Kronecker product
stacked = pelem_vcompose(pelem_hcompose(a, a), b)
lhs = evaluate(stacked, A)
rhs = rt_dot(evaluate(b, A), rt_kron(evaluate(a, A), evaluate(a, A)))
print("evaluation is a homomorphism:", lhs == rhs)

# transporting A along an invertible f produces an assignment whose
# generators all satisfy the intertwiner equation f^n . B = A . f^m
f = RatTensor([[2, 1], [1, 1]])
B = conjugate_assignment(A, f)
print("intertwines a:", morphism_prop_membership(f, B, A, "a"))
print("intertwines b:", morphism_prop_membership(f, B, A, "b"))

# the square then commutes for every element, not just generators
e = stacked
print("square commutes on a composite:",
      rt_dot(kron_power(f, e.n), evaluate(e, B))
      == rt_dot(evaluate(e, A), kron_power(f, e.m)))
