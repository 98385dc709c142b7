"""
Positive-dimension summands inside K
====================================

With S_j = l N + j - 1, the sum of the K_{S_j} lands inside K. Each piece
is a scaled copy of the first one, which is itself self-similar with
ratio rho^l, so its dimension is log m / (-l log rho) > 0.
"""

from fractalsum import HomogeneousIFS, pdsp_decompose

cantor = HomogeneousIFS.simple("1/3", ["0", "2/3"])
cert = pdsp_decompose(cantor, 2, 6)
print(cert.cardinalities)
print("contained:", cert.details["containment"])
print("scaling checks:", cert.details["scaling_relation"])
print("dim K_S1 =", cert.details["_numeric"]["dim_K_S1"])
