"""
Splitting the Cantor set into full-dimensional summands
=======================================================

Partition the coding positions among S_1, ..., S_l. Each K_S keeps only the
digits at its positions, and the sum of the pieces gives back K exactly.
With the checkpoint partition every piece keeps full upper density, which
is what makes its packing dimension equal to that of K.
"""

from fractalsum import HomogeneousIFS, greedy_checkpoints, natural_numbers, psp_decompose

cantor = HomogeneousIFS.simple("1/3", ["0", "2/3"])

for ell in (2, 3):
    c = psp_decompose(cantor, ell, 9)
    print(f"residues mod {ell}: {c.cardinalities} equal={c.verified}")

# Checkpoints for S = N and density target 1 follow n_k = k n_(k-1) + 1.
print(greedy_checkpoints(natural_numbers(), 1, 6).ns)

c = psp_decompose(cantor, 2, 12, "checkpoints", rounds=2)
print("checkpoint pieces:", c.index_sets, "equal =", c.verified)
