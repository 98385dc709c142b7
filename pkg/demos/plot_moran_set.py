"""
A Moran set closed under l-fold sums
====================================

With m_k = (k+1)! digits at level k and N_k = floor(m_k^(1/alpha)) slots,
the subset B_l using digits below m_k / l satisfies l B_l inside K,
because adding l digits below m_k / l never carries.
"""

from fractalsum import b_ell_containment, ev_params, moran_table

params = ev_params("1/2", 20, ell=2)
cert = b_ell_containment(params, 4, digitwise_to=20)
print("verified:", cert.verified, cert.witness["cardinalities"])

for row in moran_table(ev_params("2/5", 6)):
    print(row["k"], row["N_k"], row["s_k"][:12], row["s_k_at_least_alpha"])
