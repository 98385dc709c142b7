"""
Why two copies of a thin Cantor set cannot fill it
==================================================

Take the self-similar set with ratio 1/5 and digits {0, 4/5}. If
K1 + K2 sits inside K, the dimensions of K1 and K2 add up to at most
2*beta, and beta is strictly smaller than dim K.
"""

from fractalsum import HomogeneousIFS, hsp_beta, ssc_check

ifs = HomogeneousIFS.simple("1/5", ["0", "4/5"])

# The bound needs the difference system {x/5 - 4/5, x/5, x/5 + 4/5} to be
# strongly separated. The checker refines cylinder balls until they split.
print(ssc_check(ifs.difference_ifs(), probe_depth=2))

cert = hsp_beta(ifs, probe_depth=2)
print("beta      =", float(cert.beta))
print("dim K     =", float(cert.dim))
print("strict?   ", cert.beta_below_dim, "(decided on integers, no rounding)")

# For the middle-third Cantor set the difference system touches itself, so
# the same computation only gives a conditional certificate.
cantor = HomogeneousIFS.simple("1/3", ["0", "2/3"])
print("middle third verified:", hsp_beta(cantor).verified)
