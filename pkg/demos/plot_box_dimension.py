"""
Box-counting estimates for K_S
==============================

Keeping only the odd coding positions halves the dimension of the Cantor
set. The cylinder count and the grid count at delta = 3^-n agree.
"""

from fractalsum import HomogeneousIFS, ResidueClass, boxdim_sweep, sweep_csv

cantor = HomogeneousIFS.simple("1/3", ["0", "2/3"])
rows = boxdim_sweep(cantor, ResidueClass(2, 1), range(2, 11, 2))
print(sweep_csv(rows))
