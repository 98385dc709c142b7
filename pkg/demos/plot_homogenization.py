"""
Homogeneous subsystems of a similarity family
=============================================

Any two maps with different fixed points give two compositions that share
a linear part. In the plane each map is squared first so reflections cancel.
"""

from fractalsum import AffineMap, OrthoMatrix, homogenization_containment, homogenize
from fractalsum.exact import format_point

R = OrthoMatrix.rotation(0, 1)  # quarter turn
maps = [AffineMap("1/2", R, (0, 0)), AffineMap("1/2", R, (1, 0))]

h = homogenize(maps)
print("ratio:", h.ifs.ratio)
print("linear part:", h.ifs.ratio, "*", h.ifs.ortho.flat())
print("digits:", [format_point(b) for b in h.ifs.digits])
print("words:", h.word_strings())

# depth 3 of the new system against depth 12 of the original family
print(homogenization_containment(h, maps, 3))
