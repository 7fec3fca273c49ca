# %% [markdown]
# Toric volume functions
# ======================
# Okounkov cones of a few toric surfaces, their slices, and how the
# normalised section counts approach the volume.

# %%

from okvol.okounkov import SeriesSpec, direct_vol_estimate, okounkov_cone, slice, volfn
from okvol.exactgeom import lattice_points
from okvol.toric import hirzebruch, projective_space

# %%
P2 = projective_space(2)
series = SeriesSpec(P2, (P2.divisor((0, 0, 1)),))
cone = okounkov_cone(series)
for ineq in cone.cone.inequalities:
    print(ineq)

# %% The slice at degree 3 is the triangle with ten lattice points
tri = slice(cone, [3])
print(len(lattice_points(tri)), "points; volfn (2! * area) =", volfn(cone, [3]))

# %% Section counts over k^2 converge like 1 + 3/(dk)
for k in (1, 5, 25, 125):
    est = direct_vol_estimate(series, [2], k)
    print(k, est, float(est))

# %% Hirzebruch F_1 with the two-dimensional degree lattice
F1 = hirzebruch(1)
s2 = SeriesSpec(F1, (F1.divisor((0, 0, 1, 0)), F1.divisor((0, 0, 1, 1))))
c2 = okounkov_cone(s2)
for a in range(1, 4):
    print([volfn(c2, [a, b]) for b in range(1, 4)])
