# %% [markdown]
# Realising a log-concave function
# ================================
# v1*v2 on the quadrant, built as slice volumes of a cone of balls and then
# squeezed into the Okounkov cone of P1 x P1.

# %%
import random

from mpmath import mp

from okvol.logcone import (build_ball_cone, interior_samples, product_function, realize,
                           slice_volume_mc)
from okvol.toric import p1xp1
from okvol.okounkov import SeriesSpec

# %%
f = product_function(2)
ball = build_ball_cone(f, seed=0)
rng = random.Random(0)
for v in interior_samples(f.domain, 5, rng):
    est, se = slice_volume_mc(ball, v, samples=200_000, seed=1)
    print([str(t) for t in v], mp.nstr(f(v), 8), round(est, 5), "+-", round(se, 5))

# %% Shrinking into the toric cone rescales volumes by lambda^n
X = p1xp1()
series = SeriesSpec(X, (X.divisor((0, 0, 1, 1)), X.divisor((0, 0, 2, 1))))
R = realize(f, series)
print("lambda =", R.lam, " cfactor =", R.cfactor)
for m in ([1, 1], [2, 1], [3, 2]):
    print(m, mp.nstr(R.volfn(m), 10), R.direct_vol_estimate(m, 20))
