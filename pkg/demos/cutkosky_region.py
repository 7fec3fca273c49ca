# %% [markdown]
# The ample region on the simplex
# ===============================
# Volume of O(1) twisted by c on the projective bundle, computed four ways,
# plus the picture of where the class stays ample.

# %%
from fractions import Fraction
from pathlib import Path

from okvol.cutkosky import (region_area, vol_adaptive, vol_lattice_extrapolated, vol_mc,
                            vol_sections)
from okvol.cutkosky.region import GammaRegion
from okvol.cli.emit import region_svg

# %%
c = (Fraction(1, 4),) * 3
ad = vol_adaptive(c, tol=1e-8)
print("adaptive ", float(ad.value), "+-", ad.error)
print("sections ", vol_sections(c))
print("mc       ", vol_mc(c, samples=10**6, seed=0))
val, seq = vol_lattice_extrapolated(c, (50, 100, 200))
print("lattice  ", [(m, float(v)) for m, v in seq], "->", float(val))

# %% The region shrinks as c -> 0 but some of it survives
for t in (0, Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), 1):
    print(t, float(region_area((t, t, t)).value))

# %%
g = GammaRegion.of(c)
out = Path("gamma.svg")
out.write_text(region_svg(g))
print("wrote", out)
