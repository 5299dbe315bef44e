# %% [markdown]
# # Selection bias in a case-control study: Zika and microcephaly
#
# A case-control study reported an adjusted OR of 73.1 (95% CI 13.0 to
# infinity) for microcephaly after Zika infection. Pregnancies ending in
# miscarriage or termination were never recruited, so selection (S = 1,
# "no termination") may depend on exposure and on factors U such as access
# to medical care that also affect the outcome.

# %%
import math

from selectionbias import (
    EffectEstimate,
    General,
    adjust_estimate,
    bounding_factor,
    summary_for,
)

estimate = EffectEstimate(73.1, 13.0, math.inf, scale="odds_ratio_approx")

# %% [markdown]
# ## Bounding factor from proposed parameter values
#
# U doubles the risk of microcephaly in both exposure groups, is up to 1.7
# times more prevalent among selected exposed women, and up to 1.5 times more
# prevalent among non-selected unexposed women.

# %%
params = General(rr_uy_a1=2, rr_su_a1=1.7, rr_uy_a0=2, rr_su_a0=1.5)
bound = bounding_factor(params)
print(f"bounding factor: {bound.value:.2f}")

adjusted = adjust_estimate(estimate, bound)
print(f"worst-case adjusted OR: {adjusted.point:.1f} ({adjusted.lower:.1f}, {adjusted.upper})")

# %% [markdown]
# Even after dividing out the largest bias these parameters allow, the OR is
# still enormous.
#
# ## How strong would selection need to be?
#
# The summary measure is the value all four parameters would have to share for
# selection alone to pull the estimate (or its lower limit) to the null.

# %%
for limit in ("point", "lower"):
    m = summary_for("general", estimate, limit=limit)
    print(f"{limit:>5}: {m.value:.1f}")

# %% [markdown]
# ## A small sensitivity grid
#
# Vary the selection parameters over plausible ranges and tabulate the
# adjusted lower limit. The CLI offers the same thing as
# `selectionbias table --rr-su-a1 1:3:5 ...`.

# %%
import numpy as np

grid = np.linspace(1, 3, 5)
print("rr_su_a1 \\ rr_su_a0 " + " ".join(f"{v:6.2f}" for v in grid))
for su1 in grid:
    row = []
    for su0 in grid:
        b = bounding_factor(General(2, su1, 2, su0))
        row.append(adjust_estimate(estimate, b).lower)
    print(f"{su1:19.2f} " + " ".join(f"{v:6.2f}" for v in row))
