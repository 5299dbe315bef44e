# %% [markdown]
# # Shifting towards a non-null value, and targeting the selected population
#
# ## Estrogen and endometrial cancer
#
# An "alternative" sampling design gave OR 2.30 where a conventional design
# gave 11.98. Could selection on a diagnostic procedure (S = U) explain the
# drop? The proposed truth exceeds the observed value, so the bias is below
# one and the exposure coding has to be reversed.

# %%
from selectionbias import (
    EffectEstimate,
    Scenario,
    SEqualsUDirectional,
    bounding_factor,
    relative_bias,
    select_scenario,
    summary_for,
)

ratio, recoded = relative_bias(2.30, 11.98)
print(f"relative bias {ratio:.2f}, exposure recoded: {recoded}")

# Everyone selected had the procedure, and the procedure is assumed to raise
# cancer prevalence in both groups.
scenario = select_scenario(s_equals_u=True, exposed="increased", unexposed="increased")
m = summary_for(scenario, EffectEstimate(2.30), target=11.98)
print(f"{scenario.value}: RR_UY among (originally) unexposed must exceed {m.value:.1f}")

# %% [markdown]
# With A recoded, "A = 1" now means *not* using estrogen, so the parameter
# constrains cancer prevalence among non-users with and without the procedure.
#
# A parameter of exactly that size reproduces the whole shift:

# %%
print(bounding_factor(SEqualsUDirectional("increased", m.value)).value)

# %% [markdown]
# ## The obesity paradox among coronary patients
#
# Here the target is the causal effect among the selected patients
# themselves. Lower BMI came with 1.50 times the mortality (CI 1.22 to 1.86).

# %%
est = EffectEstimate(1.50, 1.22, 1.86)
for limit in ("point", "lower"):
    print(limit, round(summary_for(Scenario.SELECTED, est, limit=limit).value, 2))

# %% [markdown]
# The induced exposure-U association inside the selected group is hard to
# elicit. A selection-U risk ratio can stand in for it, but the resulting
# bound is flagged as approximate.

# %%
from selectionbias import SelectedPopulation

exact = bounding_factor(SelectedPopulation(2.37, 2.37))
approx = bounding_factor(SelectedPopulation(2.37, 2.37, kind="approx_su"))
print(exact.value, exact.approximate)
print(approx.value, approx.approximate)
