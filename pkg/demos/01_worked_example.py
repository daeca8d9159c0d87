"""Walk through the two-state worked example by hand.

A stationary two-state chain observes the same symbol twice.  We compute
classic forward-backward posteriors, then the entropic recursions driven
by the exact per-token conditional, and show they agree entry for entry.
"""

import numpy as np

from efbtag.efb import EfbParams, entropic_backward, entropic_forward, posterior_efb
from efbtag.hmc import HmcParams, posterior_fb, unscale

pi = np.array([4 / 7, 3 / 7])
trans = np.array([[0.7, 0.3], [0.4, 0.6]])
emit = np.array([[0.9, 0.1], [0.2, 0.8]])
params = HmcParams(pi=pi, trans=trans, emit=emit)

obs = [0, 0]  # the first symbol, twice

print("stationary check: pi @ a =", pi @ trans)

fb = posterior_fb(params, obs)
print("\nclassic FB posterior:")
print(fb.values)

# per-token conditional P(label | symbol) = pi_i b_i(y) / p(y)
joint = pi[None, :] * emit.T
ltable = joint / joint.sum(axis=1, keepdims=True)
print("\nconditional table L (rows: symbols):")
print(ltable)

ep = EfbParams(pi=pi, trans=trans, l_provider=lambda y, t: ltable[y])

ef, ef_scales = entropic_forward(ep, obs)
print("\nunscaled entropic forward:")
print(unscale(ef, ef_scales))
print("expected second row: (6.9/7, 0.8/7) =", np.array([6.9 / 7, 0.8 / 7]))

eb, eb_scales = entropic_backward(ep, obs)
print("\nunscaled entropic backward:")
print(unscale(eb, eb_scales, backward=True))
print("expected first row: (1.15, 0.8)")

efb = posterior_efb(ep, obs)
print("\nEFB posterior:")
print(efb.values)
print("max |EFB - FB| =", np.max(np.abs(efb.values - fb.values)))
