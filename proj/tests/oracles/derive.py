# Copyright 2026 The cobench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values frozen into the C++ tests.

Run with numpy and scipy installed; nothing here is imported by the build.
"""

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import signal, stats


def show(name, v):
    print(f"{name} = {v!r}")


# Board inertia (rectangular prism).
m, l, w, d = 10.3, 1.22, 0.59, 0.02
show("izz", m * (l**2 + w**2) / 12)
show("ixx", m * (w**2 + d**2) / 12)
show("iyy", m * (l**2 + d**2) / 12)

# Handle torques, written out directly.
def torques(fl, fr):
    tx = (fl[2] - fr[2]) * w / 2 + (fr[1] + fl[1]) * d
    ty = (fr[2] + fl[2]) * l / 2 - (fr[0] + fl[0]) * d
    tz = (fr[0] - fl[0]) * w / 2 - (fr[1] + fl[1]) * l / 2
    return tx, ty, tz

show("torques_mixed", torques((1.5, -2.0, 3.0), (-0.5, 4.0, -1.0)))

# Second-order Butterworth magnitude at the analysis frequencies.
b, a = signal.butter(2, 20.0, fs=200.0)
for f in (20.0, 80.0, 5.0):
    _, h = signal.freqz(b, a, worN=[f], fs=200.0)
    show(f"butter200_gain_{int(f)}", abs(h[0]))
show("butter200_b", b.tolist())
show("butter200_a", a.tolist())
b100, a100 = signal.butter(2, 20.0, fs=100.0)
show("butter100_b", b100.tolist())
show("butter100_a", a100.tolist())
# Impulse response of the 200 Hz filter, first 6 samples.
imp = np.zeros(6)
imp[0] = 1.0
show("butter200_impulse", signal.lfilter(b, a, imp).tolist())

# Minimum-jerk progress crossings.
quintic = [0, 0, 0, 10, -15, 6]
def root(level):
    r = P.polyroots(np.subtract(quintic, [level, 0, 0, 0, 0, 0]))
    r = [x.real for x in r if abs(x.imag) < 1e-12 and 0 <= x.real <= 1]
    return r[0]
u5, u95 = root(0.05), root(0.95)
show("mj_u5", u5)
show("mj_u95", u95)
for T in (3.0, 5.0, 8.0):
    show(f"mj_completion_T{int(T)}", (u95 - u5) * T + 0.5)

# Statistics.
show("pearson_123_132", stats.pearsonr([1, 2, 3], [1, 3, 2])[0])
a_ = np.array([2.1, 2.5, 3.3, 1.9, 2.8, 3.0])
b_ = np.array([1.2, 1.9, 1.4, 2.2, 1.1, 1.6, 1.7])
sp = np.sqrt(((len(a_) - 1) * a_.var(ddof=1) + (len(b_) - 1) * b_.var(ddof=1)) / (len(a_) + len(b_) - 2))
show("cohens_d_ab", (a_.mean() - b_.mean()) / sp)
t = stats.ttest_ind(a_, b_, equal_var=False)
show("welch_t_ab", t.statistic)
show("welch_p_ab", t.pvalue)
sa = a_.var(ddof=1) / len(a_)
sb = b_.var(ddof=1) / len(b_)
show("welch_df_ab", (sa + sb) ** 2 / (sa**2 / (len(a_) - 1) + sb**2 / (len(b_) - 1)))

# Welch p for a five-standard-deviation separation: Monte-Carlo over seeds.
rng = np.random.default_rng(3)
ps = [stats.ttest_ind(rng.normal(0, 1, 200), rng.normal(5, 1, 200), equal_var=False).pvalue for _ in range(200)]
show("welch_5sd_max_p", max(ps))

# Standardization.
x = np.array([1.0, 2.0, 3.0])
show("std_123", ((x - x.mean()) / x.std()).tolist())

# Torque metrics on a quadratic series, sampled at dt.
dt = 0.01
tau = np.array([0.5 * (k * dt) ** 2 for k in range(11)])
# One rate per sample: the final difference is repeated for the last sample.
rate = np.append(np.diff(tau), np.diff(tau)[-1]) / dt
show("mtm_quadratic", float(np.sum(rate[:-1] ** 2 + rate[1:] ** 2)))
tau2 = np.sin(np.arange(11) * 0.3)
r2 = np.append(np.diff(tau2), np.diff(tau2)[-1]) / dt
g = rate**2 + r2**2
show("torque_change_mixed", float(np.trapezoid(g, dx=dt)))

# Admittance law, one explicit step.
show("bmvic_accel_example", (0.6 - 0.6 * 1 + 0.2 * 1 * 1) / 1.2)
# First-order step response at t = m/c under explicit Euler, dt 0.002.
mm, cc, F, dt = 1.2, 0.6, 0.6, 0.002
v = 0.0
for _ in range(int(round(2.0 / dt))):
    v += (F - cc * v) / mm * dt
show("bmvic_euler_v_at_2s", v)
show("bmvic_exact_v_at_2s", F / cc * (1 - np.exp(-cc / mm * 2.0)))


# Trigger decision table over the 5x5 grid.
def classify(tz, tx, tzt=3.0, txt=1.5):
    if tz <= -tzt and tx >= txt:
        return "LeftTranslation"
    if abs(tz) <= tzt and tx >= txt:
        return "RightRotation"
    if abs(tz) <= tzt and tx <= -txt:
        return "LeftRotation"
    if tz >= tzt and tx <= -txt:
        return "RightTranslation"
    return "Stop"

grid = [-2, -0.5, 0, 0.5, 2]
print("evic_table:")
for gz in grid:
    print("  ", [classify(gz * 3.0, gx * 1.5) for gx in grid])
