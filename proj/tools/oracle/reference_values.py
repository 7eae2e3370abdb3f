# Copyright 2026 The coopgame Authors
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

"""Independent high-precision reference values frozen into the C++ tests.

Everything here is written from the model definitions, not from the C++
sources: the DU purchase is found by solving the first-order system of the
quadratic utility directly, and each supplier's price by golden-section
search on its utility against that purchase.
"""

import mpmath as mp

mp.mp.dps = 40

T = mp.mpf("0.2")
B = mp.mpf(1)
SIGMA2 = mp.mpf("1e-9")
P_MAX = mp.mpf("0.1")
KAPPA = mp.mpf("1e-28")
CYCLES = mp.mpf("8e8")
F_DU = mp.mpf("2.4e9")
F_SU = mp.mpf("1.5e9")
P_REC = mp.mpf("0.01")
L0 = mp.mpf("0.6")


def gain(pos):
  return mp.mpf("0.001") / mp.hypot(pos[0], pos[1]) ** 3


def purchase(sus, prices, v):
  """Unconstrained maximiser of the DU quadratic utility (linear solve)."""
  n = len(sus)
  share = T / n
  lam = mp.log(2) / (B * share)
  h1 = lam * SIGMA2 * share
  h2 = lam**2 * SIGMA2 * share
  a = KAPPA * F_DU**2 * CYCLES
  g = [gain(p) for p, _ in sus]
  # Gradient: (A - h1/g_n - q_n) - (h2/g_n + 1) l_n - v sum_{k!=n} l_k = 0.
  m = mp.matrix(n, n)
  rhs = mp.matrix(n, 1)
  for i in range(n):
    for k in range(n):
      m[i, k] = (h2 / g[i] + 1) if i == k else v
    rhs[i] = a - h1 / g[i] - prices[i]
  sol = mp.lu_solve(m, rhs)
  return [sol[i] for i in range(n)], dict(A=a, H1=h1, H2=h2, g=g)


def caps(sus):
  n = len(sus)
  out = []
  for p, own in sus:
    upload = mp.log(P_MAX * gain(p) / SIGMA2 + 1, 2) * B * T / n
    cpu = T * F_SU / CYCLES - own
    out.append(min(L0, upload, cpu))
  return out


def allocation(sus, prices, v):
  raw, _ = purchase(sus, prices, v)
  return [min(max(x, 0), c) for x, c in zip(raw, caps(sus))]


def su_utility(sus, prices, v, n):
  l = allocation(sus, prices, v)[n]
  own = sus[n][1]
  f = KAPPA * CYCLES**3 / T**2
  receive = P_REC * T / len(sus) if l > 0 else 0
  return prices[n] * l - receive - f * ((own + l) ** 3 - own**3)


def best_price(sus, prices, v, n):
  lo, hi = mp.mpf(0), mp.mpf(1)
  phi = (mp.sqrt(5) - 1) / 2
  def u(x):
    q = list(prices)
    q[n] = x
    return su_utility(sus, q, v, n)
  for _ in range(160):
    a = hi - phi * (hi - lo)
    b = lo + phi * (hi - lo)
    if u(a) < u(b):
      lo = a
    else:
      hi = b
  return (lo + hi) / 2


def equilibrium(sus, v, rounds=40):
  q = [mp.mpf("0.3")] * len(sus)
  for _ in range(rounds):
    q = [best_price(sus, q, v, n) for n in range(len(sus))]
  return q


def show(name, x):
  print(f"{name} = {mp.nstr(x, 12)}")


def main():
  show("local_exec_0.15", KAPPA * (CYCLES * mp.mpf("0.15")) ** 3 / T**2)
  show("local_exec_0.6", KAPPA * (CYCLES * L0) ** 3 / T**2)
  g = gain((20, 20))
  show("gain_28m", g)
  show("tx_power_0.1_two", (2 ** (mp.mpf("0.1") / (B * T / 2)) - 1) * SIGMA2 / g)
  show("max_upload_two", mp.log(1 + P_MAX * g / SIGMA2, 2) * B * T / 2)
  show("offload_energy_one",
       (2 ** (mp.mpf("0.1") / (B * T)) - 1) * SIGMA2 / g * T)
  show("su_compute_0.1", KAPPA * (CYCLES * mp.mpf("0.1")) ** 3 / T**2)

  two = [((-20, 20), mp.mpf("0.15")), ((20, 20), mp.mpf(0))]
  v = mp.mpf("0.5")
  _, c = purchase(two, [0, 0], v)
  show("A", c["A"])
  show("H1", c["H1"])
  show("H2", c["H2"])
  q = equilibrium(two, v)
  l = allocation(two, q, v)
  show("ne_q1", q[0])
  show("ne_q2", q[1])
  show("ne_l1", l[0])
  show("ne_l2", l[1])
  show("ne_u1", su_utility(two, q, v, 0))
  show("ne_u2", su_utility(two, q, v, 1))
  for own3 in ("0", "0.05", "0.1", "0.15"):
    three = [((-20, 20), mp.mpf("0.15")), ((20, 20), mp.mpf("0.1")),
             ((20, -20), mp.mpf(own3))]
    q = equilibrium(three, v)
    l = allocation(three, q, v)
    print(f"sweep L3={own3}: " + " ".join(mp.nstr(x, 12) for x in l))


if __name__ == "__main__":
  main()
