"""Standing pulse u = sech^2(xi/2): one unstable eigenvalue, Maslov index 1.

The two conjugate points of the pulse are the translation mode at tau = 0
and the inflection point cosh(tau) = 2.  Both index definitions see them.
"""

import numpy as np

from maslov_wave import bundle as bd
from maslov_wave import wave as wv
from maslov_wave.system import LinearizedBundle


def main():
    profile = wv.standing_pulse()
    b = LinearizedBundle.from_profile(profile)
    T = float(min(-profile.xi[0], profile.xi[-1]))
    traj = bd.evolve_frames(b, 0.0, T, xi_stop=T)
    d15 = bd.maslov_def15(b, traj=traj)
    print(f"pair definition: index {d15.index}")
    for cr in d15.crossings:
        print(f"  crossing at tau = {cr.t0:.6f}  (m+, m-) = ({cr.m_plus}, {cr.m_minus})")
    print(f"  arccosh(2) = {np.arccosh(2.0):.6f}")
    for tau0 in (None, 3.0, 5.0):
        d14 = bd.maslov_def14(b, tau0, traj=traj)
        print(f"one-sided definition, tau0 = {d14.tau0}: index {d14.index}")


if __name__ == "__main__":
    main()
