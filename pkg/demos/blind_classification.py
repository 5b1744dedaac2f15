"""Blind SIC/non-SIC decisions from raw samples.

A base station always sends the superposed signal.  Each receiver only
has to decide which decoding mode fits its own channel: cancel the far
user's signal first, or decode directly and treat it as noise.  The
decision compares two Gaussian mixture likelihoods over the received
samples, no channel-quality feedback involved.
"""
import numpy as np

from nomablind.channel import LinkState, sample_noise
from nomablind.classifier import (Hypothesis, Observation, classify_multi,
                                  classify_single, likelihood_nonsic,
                                  likelihood_sic)
from nomablind.constellation import make_qam, superpose

RNG_SEED = 7


def main():
    ck = make_qam(4, 0.76)
    cn = make_qam(16, 0.24)
    chi = superpose(ck, cn)

    # a strong link (should pick SIC) and a weak one (should not)
    strong = LinkState(h=1.0 + 0.0j, d=1.0, noise_var=10.0 ** (-2.2))
    weak = LinkState(h=1.0 + 0.0j, d=1.0, noise_var=10.0 ** (-0.4))

    rng = np.random.default_rng(RNG_SEED)
    symbols = chi.points[rng.integers(0, len(chi), size=5)]

    print("five received samples at each link, likelihoods side by side")
    for link, name in ((strong, "strong"), (weak, "weak")):
        y = link.h * symbols + sample_noise(link.noise_var, 5, rng)
        print(f"  {name} link ({10 * np.log10(link.snr()):.0f} dB)")
        for i, yy in enumerate(y):
            p_s = likelihood_sic(yy, link.h, link.noise_var, chi)
            p_n = likelihood_nonsic(yy, link.h, link.noise_var, ck)
            pick = classify_single(yy, link.h, link.noise_var, chi, ck)
            print(f"    sample {i}: p_sic {p_s:.3e}  p_nonsic {p_n:.3e}"
                  f"  -> {pick.name}")

    print()
    print("vote over 7 samples, 2000 repetitions, strong link")
    wrong = 0
    for _ in range(2000):
        s = chi.points[rng.integers(0, len(chi), size=7)]
        y = strong.h * s + sample_noise(strong.noise_var, 7, rng)
        obs = Observation(y=y, h=strong.h, noise_var=strong.noise_var)
        if classify_multi(obs, chi, ck) is not Hypothesis.SIC:
            wrong += 1
    print(f"  misclassified {wrong}/2000 "
          f"({wrong / 2000:.4f} empirical error)")


if __name__ == "__main__":
    main()
