#!/usr/bin/env python3
"""Independent high-precision reference values frozen into the C++ unit tests.

Nothing here shares code with the library. Posterior moments come from direct
numerical integration of the spike-and-slab posterior, likelihoods from direct
products of densities, MMSE values from adaptive quadrature in 50-digit
arithmetic, and state-evolution fixtures from plain fixed-point iteration.

Run:  python3 tests/oracles/fixtures.py
"""
import mpmath as mp

mp.mp.dps = 50


def npdf(x, m, v):
    x, m, v = mp.mpf(x), mp.mpf(m), mp.mpf(v)
    return mp.e ** (-(x - m) ** 2 / (2 * v)) / mp.sqrt(2 * mp.pi * v)


def bernoulli_post(y, theta, s2):
    a = theta * npdf(y, 1, s2)
    b = (1 - mp.mpf(theta)) * npdf(y, 0, s2)
    p = a / (a + b)
    return p, p * (1 - p)


def bg_post_quadrature(y, theta, mu, sx2, s2):
    theta = mp.mpf(theta)
    slab = lambda x: npdf(x, mu, sx2) * npdf(y, x, s2)
    z1 = mp.quad(slab, [-mp.inf, mu, y, mp.inf])
    m1 = mp.quad(lambda x: x * slab(x), [-mp.inf, mu, y, mp.inf])
    m2 = mp.quad(lambda x: x * x * slab(x), [-mp.inf, mu, y, mp.inf])
    z = (1 - theta) * npdf(y, 0, s2) + theta * z1
    mean = theta * m1 / z
    second = theta * m2 / z
    return mean, second - mean ** 2


def marginal(y, theta, mu, sx2, s2):
    theta = mp.mpf(theta)
    return theta * npdf(y, mu, sx2 + s2) + (1 - theta) * npdf(y, 0, s2)


def mmse(theta, mu, sx2, s2):
    theta = mp.mpf(theta)

    def integrand(y):
        a = theta * npdf(y, mu, sx2 + s2)
        b = (1 - theta) * npdf(y, 0, s2)
        p = a / (a + b)
        rho = mp.mpf(sx2) / (sx2 + s2)
        m1 = mu + rho * (y - mu)
        v1 = rho * s2
        var = p * v1 + p * (1 - p) * m1 ** 2
        return var * (a + b)

    sd = mp.sqrt(max(sx2 + s2, s2))
    lo, hi = min(0, mu) - 12 * sd, max(0, mu) + 12 * sd
    pts = [lo] + [lo + (hi - lo) * k / 40 for k in range(1, 40)] + [hi]
    return mp.quad(integrand, pts)


def main():
    print("# bernoulli_posterior(0.7; theta=0.05, s2=0.1)")
    p, v = bernoulli_post(0.7, mp.mpf("0.05"), mp.mpf("0.1"))
    print(mp.nstr(p, 20), mp.nstr(v, 20))

    print("# bg_posterior(0.5; theta=0.1, mu=0, sx2=1, s2=0.1)")
    m, v = bg_post_quadrature(mp.mpf("0.5"), "0.1", 0, 1, mp.mpf("0.1"))
    print(mp.nstr(m, 20), mp.nstr(v, 20))

    print("# bg_posterior(-1.3; theta=0.3, mu=0.7, sx2=0.5, s2=0.2)")
    m, v = bg_post_quadrature(mp.mpf("-1.3"), "0.3", mp.mpf("0.7"), mp.mpf("0.5"), mp.mpf("0.2"))
    print(mp.nstr(m, 20), mp.nstr(v, 20))

    ys = [mp.mpf("0.9"), mp.mpf("0.1"), mp.mpf("-0.2")]
    print("# log marginal likelihood, y=(0.9,0.1,-0.2), s2=0.1")
    print("bernoulli theta=0.3:",
          mp.nstr(mp.log(mp.fprod(marginal(y, mp.mpf("0.3"), 1, 0, mp.mpf("0.1")) for y in ys)), 20))
    print("bg theta=0.2 mu=-0.5 sx2=0.8:",
          mp.nstr(mp.log(mp.fprod(marginal(y, mp.mpf("0.2"), mp.mpf("-0.5"), mp.mpf("0.8"), mp.mpf("0.1")) for y in ys)), 20))

    print("# bernoulli grid k=17 posterior weights, y=(0.9,0.1,-0.2), s2=0.1")
    k = 17
    thetas = [mp.sin((j + mp.mpf("0.5")) * mp.pi / 2 / k) ** 2 for j in range(k)]
    lik = [mp.fprod(marginal(y, t, 1, 0, mp.mpf("0.1")) for y in ys) for t in thetas]
    tot = mp.fsum(lik)
    w = [l / tot for l in lik]
    print("weights:", ", ".join(mp.nstr(x, 20) for x in w))
    est = []
    for y in ys:
        est.append(mp.fsum(wj * bernoulli_post(y, t, mp.mpf("0.1"))[0] for wj, t in zip(w, thetas)))
    print("mixd estimates:", ", ".join(mp.nstr(x, 20) for x in est))

    print("# scalar mmse")
    b = mmse(mp.mpf("0.05"), 1, 0, mp.mpf("0.1"))
    print("bernoulli theta=0.05 s2=0.1:", mp.nstr(b, 20))
    print("bg theta=0.1 mu=0 sx2=1 s2=0.1:", mp.nstr(mmse(mp.mpf("0.1"), 0, 1, mp.mpf("0.1")), 20))

    print("# se_step bernoulli theta=0.05 delta=0.5 sz2=0.0095 st2=0.1")
    print(mp.nstr(mp.mpf("0.0095") + b / mp.mpf("0.5"), 20))

    print("# se fixed point, BG theta=0.1 mu=0 sx2=1 delta=0.4 snr=10 dB")
    mp.mp.dps = 25
    var = mp.mpf("0.1")
    delta = mp.mpf("0.4")
    sz2 = var / (delta * 10)
    s = sz2 + var / delta
    for it in range(10000):
        nxt = sz2 + mmse(mp.mpf("0.1"), 0, 1, s) / delta
        if abs(nxt - s) / s < mp.mpf("1e-13"):
            s = nxt
            break
        s = nxt
    e = mmse(mp.mpf("0.1"), 0, 1, s)
    print("sigma_inf2:", mp.nstr(s, 16), "mmse:", mp.nstr(e, 16),
          "sdr_db:", mp.nstr(10 * mp.log10(var / e), 16), "iters:", it + 1)


if __name__ == "__main__":
    main()
