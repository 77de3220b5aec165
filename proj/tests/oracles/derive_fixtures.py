"""Independent high-precision evaluation of the numeric fixtures frozen in the
C++ tests. Run with `python3 tests/oracles/derive_fixtures.py`; it depends only
on mpmath and shares no code with the library."""

from mpmath import mp, mpf, log, log1p, exp, sqrt, floor, binomial, erfc, gammainc, ceil

mp.dps = 40


def H(p):
    p = mpf(p)
    out = mpf(0)
    if p > 0:
        out -= p * log(p)
    if p < 1:
        out -= (1 - p) * log(1 - p)
    return out


def joint_schedule(n, ell, alpha, b):
    k = mpf(alpha) * ell
    c = log(mpf(n) / (k * log(ell)))
    E = c * log(ell)
    n_sig = int(floor(mpf(b) * n))
    return dict(c=c, E=E, n_sig=n_sig, n_msg=n - n_sig, E_sig=b * E, E_msg=(1 - mpf(b)) * E, k=k)


def ortho_schedule(n, ell, t):
    c = log(mpf(n) / (ell * log(n)))
    return dict(c=c, E=c * log(n))


def mu_exact(length):
    return gammainc(mpf(length) / 2, 0, length, regularized=True)


def g_scaled(lam, rho, k1, k2, d, ell, n_sig, et):
    lam, rho = mpf(lam), mpf(rho)
    lr = lam * rho
    fa = -(1 - rho) * n_sig / 2 * log(1 + lam * k2 * et / n_sig)
    jt = n_sig / mpf(2) * log(1 + (lam * (1 - lr) * k2 + lr * (1 - lr) * k1) * et / n_sig)
    mc = d * H(mpf(k1) / d) if d > 0 else 0
    return fa + jt - mc - rho * ell * H(mpf(k2) / ell)


def binom_pmf(ell, alpha, w):
    alpha = mpf(alpha)
    return binomial(ell, w) * alpha**w * (1 - alpha) ** (ell - w)


def detection_budget(n, ell, alpha, b, N0, lam=mpf(2) / 3, rho=mpf(3) / 4):
    s = joint_schedule(n, ell, alpha, b)
    k, c, n_sig = s["k"], s["c"], s["n_sig"]
    v = int(floor(k * (1 + c)))
    et = s["E_sig"] / N0
    mu = mu_exact(n_sig)
    over = exp(-k * c / 3)
    det = mpf(0)
    for w in range(1, min(v, ell) + 1):
        inner = mpf(0)
        for k1 in range(0, w + 1):
            for k2 in range(0, min(v, ell - w) + 1):
                if k1 + k2 < 1 or w + k2 > v + k1:
                    continue
                inner += mu ** (-(w + rho * k2)) * exp(-g_scaled(lam, rho, k1, k2, w, ell, n_sig, et))
        det += binom_pmf(ell, alpha, w) * inner
    empty = mpf(0)
    for k2 in range(1, min(v, ell) + 1):
        q = n_sig / mpf(2) * log(1 + k2 * et / (4 * n_sig))
        u = ell * H(mpf(k2) / ell)
        empty += mu ** (-k2) * exp(-(q - u))
    empty *= (1 - mpf(alpha)) ** ell
    return over + det + empty, v


def converse_joint(n, ell, alpha, E, N0, Pe=0):
    k = mpf(alpha) * ell
    E = mpf(E)
    rhs = (log(4) / (k * E) + H(alpha) / (alpha * E) * (4 * Pe - 1) + 4 * Pe * (1 / E + 1 / k)
           + n / (2 * k * E) * log(1 + 2 * k * E / (n * N0)))
    return rhs / (1 - 4 * Pe * (1 + 1 / k))


def Q(x):
    return erfc(mpf(x) / sqrt(2)) / 2


def show(label, value):
    print(f"{label:48s} {mp.nstr(value, 17)}")


if __name__ == "__main__":
    show("H(0.25)", H(0.25))
    s = joint_schedule(1000, 16, 0.125, 0.5)
    show("joint(1000,16,.125,.5) c", s["c"])
    show("joint(1000,16,.125,.5) E", s["E"])
    o = ortho_schedule(1024, 16, 0.25)
    show("ortho(1024,16) c", o["c"])
    show("ortho(1024,16) E", o["E"])
    show("mu_exact(2)", mu_exact(2))
    show("mu_exact(7)", mu_exact(7))
    show("mu_exact(64)", mu_exact(64))
    show("mu_exact(511)", mu_exact(511))
    show("chernoff(2)", 1 - exp(-2 * (1 - log(2)) / 2))
    show("e0 example", log(1.5) / 2)
    show("pr_type_error example", 2 * mpf("1.1") ** -50)
    show("converse_joint example", converse_joint(100, 1, 1, 10, 2))
    for e in (10, 14, 18):
        n = 2**e
        show(f"converse_joint SUP n=2^{e}", converse_joint(n, n, 1, log(n), 2))
    show("converse_ortho_user example", (mpf(1) / 10 + mpf(10) / 20 * log(1 + mpf(20) / 20)))
    show("joint_error_lb example",
         max(0, 1 - (256 * mpf("0.01") + log(2)) / log(mpf(10) ** 6)) * (1 - (1 - mpf("2e-6")) ** 10**6))
    show("ortho_code_bound M=256 R=0.125 N0=2", exp(-(log(256) / mpf("0.125")) * (mpf("0.25") - mpf("0.125"))))
    show("Q(1)", Q(1))
    for n in (1024, 2048, 4096):
        val, v = detection_budget(n, 16, 0.125, 0.5, 2)
        show(f"detection_budget n={n} (v={v})", val)
    # slot decode: ell=16, t=0.25, N0=2 per-user bound pieces
    show("2Q(sqrt(tE/(2N0))) tE=4 N0=2", 2 * Q(1))


# Portable generator, re-implemented from its published definition.
M32 = 0xFFFFFFFF


def philox(ctr, key):
    ctr, key = list(ctr), list(key)
    for r in range(10):
        if r:
            key = [(key[0] + 0x9E3779B9) & M32, (key[1] + 0xBB67AE85) & M32]
        p0 = 0xD2511F53 * ctr[0]
        p1 = 0xCD9E8D57 * ctr[2]
        ctr = [((p1 >> 32) ^ ctr[1] ^ key[0]) & M32, p1 & M32, ((p0 >> 32) ^ ctr[3] ^ key[1]) & M32, p0 & M32]
    return ctr


class Stream:
    def __init__(self, seed, stream):
        self.seed, self.stream, self.block, self.buf = seed, stream, 0, []

    def u64(self):
        if not self.buf:
            o = philox([self.block & M32, self.block >> 32, self.stream & M32, self.stream >> 32],
                       [self.seed & M32, self.seed >> 32])
            self.block += 1
            self.buf = [(o[1] << 32) | o[0], (o[3] << 32) | o[2]]
        return self.buf.pop(0)

    def uniform(self):
        return (self.u64() >> 11) * 2.0**-53

    def below(self, bound):
        m = self.u64() * bound
        low = m & (2**64 - 1)
        if low < bound:
            threshold = (2**64 - bound) % bound
            while low < threshold:
                m = self.u64() * bound
                low = m & (2**64 - 1)
        return m >> 64


def sample_messages(seed, stream, ell, alpha, M):
    s = Stream(seed, stream)
    out = []
    for _ in range(ell):
        out.append(1 + s.below(M) if s.uniform() < alpha else 0)
    return out


if __name__ == "__main__":
    print("sample_messages(seed 5, stream 0, ell 8, alpha .5, M 3)", sample_messages(5, 0, 8, 0.5, 3))
    print("first words seed 5 stream 0", [hex(Stream(5, 0).u64())])
