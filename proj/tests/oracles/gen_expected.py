#!/usr/bin/env python3
"""Independent oracle for frozen test constants.

Evaluates the color-appearance and tone-curve formulas in plain Python
(double precision) so the C++ tests can assert against values that were
derived outside the implementation under test. Run it and paste the
printed constants into the tests when they change (they should not).
"""
import math

# CAT16 adaptation matrix, from Li et al., "Comprehensive color solutions:
# CAM16, CAT16, and CAM16-UCS", Color Res. Appl. 42(6), 2017.
M_CAT16 = [
    [0.401288, 0.650173, -0.051461],
    [-0.250268, 1.204414, 0.045854],
    [-0.002079, 0.048952, 0.953127],
]

SURROUND = {"average": (1.0, 0.69, 1.0), "dim": (0.9, 0.59, 0.9), "dark": (0.8, 0.525, 0.8)}


def mat_vec(m, v):
    return [sum(m[r][c] * v[c] for c in range(3)) for r in range(3)]


def response(x):  # post-adaptation compressive nonlinearity
    if x < 0:
        return -response_pos(-x) + 0.2  # -[400 t/(t+27.13)] + 0.1 == -(pos - 0.1) ... careful
    return response_pos(x)


def response_pos(x):
    t = x ** 0.42
    return 400.0 * t / (t + 27.13) + 0.1


def response_signed(x):
    if x < 0:
        t = (-x) ** 0.42
        return -400.0 * t / (t + 27.13) + 0.1
    t = x ** 0.42
    return 400.0 * t / (t + 27.13) + 0.1


def derive(white, la, yb, surround):
    F, c, Nc = SURROUND[surround]
    yw = white[1]
    white = [w * 100.0 / yw for w in white]
    rgb_w = mat_vec(M_CAT16, white)
    D = F * (1.0 - (1.0 / 3.6) * math.exp((-la - 42.0) / 92.0))
    D = min(1.0, max(0.0, D))
    d_gain = [D * 100.0 / rgb_w[i] + 1.0 - D for i in range(3)]
    k = 1.0 / (5.0 * la + 1.0)
    k4 = k ** 4
    fl = 0.2 * k4 * (5.0 * la) + 0.1 * (1.0 - k4) ** 2 * (5.0 * la) ** (1.0 / 3.0)
    n = yb / 100.0
    z = 1.48 + math.sqrt(n)
    nbb = 0.725 * (1.0 / n) ** 0.2
    rgb_wc = [d_gain[i] * rgb_w[i] for i in range(3)]
    rgb_aw = [response_signed(fl * rgb_wc[i] / 100.0) for i in range(3)]
    aw = (2.0 * rgb_aw[0] + rgb_aw[1] + 0.05 * rgb_aw[2] - 0.305) * nbb
    return dict(D=D, d_gain=d_gain, fl=fl, n=n, z=z, nbb=nbb, ncb=nbb, c=c, Nc=Nc,
                white=white, rgb_aw=rgb_aw, aw=aw)


def forward(xyz, cond):
    rgb = mat_vec(M_CAT16, xyz)
    rgb_c = [cond["d_gain"][i] * rgb[i] for i in range(3)]
    ra, ga, ba = [response_signed(cond["fl"] * v / 100.0) for v in rgb_c]
    A = (2.0 * ra + ga + 0.05 * ba - 0.305) * cond["nbb"]
    J = 100.0 * (max(A, 0.0) / cond["aw"]) ** (cond["c"] * cond["z"]) if A > 0 else 0.0
    Q = (4.0 / cond["c"]) * math.sqrt(J / 100.0) * (cond["aw"] + 4.0) * cond["fl"] ** 0.25
    a = ra - 12.0 * ga / 11.0 + ba / 11.0
    b = (ra + ga - 2.0 * ba) / 9.0
    h = math.degrees(math.atan2(b, a)) % 360.0
    et = 0.25 * (math.cos(math.radians(h) + 2.0) + 3.8)
    t = ((50000.0 / 13.0) * cond["Nc"] * cond["ncb"] * et * math.hypot(a, b)
         / (ra + ga + 1.05 * ba))
    C = t ** 0.9 * math.sqrt(J / 100.0) * (1.64 - 0.29 ** cond["n"]) ** 0.73
    M = C * cond["fl"] ** 0.25
    return dict(J=J, Q=Q, C=C, M=M, h=h, A=A, resp=(ra, ga, ba), a=a, b=b, t=t, et=et)


def main():
    print("== CAM16 worked-example input: XYZ(19.01,20,21.78), white(95.05,100,108.88), La=318.31, Yb=20, average ==")
    cond = derive([95.05, 100.0, 108.88], 318.31, 20.0, "average")
    print(f"D      = {cond['D']:.10f}")
    print(f"F_L    = {cond['fl']:.10f}")
    print(f"n      = {cond['n']:.10f}  z = {cond['z']:.10f}  N_bb = {cond['nbb']:.10f}")
    print(f"A_w    = {cond['aw']:.10f}")
    fwd = forward([19.01, 20.00, 21.78], cond)
    for k in ("J", "Q", "C", "M", "h"):
        print(f"{k:6s} = {fwd[k]:.8f}")
    print(f"resp   = {fwd['resp']}")
    print(f"a={fwd['a']:.12e} b={fwd['b']:.12e} t={fwd['t']:.10f} et={fwd['et']:.10f}")

    print("\n== degree of adaptation / luminance adaptation factor ==")
    print(f"D(F=1, La=318.31)  = {cond['D']:.8f}")
    k = 1.0 / (5.0 * 318.31 + 1.0)
    print(f"F_L(La=318.31)     = {cond['fl']:.8f}")

    print("\n== detail enhancement: map {-0.2, 0.1, 0.4}, beta=1.1, Dmax=0.4 ==")
    for d in (-0.2, 0.1, 0.4):
        dmax = 0.4
        v = dmax * (abs(d) / dmax) ** 1.1 * (1 if d >= 0 else -1)
        print(f"D={d:+.2f} -> {v:.12f}")

    print("\n== sRGB encode of relative luminance 0.184 ==")
    v = 0.184
    e = 12.92 * v if v <= 0.0031308 else 1.055 * v ** (1.0 / 2.4) - 0.055
    print(f"encoded = {e:.10f}  code = {math.floor(e * 255.0 + 0.5)}")

    print("\n== gamma regression ==")
    for key in (0.085, 0.8, 0.0):
        print(f"gamma({key}) = {0.6781 * key + 0.3128:.10f}")

    print("\n== image key oracles ==")

    def keystats(ys, delta, reinhard=True):
        l2 = [math.log2(delta + y) for y in ys]
        l2g = sum(l2) / len(l2)
        ymin, ymax = min(ys), max(ys)
        lmin, lmax = math.log2(max(ymin, delta) if delta > 0 else ymin), math.log2(max(ymax, delta) if delta > 0 else ymax)
        cl = lmax - lmin
        if cl == 0:
            return 0.18
        num = (2 * l2g - lmin - lmax) if reinhard else (2 * l2g - cl)
        return 0.18 * 4.0 ** (num / cl)

    print(f"key({{1,16}}, delta=0, reinhard)     = {keystats([1.0, 16.0], 0.0):.17f}")
    print(f"key({{1,1,1,16}}, delta=0, reinhard) = {keystats([1.0, 1.0, 1.0, 16.0], 0.0):.17f}")
    print(f"key({{1,16}}, delta=0, as-printed)   = {keystats([1.0, 16.0], 0.0, False):.17f}")

    print("\n== RGBE decode cases ==")
    for (r, g, b, e) in ((140, 80, 20, 130), (128, 128, 128, 128)):
        f = 2.0 ** (e - 136)
        print(f"({r},{g},{b},{e}) -> ({(r + .5) * f}, {(g + .5) * f}, {(b + .5) * f})")

    print("\n== compress_base: 0.25^0.5 ==")
    print(f"{0.25 ** 0.5}")

    print("\n== inverse check: J=100,M=0 vs display white (La=112, Yb=20, D65) ==")
    cond_d = derive([95.05, 100.0, 108.88], 112.0, 20.0, "average")
    print(f"display D = {cond_d['D']:.8f} (adapted-neutral differs from white unless D == 1)")


if __name__ == "__main__":
    main()
