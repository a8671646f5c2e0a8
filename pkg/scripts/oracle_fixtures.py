#!/usr/bin/env python3
"""Standalone oracle for the frozen test fixtures.

Everything here is computed with plain Python floats and lists: no numpy,
no imports from the package under test. Run it to regenerate the golden
values pasted into the test suite; the test suite never imports this file
at runtime, the values are frozen there as literals.
"""

RGB_TO_LMS = [
    [17.8824, 43.5161, 4.1194],
    [3.4557, 27.1554, 3.8671],
    [0.0300, 0.1843, 1.4671],
]

PROTANOPIA = [
    [0.0, 2.0234, -2.5258],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
]

DEUTERANOPIA = [
    [1.0, 0.0, 0.0],
    [0.4942, 0.0, 1.2483],
    [0.0, 0.0, 1.0],
]

PRINTED_LMS_TO_RGB = [
    [0.0809, -0.1305, 0.1167],
    [-0.0102, 0.0540, -0.1136],
    [-0.0004, -0.0041, 0.6935],
]


def matvec(m, v):
    return [sum(m[i][k] * v[k] for k in range(3)) for i in range(3)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def inv3(m):
    d = det3(m)
    cof = [
        [
            (m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
             - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
            for j in range(3)
        ]
        for i in range(3)
    ]
    # adjugate = transpose of cofactor matrix
    return [[cof[j][i] / d for j in range(3)] for i in range(3)]


def hybrid(ap, ad):
    return [
        [1.0 - ap, 2.0234 * ap, -2.5258 * ap],
        [0.4942 * ad, 1.0 - ad, 1.2483 * ad],
        [0.0, 0.0, 1.0],
    ]


def method_b_mat(ap, ad):
    return [
        [1.0 - ad / 2.0, ad / 2.0, 0.0],
        [ap / 2.0, 1.0 - ap / 2.0, 0.0],
        [ap / 4.0, ad / 4.0, 1.0 - (ap + ad) / 4.0],
    ]


def quant(v):
    """Clamp to [0,1], round half-up to a byte."""
    v = min(max(v, 0.0), 1.0)
    return int(v * 255.0 + 0.5)  # v >= 0, so int() == floor


def simulate_pixel(rgb_bytes, ap, ad):
    inv = inv3(RGB_TO_LMS)
    v = [c / 255.0 for c in rgb_bytes]
    lms = matvec(RGB_TO_LMS, v)
    sim = matvec(hybrid(ap, ad), lms)
    out = matvec(inv, sim)
    return tuple(quant(c) for c in out)


def method_b_pixel(rgb_bytes, ap, ad):
    v = [c / 255.0 for c in rgb_bytes]
    out = matvec(method_b_mat(ap, ad), v)
    return tuple(quant(c) for c in out)


def method_a_noeq_pixel(rgb_bytes, beta, ap, ad, an):
    xp = min(beta, ap)
    xd = min(beta, ad)
    xn = min(an, 1.0 - beta)
    s = xp + xd + xn
    if s == 0.0:
        xp, xd, xn = 0.0, 0.0, 1.0
    else:
        xp, xd, xn = xp / s, xd / s, xn / s
    r, g, b = (c / 255.0 for c in rgb_bytes)
    fp = (r, (r + g) / 2.0, (r + b) / 2.0)
    fd = ((r + g) / 2.0, g, (g + b) / 2.0)
    blended = tuple(xp * fp[i] + xd * fd[i] + xn * (r, g, b)[i] for i in range(3))
    return tuple(quant(c) for c in blended)


def equalize_plane(plane_bytes):
    """round(255 * CDF) mapping, half-up, over a flat list of byte values."""
    n = len(plane_bytes)
    bins = [0] * 256
    for v in plane_bytes:
        bins[v] += 1
    cum = 0
    lut = [0] * 256
    for lv in range(256):
        cum += bins[lv]
        lut[lv] = int(255.0 * cum / n + 0.5)
    return [lut[v] for v in plane_bytes]


def method_a_protan_eq(pixels_bytes):
    """Protan filter with equalization of the two modified bands.

    Bands are averaged in float, quantized to 8-bit planes, equalized,
    then taken back to floats (k/255). Returns per-pixel byte triples of
    the final quantized image (red band untouched).
    """
    floats = [[c / 255.0 for c in p] for p in pixels_bytes]
    g_prime = [quant((p[0] + p[1]) / 2.0) for p in floats]
    b_prime = [quant((p[0] + p[2]) / 2.0) for p in floats]
    g_eq = equalize_plane(g_prime)
    b_eq = equalize_plane(b_prime)
    return [
        (quant(floats[i][0]), g_eq[i], b_eq[i])
        for i in range(len(pixels_bytes))
    ]


TEN_PIXELS = [
    (255, 0, 0), (0, 255, 0), (0, 0, 255), (255, 255, 0), (0, 255, 255),
    (128, 64, 200), (17, 230, 42), (200, 150, 100), (90, 90, 90), (255, 255, 255),
]

TWENTY_PIXELS = [
    (0, 0, 0), (255, 255, 255), (255, 0, 0), (0, 255, 0), (0, 0, 255),
    (255, 255, 0), (255, 0, 255), (0, 255, 255), (128, 128, 128), (64, 192, 32),
    (200, 30, 90), (10, 100, 250), (245, 160, 5), (77, 77, 230), (150, 255, 80),
    (30, 60, 90), (222, 111, 55), (5, 5, 250), (180, 200, 40), (99, 1, 199),
]

THREE_PIXELS = [(51, 25, 230), (128, 128, 128), (255, 0, 76)]

BLEND_PIXELS = [(255, 0, 0), (0, 255, 0), (0, 0, 255), (120, 200, 40)]


def main():
    inv = inv3(RGB_TO_LMS)

    print("# determinant of RGB->LMS matrix")
    print(det3(RGB_TO_LMS))

    print("\n# row sums of RGB->LMS matrix (LMS plane maxima)")
    print([sum(row) for row in RGB_TO_LMS])

    print("\n# numerically inverted RGB->LMS matrix")
    for row in inv:
        print(["%.10f" % x for x in row])

    print("\n# max |inverse - printed 4-decimal matrix|")
    print(max(abs(inv[i][j] - PRINTED_LMS_TO_RGB[i][j]) for i in range(3) for j in range(3)))

    print("\n# max |T * T^-1 - I|")
    prod = matmul(RGB_TO_LMS, inv)
    print(max(abs(prod[i][j] - (1.0 if i == j else 0.0)) for i in range(3) for j in range(3)))

    print("\n# (1,1,1) through RGB->LMS (row sums)")
    print(matvec(RGB_TO_LMS, [1.0, 1.0, 1.0]))

    print("\n# simulate pure red (255,0,0) at alpha_p=1")
    print(simulate_pixel((255, 0, 0), 1.0, 0.0))

    print("\n# simulate TEN_PIXELS at (alpha_p, alpha_d) = (0.75, 0)")
    print([simulate_pixel(p, 0.75, 0.0) for p in TEN_PIXELS])

    print("\n# simulate TWENTY_PIXELS at (0.75, 0.25)")
    print([simulate_pixel(p, 0.75, 0.25) for p in TWENTY_PIXELS])

    print("\n# method A (no eq) TWENTY_PIXELS, profile beta=0.6 ap=0.5 ad=0.3 an=0.4")
    print([method_a_noeq_pixel(p, 0.6, 0.5, 0.3, 0.4) for p in TWENTY_PIXELS])

    print("\n# method B (no eq) TWENTY_PIXELS at (0.7, 0.2)")
    print([method_b_pixel(p, 0.7, 0.2) for p in TWENTY_PIXELS])

    print("\n# method A blend fixture (2x2), profile beta=0.6 ap=0.5 ad=0.3 an=0.4")
    print([method_a_noeq_pixel(p, 0.6, 0.5, 0.3, 0.4) for p in BLEND_PIXELS])

    print("\n# fuzzy weights for beta=0.6 ap=0.5 ad=0.3 an=0.4")
    xp, xd, xn = min(0.6, 0.5), min(0.6, 0.3), min(0.4, 1 - 0.6)
    s = xp + xd + xn
    print((xp / s, xd / s, xn / s))

    print("\n# method A protan filter with equalization, THREE_PIXELS fixture")
    print(method_a_protan_eq(THREE_PIXELS))

    print("\n# method B pure red at (1,0)")
    print(method_b_pixel((255, 0, 0), 1.0, 0.0))

    print("\n# equalize {0,64,128,255}")
    print(equalize_plane([0, 64, 128, 255]))

    print("\n# P^2 - P max abs for protanopia / deuteranopia matrices")
    for mat in (PROTANOPIA, DEUTERANOPIA):
        sq = matmul(mat, mat)
        print(max(abs(sq[i][j] - mat[i][j]) for i in range(3) for j in range(3)))


if __name__ == "__main__":
    main()
