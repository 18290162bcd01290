"""Independent model of the cipher used to freeze ciphertext fixtures.

The plain image is P_c(k) = (37 k + 91 c + 11) mod 256 at raster index k (0-based),
channel c. Encryption uses the reference key with binary64 arithmetic. Output goes to
../data/reference_cipher.txt, one line per (height, width, channel) with the cipher bytes
as hex in ciphertext order.
"""
import math
import os

R = [123, 57, 67, 89, 253, 221]
K = (38.583, 41.135, 39.846)
S0 = (0.485, 0.913, 0.751)
SIZES = [(1, 1), (2, 2), (5, 7), (8, 8), (16, 32)]


def frac(v):
    f = v - math.floor(v)
    return f if f < 1.0 else math.nextafter(1.0, 0.0)


def keystream(n):
    x, y, z = S0
    k1, k2, k3 = K
    xs, ys, zs = [], [], []
    for _ in range(n):
        x1 = frac(3.735 * k1 * ((1 + x) * (1 + x)) * math.sin(1 / (1 + y * y)))
        y1 = frac(3.536 * k2 * x1 * math.sin(x1 * y) * (1 + z * z))
        z1 = frac(3.838 * k3 * x1 * (1 + y1 * z))
        x, y, z = x1, y1, z1
        xs.append(int(256 * x))
        ys.append(int(256 * y))
        zs.append(int(256 * z))
    return xs, ys, zs


def zigzag(h, w):
    """Raster indices in scan order: sort cells by anti-diagonal, then by row
    descending on even 1-based diagonals and ascending on odd ones."""
    cells = [(i, j) for i in range(1, h + 1) for j in range(1, w + 1)]
    cells.sort(key=lambda c: (c[0] + c[1], -c[0] if (c[0] + c[1]) % 2 == 0 else c[0]))
    return [(i - 1) * w + (j - 1) for i, j in cells]


def rot(a):
    return ((a % 16) * 16) + a // 16


def encrypt(plain, h, w):
    n = h * w
    xs, ys, zs = keystream(n)
    order = zigzag(h, w)
    out = []
    for c in range(3):
        rr, rc = R[2 * c], R[2 * c + 1]
        perm = [0] * n
        for i in range(1, h + 1):
            for j in range(1, w + 1):
                t1 = 1 + (31 * i * rr) % h
                t2 = 1 + (31 * j * rc) % w
                perm[(i - 1) * w + j - 1] = plain[c][(t1 - 1) * w + t2 - 1]
        nl = [((rot(perm[k]) + xs[k]) % 256) ^ ys[k] for k in range(n)]
        prev = 0
        chan = []
        for p in range(n):
            prev = nl[order[p]] ^ prev ^ zs[p]
            chan.append(prev)
        out.append(chan)
    return out


def main():
    path = os.path.join(os.path.dirname(__file__), "..", "data", "reference_cipher.txt")
    with open(path, "w") as f:
        for h, w in SIZES:
            plain = [[(37 * k + 91 * c + 11) % 256 for k in range(h * w)] for c in range(3)]
            for c, chan in enumerate(encrypt(plain, h, w)):
                f.write(f"{h} {w} {c} {bytes(chan).hex()}\n")
    print("wrote", os.path.normpath(path))
    # 8x8 scan order for eyeballing against the JPEG table
    print(zigzag(8, 8))


if __name__ == "__main__":
    main()
