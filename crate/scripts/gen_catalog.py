#!/usr/bin/env python3
"""Regenerates crates/core/catalog/groups.json.

Generators are built from their defining actions (projective lines and
planes over small finite fields) and written in 0-based cycle notation.
The Rust loader recomputes every order on load, so this script only has to
produce the permutations.
"""
import itertools
import json
import os


def cycles(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = perm[j]
        if len(c) > 1:
            out.append("(" + " ".join(map(str, c)) + ")")
    return "".join(out) or "()"


class GF:
    """F_{p^k} as polynomials over F_p modulo a fixed irreducible."""

    def __init__(self, p, modulus):
        self.p, self.mod = p, modulus  # modulus: low-to-high coeffs, monic
        self.k = len(modulus) - 1
        self.elems = list(itertools.product(range(p), repeat=self.k))

    def idx(self, e):
        return self.elems.index(tuple(e))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for i in range(self.k + 1):
                    prod[d - self.k + i] = (prod[d - self.k + i] - c * self.mod[i]) % self.p
        return tuple(prod[: self.k])

    def zero(self):
        return tuple([0] * self.k)

    def one(self):
        return tuple([1] + [0] * (self.k - 1))

    def inv(self, a):
        for b in self.elems:
            if self.mul(a, b) == self.one():
                return b
        raise ZeroDivisionError

    def pow(self, a, n):
        r = self.one()
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def primitive(self):
        q = len(self.elems)
        for a in self.elems:
            if a == self.zero():
                continue
            if all(self.pow(a, (q - 1) // r) != self.one() for r in range(2, q) if (q - 1) % r == 0 and is_prime(r)):
                return a
        raise ValueError


def is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def projective_line(field, maps):
    q = len(field.elems)
    inf = q

    def perm_of(fn):
        return [fn(i) for i in range(q + 1)]

    out = []
    for m in maps:
        out.append(cycles(perm_of(m)))
    return out, inf


def pgaml2(field, frob_power, include_frobenius, socle_only):
    q = len(field.elems)
    inf = q
    w = field.primitive()
    E = field.elems

    def translate(i):
        return inf if i == inf else field.idx(field.add(E[i], field.one()))

    def scale(c):
        def f(i):
            if i == inf:
                return inf
            return field.idx(field.mul(E[i], c))
        return f

    def invert(i):
        if i == inf:
            return field.idx(field.zero())
        if E[i] == field.zero():
            return inf
        return field.idx(field.neg(field.inv(E[i])))

    def frob(i):
        return inf if i == inf else field.idx(field.pow(E[i], frob_power))

    gens = [translate, invert]
    if socle_only:
        gens.append(scale(field.mul(w, w)) if field.p != 2 else scale(w))
    else:
        gens.append(scale(w))
        if include_frobenius:
            gens.append(frob)
    return [cycles([g(i) for i in range(q + 1)]) for g in gens]


def projective_plane_points(p):
    pts = []
    for v in itertools.product(range(p), repeat=3):
        if any(v):
            first = next(x for x in v if x)
            inv = pow(first, -1, p)
            norm = tuple((x * inv) % p for x in v)
            if norm not in pts:
                pts.append(norm)
    return pts


def normalise(v, p):
    first = next(x for x in v if x)
    inv = pow(first, -1, p)
    return tuple((x * inv) % p for x in v)


def psl3(p, dual=False):
    pts = projective_plane_points(p)
    gens = []
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            m = [[int(r == c) for c in range(3)] for r in range(3)]
            m[i][j] = 1
            if dual:
                # inverse transpose of a transvection: negate the entry and transpose
                t = [[int(r == c) for c in range(3)] for r in range(3)]
                t[j][i] = (-1) % p
                m = t
            image = []
            for v in pts:
                w = tuple(sum(m[r][c] * v[c] for c in range(3)) % p for r in range(3))
                image.append(pts.index(normalise(w, p)))
            gens.append(cycles(image))
    return gens


def agl3_2():
    vecs = list(itertools.product(range(2), repeat=3))
    gens = []
    for t in range(3):
        e = [0, 0, 0]
        e[t] = 1
        gens.append(cycles([vecs.index(tuple((v[i] + e[i]) % 2 for i in range(3))) for v in vecs]))
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            def apply(v):
                w = list(v)
                w[i] = (w[i] + v[j]) % 2
                return tuple(w)
            gens.append(cycles([vecs.index(apply(v)) for v in vecs]))
    socle = gens[:3]
    return gens, socle


def main():
    f9 = GF(3, [1, 0, 1])       # x^2 + 1
    f8 = GF(2, [1, 1, 0, 1])    # x^3 + x + 1
    f7 = GF(7, [0, 1])
    agl, agl_soc = agl3_2()
    entries = [
        {
            "name": "PGammaL2_9",
            "order": 1440,
            "socle_order": 360,
            "degree": 10,
            "generators": pgaml2(f9, 3, True, False),
            "socle_generators": pgaml2(f9, 3, False, True),
            "provenance": "P-Gamma-L(2,9) = Aut(A6) on the projective line over F_9 (x -> x+1, x -> w x, x -> -1/x, x -> x^3); socle PSL(2,9) ~ A6",
        },
        {
            "name": "PGammaL2_8",
            "order": 1512,
            "socle_order": 504,
            "degree": 9,
            "generators": pgaml2(f8, 2, True, False),
            "socle_generators": pgaml2(f8, 2, False, True),
            "provenance": "P-Gamma-L(2,8) on the projective line over F_8 (x -> x+1, x -> w x, x -> 1/x, x -> x^2); socle PSL(2,8)",
        },
        {
            "name": "PSL3_2",
            "order": 168,
            "degree": 7,
            "generators": psl3(2),
            "provenance": "PSL(3,2) on the 7 points of the Fano plane (elementary transvections)",
        },
        {
            "name": "PSL3_2_lines",
            "order": 168,
            "degree": 7,
            "generators": psl3(2, dual=True),
            "provenance": "PSL(3,2) on the 7 lines of the Fano plane (inverse-transpose action)",
        },
        {
            "name": "PSL2_7",
            "order": 168,
            "degree": 8,
            "generators": pgaml2(f7, 1, False, True),
            "provenance": "PSL(2,7) ~ PSL(3,2) on the projective line over F_7 (x -> x+1, x -> 2x, x -> -1/x)",
        },
        {
            "name": "PGL2_7",
            "order": 336,
            "socle_order": 168,
            "degree": 8,
            "generators": pgaml2(f7, 1, False, False),
            "socle_generators": pgaml2(f7, 1, False, True),
            "provenance": "PGL(2,7) on the projective line over F_7 (x -> x+1, x -> 3x, x -> -1/x); socle PSL(2,7)",
        },
        {
            "name": "AGL3_2",
            "order": 1344,
            "socle_order": 8,
            "degree": 8,
            "generators": agl,
            "socle_generators": agl_soc,
            "alpha_applicable": False,
            "provenance": "AGL(3,2) on F_2^3; affine action with abelian socle C_2^3, outside the almost-simple setting",
        },
        {
            "name": "PSL3_3",
            "order": 5616,
            "degree": 13,
            "generators": psl3(3),
            "provenance": "PSL(3,3) on the 13 points of the projective plane over F_3",
        },
        {
            "name": "M11",
            "order": 7920,
            "degree": 11,
            "generators": ["(0 1 2 3 4 5 6 7 8 9 10)", "(2 6 10 7)(3 9 4 5)"],
            "provenance": "Mathieu group M11, standard pair of generators shifted to 0-based points",
        },
        {
            "name": "M23",
            "order": 10200960,
            "degree": 23,
            "generators": [
                "(" + " ".join(map(str, range(23))) + ")",
                "(2 16 9 6 8)(3 12 13 18 4)(7 17 10 11 22)(14 19 21 20 15)",
            ],
            "provenance": "Mathieu group M23, standard pair of generators shifted to 0-based points",
        },
    ]
    here = os.path.dirname(os.path.abspath(__file__))
    path = os.path.join(here, "..", "crates", "core", "catalog", "groups.json")
    with open(path, "w") as fh:
        json.dump({"groups": entries}, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
