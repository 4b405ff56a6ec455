#!/usr/bin/env python3
"""Regenerate the high-precision q-expansion fixtures under crates/core/fixtures.

Requires PARI/GP through the `cypari` Python package (`pip install cypari`).

S_2(Gamma_Delta(N)) is the direct sum of S_2(N, chi) over the even Dirichlet
characters chi mod N that are trivial on Delta. Each space is computed with
PARI's `mf` package; every coefficient in Q(zeta) is split into rational
components, and the resulting rational series are reduced to echelon form.
The echelon basis is what the fixture files store.
"""

import math
import os
import sys
from fractions import Fraction

from cypari import pari

# (level, label, residues, genus) for every gonality-3 curve of genus 3 or 4.
CASES = [
    (24, "Delta1", [1, 5, 19, 23], 3),
    (24, "Delta2", [1, 7, 17, 23], 3),
    (25, "Delta1", [1, 7, 18, 24], 4),
    (26, "Delta1", [1, 5, 21, 25], 4),
    (26, "Delta2", [1, 3, 9, 17, 23, 25], 4),
    (28, "Delta1", [1, 13, 15, 27], 4),
    (28, "Delta2", [1, 3, 9, 19, 25, 27], 4),
    (29, "Delta2", [1, 4, 5, 6, 7, 9, 13, 16, 20, 22, 23, 24, 25, 28], 4),
    (36, "Delta2", [1, 11, 13, 23, 25, 35], 3),
    (37, "Delta3", [1, 6, 8, 10, 11, 14, 23, 26, 27, 29, 31, 36], 4),
    (37, "Delta4", [1, 3, 4, 7, 9, 10, 11, 12, 16, 21, 25, 26, 27, 28, 30, 33, 34, 36], 4),
    (49, "Delta2", [1, 6, 8, 13, 15, 20, 22, 27, 29, 34, 36, 41, 43, 48], 3),
    (50, "Delta2", [1, 9, 11, 19, 21, 29, 31, 39, 41, 49], 4),
]


def units(n):
    return [r for r in range(1, n) if math.gcd(r, n) == 1]


def gamma0_index(n):
    idx = n
    p, m = 2, n
    while m > 1:
        if m % p == 0:
            idx = idx * (p + 1) // p
            while m % p == 0:
                m //= p
        p += 1
    return idx


def rational_components(level, delta, prec):
    group = pari(f"znstar({level},1)")
    t = pari("t")
    rows = []
    for a in units(level):
        chi = pari.znconreychar(group, a)
        if pari.zncharisodd(group, chi) != 0:
            continue
        if any(pari.chareval(group, chi, r) != 0 for r in delta):
            continue
        space = pari.mfinit([level, 2, pari(f"Mod({a},{level})")], 1)
        for form in pari.mfbasis(space):
            coeffs = [pari.lift(c) for c in pari.mfcoefs(form, prec)]
            top = max(int(pari.poldegree(c, t)) if c != 0 else 0 for c in coeffs)
            for j in range(max(top, 0) + 1):
                rows.append([Fraction(str(pari.polcoef(c, j, t))) for c in coeffs])
    return rows


def echelon(rows):
    rows = [r[:] for r in rows]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        rows[rank] = [x / lead for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rows[:rank]


def render(level, label, delta, genus, prec, forms):
    out = ["qexp-fixture v1"]
    out.append(f"# S_2(Gamma_Delta({level})) for {label} = {{{', '.join(map(str, delta))}}}, genus {genus}.")
    out.append(f"# Generated by scripts/gen_fixtures.py with PARI/GP {'.'.join(map(str, pari.version()))}")
    out.append("# (mfinit/mfbasis over every even character trivial on Delta, split into")
    out.append("# rational components, reduced echelon form).")
    out.append(f"level {level}")
    out.append("delta " + " ".join(map(str, delta)))
    out.append("weight 2")
    out.append(f"prec {prec}")
    for f in forms:
        out.append("form " + " ".join(str(c) for c in f))
    return "\n".join(out) + "\n"


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "crates", "core", "fixtures")
    pari.allocatemem(2 * 10**9)
    for level, label, delta, genus in CASES:
        mu = gamma0_index(level) * len(units(level)) // len(delta)
        weight = 6 if genus == 4 else 8
        prec = max(64, weight * mu // 12 + 1)
        forms = echelon(rational_components(level, delta, prec))
        assert len(forms) == genus, (level, label, len(forms))
        name = f"N{level}_delta{'-'.join(map(str, delta))}q{prec}.txt"
        with open(os.path.join(outdir, name), "w") as fh:
            fh.write(render(level, label, delta, genus, prec, forms))
        print(name, "mu", mu, "prec", prec)


if __name__ == "__main__":
    main()
