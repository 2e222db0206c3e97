"""Finite sets as sizes, maps as tables, and the image factorization."""

from effect_factor.finset import FinFun, FinSet, check_diagonal_fill, exponential, factorize, product

# a product pairs (x, y) as x*|Y| + y
P = product(FinSet(2), FinSet(3))
print("2 x 3 has", P.obj.size, "elements; (1, 2) is", P.pair(1, 2))

# an exponential C^B stores g(b) as digit b in base |C|
E = exponential(FinSet(2), FinSet(3))
g = [1, 2]
print("g = [1, 2] in 3^2 is element", E.tabulate(g), "and decodes back to", E.untabulate(E.tabulate(g)))

# every map splits as a surjection onto its image followed by an inclusion
f = FinFun(FinSet(3), FinSet(3), (2, 2, 0))
F = factorize(f)
print("f =", f.table, " e =", F.e.table, " n =", F.n.table, " image size", F.mid.size)

# lifting: a surjection on the left, an injection on the right, a unique diagonal in between
e = FinFun(FinSet(2), FinSet(1), (0, 0))
m = FinFun(FinSet(2), FinSet(3), (0, 1))
top = FinFun(FinSet(2), FinSet(2), (1, 1))
bottom = FinFun(FinSet(1), FinSet(3), (1,))
print("diagonal:", check_diagonal_fill(e, m, top, bottom).table)
