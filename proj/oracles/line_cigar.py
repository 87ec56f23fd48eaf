"""Symbolic values for the line x cigar steady soliton at a fixed point.

Computes Ricci, scalar, Hess f, Cotton, D, Bach (three-dimensional form
B_ij = nabla^k C_kij), div B, and both sides of the level-surface norm
identity directly from the metric with sympy. Printed values are frozen into
tests/test_models.cpp and tests/test_level.cpp.
"""
import itertools

import sympy as sp

t, x, y = sp.symbols("t x y", real=True)
X = [t, x, y]
n = 3
c = 1 / (1 + x**2 + y**2)
g = sp.diag(1, c, c)
f = -sp.log(1 + x**2 + y**2)
P = {t: sp.Rational(3, 10), x: sp.Rational(7, 10), y: sp.Rational(-2, 5)}

gi = sp.simplify(g.inv())
R3 = range(n)

# Gamma^a_bc
Gam = [[[sp.simplify(sum(gi[a, d] * (sp.diff(g[d, b], X[cc]) + sp.diff(g[d, cc], X[b]) - sp.diff(g[b, cc], X[d]))
                         for d in R3) / 2) for cc in R3] for b in R3] for a in R3]

# Ric_bd = d_a Gam^a_bd - d_d Gam^a_ba + Gam^a_ae Gam^e_bd - Gam^a_de Gam^e_ba
Ric = sp.zeros(n)
for b, d in itertools.product(R3, R3):
    Ric[b, d] = sp.simplify(sum(sp.diff(Gam[a][b][d], X[a]) - sp.diff(Gam[a][b][a], X[d]) for a in R3)
                            + sum(Gam[a][a][e] * Gam[e][b][d] - Gam[a][d][e] * Gam[e][b][a] for a in R3 for e in R3))
Rs = sp.simplify(sum(gi[a, b] * Ric[a, b] for a in R3 for b in R3))


def cov2(T):
    """nabla_a T_bc as a nested list [a][b][c]."""
    return [[[sp.diff(T[b][cc], X[a]) - sum(Gam[e][a][b] * T[e][cc] + Gam[e][a][cc] * T[b][e] for e in R3)
              for cc in R3] for b in R3] for a in R3]


def cov3(T):
    return [[[[sp.diff(T[b][cc][d], X[a]) - sum(Gam[e][a][b] * T[e][cc][d] + Gam[e][a][cc] * T[b][e][d]
                                               + Gam[e][a][d] * T[b][cc][e] for e in R3)
               for d in R3] for cc in R3] for b in R3] for a in R3]


df = [sp.diff(f, v) for v in X]
hess = [[sp.diff(f, X[i], X[j]) - sum(Gam[k][i][j] * df[k] for k in R3) for j in R3] for i in R3]
A = [[Ric[i, j] - Rs / (2 * (n - 1)) * g[i, j] for j in R3] for i in R3]
dA = cov2(A)
C = [[[dA[i][j][k] - dA[j][i][k] for k in R3] for j in R3] for i in R3]
dR = [sp.diff(Rs, v) for v in X]
D = [[[(Ric[j, k] * df[i] - Ric[i, k] * df[j]) / (n - 2)
       + (g[j, k] * dR[i] - g[i, k] * dR[j]) / (2 * (n - 1) * (n - 2))
       + Rs / ((n - 1) * (n - 2)) * (g[i, k] * df[j] - g[j, k] * df[i]) for k in R3] for j in R3] for i in R3]
dC = cov3(C)
B = [[sum(gi[k, a] * dC[a][k][i][j] for k in R3 for a in R3) for j in R3] for i in R3]
dB = cov2(B)
divB = [sum(gi[j, a] * dB[a][i][j] for j in R3 for a in R3) for i in R3]


def val(e):
    return sp.N(e.subs(P), 20)


up_f = [sum(gi[i, j] * df[j] for j in R3) for i in R3]
print("scalar", val(Rs))
print("residual", max(abs(val(Ric[i, j] + hess[i][j])) for i in R3 for j in R3))
print("grad_f_sq", val(sum(df[i] * up_f[i] for i in R3)))
for i, j, k in itertools.product(R3, R3, R3):
    if i < j:
        print("C", i, j, k, val(C[i][j][k]), "D", val(D[i][j][k]))
for i, j in itertools.product(R3, R3):
    print("B", i, j, val(B[i][j]))
C2 = sum(gi[i, a] * gi[j, b] * gi[k, cc] * C[i][j][k] * C[a][b][cc]
         for i, j, k, a, b, cc in itertools.product(R3, R3, R3, R3, R3, R3))
print("C_sq", val(C2))
print("divB_gradf", val(sum(divB[i] * up_f[i] for i in R3)))

# Level-surface data at P with nu = grad f / |grad f|.
gP = g.subs(P)
giP = gi.subs(P)
hessP = sp.Matrix(3, 3, lambda i, j: hess[i][j].subs(P))
dfP = sp.Matrix([d.subs(P) for d in df])
upP = giP * dfP
norm = sp.sqrt((dfP.T * upP)[0])
nu = upP / norm
# Orthonormal tangent frame by Gram-Schmidt against g.
basis = [nu]
for v in (sp.Matrix([1, 0, 0]), sp.Matrix([0, 1, 0]), sp.Matrix([0, 0, 1])):
    for b in basis:
        v = v - (b.T * gP * v)[0] * b
    nv = sp.sqrt((v.T * gP * v)[0])
    if sp.N(nv) > 1e-6 and len(basis) < 3:
        basis.append(v / nv)
E = basis[1:]
h = sp.Matrix(2, 2, lambda a, b: (E[a].T * hessP * E[b])[0] / norm)
H = h.trace()
tl = h - H / 2 * sp.eye(2)
dRP = sp.Matrix([d.subs(P) for d in dR])
tan_dR_sq = sum(((dRP.T * E[a])[0]) ** 2 for a in range(2))
D2 = sum(giP[i, a] * giP[j, b] * giP[k, cc] * D[i][j][k].subs(P) * D[a][b][cc].subs(P)
         for i, j, k, a, b, cc in itertools.product(R3, R3, R3, R3, R3, R3))
rhs = 2 * norm**4 / (n - 2) ** 2 * sum(tl[a, b] ** 2 for a in range(2) for b in range(2)) \
    + tan_dR_sq / (2 * (n - 1) * (n - 2))
print("D_sq", sp.N(D2, 20))
print("D2_rhs", sp.N(rhs, 20))
print("H", sp.N(H, 20))
print("traceless_sq", sp.N(sum(tl[a, b] ** 2 for a in range(2) for b in range(2)), 20))
