"""
Canonical Kraus decomposition and the rank bound on positivity.

The reduction map rho -> tr(rho) I - rho is positive but not completely
positive. Its B-form has one negative eigenvalue, and the rank of the matching
Kraus matrix tells us the map cannot be 2-positive.
"""
import numpy as np

from posmap import builtin_map, canonical_decompose, choi_state, positivity_upper_bound

B = builtin_map("reduction", 2)
print("B-form of the reduction map:")
print(B.matrix.real)

# Eigenvalues of the normalized Choi state: three +1/2 and one -1/2
print("Choi-state eigenvalues:", np.round(np.linalg.eigvalsh(choi_state(B)), 12))

dec = canonical_decompose(B)
for lam, L, r in zip(dec.eigenvalues, dec.kraus, dec.ranks):
    print(f"eigenvalue {lam:+.3f}  rank {r}\n{np.round(L, 3)}")

rep = positivity_upper_bound(B)
print("negative Kraus (eigenvalue, rank):", rep.negative_kraus)
print("at most", rep.upper_bound, "-positive; completely positive:", rep.cp)

# The same analysis for matrix transposition: SWAP, negative Kraus ~ sigma_y
T = builtin_map("transpose", 3)
print("transpose (N=3) bound:", positivity_upper_bound(T).upper_bound)
