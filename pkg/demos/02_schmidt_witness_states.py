"""
Schmidt witness states.

For each negative Kraus matrix L (eigenvalue lam, rank r) of a map, the state
built from the eigenvectors of |L| sends Lambda (x) I_r to a matrix that has
lam / r among its eigenvalues. Here we check that on a random map.
"""
import numpy as np

from posmap import BFormMap, apply_extended, canonical_decompose, schmidt_decompose, witness_state_from_kraus
from posmap.matkernel import random_hermitian

rng = np.random.default_rng(0)
N = 3
B = BFormMap(N, random_hermitian(N * N, rng))
dec = canonical_decompose(B)

for lam, L, r in zip(dec.eigenvalues, dec.kraus, dec.ranks):
    if lam >= 0:
        continue
    psi = witness_state_from_kraus(L)
    spectrum = np.linalg.eigvalsh(apply_extended(B, psi))
    closest = spectrum[np.argmin(np.abs(spectrum - lam / r))]
    print(f"lam = {lam:+.6f}, r = {r}, Schmidt rank = {schmidt_decompose(psi).rank}, "
          f"lam/r = {lam / r:+.6f}, matching eigenvalue = {closest:+.6f}, lambda_min = {spectrum[0]:+.6f}")
