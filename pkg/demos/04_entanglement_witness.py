"""
Positive maps as entanglement witnesses.

A positive map extended by the identity stays positive on every separable
state, so a negative eigenvalue proves entanglement. For two qubits the
reduction map catches every entangled pure state.
"""
import numpy as np

from posmap import builtin_map, detect_entanglement, partial_transpose, random_separable_state
from posmap.witness import random_pure_state

bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
rho = np.outer(bell, bell)
for name in ("transpose", "reduction"):
    v = detect_entanglement(rho, (2, 2), builtin_map(name, 2))
    print(f"Bell state, {name}: entangled={v.entangled}, lambda_min={v.lambda_min:+.3f}")
print("partial transpose lambda_min:", np.linalg.eigvalsh(partial_transpose(rho, (2, 2)))[0])

rng = np.random.default_rng(1)
R = builtin_map("reduction", 2)
hits = sum(detect_entanglement(np.outer(p, p.conj()), (2, 2), R).entangled is True
           for p in (random_pure_state(4, rng) for _ in range(200)))
print(f"random pure states flagged: {hits}/200")

sep = [random_separable_state((3, 3), 4, seed=k) for k in range(100)]
T = builtin_map("transpose", 3)
print("separable states flagged:", sum(detect_entanglement(s, (3, 3), T).entangled is True for s in sep))

# Bell state mixed with white noise is entangled exactly for weight > 1/3
for w in (0.2, 0.4, 0.6):
    mix = w * rho + (1 - w) * np.eye(4) / 4
    v = detect_entanglement(mix, (2, 2), builtin_map("transpose", 2))
    print(f"Werner weight {w}: {v.entangled}, lambda_min = {v.lambda_min:+.4f}")
