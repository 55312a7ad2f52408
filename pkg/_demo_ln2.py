import sys

sys.path.insert(0, ".")
import math

from mseps.epsilon import ProgressiveEpsilon, multistep_epsilon, wynn_epsilon
from mseps.numerics import float_mode
from mseps.report import table_to_grid
from mseps.sequences import parse_builtin
from mseps.shanks import epsilon_entry_det

seq = parse_builtin("ln2", 9)
print("Términos:", ", ".join(str(t) for t in seq))

table = wynn_epsilon(seq)
print(table_to_grid(table).to_string())

estimate = table.value(8, 0)
baseline = epsilon_entry_det(seq, 1, 8, 0)
print(f"ε_8^(0) = {estimate}  (oráculo: {'igual' if estimate == baseline else 'DISTINTO'})")
err = abs(float(estimate) - math.log(2))
print(f"  error={err:.3e}  ratio vs S_8={err / abs(float(seq[8]) - math.log(2)):.3e}")

# Multipaso con m=2: columnas límite κ = 3k
for m in (2, 3):
    t = multistep_epsilon(seq, m)
    cols = [k for k in t.columns() if k > 0 and k % (m + 1) == 0]
    vals = " | ".join(f"κ={k}: {float(t.value(k, 0)):.10f}" for k in cols)
    print(f"m={m}: {vals}")

# Modo flotante a 128 bits, términos de uno en uno
acc = ProgressiveEpsilon(m=1, mode=float_mode(128))
for term in parse_builtin("ln2", 9, float_mode(128)):
    acc.push(term)
print(f"Progresivo (float@128): {acc.best_estimate()}  ventana={acc.window_size()} celdas")
