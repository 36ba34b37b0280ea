"""Regenerate q_eulerian_h.json from the series recursion.

``Q_n = h_n + sum_{k=2}^{n} t [k-1]_t h_k Q_{n-k}`` with ``Q_0 = 1`` follows
from the denominator form of the generating function; it does not use the
permutation enumeration, so the file is an independent oracle.
"""

from __future__ import annotations

import json
from pathlib import Path

from qsymlab.polyring import T, q_int
from qsymlab.symqsym import SymFunc, h

MAX_N = 6


def recursion(max_n: int) -> list[SymFunc]:
    Q = [SymFunc(0, "h", {(): 1})]
    for n in range(1, max_n + 1):
        acc = h(n)
        for k in range(2, n + 1):
            acc = acc + (h(k) * Q[n - k]) * (T * q_int(k - 1, "t"))
        Q.append(acc.to("h"))
    return Q


def main() -> None:
    Q = recursion(MAX_N)
    out = {}
    for n in range(1, MAX_N + 1):
        slices = Q[n].t_slices(n)
        out[str(n)] = {str(j): str(slices[j]) for j in range(n)}
    path = Path(__file__).with_name("q_eulerian_h.json")
    path.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
