"""Independent density-matrix oracle for the parity circuit.

Builds full Kronecker-product operators with numpy (complex arithmetic, explicit
Y matrices) and prints outcome tables used as frozen values in the C++ tests.
Outcome index: bit 0 = ancilla, bit i = data qubit i.
"""
import itertools
import sys

import numpy as np

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def op_on(nq, ops):
    """Tensor product with ops[q] on qubit q; qubit q is bit q of the index."""
    m = np.array([[1]], dtype=complex)
    for q in reversed(range(nq)):
        m = np.kron(m, ops.get(q, I2))
    return m


def cnot(nq, c, t):
    dim = 2 ** nq
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (((i >> c) & 1) << t)
        m[j, i] = 1
    return m


def run(key, quantum, p2=0.0, p1=0.0):
    n = len(key)
    nq = n + 1
    rho = np.zeros((2 ** nq, 2 ** nq), dtype=complex)
    rho[0, 0] = 1
    for i in range(1, nq):
        u = op_on(nq, {i: H})
        rho = u @ rho @ u.conj().T
    for i in range(1, nq):
        if key[i - 1] == "1":
            u = cnot(nq, i, 0)
            rho = u @ rho @ u.conj().T
            acc = (1 - p2) * rho
            for pc, pt in itertools.product([I2, X, Y, Z], repeat=2):
                if pc is I2 and pt is I2:
                    continue
                P = op_on(nq, {i: pc, 0: pt})
                acc = acc + p2 / 15 * (P @ rho @ P.conj().T)
            rho = acc
    if quantum:
        for q in range(nq):
            u = op_on(nq, {q: H})
            rho = u @ rho @ u.conj().T
    for q in range(nq):
        acc = (1 - p1) * rho
        for P1 in (X, Y, Z):
            P = op_on(nq, {q: P1})
            acc = acc + p1 / 3 * (P @ rho @ P.conj().T)
        rho = acc
    return np.real(np.diag(rho))


if __name__ == "__main__":
    for key, quantum, p2, p1 in [("11", False, 0.12, 0.0), ("11", True, 0.1, 0.0), ("101", True, 0.12, 0.05),
                                 ("011", False, 0.05, 0.02)]:
        probs = run(key, quantum, p2, p1)
        print(key, "quantum" if quantum else "classical", p2, p1)
        print("  {" + ", ".join(repr(float(x)) for x in probs) + "}")
