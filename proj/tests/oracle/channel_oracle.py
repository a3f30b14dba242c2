#!/usr/bin/env python3
"""Brute-force dense-exponential reference for the full-chain numbers.

Builds every Hamiltonian with Kronecker products and exponentiates it with
scipy.linalg.expm. Shares no code with the C++ library.

    python3 tests/oracle/channel_oracle.py [--out oracle_values.json]
"""
import argparse
import json
import math
from functools import reduce

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def op_on(n, ops):
    """Tensor product with ops[q] on qubit q (qubit 0 leftmost)."""
    return reduce(np.kron, [ops.get(q, I2) for q in range(n)])


def hamiltonian(n, delta, xi, biases):
    h = np.zeros((2**n, 2**n), dtype=complex)
    for q in range(n):
        h += delta * op_on(n, {q: X}) + biases[q] * op_on(n, {q: Z})
    for q in range(n - 1):
        h += xi * op_on(n, {q: Z, q + 1: Z})
    return h


def unitary(h, t_ns):
    return expm(-1j * 2 * math.pi * h * t_ns * 1e-3)


def design(t_ns, m=1, nn=0):
    delta = 1000 * (2 * nn + 1) / (4 * t_ns)
    xi = 1000 * math.sqrt(4 * m * m - (2 * nn + 1) ** 2) / (8 * t_ns)
    return delta, xi


def cnot_infidelity(delta, xi, t_ns, eps):
    """Worst truth-table infidelity of one middle-qubit pulse, right qubit in |0>."""
    u = unitary(hamiltonian(3, delta, xi, [eps, 0.0, eps]), t_ns)
    worst = 0.0
    for c in (0, 1):
        for t in (0, 1):
            t_out = t ^ c
            p = abs(u[4 * c + 2 * t_out, 4 * c + 2 * t]) ** 2
            worst = max(worst, 1 - p)
    return worst


def swap_windows(n, macro_steps):
    """Per window: list of (target, bias role) for the pipelined swap network."""
    windows = []
    for k in range(macro_steps):
        pairs = [(p, p + 1) for p in range(k % 3, n - 1, 3)]
        for step in range(3):
            windows.append([(a if step != 1 else b) for a, b in pairs])
    return windows


def channel_fidelity(n, delta, xi, t_ns, eps, psi_in):
    """OUT fidelity of one state sent down an n-chain: raw, and after undoing
    the z-phase the data picked up while parked on idle qubits."""
    windows = swap_windows(n, n - 1)
    zeros = np.zeros(2 ** (n - 1), dtype=complex)
    zeros[0] = 1
    state = np.kron(psi_in, zeros)
    occupancy = [frozenset({0})] + [frozenset()] * (n - 1)
    data_phase = 0.0
    cache = {}
    for targets in windows:
        biases = [eps] * n
        for t in targets:
            biases[t] = xi if t in (0, n - 1) else 0.0
        key = tuple(biases)
        if key not in cache:
            cache[key] = unitary(hamiltonian(n, delta, xi, biases), t_ns)
        state = cache[key] @ state
        for q in range(n):
            if q in targets or not occupancy[q]:
                continue
            energy = biases[q]
            for nb in (q - 1, q + 1):
                if 0 <= nb < n and nb not in targets:
                    assert not occupancy[nb]
                    energy += xi
            data_phase += 2 * math.pi * energy * t_ns * 1e-3
        new = list(occupancy)
        for t in targets:
            acc = occupancy[t]
            for nb in (t - 1, t + 1):
                if 0 <= nb < n:
                    acc = acc ^ occupancy[nb]
            new[t] = acc
        occupancy = new
    assert occupancy[n - 1] == frozenset({0})

    m = state.reshape(2 ** (n - 1), 2)
    rho = m.T @ m.conj()
    raw = float(np.real(psi_in.conj() @ rho @ psi_in))
    # amplitude of |s> carried exp(-i*phase*s); undo it on the read qubit
    rot = np.diag([np.exp(1j * data_phase), np.exp(-1j * data_phase)])
    rho_c = rot @ rho @ rot.conj().T
    corrected = float(np.real(psi_in.conj() @ rho_c @ psi_in))
    return raw, corrected


def cardinal_states():
    s = 1 / math.sqrt(2)
    return {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([s, s], dtype=complex),
        "-": np.array([s, -s], dtype=complex),
        "+i": np.array([s, 1j * s], dtype=complex),
        "-i": np.array([s, -1j * s], dtype=complex),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    t_ns = 10.0
    delta, xi = design(t_ns)
    grid = [10 * delta, 100 * delta, 1000 * delta, 10000 * delta]
    infid = [cnot_infidelity(delta, xi, t_ns, e) for e in grid]
    lx = np.log(grid)
    ly = np.log(infid)
    slope = float(np.polyfit(lx, ly, 1)[0])

    top = grid[-1]
    fids = {}
    for name, psi in cardinal_states().items():
        raw, corr = channel_fidelity(5, delta, xi, t_ns, top, psi)
        fids[name] = {"raw": raw, "corrected": corr}
    worst = min(v["corrected"] for v in fids.values())

    result = {
        "pulse_ns": t_ns,
        "delta_mhz": delta,
        "xi_mhz": xi,
        "eps_grid_mhz": grid,
        "cnot_worst_infidelity": infid,
        "cnot_log_log_slope": slope,
        "channel_eps_high_mhz": top,
        "channel_fidelity": fids,
        "channel_worst_corrected": worst,
    }
    text = json.dumps(result, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")


if __name__ == "__main__":
    main()
