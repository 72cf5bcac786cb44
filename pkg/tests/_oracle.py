"""Brute-force evaluation of closed graded tensor networks.

Independent of the library's contraction machinery: for every assignment of
an index value to every bond, multiply the bare coefficients and work out the
Koszul sign by explicitly shuffling slots in the flattened mode word.  Only
meant for tiny networks inside tests.
"""

from __future__ import annotations

import itertools

import numpy as np


def eval_closed_network(tensors, bonds):
    """Scalar value of a fully contracted network.

    tensors: list of GradedTensor, in a fixed word order.
    bonds: list of ((ti, li), (tj, lj)); the first slot plays the "ket" role
        (it stays put), the second slot is moved until it sits immediately to
        the right of the first, crossing intermediate modes at the usual
        Koszul cost, after which the adjacent pair is removed with no sign.

    Every leg of every tensor must appear in exactly one bond.
    """
    slot_list = [(ti, li) for ti, t in enumerate(tensors) for li in range(t.ndim)]
    seen = {}
    for bond in bonds:
        for slot in bond:
            if slot in seen:
                raise ValueError(f"slot {slot} used twice")
            seen[slot] = True
    if len(seen) != len(slot_list):
        raise ValueError("network is not closed")

    bond_dims = []
    for (ti, li), (tj, lj) in bonds:
        sa, sb = tensors[ti].legs[li], tensors[tj].legs[lj]
        if sa != sb:
            raise ValueError("bond space mismatch")
        bond_dims.append(sa.dim)

    total = 0.0 + 0.0j
    for assignment in itertools.product(*(range(d) for d in bond_dims)):
        slot_value = {}
        for bond, value in zip(bonds, assignment):
            slot_value[bond[0]] = value
            slot_value[bond[1]] = value

        amp = 1.0 + 0.0j
        for ti, t in enumerate(tensors):
            idx = tuple(slot_value[(ti, li)] for li in range(t.ndim))
            amp *= t.coeffs[idx]
            if amp == 0:
                break
        if amp == 0:
            continue

        word = list(slot_list)
        parities = {
            (ti, li): tensors[ti].legs[li].parity(slot_value[(ti, li)])
            for (ti, li) in slot_list
        }
        sign = 1
        for ket, bra in bonds:
            pk = word.index(ket)
            pb = word.index(bra)
            if pb > pk:
                crossed = word[pk + 1:pb]
            else:
                crossed = word[pb + 1:pk + 1]
            if parities[bra]:
                crossings = sum(parities[s] for s in crossed)
                if crossings % 2:
                    sign = -sign
            word.remove(bra)
            word.remove(ket)
        total += sign * amp
    return total
