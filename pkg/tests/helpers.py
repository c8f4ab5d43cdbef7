"""Shared oracles and reference data for the test suite.

The brute-force counters here are deliberately written in the dumbest
possible style (explicit loops over field elements) so the fast
implementations are checked against code with no shared structure.
"""

import json
from importlib import resources

from uvprim import field as fd

# The two frozen exceptional sets, shipped with the package so the CLI's
# --expect flag has ready-made reference lists.
EXC_ELEMENT = tuple(json.loads(resources.files("uvprim.data").joinpath("exceptional_element.json").read_text()))
EXC_PAIR = tuple(json.loads(resources.files("uvprim.data").joinpath("exceptional_pair.json").read_text()))


def brute_M(F, u, v):
    """Count primitive a with u*a + v*a^-1 nonzero and primitive."""
    count = 0
    for a in fd.primitive_elements(F):
        t = fd.add(F, fd.mul(F, u, a), fd.mul(F, v, fd.inv(F, a)))
        if t != 0 and fd.is_primitive(F, t):
            count += 1
    return count


def brute_N(F, u, v):
    """Count primitive pairs (a, b) with u*a + v*b and v*a^-1 + u*b^-1
    both nonzero and primitive."""
    prim = fd.primitive_elements(F)
    count = 0
    for a in prim:
        ai = fd.inv(F, a)
        for b in prim:
            t3 = fd.add(F, fd.mul(F, u, a), fd.mul(F, v, b))
            if t3 == 0 or not fd.is_primitive(F, t3):
                continue
            t4 = fd.add(F, fd.mul(F, v, ai), fd.mul(F, u, fd.inv(F, b)))
            if t4 != 0 and fd.is_primitive(F, t4):
                count += 1
    return count


def brute_M_free(F, u, v, e1, e2):
    """M_{e1,e2}: a is e1-free, u*a + v*a^-1 nonzero and e2-free."""
    count = 0
    for a in range(1, F.q):
        if not fd.is_e_free(F, a, e1):
            continue
        t = fd.add(F, fd.mul(F, u, a), fd.mul(F, v, fd.inv(F, a)))
        if t != 0 and fd.is_e_free(F, t, e2):
            count += 1
    return count
