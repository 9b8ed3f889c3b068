"""The numba kernels and their pure-numpy fallbacks must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest

from hypertope import _kernels as K
from hypertope.constructions import build_from_symbol, coxeter_presentation
from hypertope.permcore import PermGroup, Permutation
from hypertope.permcore.presentation import _flatten

needs_numba = pytest.mark.skipif(K.numba is None, reason="numba not installed")


def _packed_group():
    C = build_from_symbol("{4,3,3}")
    chain = C.group.chain
    return C, chain.packed()


@needs_numba
def test_sift_kernels_agree():
    C, (base, pos, tinv) = _packed_group()
    rng = np.random.default_rng(7)
    members = C.group.element_array()[:300]
    randoms = np.array([rng.permutation(C.degree) for _ in range(300)], dtype=np.int32)
    elems = np.ascontiguousarray(np.concatenate([members, randoms]))
    np.testing.assert_array_equal(K.sift_mask_py(elems, base, pos, tinv), K.sift_mask_jit(elems, base, pos, tinv))
    a = K.sift_first_failure_py(elems, base, pos, tinv)
    b = K.sift_first_failure_jit(elems, base, pos, tinv)
    assert a[0] == b[0] == 300 and a[1] == b[1]
    np.testing.assert_array_equal(a[2], b[2])


@needs_numba
def test_sift_all_members_pass_in_both():
    C, (base, pos, tinv) = _packed_group()
    members = np.ascontiguousarray(C.group.element_array())
    for fn in (K.sift_first_failure_py, K.sift_first_failure_jit):
        assert fn(members, base, pos, tinv)[0] == -1


@needs_numba
@pytest.mark.parametrize("symbol", [(5, 3), (3, 3, 4), (4, 4)])
def test_todd_coxeter_kernels_agree(symbol):
    pres = coxeter_presentation(symbol)
    if symbol == (4, 4):
        pres = coxeter_presentation(symbol, [[0, 1, 2, 1] * 3])
    rel, rel_off = _flatten(pres.relators)
    sub, sub_off = _flatten([[1]])
    t1, s1, d1 = K.todd_coxeter_py(pres.generators, rel, rel_off, sub, sub_off, 10**5)
    t2, s2, d2 = K.todd_coxeter_jit(pres.generators, rel, rel_off, sub, sub_off, 10**5)
    assert s1 == s2 == K.TC_OK and d1 == d2
    np.testing.assert_array_equal(t1, t2)


@needs_numba
def test_todd_coxeter_overflow_status_agrees():
    pres = coxeter_presentation((4, 3, 4))
    rel, rel_off = _flatten(pres.relators)
    sub, sub_off = _flatten([[1], [2], [3]])
    assert K.todd_coxeter_py(pres.generators, rel, rel_off, sub, sub_off, 2000)[1] == K.TC_OVERFLOW
    assert K.todd_coxeter_jit(pres.generators, rel, rel_off, sub, sub_off, 2000)[1] == K.TC_OVERFLOW


def test_env_flag_selects_fallback():
    code = ("from hypertope import _kernels as K;"
            "print(K.USE_NUMBA, K.sift_mask is K.sift_mask_py, K.todd_coxeter_kernel is K.todd_coxeter_py)")
    env = dict(os.environ, HYPERTOPE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True", "True"]


def test_fallback_end_to_end_order():
    code = ("from hypertope.constructions import build_from_symbol;"
            "print(build_from_symbol('delta2^{{4,3}}').order())")
    env = dict(os.environ, HYPERTOPE_NUMBA="off")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "3072"


def test_chain_is_order_consistent():
    G = PermGroup([Permutation.from_cycles([[0, 1, 2, 3, 4, 5, 6]], 7), Permutation.from_cycles([[0, 1]], 7)])
    chain = G.chain
    prod = 1
    for s in chain.orbit_sizes:
        prod *= s
    assert prod == G.order() == 5040
    for g in G.generators:
        assert G.contains(g)
