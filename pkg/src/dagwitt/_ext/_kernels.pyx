# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for sparse polynomial products over Z/m.

Exponent vectors arrive packed into int64 keys (mixed radix chosen by the
caller so that key(a) + key(b) == key(a*b)).
"""
import numpy as np
cimport numpy as cnp
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref, preincrement as inc

ctypedef long long i64

DEF DENSE_LIMIT = 1 << 24


def mul_packed(i64[:] ka, i64[:] ca, i64[:] kb, i64[:] cb, i64 modulus, i64 keyrange):
    cdef Py_ssize_t na = ka.shape[0], nb = kb.shape[0], i, j, n
    cdef i64 c, k
    cdef i64[:] acc
    cdef unordered_map[i64, i64] table
    cdef unordered_map[i64, i64].iterator it
    if keyrange <= DENSE_LIMIT:
        acc_arr = np.zeros(keyrange, dtype=np.int64)
        acc = acc_arr
        for i in range(na):
            c = ca[i]
            if c == 0:
                continue
            for j in range(nb):
                k = ka[i] + kb[j]
                acc[k] = (acc[k] + (c * cb[j]) % modulus) % modulus
        idx = np.nonzero(acc_arr)[0].astype(np.int64)
        return idx, acc_arr[idx]
    for i in range(na):
        c = ca[i]
        for j in range(nb):
            k = ka[i] + kb[j]
            table[k] = (table[k] + (c * cb[j]) % modulus) % modulus
    keys = np.empty(table.size(), dtype=np.int64)
    vals = np.empty(table.size(), dtype=np.int64)
    n = 0
    it = table.begin()
    while it != table.end():
        if deref(it).second != 0:
            keys[n] = deref(it).first
            vals[n] = deref(it).second
            n += 1
        inc(it)
    return keys[:n], vals[:n]

