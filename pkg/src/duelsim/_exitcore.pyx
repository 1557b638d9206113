#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for batched first-crossing sampling.

Draws interarrival variates one at a time through numpy's C distribution
API and accumulates each sample's partial sums from zero, so the returned
triple satisfies t_pre < threshold <= t_exit exactly by construction.
Consumes the same variate stream as the numpy fallback.
"""
import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential,
    random_standard_gamma,
    random_uniform,
)

cnp.import_array()

IS_COMPILED = True

cdef enum:
    _LAW_EXP = 1
    _LAW_UNI = 2
    _LAW_GAM = 3

LAW_EXPONENTIAL = _LAW_EXP
LAW_UNIFORM = _LAW_UNI
LAW_GAMMA = _LAW_GAM


def exit_batch(int law, double p0, double p1, double threshold, Py_ssize_t n,
               bit_generator):
    """n independent first-crossing samples of the running interarrival sum.

    Returns (nu, t_pre, t_exit) arrays; see the package docs for the law
    ids and their (p0, p1) parameter meaning.
    """
    cdef const char *capsule_name = "BitGenerator"
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, capsule_name):
        raise ValueError("bit_generator does not expose a BitGenerator capsule")
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, capsule_name)
    if law != _LAW_EXP and law != _LAW_UNI and law != _LAW_GAM:
        raise ValueError(f"unknown law id {law}")

    nu = np.empty(n, dtype=np.int64)
    pre = np.empty(n, dtype=np.float64)
    exi = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] nu_v = nu
    cdef double[::1] pre_v = pre
    cdef double[::1] exi_v = exi

    cdef Py_ssize_t i
    cdef cnp.int64_t k
    cdef double t, prev, x
    cdef double u_range = p1 - p0

    with bit_generator.lock:
        with nogil:
            for i in range(n):
                t = 0.0
                prev = 0.0
                k = 0
                while t < threshold:
                    if law == _LAW_EXP:
                        x = random_standard_exponential(rng) / p0
                    elif law == _LAW_UNI:
                        x = random_uniform(rng, p0, u_range)
                    else:
                        x = random_standard_gamma(rng, p0) * p1
                    prev = t
                    t = t + x
                    k = k + 1
                nu_v[i] = k
                pre_v[i] = prev
                exi_v[i] = t
    return nu, pre, exi
