# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused single-pass update kernels.

Bit-for-bit equivalent to ``pure.py``: same operation order, every
intermediate rounded to double (the build disables FP contraction).
"""

from libc.math cimport sqrt

NAME = "cython"


cdef inline double _masked(double delta, double d, double alpha) noexcept nogil:
    return (delta * d) * alpha + 0.0


cdef inline double _plain(double delta, double alpha) noexcept nogil:
    return delta * alpha + 0.0


def sgdm_step(double[::1] w, const double[::1] g, double[::1] m, mask,
              double alpha, double beta, double grad_weight, double decay):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double gi
    cdef double[::1] d
    if mask is None:
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta * m[i] + grad_weight * gi
            w[i] = w[i] - _plain(m[i], alpha)
    else:
        d = mask
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta * m[i] + grad_weight * gi
            w[i] = w[i] - _masked(m[i], d[i], alpha)


def rmsprop_step(double[::1] w, const double[::1] g, double[::1] v, mask,
                 double alpha, double beta2, double eps, double decay):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double gi, delta
    cdef double c2 = 1.0 - beta2
    cdef double[::1] d
    if mask is None:
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            delta = gi / (sqrt(v[i]) + eps)
            w[i] = w[i] - _plain(delta, alpha)
    else:
        d = mask
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            delta = gi / (sqrt(v[i]) + eps)
            w[i] = w[i] - _masked(delta, d[i], alpha)


def adam_step(double[::1] w, const double[::1] g, double[::1] m, double[::1] v,
              mask, double alpha, double beta1, double beta2, double eps,
              double decay, double bc1, double bc2):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double gi, delta
    cdef double c1 = 1.0 - beta1
    cdef double c2 = 1.0 - beta2
    cdef double[::1] d
    if mask is None:
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            delta = (m[i] / bc1) / (sqrt(v[i] / bc2) + eps)
            w[i] = w[i] - _plain(delta, alpha)
    else:
        d = mask
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            delta = (m[i] / bc1) / (sqrt(v[i] / bc2) + eps)
            w[i] = w[i] - _masked(delta, d[i], alpha)


def amsgrad_step(double[::1] w, const double[::1] g, double[::1] m, double[::1] v,
                 double[::1] vmax, mask, double alpha, double beta1, double beta2,
                 double eps, double decay, double bc1, double bc2):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double gi, delta
    cdef double c1 = 1.0 - beta1
    cdef double c2 = 1.0 - beta2
    cdef double[::1] d
    if mask is None:
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            if v[i] > vmax[i]:
                vmax[i] = v[i]
            delta = (m[i] / bc1) / (sqrt(vmax[i] / bc2) + eps)
            w[i] = w[i] - _plain(delta, alpha)
    else:
        d = mask
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            if v[i] > vmax[i]:
                vmax[i] = v[i]
            delta = (m[i] / bc1) / (sqrt(vmax[i] / bc2) + eps)
            w[i] = w[i] - _masked(delta, d[i], alpha)


def radam_step(double[::1] w, const double[::1] g, double[::1] m, double[::1] v,
               mask, double alpha, double beta1, double beta2, double eps,
               double decay, double bc1, double bc2, double rect):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double gi, delta
    cdef double c1 = 1.0 - beta1
    cdef double c2 = 1.0 - beta2
    cdef bint adaptive = rect >= 0.0
    cdef double[::1] d
    if mask is None:
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            if adaptive:
                delta = (rect * (m[i] / bc1)) / (sqrt(v[i] / bc2) + eps)
            else:
                delta = m[i] / bc1
            w[i] = w[i] - _plain(delta, alpha)
    else:
        d = mask
        for i in range(n):
            gi = g[i]
            if decay != 0.0:
                gi = gi + decay * w[i]
            m[i] = beta1 * m[i] + c1 * gi
            v[i] = beta2 * v[i] + c2 * (gi * gi)
            if adaptive:
                delta = (rect * (m[i] / bc1)) / (sqrt(v[i] / bc2) + eps)
            else:
                delta = m[i] / bc1
            w[i] = w[i] - _masked(delta, d[i], alpha)
