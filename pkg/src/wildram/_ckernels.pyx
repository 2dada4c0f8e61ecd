# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coefficient kernels; drop-in twin of wildram._pykernels."""


def conv(const unsigned char[:] a, const unsigned char[:] b, int p, int out_len):
    cdef int la = a.shape[0], lb = b.shape[0]
    cdef int i, j, jmax
    cdef long long acc
    if out_len <= 0:
        return b""
    out = bytearray(out_len)
    cdef unsigned char[:] o = out
    if la and lb:
        for i in range(out_len if out_len < la else la):
            if a[i] == 0:
                continue
            jmax = out_len - i
            if lb < jmax:
                jmax = lb
            for j in range(jmax):
                if b[j]:
                    acc = o[i + j] + <long long>a[i] * b[j]
                    o[i + j] = <unsigned char>(acc % p)
    return bytes(out)


def inv_series(const unsigned char[:] a, int p, int out_len):
    cdef int la = a.shape[0]
    cdef int k, i, imax
    cdef long long s, a0inv
    if out_len <= 0:
        return b""
    a0inv = a[0] if p == 2 else pow(a[0], p - 2, p)
    out = bytearray(out_len)
    cdef unsigned char[:] o = out
    o[0] = <unsigned char>a0inv
    for k in range(1, out_len):
        s = 0
        imax = k if k < la - 1 else la - 1
        for i in range(1, imax + 1):
            if a[i]:
                s += <long long>a[i] * o[k - i]
        o[k] = <unsigned char>(((-a0inv * s) % p + p) % p)
    return bytes(out)


def cyclic_conv(const unsigned char[:] a, const unsigned char[:] b, int p):
    cdef int n = a.shape[0]
    cdef int i, j, k
    cdef long long acc
    out = bytearray(n)
    cdef unsigned char[:] o = out
    for i in range(n):
        if a[i] == 0:
            continue
        for j in range(n):
            if b[j]:
                k = i + j
                if k >= n:
                    k -= n
                acc = o[k] + <long long>a[i] * b[j]
                o[k] = <unsigned char>(acc % p)
    return bytes(out)
